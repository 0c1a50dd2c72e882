//! Cyclotomic parameter bookkeeping and reduction of zeta_N-powers modulo
//! primes of the real cyclotomic subfield.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::numth::{gcd, mod_inv, mod_pow, mult_order, split_prime_power};
use crate::exactalg::{Dual, DualRing, Fe, Field, FieldDesc, Involution, Ring};

/// Weights m_0..m_{n+1} of the cover y^N = prod (x - x_i)^{m_i}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector {
    #[serde(rename = "N")]
    pub n_order: u64,
    pub m: Vec<u64>,
}

impl WeightVector {
    pub fn new(n_order: u64, m: Vec<u64>) -> Self {
        WeightVector { n_order, m }
    }
}

/// Parameters lambda_0 = zeta^{e0}, lambda_i = zeta^{e_i}, stored as exponents mod N.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolicParams {
    #[serde(rename = "N")]
    pub n_order: u64,
    pub e0: u64,
    /// e_1..e_{n+1}
    pub es: Vec<u64>,
}

impl SymbolicParams {
    /// Build from exponents e_0..e_{n+1}; checks the product-one condition and n >= 2.
    pub fn from_exponents(n_order: u64, all: &[u64]) -> Result<Self> {
        if n_order < 2 {
            return Err(Error::BadWeights(format!("N must be >= 2, got {n_order}")));
        }
        if all.len() < 4 {
            return Err(Error::BadWeights(format!(
                "need at least 4 entries (n >= 2), got {}",
                all.len()
            )));
        }
        let s: u64 = all.iter().map(|&e| e % n_order).sum();
        if s % n_order != 0 {
            return Err(Error::BadWeights(format!(
                "exponents sum to {s}, not divisible by {n_order}"
            )));
        }
        Ok(SymbolicParams {
            n_order,
            e0: all[0] % n_order,
            es: all[1..].iter().map(|&e| e % n_order).collect(),
        })
    }

    /// Dimension n of the representation.
    pub fn n(&self) -> usize {
        self.es.len() - 1
    }

    pub fn all_exponents(&self) -> Vec<u64> {
        std::iter::once(self.e0).chain(self.es.iter().copied()).collect()
    }
}

/// Concrete parameters (lambda_0; lambda_1..lambda_{n+1}) over some ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JPParams<E> {
    pub lambda0: E,
    pub lambdas: Vec<E>,
}

impl<E: Copy + PartialEq> JPParams<E> {
    pub fn new(lambda0: E, lambdas: Vec<E>) -> Self {
        JPParams { lambda0, lambdas }
    }

    pub fn n(&self) -> usize {
        self.lambdas.len().saturating_sub(1)
    }

    /// lambda_0 * prod lambda_i
    pub fn total_product<R: Ring<Elem = E>>(&self, r: &R) -> E {
        self.lambdas.iter().fold(self.lambda0, |acc, &l| r.mul(acc, l))
    }

    /// lambda_S = prod_{i in S} lambda_i, indices 1-based.
    pub fn lambda_s<R: Ring<Elem = E>>(&self, r: &R, s: &[usize]) -> E {
        s.iter().fold(r.one(), |acc, &i| r.mul(acc, self.lambdas[i - 1]))
    }

    pub fn map<F: Copy + PartialEq>(&self, f: impl Fn(E) -> F) -> JPParams<F> {
        JPParams {
            lambda0: f(self.lambda0),
            lambdas: self.lambdas.iter().map(|&x| f(x)).collect(),
        }
    }
}

/// Unit flags for lambda_i - 1 in the coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RJPMembership<E> {
    pub params: JPParams<E>,
    /// Entry 0 is lambda_0, entry i is lambda_i.
    pub unit_flags: Vec<bool>,
}

pub fn rjp_membership<R: Ring>(r: &R, params: &JPParams<R::Elem>) -> RJPMembership<R::Elem> {
    let unit = |x: R::Elem| r.inv(r.sub(x, r.one())).is_some();
    let unit_flags = std::iter::once(params.lambda0)
        .chain(params.lambdas.iter().copied())
        .map(unit)
        .collect();
    RJPMembership {
        params: params.clone(),
        unit_flags,
    }
}

/// Validate weights and turn them into symbolic parameters.
pub fn params_from_weights(w: &WeightVector) -> Result<SymbolicParams> {
    let g = w.m.iter().fold(w.n_order, |acc, &m| gcd(acc, m % w.n_order));
    if g != 1 {
        return Err(Error::BadWeights(format!(
            "gcd of weights and N is {g}; the cover would be reducible"
        )));
    }
    SymbolicParams::from_exponents(w.n_order, &w.m)
}

/// How zeta_N is sent into a residue algebra: zeta_{N'} -> beta^u where beta
/// is the fixed element of order N' and u is a unit mod N'.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub u: u64,
    /// Image of zeta_N in the residue field.
    pub zeta_image: Fe,
}

/// A prime of the real subfield Q(zeta_N + zeta_N^-1) above p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueData {
    #[serde(rename = "N")]
    pub n_order: u64,
    pub p: u64,
    /// Residue degree of p in Q(zeta_N).
    pub f: u32,
    /// p-adic valuation of N.
    pub l: u32,
    /// Prime-to-p part of N.
    pub n_prime: u64,
    pub field: FieldDesc,
    pub embeddings: Vec<Embedding>,
    pub involution: Involution,
    pub ramified: bool,
    /// Residues of (Z/N')^x lying over this prime, sorted.
    pub coset: Vec<u64>,
}

impl ResidueData {
    pub fn residue_field(&self) -> Result<Field> {
        Field::new(self.p, self.f)
    }
}

fn units(m: u64) -> Vec<u64> {
    (1..m.max(2)).filter(|&a| gcd(a, m) == 1).collect::<Vec<_>>()
}

/// Combinatorial splitting data of p in Q(zeta_N), without residue fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPattern {
    pub l: u32,
    pub n_prime: u64,
    pub f: u32,
    /// -1 is a power of p mod N': each real prime stays prime in Q(zeta_N).
    pub inert: bool,
    /// Per real prime: the sorted coset of <p, -1> and the unit(s) u
    /// describing the embedding(s) zeta_{N'} -> beta^u.
    pub primes: Vec<(Vec<u64>, Vec<u64>)>,
}

pub fn splitting_pattern(n_order: u64, p: u64) -> Result<SplitPattern> {
    if !crate::exactalg::numth::is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if n_order == 0 {
        return Err(Error::BadWeights("N must be positive".into()));
    }
    let (l, np) = split_prime_power(n_order, p);
    if np <= 2 {
        return Ok(SplitPattern {
            l,
            n_prime: np,
            f: 1,
            inert: true,
            primes: vec![(vec![1], vec![1])],
        });
    }
    let f = mult_order(p % np, np) as u32;
    let p_powers: Vec<u64> = (0..f).map(|i| mod_pow(p, i as u64, np)).collect();
    let inert = p_powers.contains(&(np - 1));
    let mut seen = vec![false; np as usize];
    let mut primes = Vec::new();
    for u in units(np) {
        if seen[u as usize] {
            continue;
        }
        let mut coset: Vec<u64> = Vec::new();
        for &pp in &p_powers {
            for s in [u, np - u] {
                let x = s * pp % np;
                if !seen[x as usize] {
                    seen[x as usize] = true;
                    coset.push(x);
                }
            }
        }
        coset.sort_unstable();
        let us = if inert { vec![u] } else { vec![u, np - u] };
        primes.push((coset, us));
    }
    Ok(SplitPattern {
        l,
        n_prime: np,
        f,
        inert,
        primes,
    })
}

/// Primes of the real cyclotomic subfield above p, with residue data.
pub fn split_prime(n_order: u64, p: u64) -> Result<Vec<ResidueData>> {
    let pat = splitting_pattern(n_order, p)?;
    let (l, np, f) = (pat.l, pat.n_prime, pat.f);
    let field = Field::new(p, f)?;
    let beta = field
        .element_of_order(np)
        .expect("p^f = 1 mod N' by definition of f");
    let ramified = p.pow(l) > 2;
    let y = if np == 1 { 0 } else { mod_inv(p.pow(l) % np, np).unwrap() };
    let zeta_for = |u: u64| field.pow(beta, (u * y) % np.max(1));
    let involution = if np <= 2 {
        Involution::Identity
    } else if pat.inert {
        Involution::FrobeniusHalf
    } else {
        Involution::SwapFactors
    };
    Ok(pat
        .primes
        .into_iter()
        .map(|(coset, us)| ResidueData {
            n_order,
            p,
            f,
            l,
            n_prime: np,
            field: field.desc(),
            embeddings: us
                .into_iter()
                .map(|u| Embedding {
                    u,
                    zeta_image: zeta_for(u),
                })
                .collect(),
            involution,
            ramified,
            coset,
        })
        .collect())
}

fn check_embedding(rd: &ResidueData, which: usize) -> Result<()> {
    if which >= rd.embeddings.len() {
        return Err(Error::Precondition(format!(
            "embedding index {which} out of range (have {})",
            rd.embeddings.len()
        )));
    }
    Ok(())
}

/// Image of zeta_N^e in the residue field under the chosen embedding.
pub fn reduce_power(rd: &ResidueData, which: usize, e: u64) -> Result<Fe> {
    check_embedding(rd, which)?;
    let field = rd.residue_field()?;
    Ok(field.pow(rd.embeddings[which].zeta_image, e % rd.n_order))
}

/// Reduce every parameter, without rejecting values equal to 1.
pub fn reduce_params_unchecked(
    params: &SymbolicParams,
    rd: &ResidueData,
    which: usize,
) -> Result<JPParams<Fe>> {
    check_embedding(rd, which)?;
    if params.n_order != rd.n_order {
        return Err(Error::Precondition(format!(
            "params have N = {}, residue data has N = {}",
            params.n_order, rd.n_order
        )));
    }
    let lambda0 = reduce_power(rd, which, params.e0)?;
    let lambdas = params
        .es
        .iter()
        .map(|&e| reduce_power(rd, which, e))
        .collect::<Result<Vec<_>>>()?;
    Ok(JPParams { lambda0, lambdas })
}

/// Reduce through an embedding; fails if some parameter becomes 1.
pub fn reduce_params(params: &SymbolicParams, rd: &ResidueData, which: usize) -> Result<JPParams<Fe>> {
    let r = reduce_params_unchecked(params, rd, which)?;
    if r.lambda0 == Fe(1) {
        return Err(Error::DegenerateParameter { index: 0 });
    }
    if let Some(i) = r.lambdas.iter().position(|&x| x == Fe(1)) {
        return Err(Error::DegenerateParameter { index: i + 1 });
    }
    Ok(r)
}

/// Reduction modulo the square of a ramified prime, identified with F_q[eps]
/// via eps = zeta_{p^l} - 1.
pub fn reduce_params_dual(
    params: &SymbolicParams,
    rd: &ResidueData,
    which: usize,
) -> Result<(DualRing, JPParams<Dual>)> {
    check_embedding(rd, which)?;
    if rd.l == 0 {
        return Err(Error::UnsupportedRamification(
            "p does not divide N; the square of the prime is not a dual-number ring".into(),
        ));
    }
    if !rd.ramified {
        return Err(Error::UnsupportedRamification(format!(
            "p^l = {} is unramified",
            rd.p.pow(rd.l)
        )));
    }
    let field = rd.residue_field()?;
    let ring = DualRing::new(field.clone());
    let pl = rd.p.pow(rd.l);
    let x = mod_inv(rd.n_prime % pl, pl).unwrap();
    let to_dual = |e: u64| -> Result<Dual> {
        let a = reduce_power(rd, which, e)?;
        let c = (e % rd.n_order) * x % pl % rd.p;
        Ok(Dual {
            a,
            b: field.mul(a, field.from_i64(c as i64)),
        })
    };
    let lambda0 = to_dual(params.e0)?;
    let lambdas = params.es.iter().map(|&e| to_dual(e)).collect::<Result<Vec<_>>>()?;
    Ok((ring, JPParams { lambda0, lambdas }))
}
