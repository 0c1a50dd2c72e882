//! Lie-algebra detectors for JP tuples over the dual numbers F_q[eps], span
//! certification of the degree-one piece, and the mod-4 splitting check.

mod witt;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use witt::{lift_search, sl2_w2_split_test, LiftSearch, Sl2W2Report};

use crate::cyclo::{reduce_params_dual, JPParams, ResidueData, SymbolicParams};
use crate::error::{Error, Result};
use crate::exactalg::linalg::{self, matrix_order, nullspace, EchelonBasis, FMat};
use crate::exactalg::numth::mod_inv;
use crate::exactalg::{Dual, DualRing, Fe, Field, Matrix};
use crate::jprep::{construct, JPTuple};

/// Deformed parameters lambda_i (1 + eps nu_i), i = 0..n+1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftParams {
    pub base: JPParams<Fe>,
    /// nu_0, nu_1, ..., nu_{n+1}
    pub nus: Vec<Fe>,
}

impl LiftParams {
    pub fn new(f: &Field, base: JPParams<Fe>, nus: Vec<Fe>) -> Result<Self> {
        if nus.len() != base.lambdas.len() + 1 {
            return Err(Error::Dimension(format!(
                "expected {} nus, got {}",
                base.lambdas.len() + 1,
                nus.len()
            )));
        }
        if base.total_product(f) != f.one() {
            return Err(Error::Precondition("base parameters must multiply to 1".into()));
        }
        if nus.iter().fold(f.zero(), |a, &b| f.add(a, b)) != f.zero() {
            return Err(Error::Precondition("the nus must sum to 0".into()));
        }
        Ok(LiftParams { base, nus })
    }

    /// Read off nu_i = b_i / a_i from parameters over the dual numbers.
    pub fn from_dual(dr: &DualRing, p: &JPParams<Dual>) -> Result<Self> {
        let f = &dr.base;
        let split = |x: Dual| -> Result<(Fe, Fe)> { Ok((x.a, f.div(x.b, x.a)?)) };
        let (l0, nu0) = split(p.lambda0)?;
        let mut lambdas = Vec::new();
        let mut nus = vec![nu0];
        for &x in &p.lambdas {
            let (l, nu) = split(x)?;
            lambdas.push(l);
            nus.push(nu);
        }
        LiftParams::new(f, JPParams::new(l0, lambdas), nus)
    }

    /// Reduce symbolic parameters modulo the square of a ramified prime.
    pub fn from_symbolic(params: &SymbolicParams, rd: &ResidueData, which: usize) -> Result<Self> {
        let (dr, p) = reduce_params_dual(params, rd, which)?;
        LiftParams::from_dual(&dr, &p)
    }

    pub fn to_dual(&self, dr: &DualRing) -> JPParams<Dual> {
        JPParams::new(
            dr.deform(self.base.lambda0, self.nus[0]),
            self.base
                .lambdas
                .iter()
                .zip(&self.nus[1..])
                .map(|(&l, &nu)| dr.deform(l, nu))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }
}

/// (prod_k g_{i_k}^{e_k})^power, generators 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    pub factors: Vec<(usize, i64)>,
    pub power: u64,
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, (i, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{i}^{e}")?;
        }
        write!(f, ")^{}", self.power)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Detector {
    /// Unipotent part of a generator with semisimple reduction.
    GeneratorPower,
    /// Square of a generator in characteristic 2.
    Char2Square,
    /// (g_i^k g_j^k g_i^k)^4 with k = (1-p)/2, all parameters -1.
    RamifiedWord4,
    /// (g_i^k g_j^k)^6 with k = (1-p)/2, all parameters -1.
    RamifiedWord6,
    /// Unipotent part of a random word with semisimple reduction.
    RandomWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieElement {
    /// The element is I + eps * b.
    pub b: FMat,
    pub word: Word,
    pub detector: Detector,
    pub trace: Fe,
    pub nonscalar: bool,
}

fn reduction(m: &Matrix<Dual>) -> FMat {
    m.map(|x| x.a)
}

fn eps_part(m: &Matrix<Dual>) -> FMat {
    m.map(|x| x.b)
}

fn is_scalar(f: &Field, m: &FMat) -> bool {
    m.as_scalar(f).is_some()
}

/// Jordan decomposition g = g_s g_u with both parts powers of g.
pub fn jordan_parts(dr: &DualRing, g: &Matrix<Dual>) -> Result<(Matrix<Dual>, Matrix<Dual>)> {
    let (e_s, e_u, _) = jordan_exponents(dr, g)?;
    Ok((g.pow(dr, e_s), g.pow(dr, e_u)))
}

/// Exponents (e_s, e_u, M) with g_s = g^e_s, g_u = g^e_u and g^M = I.
fn jordan_exponents(dr: &DualRing, g: &Matrix<Dual>) -> Result<(u64, u64, u64)> {
    let f = &dr.base;
    let m = matrix_order(f, &reduction(g))?
        .to_u64()
        .ok_or_else(|| Error::TooLarge(usize::MAX))?;
    let p = f.p() as u64;
    let (mut pp, mut rest) = (1u64, m);
    while rest % p == 0 {
        rest /= p;
        pp *= p;
    }
    // The kernel of reduction has exponent p.
    pp *= p;
    let big = pp * rest;
    // e = 0 mod pp, e = 1 mod rest
    let e_s = if rest == 1 {
        0
    } else {
        let t = mod_inv(pp % rest, rest).expect("coprime");
        (pp as u128 * t as u128 % big as u128) as u64
    };
    let e_u = (big + 1 - e_s) % big;
    Ok((e_s, e_u, big))
}

fn gen_power(dr: &DualRing, gens: &[Matrix<Dual>], invs: &[Matrix<Dual>], i: usize, e: i64) -> Matrix<Dual> {
    if e >= 0 {
        gens[i - 1].pow(dr, e as u64)
    } else {
        invs[i - 1].pow(dr, e.unsigned_abs())
    }
}

/// Evaluate a word in the tuple.
pub fn evaluate_word(t: &JPTuple<DualRing>, w: &Word) -> Result<Matrix<Dual>> {
    let dr = &t.ring;
    let invs = t.inverses()?;
    let n = t.dim();
    if w.factors.iter().any(|&(i, _)| i == 0 || i > t.gens.len()) {
        return Err(Error::Precondition("word uses a missing generator".into()));
    }
    let base = w
        .factors
        .iter()
        .fold(Matrix::identity(dr, n), |acc, &(i, e)| acc.mul(dr, &gen_power(dr, &t.gens, &invs, i, e)));
    Ok(base.pow(dr, w.power))
}

fn as_lie(f: &Field, m: &Matrix<Dual>, word: Word, detector: Detector) -> Option<LieElement> {
    if !reduction(m).is_identity(f) {
        return None;
    }
    let b = eps_part(m);
    if is_scalar(f, &b) {
        return None;
    }
    Some(LieElement {
        trace: b.trace(f),
        b,
        word,
        detector,
        nonscalar: true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectConfig {
    pub seed: u64,
    /// Random words tried by the last strategy; 0 disables it.
    pub random_budget: usize,
    pub random_word_len: usize,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            seed: 0,
            random_budget: 200,
            random_word_len: 24,
        }
    }
}

/// The tuple over F_q[eps] for deformed parameters.
pub fn dual_tuple(f: &Field, lp: &LiftParams) -> Result<JPTuple<DualRing>> {
    let dr = DualRing::new(f.clone());
    construct(&dr, &lp.to_dual(&dr))
}

/// Run the detectors in order and return the first nonscalar I + eps B.
pub fn lie_detect(f: &Field, lp: &LiftParams, cfg: &DetectConfig) -> Result<Option<LieElement>> {
    let t = dual_tuple(f, lp)?;
    let dr = &t.ring;
    let l0 = lp.base.lambda0;
    let nu0 = lp.nus[0];
    let m = t.gens.len();

    // (a) generator powers
    for i in 1..=m {
        let li = lp.base.lambdas[i - 1];
        if f.mul(l0, li) == f.one() || f.add(nu0, lp.nus[i]) == f.zero() {
            continue;
        }
        let (_, e_u, _) = jordan_exponents(dr, &t.gens[i - 1])?;
        let word = Word {
            factors: vec![(i, 1)],
            power: e_u,
        };
        if let Some(x) = as_lie(f, &evaluate_word(&t, &word)?, word, Detector::GeneratorPower) {
            return Ok(Some(x));
        }
    }

    // (b) squares in characteristic 2
    if f.p() == 2 {
        for i in 1..=m {
            let word = Word {
                factors: vec![(i, 1)],
                power: 2,
            };
            if let Some(x) = as_lie(f, &evaluate_word(&t, &word)?, word, Detector::Char2Square) {
                return Ok(Some(x));
            }
        }
    }

    // (c) words for the all -1 case
    let minus_one = f.neg(f.one());
    let all_minus_one = l0 == minus_one && lp.base.lambdas.iter().all(|&x| x == minus_one);
    if all_minus_one && f.p() > 2 {
        let k = (1 - f.p() as i64) / 2;
        for (shape, power, det) in [(3usize, 4u64, Detector::RamifiedWord4), (2, 6, Detector::RamifiedWord6)] {
            for i in 1..=m {
                for j in 1..=m {
                    if i == j {
                        continue;
                    }
                    let factors = if shape == 3 {
                        vec![(i, k), (j, k), (i, k)]
                    } else {
                        vec![(i, k), (j, k)]
                    };
                    let word = Word { factors, power };
                    if let Some(x) = as_lie(f, &evaluate_word(&t, &word)?, word, det) {
                        return Ok(Some(x));
                    }
                }
            }
        }
    }

    // (d) random words whose reduction is semisimple
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let invs = t.inverses()?;
    let n = t.dim();
    for _ in 0..cfg.random_budget {
        let len = rng.gen_range(1..=cfg.random_word_len.max(1));
        let factors: Vec<(usize, i64)> = (0..len)
            .map(|_| (rng.gen_range(1..=m), if rng.gen_bool(0.5) { 1 } else { -1 }))
            .collect();
        let w = factors
            .iter()
            .fold(Matrix::identity(dr, n), |acc, &(i, e)| acc.mul(dr, &gen_power(dr, &t.gens, &invs, i, e)));
        let (_, e_u, _) = jordan_exponents(dr, &w)?;
        let word = Word { factors, power: e_u };
        if let Some(x) = as_lie(f, &w.pow(dr, e_u), word, Detector::RandomWord) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Lie algebra targeted by [`span_full`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Target {
    Sl,
    /// Checked after extending scalars to the quadratic field, where su_n becomes sl_n.
    Su,
    /// Traceless X with X J alternating, for the symplectic form J.
    SymplecticPiece { form: FMat },
}

fn flatten(m: &FMat) -> Vec<Fe> {
    m.data.clone()
}

fn target_basis(f: &Field, n: usize, target: &Target) -> Result<Vec<Vec<Fe>>> {
    let nn = n * n;
    let mut rows: Vec<Vec<Fe>> = Vec::new();
    // trace
    let mut tr = vec![Fe(0); nn];
    for i in 0..n {
        tr[i * n + i] = f.one();
    }
    rows.push(tr);
    if let Target::SymplecticPiece { form } = target {
        if n % 2 == 1 || form.rows != n || form.cols != n {
            return Err(Error::BadTarget(format!("symplectic piece needs an even n x n form, n = {n}")));
        }
        if linalg::det(f, form) == Fe(0) || form.transpose() != form.map(|x| f.neg(x)) {
            return Err(Error::BadTarget("form is not a nondegenerate alternating matrix".into()));
        }
        // (XJ)_{ab} + (XJ)_{ba} = 0 and (XJ)_{aa} = 0
        for a in 0..n {
            for b in a..n {
                let mut row = vec![Fe(0); nn];
                for c in 0..n {
                    row[a * n + c] = f.add(row[a * n + c], form.get(c, b));
                    if a != b {
                        row[b * n + c] = f.add(row[b * n + c], form.get(c, a));
                    }
                }
                rows.push(row);
            }
        }
    }
    let m = Matrix::from_fn(rows.len(), nn, |i, j| rows[i][j]);
    Ok(nullspace(f, &m))
}

/// Whether the span of the conjugates of `seed` (plus scalars) under the group
/// generated by `gens` contains the target Lie algebra.
pub fn span_full(f: &Field, seed: &FMat, gens: &[FMat], target: &Target) -> Result<bool> {
    let n = seed.rows;
    if !seed.is_square() || gens.iter().any(|g| g.rows != n || g.cols != n) {
        return Err(Error::Dimension("seed and generators must be n x n".into()));
    }
    if is_scalar(f, seed) {
        return Err(Error::Precondition("seed is scalar".into()));
    }
    let basis = target_basis(f, n, target)?;
    let invs: Vec<FMat> = gens.iter().map(|g| linalg::inverse(f, g)).collect::<Result<_>>()?;
    let mut span = EchelonBasis::new(n * n);
    span.insert(f, &flatten(&Matrix::identity(f, n)));
    let mut queue = vec![seed.clone()];
    span.insert(f, &flatten(seed));
    while let Some(x) = queue.pop() {
        for (g, gi) in gens.iter().zip(&invs) {
            let y = g.mul(f, &x).mul(f, gi);
            if span.insert(f, &flatten(&y)) {
                queue.push(y);
            }
        }
    }
    Ok(basis.iter().all(|v| span.contains(f, v)))
}
