//! Invariant bilinear and sesquilinear forms of tuples, and Hermitian signatures.

mod numeric;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub use numeric::{signature_numeric, signatures_agree, ComplexRing, Cx, DEFAULT_TOL};

use crate::error::{Error, Result};
use crate::exactalg::linalg::{self, nullspace, FMat};
use crate::exactalg::{Fe, Field, Involution, Matrix};
use crate::jprep::JPTuple;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormMatrix {
    pub a: FMat,
    pub involution: Involution,
    /// +1 symmetric/Hermitian, -1 alternating/anti-Hermitian.
    pub sign: i8,
    pub nondegenerate: bool,
}

impl FormMatrix {
    /// "alternating", "symmetric", "hermitian", "anti-hermitian" or "pairing".
    pub fn kind(&self) -> &'static str {
        match (self.involution, self.sign) {
            (Involution::Identity, -1) => "alternating",
            (Involution::Identity, _) => "symmetric",
            (Involution::FrobeniusHalf, -1) => "anti-hermitian",
            (Involution::FrobeniusHalf, _) => "hermitian",
            (Involution::SwapFactors, _) => "pairing",
        }
    }
}

fn conj_transpose(f: &Field, inv: Involution, a: &FMat) -> Result<FMat> {
    let mut out = a.transpose();
    for x in out.data.iter_mut() {
        *x = inv.apply(f, *x)?;
    }
    Ok(out)
}

/// Solutions of g A h^T = A for all pairs (g, h).
fn form_space(f: &Field, gs: &[FMat], hs: &[FMat]) -> Vec<FMat> {
    let n = gs[0].rows;
    let m = hs[0].rows;
    let unknowns = n * m;
    let mut rows: Vec<Vec<Fe>> = Vec::new();
    for (g, h) in gs.iter().zip(hs) {
        for a in 0..n {
            for b in 0..m {
                let mut row = vec![Fe(0); unknowns];
                for c in 0..n {
                    let gac = g.get(a, c);
                    if gac == Fe(0) {
                        continue;
                    }
                    for d in 0..m {
                        let idx = c * m + d;
                        row[idx] = f.add(row[idx], f.mul(gac, h.get(b, d)));
                    }
                }
                let idx = a * m + b;
                row[idx] = f.sub(row[idx], Fe(1));
                rows.push(row);
            }
        }
    }
    let sys = Matrix::from_rows(&rows).expect("rectangular");
    nullspace(f, &sys)
        .into_iter()
        .map(|v| Matrix::new(n, m, v).expect("shape"))
        .collect()
}

fn first_nonzero(a: &FMat) -> Option<Fe> {
    a.data.iter().copied().find(|&x| x != Fe(0))
}

/// Among the multiples k*A with k in the fixed field, pick the one whose first
/// nonzero entry has the least encoding.
fn normalize_by_fixed_field(f: &Field, inv: Involution, a: &FMat) -> Result<FMat> {
    let lead = first_nonzero(a).ok_or(Error::NoForm)?;
    let mut best: Option<(Fe, Fe)> = None;
    for k in f.elements().skip(1) {
        if inv.apply(f, k)? != k {
            continue;
        }
        let v = f.mul(k, lead);
        if best.is_none_or(|(bv, _)| v < bv) {
            best = Some((v, k));
        }
    }
    Ok(a.scale(f, best.expect("1 is fixed").1))
}

/// The invariant form of a tuple for the given involution.
pub fn invariant_form(t: &JPTuple<Field>, inv: Involution) -> Result<FormMatrix> {
    let f = &t.ring;
    if inv == Involution::SwapFactors {
        return Err(Error::Precondition(
            "SwapFactors forms pair two tuples; use invariant_pairing".into(),
        ));
    }
    let conj: Vec<FMat> = t
        .gens
        .iter()
        .map(|g| {
            let mut h = g.clone();
            for x in h.data.iter_mut() {
                *x = inv.apply(f, *x)?;
            }
            Ok(h)
        })
        .collect::<Result<_>>()?;
    let space = form_space(f, &t.gens, &conj);
    match space.len() {
        0 => return Err(Error::NoForm),
        1 => {}
        d => return Err(Error::NonUnique(d)),
    }
    let a = space.into_iter().next().unwrap();
    let adag = conj_transpose(f, inv, &a)?;
    // a^dagger = mu a for a unit mu.
    let lead_idx = a.data.iter().position(|&x| x != Fe(0)).ok_or(Error::NoForm)?;
    let mu = f.div(adag.data[lead_idx], a.data[lead_idx])?;
    if a.scale(f, mu) != adag {
        return Err(Error::NoSolution("form is not a dagger-eigenvector".into()));
    }
    let minus_one = f.from_i64(-1);
    let (rep, sign) = match inv {
        Involution::Identity => {
            // mu = +-1; in characteristic 2 an alternating form has zero diagonal.
            let alternating = mu == minus_one && (0..a.rows).all(|i| a.get(i, i) == Fe(0));
            let scaled = a.scale(f, f.inv(first_nonzero(&a).unwrap()).unwrap());
            (scaled, if alternating { -1 } else { 1 })
        }
        Involution::FrobeniusHalf => {
            // Want c with c / sigma(c) = -mu, so that (cA)^dagger = -cA.
            let target = f.neg(mu);
            let c = f
                .elements()
                .skip(1)
                .find(|&c| f.div(c, inv.apply(f, c).unwrap()).unwrap() == target)
                .ok_or_else(|| Error::NoSolution("no anti-Hermitian scaling".into()))?;
            let anti = a.scale(f, c);
            (normalize_by_fixed_field(f, inv, &anti)?, -1)
        }
        Involution::SwapFactors => unreachable!(),
    };
    let nondegenerate = linalg::det(f, &rep) != Fe(0);
    Ok(FormMatrix {
        a: rep,
        involution: inv,
        sign,
        nondegenerate,
    })
}

/// Pairing A with g_i A h_i^T = A between two tuples (the split case: one
/// tuple per factor of F_q x F_q).
pub fn invariant_pairing(t1: &JPTuple<Field>, t2: &JPTuple<Field>) -> Result<FormMatrix> {
    let f = &t1.ring;
    if t1.gens.len() != t2.gens.len() {
        return Err(Error::Dimension("tuples of different lengths".into()));
    }
    let space = form_space(f, &t1.gens, &t2.gens);
    match space.len() {
        0 => Err(Error::NoForm),
        1 => {
            let a = &space[0];
            let a = a.scale(f, f.inv(first_nonzero(a).unwrap()).unwrap());
            let nondegenerate = a.is_square() && linalg::det(f, &a) != Fe(0);
            Ok(FormMatrix {
                a,
                involution: Involution::SwapFactors,
                sign: 1,
                nondegenerate,
            })
        }
        d => Err(Error::NonUnique(d)),
    }
}

/// Check g A sigma(g)^T = A for every generator.
pub fn form_is_invariant(t: &JPTuple<Field>, form: &FormMatrix) -> Result<bool> {
    let f = &t.ring;
    for g in &t.gens {
        let gd = conj_transpose(f, form.involution, g)?;
        if g.mul(f, &form.a).mul(f, &gd) != form.a {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rational exponents a_0..a_{n+1} with lambda_i = exp(2 pi i a_i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureQuery {
    pub exponents: Vec<Ratio<i64>>,
}

impl SignatureQuery {
    pub fn new(exponents: Vec<Ratio<i64>>) -> Result<Self> {
        let q = SignatureQuery { exponents };
        q.validate()?;
        Ok(q)
    }

    pub fn n(&self) -> usize {
        self.exponents.len() - 2
    }

    pub fn validate(&self) -> Result<()> {
        if self.exponents.len() < 3 {
            return Err(Error::Precondition("need at least three exponents".into()));
        }
        if self.exponents.iter().any(|a| a.is_integer()) {
            return Err(Error::Precondition("an exponent is an integer (lambda = 1)".into()));
        }
        let s: Ratio<i64> = self.exponents.iter().sum();
        if !s.is_integer() {
            return Err(Error::Precondition(format!(
                "exponents sum to {s}, not an integer (product of lambdas is not 1)"
            )));
        }
        Ok(())
    }
}

fn frac(x: Ratio<i64>) -> Ratio<i64> {
    x - x.floor()
}

/// (pos, neg) = (-1 + sum {a_i}, -1 + sum {-a_i}).
pub fn signature_formula(q: &SignatureQuery) -> Result<(i64, i64)> {
    q.validate()?;
    let pos: Ratio<i64> = q.exponents.iter().map(|&a| frac(a)).sum();
    let neg: Ratio<i64> = q.exponents.iter().map(|&a| frac(-a)).sum();
    debug_assert!(pos.is_integer() && neg.is_integer());
    Ok((pos.to_integer() - 1, neg.to_integer() - 1))
}

/// Parse "1/3" or "2" style rationals.
pub fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: i64 = num.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: i64 = den.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d == 0 {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Ratio::new(n, d))
}

/// Exponents a_i = m_i / N as a signature query (d = 1 eigenspace).
pub fn query_from_weights(n_order: u64, m: &[u64]) -> Result<SignatureQuery> {
    let n = n_order as i64;
    SignatureQuery::new(m.iter().map(|&x| Ratio::new(x as i64, n)).collect())
}

/// Integer lcm of denominators; handy for tests and reports.
pub fn common_denominator(q: &SignatureQuery) -> i64 {
    q.exponents.iter().fold(1i64, |acc, a| acc.lcm(a.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::JPParams;
    use crate::jprep::construct;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn formula_examples() {
        let q = SignatureQuery::new(vec![r(1, 2); 4]).unwrap();
        assert_eq!(signature_formula(&q).unwrap(), (1, 1));
        let q = SignatureQuery::new(vec![r(1, 3); 6]).unwrap();
        assert_eq!(signature_formula(&q).unwrap(), (1, 3));
        assert!(SignatureQuery::new(vec![r(1, 3), r(1, 3), r(1, 2)]).is_err());
        assert!(SignatureQuery::new(vec![r(0, 1), r(1, 2), r(1, 2)]).is_err());
        assert_eq!(parse_ratio("2/6").unwrap(), r(1, 3));
        assert!(parse_ratio("1/0").is_err());
    }

    #[test]
    fn symplectic_form_for_minus_one_params() {
        for (n, p) in [(2usize, 5u64), (4, 3), (4, 7), (6, 5)] {
            let f = Field::new(p, 1).unwrap();
            let mo = f.from_i64(-1);
            let t = construct(&f, &JPParams::new(mo, vec![mo; n + 1])).unwrap();
            let form = invariant_form(&t, Involution::Identity).unwrap();
            assert_eq!(form.kind(), "alternating", "n={n} p={p}");
            assert!(form.nondegenerate);
            assert!(form_is_invariant(&t, &form).unwrap());
            assert_eq!(form.a.transpose(), form.a.scale(&f, mo));
        }
    }

    #[test]
    fn anti_hermitian_for_norm_one_params() {
        // F_9 over F_3: norm-one elements have order dividing 4.
        let f = Field::new(3, 2).unwrap();
        let i = f.element_of_order(4).unwrap();
        let mo = f.from_i64(-1);
        let p = JPParams::new(i, vec![i, i, i, i, i, mo]);
        let t = construct(&f, &p).unwrap();
        let form = invariant_form(&t, Involution::FrobeniusHalf).unwrap();
        assert_eq!(form.kind(), "anti-hermitian");
        assert!(form.nondegenerate);
        assert!(form_is_invariant(&t, &form).unwrap());
        let dag = conj_transpose(&f, Involution::FrobeniusHalf, &form.a).unwrap();
        assert_eq!(dag, form.a.scale(&f, mo));
    }

    #[test]
    fn wrong_involution_gives_no_form() {
        let f = Field::new(7, 1).unwrap();
        let p = JPParams::new(Fe(2), vec![Fe(3), Fe(5), f.inv(Fe(30)).unwrap()]);
        let t = construct(&f, &p).unwrap();
        assert_eq!(invariant_form(&t, Involution::Identity), Err(Error::NoForm));
    }

    #[test]
    fn reducible_sum_is_not_unique() {
        let f = Field::new(5, 1).unwrap();
        let mo = f.from_i64(-1);
        let t = construct(&f, &JPParams::new(mo, vec![mo; 3])).unwrap();
        let gens: Vec<FMat> = t.gens.iter().map(|g| g.direct_sum(g, Fe(0))).collect();
        let sum = JPTuple::from_parts(f.clone(), t.params.clone(), gens);
        assert!(matches!(invariant_form(&sum, Involution::Identity), Err(Error::NonUnique(_))));
    }

    #[test]
    fn split_pairing() {
        use crate::cyclo::{reduce_params, split_prime, SymbolicParams};
        let rd = &split_prime(7, 2).unwrap()[0];
        let sp = SymbolicParams::from_exponents(7, &[1, 2, 3, 1, 4, 3]).unwrap();
        let f = rd.residue_field().unwrap();
        let t1 = construct(&f, &reduce_params(&sp, rd, 0).unwrap()).unwrap();
        let t2 = construct(&f, &reduce_params(&sp, rd, 1).unwrap()).unwrap();
        let pairing = invariant_pairing(&t1, &t2).unwrap();
        assert!(pairing.nondegenerate);
        for (g, h) in t1.gens.iter().zip(&t2.gens) {
            assert_eq!(g.mul(&f, &pairing.a).mul(&f, &h.transpose()), pairing.a);
        }
    }

    proptest! {
        #[test]
        fn formula_sums_to_n(den in 2i64..13, nums in proptest::collection::vec(1i64..12, 3..8)) {
            let mut ex: Vec<Ratio<i64>> = nums.iter().map(|&x| r(x % den, den)).collect();
            prop_assume!(ex.iter().all(|a| !a.is_integer()));
            let s: Ratio<i64> = ex.iter().sum();
            let fix = s.ceil() - s;
            let last = ex.len();
            prop_assume!(!fix.is_integer());
            ex.push(fix);
            let q = SignatureQuery::new(ex).unwrap();
            let (p, n) = signature_formula(&q).unwrap();
            prop_assert_eq!((p + n) as usize, last - 1);
            prop_assert!(p >= 0 && n >= 0);
        }
    }
}
