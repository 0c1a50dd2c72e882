//! Floating-point signature oracle over the complex numbers.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_rational::Ratio;

use super::{signature_formula, SignatureQuery};
use crate::cyclo::JPParams;
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Ring, RingDesc};
use crate::jprep::construct;

pub const DEFAULT_TOL: f64 = 1e-8;
const EQ_TOL: f64 = 1e-9;

/// Complex number with approximate equality, so exact-ring code (such as the
/// parameter checks in the construction) can run over floats.
#[derive(Clone, Copy, Debug)]
pub struct Cx(pub Complex64);

impl PartialEq for Cx {
    fn eq(&self, other: &Self) -> bool {
        (self.0 - other.0).norm() < EQ_TOL
    }
}

#[derive(Clone, Debug, Default)]
pub struct ComplexRing;

impl Ring for ComplexRing {
    type Elem = Cx;
    fn zero(&self) -> Cx {
        Cx(Complex64::new(0.0, 0.0))
    }
    fn one(&self) -> Cx {
        Cx(Complex64::new(1.0, 0.0))
    }
    fn add(&self, a: Cx, b: Cx) -> Cx {
        Cx(a.0 + b.0)
    }
    fn neg(&self, a: Cx) -> Cx {
        Cx(-a.0)
    }
    fn mul(&self, a: Cx, b: Cx) -> Cx {
        Cx(a.0 * b.0)
    }
    fn from_i64(&self, n: i64) -> Cx {
        Cx(Complex64::new(n as f64, 0.0))
    }
    fn inv(&self, a: Cx) -> Option<Cx> {
        if a.0.norm() < EQ_TOL {
            None
        } else {
            Some(Cx(a.0.inv()))
        }
    }
    fn is_zero(&self, a: Cx) -> bool {
        a.0 == Complex64::new(0.0, 0.0)
    }
    fn desc(&self) -> RingDesc {
        RingDesc::ComplexF64
    }
}

fn root_of_unity(a: Ratio<i64>) -> Cx {
    let x = *a.numer() as f64 / *a.denom() as f64;
    Cx(Complex64::from_polar(1.0, 2.0 * PI * x))
}

fn to_dmatrix(m: &Matrix<Cx>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows, m.cols, |i, j| m.get(i, j).0)
}

fn frac(x: Ratio<i64>) -> Ratio<i64> {
    x - x.floor()
}

/// Count signs of the invariant Hermitian form of the complex tuple.
pub fn signature_numeric(q: &SignatureQuery, tol: f64) -> Result<(i64, i64)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Precondition("tol must be positive".into()));
    }
    q.validate()?;
    let ring = ComplexRing;
    let lambdas: Vec<Cx> = q.exponents.iter().map(|&a| root_of_unity(a)).collect();
    let params = JPParams::new(lambdas[0], lambdas[1..].to_vec());
    let t = construct(&ring, &params)?;
    let n = t.dim();
    let gens: Vec<DMatrix<Complex64>> = t.gens.iter().map(to_dmatrix).collect();

    // (g kron conj(g) - I) vec(A) = 0 for every generator, row-major vec.
    let nn = n * n;
    let mut sys = DMatrix::<Complex64>::zeros(gens.len() * nn, nn);
    for (k, g) in gens.iter().enumerate() {
        for a in 0..n {
            for b in 0..n {
                let row = k * nn + a * n + b;
                for c in 0..n {
                    for d in 0..n {
                        sys[(row, c * n + d)] = g[(a, c)] * g[(b, d)].conj();
                    }
                }
                sys[(row, a * n + b)] -= Complex64::new(1.0, 0.0);
            }
        }
    }
    let svd = sys.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let s0 = svd.singular_values[order[0]];
    let s1 = svd.singular_values[order[1]];
    if s0 > tol || s1 < tol {
        return Err(Error::IllConditioned(format!(
            "smallest singular values {s0:.3e}, {s1:.3e} (tol {tol:.1e})"
        )));
    }
    let null_row = v_t.row(order[0]);
    let a = DMatrix::from_fn(n, n, |i, j| null_row[i * n + j].conj());
    let adag = a.adjoint();
    // adag = mu * a
    let mu = a.iter().zip(adag.iter()).map(|(x, y)| x.conj() * y).sum::<Complex64>()
        / a.iter().map(|x| x.norm_sqr()).sum::<f64>();
    let h = a * mu.sqrt();
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);

    // Fix the overall sign on a rank-one piece: the line im(g_i - 1) of the
    // first generator that is not unipotent carries the one-dimensional
    // signature of the parameters (lambda_0; lambda_i, 1/(lambda_0 lambda_i)).
    let a0 = q.exponents[0];
    let pick = (1..q.exponents.len()).find(|&i| !(a0 + q.exponents[i]).is_integer());
    let (pos, neg) = count_signs(&h, tol);
    let Some(i) = pick else {
        if pos == neg {
            return Ok((pos, neg));
        }
        return Err(Error::Precondition(
            "every generator is unipotent; the sign of the form is not pinned".into(),
        ));
    };
    let ai = q.exponents[i];
    let local_pos = frac(a0) + frac(ai) + frac(-a0 - ai) == Ratio::from_integer(2);
    let gi = &gens[i - 1];
    let dm = gi - DMatrix::<Complex64>::identity(n, n);
    let col = (0..n)
        .max_by(|&x, &y| dm.column(x).norm().total_cmp(&dm.column(y).norm()))
        .unwrap();
    let r = dm.column(col).into_owned();
    let b = h
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::IllConditioned("form is singular".into()))?;
    let s = (r.adjoint() * &b * &r)[(0, 0)].re;
    if s.abs() < tol {
        return Err(Error::IllConditioned("root vector is isotropic".into()));
    }
    Ok(if (s > 0.0) == local_pos { (pos, neg) } else { (neg, pos) })
}

fn count_signs(h: &DMatrix<Complex64>, tol: f64) -> (i64, i64) {
    let eig = SymmetricEigen::new(h.clone());
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let pos = eig.eigenvalues.iter().filter(|&&x| x > tol * scale).count() as i64;
    let neg = eig.eigenvalues.iter().filter(|&&x| x < -tol * scale).count() as i64;
    (pos, neg)
}

/// Whether the float oracle agrees with the closed formula.
pub fn signatures_agree(q: &SignatureQuery, tol: f64) -> Result<bool> {
    Ok(signature_numeric(q, tol)? == signature_formula(q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn numeric_matches_examples() {
        let q = SignatureQuery::new(vec![r(1, 2); 4]).unwrap();
        assert_eq!(signature_numeric(&q, DEFAULT_TOL).unwrap(), (1, 1));
        let q = SignatureQuery::new(vec![r(1, 3); 6]).unwrap();
        assert_eq!(signature_numeric(&q, DEFAULT_TOL).unwrap(), (1, 3));
    }

    #[test]
    fn rejects_bad_queries() {
        let bad = SignatureQuery {
            exponents: vec![r(1, 3), r(1, 3), r(1, 3), r(1, 2)],
        };
        assert!(matches!(signature_numeric(&bad, DEFAULT_TOL), Err(Error::Precondition(_))));
        let q = SignatureQuery::new(vec![r(1, 2); 4]).unwrap();
        assert!(signature_numeric(&q, 0.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn numeric_agrees_with_formula(den in 2i64..12, nums in proptest::collection::vec(1i64..24, 3..7)) {
            let mut ex: Vec<Ratio<i64>> = nums.iter().map(|&x| r(x, den)).collect();
            prop_assume!(ex.iter().all(|a| !a.is_integer()));
            let s: Ratio<i64> = ex.iter().sum();
            let fix = s.ceil() + 1 - s;
            prop_assume!(!fix.is_integer());
            ex.push(fix);
            let q = SignatureQuery::new(ex).unwrap();
            match signature_numeric(&q, DEFAULT_TOL) {
                Ok(v) => prop_assert_eq!(v, signature_formula(&q).unwrap()),
                Err(Error::Precondition(_)) => {}
                Err(e) => prop_assert!(false, "{e:?}"),
            }
        }
    }
}
