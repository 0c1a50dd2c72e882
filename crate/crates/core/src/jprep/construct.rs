//! Explicit rigid tuple by convolution of a rank-one system.
//!
//! With a = (lambda_{n+1}, ..., lambda_1) and r = n + 1, the r x r matrices
//! B_k (identity except row k) share the fixed vector l = (1, a_1, a_1 a_2, ...).
//! The generators are the induced maps on the quotient by l. Only ring
//! operations are used (plus one unit inversion for non-default pivots), so
//! the same code runs over fields, dual numbers and floats.

use crate::cyclo::JPParams;
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Ring};

use super::JPTuple;

fn check_params<R: Ring>(r: &R, params: &JPParams<R::Elem>) -> Result<()> {
    if params.lambdas.len() < 2 {
        return Err(Error::Dimension("need at least two lambdas (n >= 1)".into()));
    }
    if params.lambda0 == r.one() {
        return Err(Error::DegenerateParams("lambda_0 = 1".into()));
    }
    if let Some(i) = params.lambdas.iter().position(|&x| x == r.one()) {
        return Err(Error::DegenerateParams(format!("lambda_{} = 1", i + 1)));
    }
    if params.total_product(r) != r.one() {
        return Err(Error::Precondition(
            "lambda_0 * lambda_1 * ... * lambda_{n+1} must equal 1".into(),
        ));
    }
    Ok(())
}

/// The r x r lift matrices B_1..B_r (1-based k maps to index k-1).
fn lift_matrices<R: Ring>(r: &R, params: &JPParams<R::Elem>) -> Vec<Matrix<R::Elem>> {
    let a: Vec<R::Elem> = params.lambdas.iter().rev().copied().collect();
    let dim = a.len();
    let l0 = params.lambda0;
    (0..dim)
        .map(|k| {
            let mut b = Matrix::identity(r, dim);
            for j in 0..dim {
                let v = if j < k {
                    r.sub(a[j], r.one())
                } else if j == k {
                    r.mul(l0, a[k])
                } else {
                    r.mul(l0, r.sub(a[j], r.one()))
                };
                b.set(k, j, v);
            }
            b
        })
        .collect()
}

fn fixed_vector<R: Ring>(r: &R, params: &JPParams<R::Elem>) -> Vec<R::Elem> {
    let a: Vec<R::Elem> = params.lambdas.iter().rev().copied().collect();
    let mut l = Vec::with_capacity(a.len());
    let mut acc = r.one();
    for &x in a.iter() {
        l.push(acc);
        acc = r.mul(acc, x);
    }
    l
}

/// Construct using the quotient that drops coordinate `pivot` of the lift.
pub fn construct_with_pivot<R: Ring>(r: &R, params: &JPParams<R::Elem>, pivot: usize) -> Result<JPTuple<R>> {
    check_params(r, params)?;
    let bs = lift_matrices(r, params);
    let l = fixed_vector(r, params);
    let dim = l.len();
    if pivot >= dim {
        return Err(Error::Precondition(format!("pivot {pivot} out of range")));
    }
    let inv_piv = r
        .inv(l[pivot])
        .ok_or_else(|| Error::NoSolution(format!("fixed vector entry {pivot} is not a unit")))?;
    let n = dim - 1;
    let kept: Vec<usize> = (0..dim).filter(|&i| i != pivot).collect();
    // P: v -> v - (v_pivot / l_pivot) l, then drop the pivot coordinate.
    let proj = Matrix::from_fn(n, dim, |i, j| {
        let c = kept[i];
        let mut v = r.neg(r.mul(l[c], if j == pivot { inv_piv } else { r.zero() }));
        if j == c {
            v = r.add(v, r.one());
        }
        v
    });
    let emb = Matrix::from_fn(dim, n, |i, j| if kept[j] == i { r.one() } else { r.zero() });
    let gens = (0..dim)
        .map(|i| proj.mul(r, &bs[dim - 1 - i]).mul(r, &emb))
        .collect();
    Ok(JPTuple {
        ring: r.clone(),
        params: params.clone(),
        gens,
    })
}

/// The rigid tuple for `params` (default pivot).
pub fn construct<R: Ring>(r: &R, params: &JPParams<R::Elem>) -> Result<JPTuple<R>> {
    construct_with_pivot(r, params, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Fe, Field};

    #[test]
    fn lift_has_common_fixed_vector() {
        let f = Field::new(7, 1).unwrap();
        let p = JPParams::new(Fe(2), vec![Fe(4), Fe(4), Fe(4), Fe(4), Fe(4), Fe(2)]);
        // 2 * 4^5 * 2 = 4096 = 1 mod 7
        assert_eq!(p.total_product(&f), f.one());
        let l = fixed_vector(&f, &p);
        for b in lift_matrices(&f, &p) {
            assert_eq!(b.mul_vec(&f, &l), l);
        }
    }

    #[test]
    fn product_is_lambda0() {
        let f = Field::new(11, 1).unwrap();
        let p = JPParams::new(Fe(3), vec![Fe(2), Fe(5), Fe(6), f.inv(f.mul(Fe(3), f.mul(Fe(2), f.mul(Fe(5), Fe(6))))).unwrap()]);
        for pivot in 0..4 {
            let t = construct_with_pivot(&f, &p, pivot).unwrap();
            let prod = t.gens.iter().skip(1).fold(t.gens[0].clone(), |acc, g| acc.mul(&f, g));
            assert_eq!(prod.as_scalar(&f), Some(Fe(3)), "pivot {pivot}");
        }
    }

    #[test]
    fn rejects_degenerate() {
        let f = Field::new(5, 1).unwrap();
        let bad = JPParams::new(Fe(4), vec![Fe(1), Fe(4), Fe(4)]);
        assert!(matches!(construct(&f, &bad), Err(Error::DegenerateParams(_))));
        let bad0 = JPParams::new(Fe(1), vec![Fe(4), Fe(4), Fe(1)]);
        assert!(matches!(construct(&f, &bad0), Err(Error::DegenerateParams(_))));
        let notone = JPParams::new(Fe(4), vec![Fe(4), Fe(4), Fe(2)]);
        assert!(matches!(construct(&f, &notone), Err(Error::Precondition(_))));
    }
}
