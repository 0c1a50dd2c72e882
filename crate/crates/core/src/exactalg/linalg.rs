//! Exact linear algebra over a finite field.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::field::{Fe, Field};
use super::matrix::Matrix;
use super::numth::factorize;
use crate::error::{Error, Result};

pub type FMat = Matrix<Fe>;

/// Reduced row echelon form and pivot columns. Pivot rule: scan columns
/// left to right, take the lowest-index remaining row with a nonzero entry.
pub fn rref(f: &Field, m: &FMat) -> (FMat, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(pr) = (r..a.rows).find(|&i| a.get(i, c) != Fe(0)) else {
            continue;
        };
        if pr != r {
            for j in 0..a.cols {
                a.data.swap(pr * a.cols + j, r * a.cols + j);
            }
        }
        let inv = f.inv(a.get(r, c)).unwrap();
        for j in c..a.cols {
            a.set(r, j, f.mul(inv, a.get(r, j)));
        }
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c);
            if factor == Fe(0) {
                continue;
            }
            for j in c..a.cols {
                let v = f.sub(a.get(i, j), f.mul(factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(f: &Field, m: &FMat) -> usize {
    rref(f, m).1.len()
}

/// Basis of {x : m x = 0}, one vector per free column.
pub fn nullspace(f: &Field, m: &FMat) -> Vec<Vec<Fe>> {
    let (a, pivots) = rref(f, m);
    let mut is_pivot = vec![None; m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![Fe(0); m.cols];
        v[free] = Fe(1);
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = f.neg(a.get(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Basis of the column space of m, as vectors.
pub fn column_space(f: &Field, m: &FMat) -> Vec<Vec<Fe>> {
    let (_, pivots) = rref(f, m);
    pivots.into_iter().map(|c| m.col(c)).collect()
}

pub fn det(f: &Field, m: &FMat) -> Fe {
    assert!(m.is_square());
    let mut a = m.clone();
    let n = a.rows;
    let mut d = Fe(1);
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| a.get(i, c) != Fe(0)) else {
            return Fe(0);
        };
        if pr != c {
            for j in 0..n {
                a.data.swap(pr * n + j, c * n + j);
            }
            d = f.neg(d);
        }
        let piv = a.get(c, c);
        d = f.mul(d, piv);
        let inv = f.inv(piv).unwrap();
        for i in c + 1..n {
            let factor = f.mul(a.get(i, c), inv);
            if factor == Fe(0) {
                continue;
            }
            for j in c..n {
                let v = f.sub(a.get(i, j), f.mul(factor, a.get(c, j)));
                a.set(i, j, v);
            }
        }
    }
    d
}

pub fn inverse(f: &Field, m: &FMat) -> Result<FMat> {
    if !m.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let n = m.rows;
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j)
        } else if j - n == i {
            Fe(1)
        } else {
            Fe(0)
        }
    });
    let (r, pivots) = rref(f, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    Ok(Matrix::from_fn(n, n, |i, j| r.get(i, j + n)))
}

/// Some solution x of m x = b, if one exists.
pub fn solve(f: &Field, m: &FMat, b: &[Fe]) -> Option<Vec<Fe>> {
    let aug = Matrix::from_fn(m.rows, m.cols + 1, |i, j| if j < m.cols { m.get(i, j) } else { b[i] });
    let (r, pivots) = rref(f, &aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Fe(0); m.cols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = r.get(row, m.cols);
    }
    Some(x)
}

/// dim ker(m - lambda I).
pub fn eigenspace_dim(f: &Field, m: &FMat, lambda: Fe) -> usize {
    m.cols - rank(f, &m.shift(f, lambda))
}

/// Result of a bounded order search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundedOrder {
    Finite(u64),
    Unbounded,
}

/// Exponent of GL_n(q) and the primes dividing it: lcm(q^i - 1, i <= n)
/// times the least power of p that is >= n.
fn gl_exponent(f: &Field, n: usize) -> (BigUint, Vec<u64>) {
    let p = f.p() as u64;
    let q = f.q() as u64;
    let mut e = BigUint::one();
    let mut primes = vec![p];
    let mut qi = BigUint::one();
    for _ in 1..=n {
        qi *= q;
        let t = &qi - 1u32;
        let small = t.to_u64().expect("q^n fits in u64");
        primes.extend(factorize(small).into_iter().map(|(r, _)| r));
        e = num_integer::Integer::lcm(&e, &t);
    }
    let mut pp = 1u64;
    while (pp as usize) < n {
        pp *= p;
    }
    primes.sort_unstable();
    primes.dedup();
    (e * pp, primes)
}

/// Matrix power with a big exponent.
pub fn pow_big(f: &Field, m: &FMat, e: &BigUint) -> FMat {
    let mut acc = Matrix::identity(f, m.rows);
    for i in (0..e.bits()).rev() {
        acc = acc.mul(f, &acc);
        if e.bit(i) {
            acc = acc.mul(f, m);
        }
    }
    acc
}

/// Exact multiplicative order of an invertible matrix.
pub fn matrix_order(f: &Field, m: &FMat) -> Result<BigUint> {
    if !m.is_square() {
        return Err(Error::Dimension("order of a non-square matrix".into()));
    }
    if det(f, m) == Fe(0) {
        return Err(Error::Singular);
    }
    let (mut e, primes) = gl_exponent(f, m.rows);
    for r in primes {
        while (&e % r).is_zero() {
            let cand = &e / r;
            if pow_big(f, m, &cand).is_identity(f) {
                e = cand;
            } else {
                break;
            }
        }
    }
    Ok(e)
}

/// Least d <= bound with m^d = I.
pub fn element_order(f: &Field, m: &FMat, bound: u64) -> Result<BoundedOrder> {
    let o = matrix_order(f, m)?;
    Ok(match o.to_u64() {
        Some(d) if d <= bound => BoundedOrder::Finite(d),
        _ => BoundedOrder::Unbounded,
    })
}

/// Row-reduced basis of the span of `vecs`.
pub fn span_basis(f: &Field, vecs: &[Vec<Fe>], dim: usize) -> Vec<Vec<Fe>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_fn(vecs.len(), dim, |i, j| vecs[i][j]);
    let (r, pivots) = rref(f, &m);
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Incrementally maintained echelon basis, for spin and span-closure loops.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduce v against the basis; returns the residue.
    pub fn reduce(&self, f: &Field, v: &[Fe]) -> Vec<Fe> {
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != Fe(0) {
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        w
    }

    pub fn contains(&self, f: &Field, v: &[Fe]) -> bool {
        self.reduce(f, v).iter().all(|&x| x == Fe(0))
    }

    /// Insert v; returns true if the span grew.
    pub fn insert(&mut self, f: &Field, v: &[Fe]) -> bool {
        let mut w = self.reduce(f, v);
        let Some(pc) = w.iter().position(|&x| x != Fe(0)) else {
            return false;
        };
        let inv = f.inv(w[pc]).unwrap();
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != Fe(0) {
                for (x, &y) in row.iter_mut().zip(&w) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }

    pub fn vectors(&self) -> &[Vec<Fe>] {
        &self.rows
    }
}

/// Smallest subspace containing `seeds` and stable under every matrix in `gens`.
pub fn spin(f: &Field, seeds: &[Vec<Fe>], gens: &[FMat]) -> EchelonBasis {
    let dim = gens.first().map_or_else(|| seeds.first().map_or(0, Vec::len), |g| g.rows);
    let mut basis = EchelonBasis::new(dim);
    let mut queue: Vec<Vec<Fe>> = Vec::new();
    for s in seeds {
        if basis.insert(f, s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        if basis.len() == dim {
            break;
        }
        for g in gens {
            let w = g.mul_vec(f, &v);
            if basis.insert(f, &w) {
                queue.push(w);
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(f: &Field, rows: &[&[i64]]) -> FMat {
        Matrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn spec_order_examples() {
        let f5 = Field::new(5, 1).unwrap();
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(element_order(&f5, &m(&f5, &[&[-1, 0], &[0, -1]]), 10).unwrap(), BoundedOrder::Finite(2));
        assert_eq!(element_order(&f5, &m(&f5, &[&[1, 1], &[0, 1]]), 10).unwrap(), BoundedOrder::Finite(5));
        let rot = m(&f3, &[&[0, -1], &[1, 0]]);
        assert_eq!(element_order(&f3, &rot, 10).unwrap(), BoundedOrder::Finite(4));
        // Direct powering oracle.
        let direct = (1..=10).find(|&d| rot.pow(&f3, d).is_identity(&f3)).unwrap();
        assert_eq!(direct, 4);
        assert_eq!(element_order(&f5, &m(&f5, &[&[1, 1], &[0, 1]]), 4).unwrap(), BoundedOrder::Unbounded);
        assert_eq!(element_order(&f5, &m(&f5, &[&[1, 1], &[1, 1]]), 4), Err(Error::Singular));
    }

    #[test]
    fn eigenspace_examples() {
        let f = Field::new(7, 1).unwrap();
        let i3 = Matrix::identity(&f, 3);
        assert_eq!(eigenspace_dim(&f, &i3, Fe(1)), 3);
        let d = m(&f, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 3]]);
        assert_eq!(eigenspace_dim(&f, &d, Fe(1)), 2);
        assert_eq!(eigenspace_dim(&f, &d, Fe(3)), 1);
    }

    #[test]
    fn order_over_extension() {
        let f = Field::new(2, 4).unwrap();
        let g = f.primitive_element();
        let d = Matrix::scalar(&f, 3, g);
        assert_eq!(matrix_order(&f, &d).unwrap(), BigUint::from(15u32));
    }

    #[test]
    fn solve_and_inverse() {
        let f = Field::new(11, 1).unwrap();
        let a = m(&f, &[&[2, 3, 1], &[4, 1, 0], &[5, 5, 5]]);
        let ai = inverse(&f, &a).unwrap();
        assert!(a.mul(&f, &ai).is_identity(&f));
        let b = vec![f.from_i64(1), f.from_i64(2), f.from_i64(3)];
        let x = solve(&f, &a, &b).unwrap();
        assert_eq!(a.mul_vec(&f, &x), b);
        let s = m(&f, &[&[1, 2], &[2, 4]]);
        assert_eq!(inverse(&f, &s), Err(Error::Singular));
        assert!(solve(&f, &s, &[Fe(1), Fe(0)]).is_none());
    }

    #[test]
    fn spin_finds_invariant_subspace() {
        let f = Field::new(5, 1).unwrap();
        let g = m(&f, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 2]]);
        let b = spin(&f, &[vec![Fe(1), Fe(0), Fe(0)]], &[g.clone()]);
        assert_eq!(b.len(), 1);
        let b = spin(&f, &[vec![Fe(0), Fe(1), Fe(0)]], &[g]);
        assert_eq!(b.len(), 2);
    }

    proptest! {
        #[test]
        fn rank_nullity(data in proptest::collection::vec(0u32..9, 20), rows in 1usize..5) {
            let f = Field::new(3, 2).unwrap();
            let cols = 20 / rows.max(1);
            let mat = Matrix::new(rows, cols, data[..rows * cols].iter().map(|&x| Fe(x)).collect()).unwrap();
            let ns = nullspace(&f, &mat);
            prop_assert_eq!(rank(&f, &mat) + ns.len(), cols);
            for v in ns {
                prop_assert!(mat.mul_vec(&f, &v).iter().all(|&x| x == Fe(0)));
            }
        }

        #[test]
        fn gauss_det_matches_berkowitz(data in proptest::collection::vec(0u32..7, 25)) {
            let f = Field::new(7, 1).unwrap();
            let mat = Matrix::new(5, 5, data.into_iter().map(Fe).collect()).unwrap();
            prop_assert_eq!(det(&f, &mat), mat.det(&f));
        }

        #[test]
        fn order_divides_exponent_and_is_minimal(data in proptest::collection::vec(0u32..4, 9)) {
            let f = Field::new(2, 2).unwrap();
            let mat = Matrix::new(3, 3, data.into_iter().map(Fe).collect()).unwrap();
            prop_assume!(det(&f, &mat) != Fe(0));
            let o = matrix_order(&f, &mat).unwrap().to_u64().unwrap();
            let direct = (1..=1000u64).find(|&d| mat.pow(&f, d).is_identity(&f)).unwrap();
            prop_assert_eq!(o, direct);
        }
    }
}
