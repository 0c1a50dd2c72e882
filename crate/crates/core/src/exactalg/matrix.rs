//! Dense row-major matrices over any [`Ring`].

use serde::{Deserialize, Serialize};

use super::ring::Ring;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<E>,
}

impl<E: Copy> Matrix<E> {
    pub fn new(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<E>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> E {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn map<F: Copy>(&self, f: impl Fn(E) -> F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self, zero: E) -> Self {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Matrix::from_fn(r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j)
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols)
            } else {
                zero
            }
        })
    }
}

/// Ring-dependent operations. Free functions keep the ring explicit.
impl<E: Copy + PartialEq> Matrix<E> {
    pub fn zeros<R: Ring<Elem = E>>(r: &R, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![r.zero(); rows * cols],
        }
    }

    pub fn identity<R: Ring<Elem = E>>(r: &R, n: usize) -> Self {
        Self::scalar(r, n, r.one())
    }

    pub fn scalar<R: Ring<Elem = E>>(r: &R, n: usize, c: E) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { c } else { r.zero() })
    }

    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(a) {
                    continue;
                }
                let orow = other.row(k);
                let base = i * other.cols;
                for (j, &b) in orow.iter().enumerate() {
                    out.data[base + j] = r.add(out.data[base + j], r.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec<R: Ring<Elem = E>>(&self, r: &R, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(r.zero(), |acc, (&a, &b)| r.add(acc, r.mul(a, b)))
            })
            .collect()
    }

    pub fn add<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| r.add(a, b))
                .collect(),
        }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| r.sub(a, b))
                .collect(),
        }
    }

    pub fn scale<R: Ring<Elem = E>>(&self, r: &R, c: E) -> Self {
        self.map(|x| r.mul(c, x))
    }

    /// self - c*I
    pub fn shift<R: Ring<Elem = E>>(&self, r: &R, c: E) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m.set(i, i, r.sub(m.get(i, i), c));
        }
        m
    }

    pub fn pow<R: Ring<Elem = E>>(&self, r: &R, mut e: u64) -> Self {
        let mut acc = Matrix::identity(r, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(r, &b);
            }
        }
        acc
    }

    pub fn trace<R: Ring<Elem = E>>(&self, r: &R) -> E {
        (0..self.rows).fold(r.zero(), |acc, i| r.add(acc, self.get(i, i)))
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.data.iter().all(|&x| r.is_zero(x))
    }

    pub fn is_identity<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.as_scalar(r) == Some(r.one())
    }

    /// The scalar c if self = c*I.
    pub fn as_scalar<R: Ring<Elem = E>>(&self, r: &R) -> Option<E> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { c } else { r.zero() };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Coefficients of det(xI - self), leading coefficient first, by
    /// Berkowitz's division-free algorithm; valid over any commutative ring.
    pub fn charpoly<R: Ring<Elem = E>>(&self, r: &R) -> Vec<E> {
        assert!(self.is_square());
        let n = self.rows;
        let mut p = vec![r.one()];
        for k in 0..n {
            // Leading (k+1)x(k+1) block: [[M, C], [R, a]].
            let a = self.get(k, k);
            let row: Vec<E> = (0..k).map(|j| self.get(k, j)).collect();
            let mut v: Vec<E> = (0..k).map(|i| self.get(i, k)).collect();
            let mut t = Vec::with_capacity(k + 2);
            t.push(r.one());
            t.push(r.neg(a));
            for _ in 0..k {
                let dot = row
                    .iter()
                    .zip(&v)
                    .fold(r.zero(), |acc, (&x, &y)| r.add(acc, r.mul(x, y)));
                t.push(r.neg(dot));
                v = (0..k)
                    .map(|i| {
                        (0..k).fold(r.zero(), |acc, j| r.add(acc, r.mul(self.get(i, j), v[j])))
                    })
                    .collect();
            }
            let mut np = vec![r.zero(); k + 2];
            for (i, slot) in np.iter_mut().enumerate() {
                for (j, &pj) in p.iter().enumerate() {
                    if i >= j {
                        *slot = r.add(*slot, r.mul(t[i - j], pj));
                    }
                }
            }
            p = np;
        }
        p
    }

    /// Determinant over any commutative ring.
    pub fn det<R: Ring<Elem = E>>(&self, r: &R) -> E {
        let cp = self.charpoly(r);
        let c0 = cp[self.rows];
        if self.rows % 2 == 0 {
            c0
        } else {
            r.neg(c0)
        }
    }

    /// Inverse over any commutative ring via Cayley-Hamilton; fails if det is not a unit.
    pub fn inverse_ring<R: Ring<Elem = E>>(&self, r: &R) -> Result<Self> {
        let n = self.rows;
        let cp = self.charpoly(r);
        // A^n + c1 A^{n-1} + ... + cn = 0  =>  A^{-1} = -(A^{n-1} + c1 A^{n-2} + ... + c_{n-1}) / cn
        let cn = cp[n];
        let cn_inv = r.inv(cn).ok_or(Error::Singular)?;
        let mut acc = Matrix::identity(r, n);
        for &c in cp.iter().take(n).skip(1) {
            acc = self.mul(r, &acc).add(r, &Matrix::scalar(r, n, c));
        }
        Ok(acc.scale(r, r.neg(cn_inv)))
    }

    /// Commutator a b a^-1 b^-1 given both inverses.
    pub fn commutator<R: Ring<Elem = E>>(r: &R, a: &Self, b: &Self, ai: &Self, bi: &Self) -> Self {
        a.mul(r, b).mul(r, ai).mul(r, bi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::{Fe, Field};
    use crate::exactalg::ring::{Dual, DualRing};
    use proptest::prelude::*;

    fn m(f: &Field, rows: &[&[i64]]) -> Matrix<Fe> {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn charpoly_of_companion() {
        let f = Field::new(7, 1).unwrap();
        // companion of x^3 - 2x^2 + 3x - 5
        let a = m(&f, &[&[0, 0, 5], &[1, 0, -3], &[0, 1, 2]]);
        let cp = a.charpoly(&f);
        assert_eq!(cp, vec![f.from_i64(1), f.from_i64(-2), f.from_i64(3), f.from_i64(-5)]);
        assert_eq!(a.det(&f), f.from_i64(5));
    }

    #[test]
    fn shape_errors() {
        assert!(Matrix::new(2, 2, vec![Fe(0); 3]).is_err());
        assert!(Matrix::from_rows(&[vec![Fe(0)], vec![Fe(0), Fe(1)]]).is_err());
    }

    #[test]
    fn dual_inverse() {
        let r = DualRing::new(Field::new(5, 1).unwrap());
        let d = |a: u32, b: u32| Dual { a: Fe(a), b: Fe(b) };
        let g = Matrix::from_rows(&[vec![d(1, 2), d(3, 0)], vec![d(0, 1), d(2, 4)]]).unwrap();
        let gi = g.inverse_ring(&r).unwrap();
        assert!(g.mul(&r, &gi).is_identity(&r));
        let sing = Matrix::from_rows(&[vec![d(0, 1), d(0, 0)], vec![d(0, 0), d(1, 0)]]).unwrap();
        assert_eq!(sing.inverse_ring(&r), Err(Error::Singular));
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(a in proptest::collection::vec(0u32..9, 16), b in proptest::collection::vec(0u32..9, 16)) {
            let f = Field::new(3, 2).unwrap();
            let x = Matrix::new(4, 4, a.into_iter().map(Fe).collect()).unwrap();
            let y = Matrix::new(4, 4, b.into_iter().map(Fe).collect()).unwrap();
            prop_assert_eq!(x.mul(&f, &y).det(&f), f.mul(x.det(&f), y.det(&f)));
        }
    }
}
