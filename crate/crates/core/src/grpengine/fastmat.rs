//! Table-driven matrices over fields with at most 256 elements, one byte per entry.

use crate::error::{Error, Result};
use crate::exactalg::{Fe, Field, Matrix};

pub(crate) const MAX_Q: u32 = 256;
/// Vectors are packed one byte per coordinate into a u128 key.
pub(crate) const MAX_DIM: usize = 16;

#[derive(Clone, Debug)]
pub(crate) struct Arith {
    pub q: usize,
    p: u32,
    prime: bool,
    add: Vec<u8>,
    mul: Vec<u8>,
    inv: Vec<u8>,
}

impl Arith {
    pub fn new(f: &Field) -> Result<Self> {
        if f.q() > MAX_Q {
            return Err(Error::FieldTooLarge(format!(
                "group engine supports q <= {MAX_Q}, got {}",
                f.q()
            )));
        }
        let q = f.q() as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = f.add(Fe(a as u32), Fe(b as u32)).0 as u8;
                mul[a * q + b] = f.mul(Fe(a as u32), Fe(b as u32)).0 as u8;
            }
            if a > 0 {
                inv[a] = f.inv(Fe(a as u32)).unwrap().0 as u8;
            }
        }
        Ok(Arith {
            q,
            p: f.p(),
            prime: f.k() == 1,
            add,
            mul,
            inv,
        })
    }

    #[inline]
    fn a(&self, x: u8, y: u8) -> u8 {
        self.add[x as usize * self.q + y as usize]
    }

    #[inline]
    fn m(&self, x: u8, y: u8) -> u8 {
        self.mul[x as usize * self.q + y as usize]
    }

    fn neg(&self, x: u8) -> u8 {
        // additive inverse by table scan of the row; q is tiny
        (0..self.q as u8).find(|&y| self.a(x, y) == 0).unwrap_or(0)
    }

    pub fn mat_mul(&self, n: usize, x: &[u8], y: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; n * n];
        if self.prime {
            let p = self.p;
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0u32;
                    for k in 0..n {
                        s += x[i * n + k] as u32 * y[k * n + j] as u32;
                    }
                    out[i * n + j] = (s % p) as u8;
                }
            }
        } else {
            for i in 0..n {
                for k in 0..n {
                    let c = x[i * n + k];
                    if c == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let t = self.m(c, y[k * n + j]);
                        out[i * n + j] = self.a(out[i * n + j], t);
                    }
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, n: usize, x: &[u8], v: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; n];
        if self.prime {
            for i in 0..n {
                let s: u32 = (0..n).map(|k| x[i * n + k] as u32 * v[k] as u32).sum();
                out[i] = (s % self.p) as u8;
            }
        } else {
            for i in 0..n {
                let mut s = 0u8;
                for k in 0..n {
                    s = self.a(s, self.m(x[i * n + k], v[k]));
                }
                out[i] = s;
            }
        }
        out
    }

    pub fn inverse(&self, n: usize, x: &[u8]) -> Option<Vec<u8>> {
        let w = 2 * n;
        let mut aug = vec![0u8; n * w];
        for i in 0..n {
            aug[i * w..i * w + n].copy_from_slice(&x[i * n..i * n + n]);
            aug[i * w + n + i] = 1;
        }
        for c in 0..n {
            let piv = (c..n).find(|&r| aug[r * w + c] != 0)?;
            if piv != c {
                for j in 0..w {
                    aug.swap(piv * w + j, c * w + j);
                }
            }
            let s = self.inv[aug[c * w + c] as usize];
            for j in 0..w {
                aug[c * w + j] = self.m(aug[c * w + j], s);
            }
            for r in 0..n {
                let factor = aug[r * w + c];
                if r == c || factor == 0 {
                    continue;
                }
                let nf = self.neg(factor);
                for j in 0..w {
                    let t = self.m(nf, aug[c * w + j]);
                    aug[r * w + j] = self.a(aug[r * w + j], t);
                }
            }
        }
        let mut out = vec![0u8; n * n];
        for i in 0..n {
            out[i * n..i * n + n].copy_from_slice(&aug[i * w + n..i * w + w]);
        }
        Some(out)
    }
}

pub(crate) fn identity(n: usize) -> Vec<u8> {
    let mut m = vec![0u8; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

pub(crate) fn is_identity(n: usize, m: &[u8]) -> bool {
    (0..n).all(|i| (0..n).all(|j| m[i * n + j] == u8::from(i == j)))
}

pub(crate) fn key(v: &[u8]) -> u128 {
    v.iter().fold(0u128, |acc, &x| (acc << 8) | x as u128)
}

pub(crate) fn unkey(n: usize, mut k: u128) -> Vec<u8> {
    let mut v = vec![0u8; n];
    for i in (0..n).rev() {
        v[i] = (k & 0xff) as u8;
        k >>= 8;
    }
    v
}

pub(crate) fn pack(m: &Matrix<Fe>) -> Vec<u8> {
    m.data.iter().map(|x| x.0 as u8).collect()
}

pub(crate) fn unpack(n: usize, m: &[u8]) -> Matrix<Fe> {
    Matrix::from_fn(n, n, |i, j| Fe(m[i * n + j] as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::linalg;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn agrees_with_generic(q in prop::sample::select(vec![5u64, 8, 9, 16, 25]), n in 1usize..5, seed in any::<u64>()) {
            let f = Field::of_order(q).unwrap();
            let ar = Arith::new(&f).unwrap();
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); Fe(((s >> 33) % q) as u32) };
            let a = Matrix::from_fn(n, n, |_, _| next());
            let b = Matrix::from_fn(n, n, |_, _| next());
            prop_assert_eq!(unpack(n, &ar.mat_mul(n, &pack(&a), &pack(&b))), a.mul(&f, &b));
            match linalg::inverse(&f, &a) {
                Ok(ai) => prop_assert_eq!(unpack(n, &ar.inverse(n, &pack(&a)).unwrap()), ai),
                Err(_) => prop_assert!(ar.inverse(n, &pack(&a)).is_none()),
            }
        }
    }

    #[test]
    fn key_roundtrip() {
        let v = vec![3u8, 0, 255, 7];
        assert_eq!(unkey(4, key(&v)), v);
    }
}
