//! Finite fields F_q, q = p^k, with elements packed as base-p digit strings.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::numth::{factorize, is_prime};
use super::polyfp;
use crate::error::{Error, Result};

/// A field element: the polynomial residue sum c_i x^i encoded as sum c_i p^i.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fe(pub u32);

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub k: u32,
    /// Monic modulus, coefficients low-to-high.
    pub modulus: Vec<u32>,
}

/// Largest field order accepted.
pub const MAX_ORDER: u64 = 1 << 20;
/// Arithmetic tables are precomputed up to this order.
const TABLE_LIMIT: u32 = 256;

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    inv: Vec<u16>,
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// A finite field. Cheap to clone; instances are cached per (p, k).
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p() && self.k() == other.k()
    }
}
impl Eq for Field {}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static C: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Lexicographically least monic irreducible of degree k, ordering by the
/// base-p encoding of the non-leading coefficients.
fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = p.pow(k);
    for code in 0..count {
        let mut f = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if f[0] != 0 && polyfp::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// The field of order p^k with the deterministic modulus.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if k == 0 {
            return Err(Error::FieldTooLarge("extension degree must be >= 1".into()));
        }
        let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if q > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge(format!("{p}^{k}")));
        }
        let key = (p as u32, k);
        if let Some(f) = cache().lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let modulus: Vec<u32> = least_irreducible(p, k).into_iter().map(|c| c as u32).collect();
        let mut inner = Inner {
            p: p as u32,
            k,
            q: q as u32,
            modulus,
            tables: None,
        };
        if k > 1 && inner.q <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        let f = Field(Arc::new(inner));
        cache().lock().unwrap().insert(key, f.clone());
        Ok(f)
    }

    /// The field of order q, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Field> {
        let f = factorize(q.max(1));
        if f.len() != 1 {
            return Err(Error::NonPrime(q));
        }
        Field::new(f[0].0, f[0].1)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn desc(&self) -> FieldDesc {
        FieldDesc {
            p: self.p(),
            k: self.k(),
            modulus: self.0.modulus.clone(),
        }
    }

    pub fn name(&self) -> String {
        format!("F_{}", self.q())
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }
    pub fn one(&self) -> Fe {
        Fe(1)
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q()).map(Fe)
    }

    pub fn from_i64(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p() as i64) as u32)
    }

    /// The element x (a root of the modulus); for prime fields this is 0.
    pub fn gen_x(&self) -> Fe {
        if self.k() == 1 {
            Fe(0)
        } else {
            Fe(self.p())
        }
    }

    fn digits(&self, a: Fe) -> Vec<u32> {
        let p = self.p();
        let mut v = Vec::with_capacity(self.k() as usize);
        let mut c = a.0;
        for _ in 0..self.k() {
            v.push(c % p);
            c /= p;
        }
        v
    }

    fn undigits(&self, d: &[u32]) -> Fe {
        let p = self.p();
        Fe(d.iter().rev().fold(0u32, |acc, &c| acc * p + c))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        if self.0.k == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        if let Some(t) = &self.0.tables {
            return Fe(t.add[(a.0 * self.0.q + b.0) as usize] as u32);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
        self.undigits(&s)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        if self.0.k == 1 {
            return Fe(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let d: Vec<u32> = self.digits(a).iter().map(|x| (p - x) % p).collect();
        self.undigits(&d)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        if self.0.k == 1 {
            let p = self.0.p;
            return Fe(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + p - b.0 });
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if self.0.k == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32);
        }
        if let Some(t) = &self.0.tables {
            return Fe(t.mul[(a.0 * self.0.q + b.0) as usize] as u32);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p() as u64;
        let da: Vec<u64> = self.digits(a).into_iter().map(u64::from).collect();
        let db: Vec<u64> = self.digits(b).into_iter().map(u64::from).collect();
        let m: Vec<u64> = self.0.modulus.iter().map(|&c| c as u64).collect();
        let prod = polyfp::rem(&polyfp::mul(&da, &db, p), &m, p);
        let mut d: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        d.resize(self.k() as usize, 0);
        self.undigits(&d)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut r = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; None for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        if let Some(t) = &self.0.tables {
            return Some(Fe(t.inv[a.0 as usize] as u32));
        }
        Some(self.pow(a, self.q() as u64 - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b).ok_or(Error::Singular)?))
    }

    /// Frobenius x -> x^(p^j).
    pub fn frobenius(&self, a: Fe, j: u32) -> Fe {
        self.pow(a, (self.p() as u64).pow(j % self.k()))
    }

    /// Multiplicative order of a nonzero element.
    pub fn elem_order(&self, a: Fe) -> u64 {
        assert!(a.0 != 0, "order of zero");
        let m = self.q() as u64 - 1;
        let mut d = m;
        for (r, _) in factorize(m) {
            while d % r == 0 && self.pow(a, d / r) == self.one() {
                d /= r;
            }
        }
        d
    }

    /// Least-encoded generator of the multiplicative group.
    pub fn primitive_element(&self) -> Fe {
        let m = self.q() as u64 - 1;
        self.elements()
            .skip(1)
            .find(|&a| self.elem_order(a) == m)
            .expect("cyclic multiplicative group")
    }

    /// Deterministic element of exact multiplicative order d (d | q-1).
    pub fn element_of_order(&self, d: u64) -> Option<Fe> {
        let m = self.q() as u64 - 1;
        if d == 0 || m % d != 0 {
            return None;
        }
        Some(self.pow(self.primitive_element(), m / d))
    }

    /// Degree over F_p of the subfield generated by `a`.
    pub fn degree_of(&self, a: Fe) -> u32 {
        (1..=self.k())
            .find(|&j| self.k() % j == 0 && self.frobenius(a, j) == a)
            .unwrap_or(self.k())
    }

    /// Whether `a` lies in the prime field.
    pub fn in_prime_field(&self, a: Fe) -> bool {
        a.0 < self.p()
    }
}

fn build_tables(inner: &Inner) -> Tables {
    let f = Field(Arc::new(Inner {
        p: inner.p,
        k: inner.k,
        q: inner.q,
        modulus: inner.modulus.clone(),
        tables: None,
    }));
    let q = inner.q;
    let mut add = vec![0u16; (q * q) as usize];
    let mut mul = vec![0u16; (q * q) as usize];
    let mut inv = vec![0u16; q as usize];
    for a in 0..q {
        for b in 0..q {
            let i = (a * q + b) as usize;
            add[i] = f.add(Fe(a), Fe(b)).0 as u16;
            let m = f.mul_slow(Fe(a), Fe(b)).0;
            mul[i] = m as u16;
            if m == 1 {
                inv[a as usize] = b as u16;
            }
        }
    }
    Tables { add, mul, inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli() {
        assert_eq!(Field::new(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(Field::new(5, 2).unwrap().modulus(), &[2, 0, 1]);
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn f9_modulus_by_exhaustive_scan() {
        // Independent scan: a monic quadratic over F_3 is irreducible iff it has no root.
        let first = (0..9u32)
            .map(|c| (c % 3, c / 3))
            .find(|&(c0, c1)| c0 != 0 && (0..3).all(|x| (x * x + c1 * x + c0) % 3 != 0))
            .unwrap();
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[first.0, first.1, 1]);
    }

    #[test]
    fn rejects_composite() {
        assert_eq!(Field::new(6, 1).unwrap_err(), Error::NonPrime(6));
        assert!(matches!(Field::new(2, 40), Err(Error::FieldTooLarge(_))));
    }

    #[test]
    fn fermat_little_theorem_exhaustive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 64, 81] {
            let f = Field::of_order(q).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.pow(a, q - 1), f.one(), "q={q} a={a:?}");
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn tables_match_slow_path() {
        let f = Field::new(2, 8).unwrap();
        for a in (0..256).step_by(7) {
            for b in (0..256).step_by(5) {
                assert_eq!(f.mul(Fe(a), Fe(b)), f.mul_slow(Fe(a), Fe(b)));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = Field::new(2, 12).unwrap();
        let g = f.primitive_element();
        assert_eq!(f.elem_order(g), 4095);
        assert_eq!(f.mul(g, f.inv(g).unwrap()), f.one());
    }

    #[test]
    fn roots_of_unity() {
        let f = Field::new(2, 2).unwrap();
        let w = f.element_of_order(3).unwrap();
        // w^2 + w + 1 = 0
        assert_eq!(f.add(f.add(f.mul(w, w), w), f.one()), f.zero());
        assert_eq!(f.degree_of(w), 2);
        assert_eq!(f.degree_of(f.one()), 1);
    }
}
