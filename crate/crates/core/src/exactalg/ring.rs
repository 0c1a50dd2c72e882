//! A small commutative-ring abstraction so matrix code can run over fields,
//! dual numbers and the length-2 Witt ring alike.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::{Fe, Field, FieldDesc};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "field")]
pub enum RingDesc {
    Field(FieldDesc),
    /// F_q[eps]/(eps^2).
    Dual(FieldDesc),
    /// W_2 of the given residue field (characteristic 4).
    WittLen2(FieldDesc),
    /// Double-precision complex numbers (numeric oracles only).
    ComplexF64,
}

pub trait Ring: Clone + fmt::Debug + Send + Sync {
    type Elem: Copy + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Inverse of a unit, None otherwise.
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn desc(&self) -> RingDesc;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }
    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
    fn pow(&self, a: Self::Elem, mut e: u64) -> Self::Elem {
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
    fn div(&self, a: Self::Elem, b: Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, self.inv(b).ok_or(Error::NonUnit)?))
    }
}

impl Ring for Field {
    type Elem = Fe;
    fn zero(&self) -> Fe {
        Fe(0)
    }
    fn one(&self) -> Fe {
        Fe(1)
    }
    fn add(&self, a: Fe, b: Fe) -> Fe {
        Field::add(self, a, b)
    }
    fn neg(&self, a: Fe) -> Fe {
        Field::neg(self, a)
    }
    fn sub(&self, a: Fe, b: Fe) -> Fe {
        Field::sub(self, a, b)
    }
    fn mul(&self, a: Fe, b: Fe) -> Fe {
        Field::mul(self, a, b)
    }
    fn from_i64(&self, n: i64) -> Fe {
        Field::from_i64(self, n)
    }
    fn inv(&self, a: Fe) -> Option<Fe> {
        Field::inv(self, a)
    }
    fn pow(&self, a: Fe, e: u64) -> Fe {
        Field::pow(self, a, e)
    }
    fn desc(&self) -> RingDesc {
        RingDesc::Field(Field::desc(self))
    }
}

/// a + b*eps with eps^2 = 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Dual {
    pub a: Fe,
    pub b: Fe,
}

#[derive(Clone, Debug)]
pub struct DualRing {
    pub base: Field,
}

impl DualRing {
    pub fn new(base: Field) -> Self {
        DualRing { base }
    }
    pub fn embed(&self, a: Fe) -> Dual {
        Dual { a, b: Fe(0) }
    }
    pub fn eps(&self) -> Dual {
        Dual { a: Fe(0), b: Fe(1) }
    }
    /// a(1 + eps*nu).
    pub fn deform(&self, a: Fe, nu: Fe) -> Dual {
        Dual {
            a,
            b: self.base.mul(a, nu),
        }
    }
}

impl Ring for DualRing {
    type Elem = Dual;
    fn zero(&self) -> Dual {
        Dual { a: Fe(0), b: Fe(0) }
    }
    fn one(&self) -> Dual {
        Dual { a: Fe(1), b: Fe(0) }
    }
    fn add(&self, x: Dual, y: Dual) -> Dual {
        Dual {
            a: self.base.add(x.a, y.a),
            b: self.base.add(x.b, y.b),
        }
    }
    fn neg(&self, x: Dual) -> Dual {
        Dual {
            a: self.base.neg(x.a),
            b: self.base.neg(x.b),
        }
    }
    fn mul(&self, x: Dual, y: Dual) -> Dual {
        let f = &self.base;
        Dual {
            a: f.mul(x.a, y.a),
            b: f.add(f.mul(x.a, y.b), f.mul(x.b, y.a)),
        }
    }
    fn from_i64(&self, n: i64) -> Dual {
        self.embed(self.base.from_i64(n))
    }
    fn inv(&self, x: Dual) -> Option<Dual> {
        // (a + b eps)^-1 = a^-1 - b a^-2 eps
        let f = &self.base;
        let ai = f.inv(x.a)?;
        Some(Dual {
            a: ai,
            b: f.neg(f.mul(x.b, f.mul(ai, ai))),
        })
    }
    fn desc(&self) -> RingDesc {
        RingDesc::Dual(self.base.desc())
    }
}

/// Element of W_2(F_2) = Z/4 or W_2(F_4) = Z/4[x]/(x^2+x+1), as c0 + c1*x.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct W2(pub [u8; 2]);

/// The length-2 Witt ring of F_2 or F_4.
#[derive(Clone, Debug)]
pub struct WittRing2 {
    residue: Field,
}

impl WittRing2 {
    /// Supported residue fields: F_2 and F_4.
    pub fn new(residue: Field) -> Result<Self> {
        if residue.p() != 2 || residue.k() > 2 {
            return Err(Error::NotAField(format!(
                "W_2 is only modelled over F_2 and F_4, got {}",
                residue.name()
            )));
        }
        Ok(WittRing2 { residue })
    }
    pub fn residue_field(&self) -> &Field {
        &self.residue
    }
    fn deg(&self) -> usize {
        self.residue.k() as usize
    }
    /// The Teichmuller cube root of unity x (only over F_4).
    pub fn omega(&self) -> W2 {
        assert_eq!(self.deg(), 2, "omega needs W_2(F_4)");
        W2([0, 1])
    }
    /// All elements, in encoding order.
    pub fn elements(&self) -> Vec<W2> {
        let n = 4usize.pow(self.deg() as u32);
        (0..n).map(|c| W2([(c % 4) as u8, (c / 4) as u8])).collect()
    }
    /// Teichmuller-digit lift of a residue element (0, 1, x, x^2 = -1-x).
    pub fn teichmuller(&self, a: Fe) -> W2 {
        match a.0 {
            0 => W2([0, 0]),
            1 => W2([1, 0]),
            2 => W2([0, 1]),
            3 => W2([3, 3]),
            _ => unreachable!(),
        }
    }
    /// Reduction to the residue field.
    pub fn reduce(&self, a: W2) -> Fe {
        Fe((a.0[0] % 2) as u32 + 2 * (a.0[1] % 2) as u32)
    }
    pub fn scale2(&self, a: W2) -> W2 {
        self.add(a, a)
    }
}

impl Ring for WittRing2 {
    type Elem = W2;
    fn zero(&self) -> W2 {
        W2([0, 0])
    }
    fn one(&self) -> W2 {
        W2([1, 0])
    }
    fn add(&self, x: W2, y: W2) -> W2 {
        W2([(x.0[0] + y.0[0]) % 4, (x.0[1] + y.0[1]) % 4])
    }
    fn neg(&self, x: W2) -> W2 {
        W2([(4 - x.0[0]) % 4, (4 - x.0[1]) % 4])
    }
    fn mul(&self, x: W2, y: W2) -> W2 {
        let [a0, a1] = x.0.map(u32::from);
        let [b0, b1] = y.0.map(u32::from);
        // x^2 = -x - 1
        let c0 = a0 * b0;
        let c1 = a0 * b1 + a1 * b0;
        let c2 = a1 * b1;
        let r0 = (c0 + 4 * 4 - c2 % 4) % 4;
        let r1 = (c1 + 4 * 4 - c2 % 4) % 4;
        W2([r0 as u8, r1 as u8])
    }
    fn from_i64(&self, n: i64) -> W2 {
        W2([n.rem_euclid(4) as u8, 0])
    }
    fn inv(&self, x: W2) -> Option<W2> {
        if self.reduce(x) == Fe(0) {
            return None;
        }
        self.elements().into_iter().find(|&y| self.mul(x, y) == self.one())
    }
    fn desc(&self) -> RingDesc {
        RingDesc::WittLen2(self.residue.desc())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn eps_squares_to_zero() {
        let r = DualRing::new(Field::new(5, 1).unwrap());
        assert_eq!(r.mul(r.eps(), r.eps()), r.zero());
        assert_eq!(r.inv(r.eps()), None);
        assert_eq!(r.div(r.one(), r.eps()), Err(Error::NonUnit));
    }

    #[test]
    fn witt_f4_basics() {
        let w = WittRing2::new(Field::new(2, 2).unwrap()).unwrap();
        let om = w.omega();
        assert_eq!(w.pow(om, 3), w.one());
        assert_eq!(w.add(w.add(w.mul(om, om), om), w.one()), w.zero());
        assert_eq!(w.add(w.one(), w.from_i64(3)), w.zero());
        assert!(WittRing2::new(Field::new(3, 1).unwrap()).is_err());
        assert!(WittRing2::new(Field::new(2, 3).unwrap()).is_err());
    }

    #[test]
    fn witt_f4_two_torsion_and_reduction_morphism() {
        let w = WittRing2::new(Field::new(2, 2).unwrap()).unwrap();
        let f = w.residue_field().clone();
        let els = w.elements();
        assert_eq!(els.len(), 16);
        for &x in &els {
            let two_x = w.scale2(x);
            assert_eq!(w.add(two_x, two_x), w.zero());
            for &y in &els {
                assert_eq!(w.reduce(w.mul(x, y)), f.mul(w.reduce(x), w.reduce(y)));
                assert_eq!(w.reduce(w.add(x, y)), f.add(w.reduce(x), w.reduce(y)));
            }
        }
        for a in f.elements() {
            assert_eq!(w.reduce(w.teichmuller(a)), a);
        }
    }

    proptest! {
        #[test]
        fn dual_product_rule(a in 0u32..9, b in 0u32..9, c in 0u32..9, d in 0u32..9) {
            let f = Field::new(3, 2).unwrap();
            let r = DualRing::new(f.clone());
            let x = Dual { a: Fe(a), b: Fe(b) };
            let y = Dual { a: Fe(c), b: Fe(d) };
            let z = r.mul(x, y);
            prop_assert_eq!(z.a, f.mul(Fe(a), Fe(c)));
            prop_assert_eq!(z.b, f.add(f.mul(Fe(a), Fe(d)), f.mul(Fe(b), Fe(c))));
            if a != 0 {
                prop_assert_eq!(r.mul(x, r.inv(x).unwrap()), r.one());
            }
        }
    }
}
