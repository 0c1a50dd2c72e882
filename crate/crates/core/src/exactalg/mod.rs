//! Exact arithmetic: finite fields, dual numbers, the length-2 Witt ring of
//! F_2/F_4, and dense matrices over them.

pub mod field;
pub mod linalg;
pub mod matrix;
pub mod numth;
mod polyfp;
pub mod ring;

use serde::{Deserialize, Serialize};

pub use field::{Fe, Field, FieldDesc};
pub use linalg::{eigenspace_dim, element_order, BoundedOrder, FMat};
pub use matrix::Matrix;
pub use ring::{Dual, DualRing, Ring, RingDesc, WittRing2, W2};

use crate::error::{Error, Result};

/// An involution of a residue algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Involution {
    Identity,
    /// x -> x^(p^(k/2)) on a field of even degree k.
    FrobeniusHalf,
    /// Exchange of the two factors of F_q x F_q.
    SwapFactors,
}

impl Involution {
    /// Apply to an element of a single field. SwapFactors has no meaning on a
    /// single factor and is rejected.
    pub fn apply(&self, f: &Field, a: Fe) -> Result<Fe> {
        match self {
            Involution::Identity => Ok(a),
            Involution::FrobeniusHalf => {
                if f.k() % 2 != 0 {
                    return Err(Error::Precondition(format!(
                        "FrobeniusHalf needs even degree, got {}",
                        f.name()
                    )));
                }
                Ok(f.frobenius(a, f.k() / 2))
            }
            Involution::SwapFactors => Err(Error::Precondition(
                "SwapFactors acts on pairs, not on a single field".into(),
            )),
        }
    }

    /// Apply to a pair representing an element of F_q x F_q.
    pub fn apply_pair(&self, f: &Field, a: (Fe, Fe)) -> Result<(Fe, Fe)> {
        match self {
            Involution::SwapFactors => Ok((a.1, a.0)),
            _ => Ok((self.apply(f, a.0)?, self.apply(f, a.1)?)),
        }
    }
}

/// Field-only eigenspace dimension, rejecting non-field rings.
pub fn eigenspace_dim_checked<R: Ring>(r: &R, m: &Matrix<R::Elem>, lambda: R::Elem) -> Result<usize>
where
    R::Elem: 'static,
{
    match r.desc() {
        RingDesc::Field(d) => {
            let f = Field::new(d.p as u64, d.k)?;
            // Safe reinterpretation: a Field ring has Fe elements.
            let any_m: &dyn std::any::Any = m;
            let any_l: &dyn std::any::Any = &lambda;
            let (Some(fm), Some(fl)) = (any_m.downcast_ref::<FMat>(), any_l.downcast_ref::<Fe>()) else {
                return Err(Error::NotAField(format!("{:?}", r.desc())));
            };
            Ok(eigenspace_dim(&f, fm, *fl))
        }
        other => Err(Error::NotAField(format!("{other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_half_is_an_involution_fixing_the_subfield() {
        let f = Field::new(3, 2).unwrap();
        let inv = Involution::FrobeniusHalf;
        for a in f.elements() {
            let b = inv.apply(&f, a).unwrap();
            assert_eq!(inv.apply(&f, b).unwrap(), a);
            assert_eq!(b == a, f.in_prime_field(a));
        }
        assert!(inv.apply(&Field::new(2, 3).unwrap(), Fe(1)).is_err());
    }

    #[test]
    fn swap_on_pairs() {
        let f = Field::new(5, 1).unwrap();
        let s = Involution::SwapFactors;
        assert_eq!(s.apply_pair(&f, (Fe(1), Fe(2))).unwrap(), (Fe(2), Fe(1)));
        assert!(s.apply(&f, Fe(1)).is_err());
    }

    #[test]
    fn eigenspace_dim_rejects_non_fields() {
        let f = Field::new(5, 1).unwrap();
        let d = DualRing::new(f.clone());
        let m = Matrix::identity(&d, 2);
        assert!(matches!(eigenspace_dim_checked(&d, &m, d.one()), Err(Error::NotAField(_))));
        let w = WittRing2::new(Field::new(2, 2).unwrap()).unwrap();
        let mw = Matrix::identity(&w, 2);
        assert!(matches!(eigenspace_dim_checked(&w, &mw, w.one()), Err(Error::NotAField(_))));
        let mf = Matrix::identity(&f, 3);
        assert_eq!(eigenspace_dim_checked(&f, &mf, Fe(1)).unwrap(), 3);
    }
}
