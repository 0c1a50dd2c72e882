//! Orders of the finite classical groups.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    GL,
    SL,
    GU,
    SU,
    Sp,
}

impl std::str::FromStr for Family {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(Family::GL),
            "sl" => Ok(Family::SL),
            "gu" => Ok(Family::GU),
            "su" => Ok(Family::SU),
            "sp" => Ok(Family::Sp),
            _ => Err(crate::Error::Parse(format!("unknown group family {s:?}"))),
        }
    }
}

/// Order of the classical group. For GU/SU, `q` is the order of the fixed
/// field (the matrices live over F_{q^2}). Sp in odd dimension does not
/// exist and yields 0.
pub fn classical_order(family: Family, n: u32, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let one = BigUint::one();
    let qpow = |e: u32| q.pow(e);
    match family {
        Family::GL | Family::SL => {
            let mut o = qpow(n * (n - 1) / 2);
            for i in 1..=n {
                o *= qpow(i) - &one;
            }
            if family == Family::SL {
                o /= &q - &one;
            }
            o
        }
        Family::GU | Family::SU => {
            let mut o = qpow(n * (n - 1) / 2);
            for i in 1..=n {
                o *= if i % 2 == 0 { qpow(i) - &one } else { qpow(i) + &one };
            }
            if family == Family::SU {
                o /= &q + &one;
            }
            o
        }
        Family::Sp => {
            if n % 2 == 1 {
                return BigUint::default();
            }
            let m = n / 2;
            let mut o = qpow(m * m);
            for i in 1..=m {
                o *= qpow(2 * i) - &one;
            }
            o
        }
    }
}
