//! Closed-form counts for cyclic covers and their Pryms, with brute-force
//! cross-checks living next to each formula.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cyclo::WeightVector;
use crate::error::{Error, Result};
use crate::exactalg::numth::{euler_phi, gcd};

pub mod selmer;
pub mod torus;

pub use selmer::{
    burnside_coset_average, expected_selmer, expected_selmer_brute, gu3_f2_selmer_average, sl_orbit_count, sl_orbit_count_brute,
    BurnsideReport, OrbitInventory, SelmerQuery, J0_COMPONENT_GROUPS, MAX_BRUTE_ORDER,
};
pub use torus::{parse_graph, torus_rank_oracle, EquivGraph, GraphReport};

fn check_weights(w: &WeightVector) -> Result<()> {
    if w.n_order < 2 {
        return Err(Error::BadWeights(format!("N must be >= 2, got {}", w.n_order)));
    }
    let s: u64 = w.m.iter().map(|&m| m % w.n_order).sum();
    if s % w.n_order != 0 {
        return Err(Error::BadWeights(format!("weights sum to {s}, not divisible by {}", w.n_order)));
    }
    Ok(())
}

fn frac(x: Ratio<i64>) -> Ratio<i64> {
    x - x.floor()
}

/// Dimension of the weight-d eigenspace of differentials on y^N = prod (x - x_i)^{m_i}.
pub fn weight_dim(w: &WeightVector, d: u64) -> Result<i64> {
    check_weights(w)?;
    let n = w.n_order as i64;
    if d as i64 % n == 0 {
        return Err(Error::BadWeight(format!("d = {d} is 0 mod {n}")));
    }
    let total = w
        .m
        .iter()
        .map(|&m| frac(Ratio::new(-(d as i64) * m as i64, n)))
        .fold(Ratio::from_integer(-1), |a, b| a + b);
    if !total.is_integer() {
        return Err(Error::BadWeights("non-integral dimension".into()));
    }
    Ok(total.to_integer())
}

/// Number of points whose weight is nonzero in the d-th eigenspace.
pub fn active_points(w: &WeightVector, d: u64) -> usize {
    w.m.iter().filter(|&&m| (m * d) % w.n_order != 0).count()
}

/// Genus of the cyclic cover of P^1 by Riemann-Hurwitz; requires a connected cover.
pub fn riemann_hurwitz_genus(w: &WeightVector) -> Result<i64> {
    check_weights(w)?;
    let n = w.n_order;
    let g = w.m.iter().fold(n, |a, &m| gcd(a, m % n));
    if g != 1 {
        return Err(Error::BadWeights(format!("cover is disconnected (gcd {g})")));
    }
    let ram: i64 = w.m.iter().map(|&m| (n - gcd(n, m % n)) as i64).sum();
    // 2g - 2 = -2N + ram
    Ok((ram - 2 * n as i64 + 2) / 2)
}

/// Cover genus assembled from the eigenspace dimensions (base of genus 0).
pub fn genus_from_weights(w: &WeightVector) -> Result<i64> {
    (1..w.n_order).map(|d| weight_dim(w, d)).sum()
}

/// Z[zeta_N]-rank of the Prym for a cover of a genus-g base.
pub fn prym_rank(num_ram_points: u64, g: u64) -> Result<i64> {
    let n = num_ram_points as i64 - 2 + 2 * g as i64;
    if n < 0 {
        return Err(Error::NegativeRank(n));
    }
    Ok(n)
}

/// Free-orbit counts of a seminormal curve with a Z/N action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCombinatorics {
    #[serde(rename = "N")]
    pub n_order: u64,
    /// Free orbits on preimages of singular points in the normalization.
    pub branches: u64,
    /// Free orbits on singular points.
    pub nodes: u64,
    /// Free orbits on irreducible components.
    pub irreducible: u64,
    /// Free orbits on connected components.
    pub connected: u64,
}

/// Dimension of the torus part of the Prym.
pub fn torus_rank(cc: &CoverCombinatorics) -> i64 {
    euler_phi(cc.n_order) as i64
        * (cc.branches as i64 - cc.nodes as i64 - cc.irreducible as i64 + cc.connected as i64)
}

/// Multiplicity of a wildly ramified point from the genera of the cover and
/// of its quotient by the order-p subgroup.
pub fn wild_multiplicity(g_cover: u64, g_sub: u64, p: u64, l: u32) -> Result<u64> {
    if l == 0 || p < 2 {
        return Err(Error::Precondition("need p >= 2 and l >= 1".into()));
    }
    let den = p.pow(l) - p.pow(l - 1);
    let num = g_cover
        .checked_sub(g_sub)
        .ok_or_else(|| Error::NonIntegral(format!("quotient genus {g_sub} exceeds cover genus {g_cover}")))?;
    if num % den != 0 {
        return Err(Error::NonIntegral(format!("{num} is not divisible by {den}")));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wv(n: u64, m: &[u64]) -> WeightVector {
        WeightVector::new(n, m.to_vec())
    }

    #[test]
    fn weight_dim_examples() {
        assert_eq!(weight_dim(&wv(2, &[1; 6]), 1).unwrap(), 2);
        let c = wv(3, &[1, 1, 1]);
        assert_eq!(weight_dim(&c, 1).unwrap(), 1);
        assert_eq!(weight_dim(&c, 2).unwrap(), 0);
        assert_eq!(genus_from_weights(&c).unwrap(), 1);
        assert_eq!(riemann_hurwitz_genus(&c).unwrap(), 1);
        assert_eq!(riemann_hurwitz_genus(&wv(2, &[1; 6])).unwrap(), 2);
        assert!(matches!(weight_dim(&c, 3), Err(Error::BadWeight(_))));
        assert!(matches!(weight_dim(&wv(3, &[1, 1]), 1), Err(Error::BadWeights(_))));
    }

    #[test]
    fn prym_rank_examples() {
        assert_eq!(prym_rank(7, 0).unwrap(), 5);
        assert_eq!(prym_rank(5, 1).unwrap(), 5);
        assert_eq!(prym_rank(0, 3).unwrap(), 4);
        assert_eq!(prym_rank(1, 0), Err(Error::NegativeRank(-1)));
    }

    #[test]
    fn torus_rank_examples() {
        let smooth = CoverCombinatorics { n_order: 5, branches: 0, nodes: 0, irreducible: 2, connected: 2 };
        assert_eq!(torus_rank(&smooth), 0);
        let one = CoverCombinatorics { n_order: 12, branches: 2, nodes: 1, irreducible: 1, connected: 1 };
        assert_eq!(torus_rank(&one), 4);
    }

    #[test]
    fn wild_multiplicity_examples() {
        assert_eq!(wild_multiplicity(10, 4, 3, 1).unwrap(), 3);
        assert_eq!(wild_multiplicity(7, 1, 3, 2).unwrap(), 1);
        assert_eq!(wild_multiplicity(3 * 6 + 2, 2, 3, 2).unwrap(), 3);
        assert!(matches!(wild_multiplicity(5, 1, 3, 2), Err(Error::NonIntegral(_))));
        assert!(matches!(wild_multiplicity(1, 5, 3, 2), Err(Error::NonIntegral(_))));
    }

    fn weights_strategy() -> impl Strategy<Value = WeightVector> {
        (2u64..=12, proptest::collection::vec(1u64..12, 2..9)).prop_map(|(n, mut m)| {
            for x in m.iter_mut() {
                *x %= n;
            }
            let s: u64 = m.iter().sum();
            m.push((n - s % n) % n);
            WeightVector::new(n, m)
        })
    }

    proptest! {
        #[test]
        fn pair_sums(w in weights_strategy()) {
            for d in 1..w.n_order {
                let lhs = weight_dim(&w, d).unwrap() + weight_dim(&w, w.n_order - d).unwrap();
                prop_assert_eq!(lhs, active_points(&w, d) as i64 - 2);
            }
        }

        #[test]
        fn genus_matches_riemann_hurwitz(w in weights_strategy()) {
            let g = w.m.iter().fold(w.n_order, |a, &m| gcd(a, m));
            prop_assume!(g == 1);
            prop_assert_eq!(genus_from_weights(&w).unwrap(), riemann_hurwitz_genus(&w).unwrap());
        }
    }
}
