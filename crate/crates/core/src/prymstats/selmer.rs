//! Burnside-type coset averages, orbit counts on V + V*, and the limiting
//! average size of l-Selmer groups in the j = 0 isotrivial family.

use std::collections::HashSet;
use std::hash::Hash;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::numth::{is_prime, legendre3};
use crate::exactalg::{FMat, Fe, Field, Matrix};

/// Largest group (or point set) the brute-force paths will enumerate.
pub const MAX_BRUTE_ORDER: u64 = 10_000_000;

/// Component groups at a point of weight 1..5 in the j = 0 family, with the
/// Kodaira type of the fiber.
pub const J0_COMPONENT_GROUPS: [(u32, &str, &str); 5] = [
    (1, "II", "1"),
    (2, "IV", "C3"),
    (3, "I0*", "C2^2"),
    (4, "IV*", "C3"),
    (5, "II*", "1"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BurnsideReport {
    pub coset_size: u64,
    pub fixed_point_total: u64,
    /// Average number of fixed points over the coset.
    pub average: Ratio<u64>,
    /// Orbits of the normal subgroup mapped to themselves by the coset.
    pub preserved_orbits: u64,
    pub subgroup_orbits: u64,
}

impl BurnsideReport {
    pub fn sides_agree(&self) -> bool {
        self.average == Ratio::from_integer(self.preserved_orbits)
    }
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Average fixed-point count over the coset `coset_rep * normal`, together
/// with the number of `normal`-orbits the coset preserves.
pub fn burnside_coset_average<E, M, I, A>(
    group: &[E],
    normal: &[E],
    coset_rep: &E,
    points: usize,
    mul: M,
    inv: I,
    act: A,
) -> Result<BurnsideReport>
where
    E: Clone + Eq + Hash + Sync,
    M: Fn(&E, &E) -> E + Sync,
    I: Fn(&E) -> E,
    A: Fn(&E, usize) -> usize + Sync,
{
    let nset: HashSet<&E> = normal.iter().collect();
    let gset: HashSet<&E> = group.iter().collect();
    if !gset.contains(coset_rep) {
        return Err(Error::Precondition("coset representative is not in the group".into()));
    }
    for g in group {
        let gi = inv(g);
        for n in normal {
            if !nset.contains(&mul(&mul(g, n), &gi)) {
                return Err(Error::NotNormal);
            }
        }
    }
    let fixed_point_total: u64 = normal
        .par_iter()
        .map(|n| {
            let c = mul(coset_rep, n);
            (0..points).filter(|&x| act(&c, x) == x).count() as u64
        })
        .sum();
    let mut parent: Vec<usize> = (0..points).collect();
    for n in normal {
        for x in 0..points {
            let (a, b) = (find(&mut parent, x), find(&mut parent, act(n, x)));
            parent[a] = b;
        }
    }
    let mut subgroup_orbits = 0;
    let mut preserved_orbits = 0;
    for x in 0..points {
        if find(&mut parent, x) == x {
            subgroup_orbits += 1;
            let y = act(coset_rep, x);
            if find(&mut parent, y) == x {
                preserved_orbits += 1;
            }
        }
    }
    let coset_size = normal.len() as u64;
    Ok(BurnsideReport {
        coset_size,
        fixed_point_total,
        average: Ratio::new(fixed_point_total, coset_size),
        preserved_orbits,
        subgroup_orbits,
    })
}

/// SL_n orbits on pairs (v, lambda) of a vector and a covector over F_l.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInventory {
    pub nonzero_pairing: u64,
    pub zero: u64,
    pub vector_only: u64,
    pub covector_only: u64,
    pub isotropic_pair: u64,
}

impl OrbitInventory {
    pub fn total(&self) -> u64 {
        self.nonzero_pairing + self.zero + self.vector_only + self.covector_only + self.isotropic_pair
    }
}

fn check_nl(n: usize, l: u64) -> Result<()> {
    if n < 3 {
        return Err(Error::RankTooSmall(n));
    }
    if !is_prime(l) {
        return Err(Error::NonPrime(l));
    }
    Ok(())
}

pub fn sl_orbit_count(n: usize, l: u64) -> Result<OrbitInventory> {
    check_nl(n, l)?;
    Ok(OrbitInventory {
        nonzero_pairing: l - 1,
        zero: 1,
        vector_only: 1,
        covector_only: 1,
        isotropic_pair: 1,
    })
}

/// Orbit count by union-find under elementary transvections, which generate SL_n(F_l).
pub fn sl_orbit_count_brute(n: usize, l: u64) -> Result<OrbitInventory> {
    check_nl(n, l)?;
    let side = l.checked_pow(n as u32).filter(|s| s.saturating_mul(*s) <= MAX_BRUTE_ORDER).ok_or_else(|| {
        Error::Precondition(format!("{l}^{} points exceed the brute-force cap", 2 * n))
    })? as usize;
    let lu = l as usize;
    let digits = |mut x: usize| -> Vec<usize> {
        (0..n)
            .map(|_| {
                let d = x % lu;
                x /= lu;
                d
            })
            .collect()
    };
    let undigits = |v: &[usize]| v.iter().rev().fold(0usize, |a, &d| a * lu + d);
    let total = side * side;
    let mut parent: Vec<usize> = (0..total).collect();
    for pt in 0..total {
        let (v, lam) = (digits(pt % side), digits(pt / side));
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                // g = I + E_ij: v_i += v_j; covector lambda g^{-1}: lambda_j -= lambda_i
                let mut v2 = v.clone();
                v2[i] = (v2[i] + v[j]) % lu;
                let mut l2 = lam.clone();
                l2[j] = (l2[j] + lu - lam[i]) % lu;
                let img = undigits(&v2) + side * undigits(&l2);
                let (a, b) = (find(&mut parent, pt), find(&mut parent, img));
                parent[a] = b;
            }
        }
    }
    let mut inv = OrbitInventory::default();
    for pt in 0..total {
        if find(&mut parent, pt) != pt {
            continue;
        }
        let (v, lam) = (digits(pt % side), digits(pt / side));
        let pairing = v.iter().zip(&lam).map(|(a, b)| a * b).sum::<usize>() % lu;
        let (vz, lz) = (v.iter().all(|&d| d == 0), lam.iter().all(|&d| d == 0));
        match (pairing != 0, vz, lz) {
            (true, _, _) => inv.nonzero_pairing += 1,
            (false, true, true) => inv.zero += 1,
            (false, false, true) => inv.vector_only += 1,
            (false, true, false) => inv.covector_only += 1,
            (false, false, false) => inv.isotropic_pair += 1,
        }
    }
    Ok(inv)
}

/// Rank n, Selmer prime l, and the residue of q mod 3 choosing between the
/// split (1) and inert (2) monodromy cosets. The limit below assumes the
/// family has no reducible fibers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerQuery {
    pub n: usize,
    pub l: u64,
    pub q_mod_3: u8,
    /// Allow l = 3, where the same value is known to hold.
    #[serde(default)]
    pub allow_l3: bool,
}

fn check_query(sq: &SelmerQuery) -> Result<()> {
    check_nl(sq.n, sq.l)?;
    if !matches!(sq.q_mod_3, 1 | 2) {
        return Err(Error::Precondition(format!("q mod 3 must be 1 or 2, got {}", sq.q_mod_3)));
    }
    if sq.l == 3 && !sq.allow_l3 {
        return Err(Error::Precondition("l = 3 needs the explicit l3 flag".into()));
    }
    Ok(())
}

/// Limiting expected size of the l-Selmer group as q grows.
pub fn expected_selmer(sq: &SelmerQuery) -> Result<Ratio<i64>> {
    check_query(sq)?;
    Ok(Ratio::from_integer(sq.l as i64 + 2 + legendre3(sq.l)))
}

fn conj_transpose(f: &Field, g: &FMat) -> FMat {
    Matrix::from_fn(g.cols, g.rows, |i, j| f.frobenius(g.get(j, i), 1))
}

/// Average of |ker(g - 1)| on F_4^3 over each coset of SU_3(2) in GU_3(2),
/// indexed by determinant in encoding order of the cube roots of unity.
pub fn gu3_f2_selmer_average() -> Result<Vec<(Fe, BurnsideReport)>> {
    let f = Field::new(2, 2)?;
    let q = f.q() as usize;
    let els: Vec<Fe> = f.elements().collect();
    let id = FMat::identity(&f, 3);
    let unitary: Vec<FMat> = (0..q.pow(9))
        .into_par_iter()
        .filter_map(|code| {
            let mut c = code;
            let g = Matrix::from_fn(3, 3, |_, _| {
                let x = els[c % q];
                c /= q;
                x
            });
            (conj_transpose(&f, &g).mul(&f, &g) == id).then_some(g)
        })
        .collect();
    let special: Vec<FMat> = unitary.iter().filter(|g| g.det(&f) == f.one()).cloned().collect();
    let vecs: Vec<Vec<Fe>> = (0..q.pow(3))
        .map(|mut c| {
            (0..3)
                .map(|_| {
                    let x = els[c % q];
                    c /= q;
                    x
                })
                .collect()
        })
        .collect();
    let index = |v: &[Fe]| v.iter().rev().fold(0usize, |a, x| a * q + x.0 as usize);
    let mut out = Vec::new();
    for d in els.iter().copied().filter(|&d| d != f.zero()) {
        let rep = unitary
            .iter()
            .find(|g| g.det(&f) == d)
            .ok_or_else(|| Error::Precondition("empty determinant coset".into()))?;
        let r = burnside_coset_average(
            &unitary,
            &special,
            rep,
            vecs.len(),
            |a, b| a.mul(&f, b),
            |a| conj_transpose(&f, a),
            |g, x| index(&g.mul_vec(&f, &vecs[x])),
        )?;
        out.push((d, r));
    }
    Ok(out)
}

/// Brute-force cross-check of `expected_selmer` where one is available:
/// SL_n(F_l) orbits on V + V* in the split case, GU_3(2) cosets for l = 2.
pub fn expected_selmer_brute(sq: &SelmerQuery) -> Result<Ratio<i64>> {
    check_query(sq)?;
    match (sq.l, sq.l % 3) {
        (2, _) => {
            if sq.n != 3 {
                return Err(Error::Precondition("the l = 2 enumeration is for n = 3".into()));
            }
            let reports = gu3_f2_selmer_average()?;
            // every coset gives the same average; report the first non-identity one
            let (_, r) = reports
                .iter()
                .find(|(d, _)| d.0 != 1)
                .ok_or_else(|| Error::Precondition("no non-identity coset".into()))?;
            Ok(Ratio::new(*r.average.numer() as i64, *r.average.denom() as i64))
        }
        (_, 1) => Ok(Ratio::from_integer(sl_orbit_count_brute(sq.n, sq.l)?.total() as i64)),
        _ => Err(Error::Precondition(format!(
            "no enumeration available for l = {}; use the closed form",
            sq.l
        ))),
    }
}
