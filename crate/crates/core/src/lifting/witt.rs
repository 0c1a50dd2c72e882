//! Brute-force search for lifts of 2-subgroups of SL_2(F_4) to W_2(F_4).
//!
//! Lifts are taken in GL_2: with the standard unipotent generators, every
//! order-2 lift has determinant -1, so restricting to determinant 1 leaves
//! nothing to search.

use serde::{Deserialize, Serialize};

use crate::exactalg::{Fe, FMat, Field, Matrix, Ring, WittRing2, W2};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftSearch {
    /// Number of order-2 lifts of each generator.
    pub order2_lifts: Vec<usize>,
    /// Whether order-2 lifts exist that also pairwise commute.
    pub splits: bool,
    /// Distinct commutators of order-2 lifts of the first two generators.
    pub commutators: Vec<Matrix<W2>>,
}

fn lifts(w: &WittRing2, g: &FMat, special: bool) -> Vec<Matrix<W2>> {
    let f = w.residue_field();
    let digits: Vec<Fe> = f.elements().collect();
    let q = digits.len();
    let cells = g.rows * g.cols;
    let mut out = Vec::new();
    for code in 0..q.pow(cells as u32) {
        let mut c = code;
        let m = Matrix::from_fn(g.rows, g.cols, |i, j| {
            let x = digits[c % q];
            c /= q;
            w.add(w.teichmuller(g.get(i, j)), w.scale2(w.teichmuller(x)))
        });
        if special && m.det(w) != w.one() {
            continue;
        }
        let sq = m.mul(w, &m);
        if sq.is_identity(w) {
            out.push(m);
        }
    }
    out
}

/// Search lifts of `gens` (over the residue field of `w`) that have order 2
/// and, if `require_commuting`, commute pairwise.
pub fn lift_search(w: &WittRing2, gens: &[FMat], require_commuting: bool, special: bool) -> LiftSearch {
    let cands: Vec<Vec<Matrix<W2>>> = gens.iter().map(|g| lifts(w, g, special)).collect();
    let order2_lifts = cands.iter().map(Vec::len).collect();
    let mut commutators: Vec<Matrix<W2>> = Vec::new();
    if cands.len() >= 2 {
        for a in &cands[0] {
            for b in &cands[1] {
                // a and b are involutions
                let c = a.mul(w, b).mul(w, a).mul(w, b);
                if !commutators.contains(&c) {
                    commutators.push(c);
                }
            }
        }
    }
    let splits = if cands.iter().any(Vec::is_empty) {
        false
    } else if !require_commuting {
        true
    } else {
        let mut chosen: Vec<&Matrix<W2>> = Vec::new();
        commuting_choice(w, &cands, &mut chosen)
    };
    LiftSearch {
        order2_lifts,
        splits,
        commutators,
    }
}

fn commuting_choice<'a>(w: &WittRing2, cands: &'a [Vec<Matrix<W2>>], chosen: &mut Vec<&'a Matrix<W2>>) -> bool {
    let k = chosen.len();
    if k == cands.len() {
        return true;
    }
    for c in &cands[k] {
        if chosen.iter().all(|x| x.mul(w, c) == c.mul(w, x)) {
            chosen.push(c);
            if commuting_choice(w, cands, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2W2Report {
    /// Whether the 2-Sylow of SL_2(F_4) lifts to W_2(F_4).
    pub splits: bool,
    /// Same search without the commuting condition.
    pub relaxed_splits: bool,
    pub order2_lifts: Vec<usize>,
    /// The common commutator of all order-2 lift pairs, if unique.
    pub witness_commutator: Option<Matrix<W2>>,
    /// Whether that commutator is [[1, 2(w+1)], [0, 1]].
    pub witness_matches: bool,
    /// Order-2 lifts with determinant 1 (none exist).
    pub special_order2_lifts: Vec<usize>,
    /// Whether the cyclic 2-Sylow of SL_2(F_2) lifts to W_2(F_2).
    pub f2_splits: bool,
}

fn unipotent(f: &Field, x: Fe) -> FMat {
    Matrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => x,
        (0, 0) | (1, 1) => f.one(),
        _ => f.zero(),
    })
}

/// The full mod-4 splitting check for SL_2(F_4).
pub fn sl2_w2_split_test() -> Sl2W2Report {
    let f4 = Field::new(2, 2).expect("F_4");
    let w = WittRing2::new(f4.clone()).expect("W_2(F_4)");
    let gens = [unipotent(&f4, f4.one()), unipotent(&f4, f4.gen_x())];
    let full = lift_search(&w, &gens, true, false);
    let relaxed = lift_search(&w, &gens, false, false);
    let special = lift_search(&w, &gens, false, true);
    let expected = Matrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => w.scale2(w.add(w.omega(), w.one())),
        (0, 0) | (1, 1) => w.one(),
        _ => w.zero(),
    });
    let witness_commutator = (full.commutators.len() == 1).then(|| full.commutators[0].clone());
    let f2 = Field::new(2, 1).expect("F_2");
    let w2 = WittRing2::new(f2.clone()).expect("W_2(F_2)");
    let f2_splits = lift_search(&w2, &[unipotent(&f2, f2.one())], true, false).splits;
    Sl2W2Report {
        splits: full.splits,
        relaxed_splits: relaxed.splits,
        order2_lifts: full.order2_lifts,
        witness_matches: witness_commutator.as_ref() == Some(&expected),
        witness_commutator,
        special_order2_lifts: special.order2_lifts,
        f2_splits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_f4_does_not_split() {
        let r = sl2_w2_split_test();
        assert!(!r.splits);
        assert!(r.relaxed_splits);
        assert!(r.witness_matches);
        assert_eq!(r.special_order2_lifts, vec![0, 0]);
        assert!(r.f2_splits);
        // c = 0 and d = a + 1 leave 16 order-2 lifts out of 256
        assert_eq!(r.order2_lifts, vec![16, 16]);
    }
}
