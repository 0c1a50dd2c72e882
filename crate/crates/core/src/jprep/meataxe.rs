//! Irreducibility testing by a simplified MeatAxe (Norton's criterion).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exactalg::linalg::{nullspace, spin, FMat};
use crate::exactalg::{Fe, Field, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Irreducibility {
    Irreducible,
    /// A proper nonzero invariant subspace, as a basis.
    Reducible { dim: usize, basis: Vec<Vec<Fe>> },
    Inconclusive,
}

pub const DEFAULT_ATTEMPTS: usize = 64;

fn random_elem(f: &Field, rng: &mut ChaCha8Rng) -> Fe {
    Fe(rng.gen_range(0..f.q()))
}

/// Evaluate a polynomial (leading coefficient first) at c.
fn horner(f: &Field, poly: &[Fe], c: Fe) -> Fe {
    poly.iter().fold(Fe(0), |acc, &x| f.add(f.mul(acc, c), x))
}

/// Annihilator in V of a subspace W* of the dual: {v : w(v) = 0 for all w}.
fn annihilator(f: &Field, dual_basis: &[Vec<Fe>], n: usize) -> Vec<Vec<Fe>> {
    let m = Matrix::from_fn(dual_basis.len(), n, |i, j| dual_basis[i][j]);
    nullspace(f, &m)
}

/// Decide whether the matrices act irreducibly on F^n.
pub fn meataxe(f: &Field, gens: &[FMat], seed: u64, attempts: usize) -> Irreducibility {
    let Some(first) = gens.first() else {
        return Irreducibility::Inconclusive;
    };
    let n = first.rows;
    if n <= 1 {
        return Irreducibility::Irreducible;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let transposes: Vec<FMat> = gens.iter().map(Matrix::transpose).collect();
    let q = f.q() as u64;
    for _ in 0..attempts {
        // Random algebra element: a combination of random words.
        let mut alpha = Matrix::zeros(f, n, n);
        for _ in 0..3 {
            let len = rng.gen_range(1..=6);
            let mut w = gens[rng.gen_range(0..gens.len())].clone();
            for _ in 1..len {
                w = w.mul(f, &gens[rng.gen_range(0..gens.len())]);
            }
            alpha = alpha.add(f, &w.scale(f, random_elem(f, &mut rng)));
        }
        let cp = alpha.charpoly(f);
        // Candidate eigenvalues in F_q; sample when the field is large.
        let candidates: Vec<Fe> = if q <= 4096 {
            f.elements().collect()
        } else {
            (0..4096).map(|_| random_elem(f, &mut rng)).collect()
        };
        for c in candidates {
            if horner(f, &cp, c) != Fe(0) {
                continue;
            }
            let theta = alpha.shift(f, c);
            let ker = nullspace(f, &theta);
            let v = &ker[0];
            let sub = spin(f, std::slice::from_ref(v), gens);
            if sub.len() < n {
                return Irreducibility::Reducible {
                    dim: sub.len(),
                    basis: sub.vectors().to_vec(),
                };
            }
            let ker_t = nullspace(f, &theta.transpose());
            let dual_sub = spin(f, std::slice::from_ref(&ker_t[0]), &transposes);
            if dual_sub.len() < n {
                let basis = annihilator(f, dual_sub.vectors(), n);
                return Irreducibility::Reducible {
                    dim: basis.len(),
                    basis,
                };
            }
            if ker.len() == 1 {
                return Irreducibility::Irreducible;
            }
        }
    }
    Irreducibility::Inconclusive
}
