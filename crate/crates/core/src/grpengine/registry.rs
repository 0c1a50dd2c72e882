//! Parameter sets whose monodromy is a finite complex reflection group.
//!
//! Orthogonal groups without reflections (Omega_n, SO_n) are not listed here:
//! they never arise from pseudo-reflection generators.

use serde::{Deserialize, Serialize};

use crate::cyclo::SymbolicParams;
use crate::exactalg::numth::gcd;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionEntry {
    pub n: usize,
    #[serde(rename = "N")]
    pub n_order: u64,
    pub e0: u64,
    pub es: Vec<u64>,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionRegistry {
    pub entries: Vec<ExceptionEntry>,
}

/// Reduce to the smallest N, then take the least form over the Galois
/// action (multiplying all exponents by a unit) and braid reordering.
pub fn canonical_form(n_order: u64, e0: u64, es: &[u64]) -> (u64, u64, Vec<u64>) {
    let g = es.iter().fold(gcd(n_order, e0), |acc, &e| gcd(acc, e));
    let nn = n_order / g;
    let (e0, es): (u64, Vec<u64>) = (e0 / g, es.iter().map(|e| e / g).collect());
    let mut best: Option<(u64, Vec<u64>)> = None;
    for u in (1..nn.max(2)).filter(|&u| gcd(u, nn) == 1) {
        let mut s: Vec<u64> = es.iter().map(|e| e * u % nn).collect();
        s.sort_unstable();
        let cand = (e0 * u % nn, s);
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    let (a, b) = best.unwrap_or((e0 % nn.max(1), es));
    (nn, a, b)
}

impl ExceptionRegistry {
    pub fn standard() -> Self {
        let e = |e0: u64, es: &[u64], name: &str| ExceptionEntry {
            n: es.len() - 1,
            n_order: 6,
            e0,
            es: es.to_vec(),
            name: name.to_string(),
        };
        ExceptionRegistry {
            entries: vec![
                e(2, &[1, 1, 1, 1], "3^{1+2}.2"),
                e(1, &[2, 1, 1, 1], "ST26"),
                e(1, &[1, 1, 1, 1, 1], "ST32"),
            ],
        }
    }

    pub fn lookup_exponents(&self, n_order: u64, e0: u64, es: &[u64]) -> Option<&ExceptionEntry> {
        let key = canonical_form(n_order, e0, es);
        self.entries
            .iter()
            .find(|x| canonical_form(x.n_order, x.e0, &x.es) == key)
    }

    pub fn lookup(&self, p: &SymbolicParams) -> Option<&ExceptionEntry> {
        self.lookup_exponents(p.n_order, p.e0, &p.es)
    }
}
