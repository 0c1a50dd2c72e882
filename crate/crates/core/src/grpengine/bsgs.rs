//! Randomized Schreier–Sims for matrix groups acting on column vectors.

use std::collections::HashMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fastmat::{self, Arith, MAX_DIM};
use crate::error::{Error, Result};
use crate::exactalg::{Fe, FMat, Field};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsgsConfig {
    pub orbit_cap: usize,
    pub word_len_cap: usize,
    /// Random words sifted during the final verification.
    pub verify_words: usize,
    /// Consecutive trivial sifts before the random phase stops.
    pub stop_after: usize,
}

impl Default for BsgsConfig {
    fn default() -> Self {
        BsgsConfig {
            orbit_cap: 1 << 24,
            word_len_cap: 64,
            verify_words: 32,
            stop_after: 48,
        }
    }
}

const ROOT: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Level {
    point: u128,
    /// Schreier vector: point -> (parent point, strong generator index).
    tree: HashMap<u128, (u128, u32)>,
    points: Vec<u128>,
    gens: Vec<usize>,
}

/// Base and strong generating set of a finite matrix group.
#[derive(Clone, Debug)]
pub struct Bsgs {
    field: Field,
    arith: Arith,
    n: usize,
    strong: Vec<Vec<u8>>,
    strong_inv: Vec<Vec<u8>>,
    levels: Vec<Level>,
    cap: usize,
}

struct ProductReplacement {
    slots: Vec<Vec<u8>>,
    acc: Vec<u8>,
}

impl ProductReplacement {
    fn new(ar: &Arith, n: usize, gens: &[Vec<u8>], rng: &mut ChaCha8Rng) -> Self {
        let mut slots: Vec<Vec<u8>> = gens.to_vec();
        if slots.is_empty() {
            slots.push(fastmat::identity(n));
        }
        let k = gens.len();
        while slots.len() < 10.max(k + 1) {
            let i = slots.len() % k.max(1);
            slots.push(slots[i].clone());
        }
        let mut pr = ProductReplacement {
            slots,
            acc: fastmat::identity(n),
        };
        for _ in 0..60 {
            pr.next(ar, n, rng);
        }
        pr
    }

    fn next(&mut self, ar: &Arith, n: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
        let m = self.slots.len();
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        self.slots[i] = if rng.gen_bool(0.5) {
            ar.mat_mul(n, &self.slots[i], &self.slots[j])
        } else {
            ar.mat_mul(n, &self.slots[j], &self.slots[i])
        };
        self.acc = ar.mat_mul(n, &self.acc, &self.slots[i]);
        self.acc.clone()
    }
}

impl Bsgs {
    /// Build a verified BSGS for the group generated by `gens`.
    pub fn build(f: &Field, gens: &[FMat], seed: u64, cfg: &BsgsConfig) -> Result<Bsgs> {
        let n = match gens.first() {
            Some(g) => g.rows,
            None => return Err(Error::Dimension("no generators".into())),
        };
        if n == 0 || n > MAX_DIM {
            return Err(Error::Dimension(format!("group engine supports 1 <= n <= {MAX_DIM}")));
        }
        if gens.iter().any(|g| g.rows != n || g.cols != n) {
            return Err(Error::Dimension("generators must be square of equal size".into()));
        }
        let arith = Arith::new(f)?;
        let packed: Vec<Vec<u8>> = gens.iter().map(fastmat::pack).collect();
        for g in &packed {
            if arith.inverse(n, g).is_none() {
                return Err(Error::Singular);
            }
        }
        let mut b = Bsgs {
            field: f.clone(),
            arith,
            n,
            strong: Vec::new(),
            strong_inv: Vec::new(),
            levels: Vec::new(),
            cap: cfg.orbit_cap,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in &packed {
            b.absorb(g.clone())?;
        }
        let mut pr = ProductReplacement::new(&b.arith, n, &packed, &mut rng);
        loop {
            let mut streak = 0;
            while streak < cfg.stop_after {
                let r = pr.next(&b.arith, n, &mut rng);
                if b.absorb(r)? {
                    streak = 0;
                } else {
                    streak += 1;
                }
            }
            let mut clean = true;
            for g in &packed {
                clean &= !b.absorb(g.clone())?;
            }
            for _ in 0..cfg.verify_words {
                let len = rng.gen_range(1..=cfg.word_len_cap.max(1));
                let mut w = packed[rng.gen_range(0..packed.len())].clone();
                for _ in 1..len {
                    w = b.arith.mat_mul(n, &w, &packed[rng.gen_range(0..packed.len())]);
                }
                clean &= !b.absorb(w)?;
            }
            if clean {
                return Ok(b);
            }
        }
    }

    /// Sift `g`; on a nontrivial residue, extend the structure. Returns whether it grew.
    fn absorb(&mut self, g: Vec<u8>) -> Result<bool> {
        let (res, lvl) = self.sift(g);
        if fastmat::is_identity(self.n, &res) {
            return Ok(false);
        }
        self.add_strong(res, lvl)?;
        Ok(true)
    }

    fn sift(&self, mut g: Vec<u8>) -> (Vec<u8>, usize) {
        let n = self.n;
        for (i, lv) in self.levels.iter().enumerate() {
            let img = self.arith.mat_vec(n, &g, &fastmat::unkey(n, lv.point));
            let mut k = fastmat::key(&img);
            if !lv.tree.contains_key(&k) {
                return (g, i);
            }
            while k != lv.point {
                let (parent, s) = lv.tree[&k];
                g = self.arith.mat_mul(n, &self.strong_inv[s as usize], &g);
                k = parent;
            }
        }
        let l = self.levels.len();
        (g, l)
    }

    fn add_strong(&mut self, s: Vec<u8>, lvl: usize) -> Result<()> {
        let n = self.n;
        if lvl == self.levels.len() {
            let moved = (0..n)
                .find(|&c| (0..n).any(|r| s[r * n + c] != u8::from(r == c)))
                .expect("nonidentity matrix moves a basis vector");
            let mut e = vec![0u8; n];
            e[moved] = 1;
            let k = fastmat::key(&e);
            let mut tree = HashMap::new();
            tree.insert(k, (k, ROOT));
            self.levels.push(Level {
                point: k,
                tree,
                points: vec![k],
                gens: Vec::new(),
            });
        }
        let inv = self.arith.inverse(n, &s).ok_or(Error::Singular)?;
        let idx = self.strong.len();
        self.strong.push(s);
        self.strong_inv.push(inv);
        for i in 0..=lvl {
            self.levels[i].gens.push(idx);
            self.extend_orbit(i, idx)?;
        }
        Ok(())
    }

    fn extend_orbit(&mut self, i: usize, new_gen: usize) -> Result<()> {
        let n = self.n;
        let ar = &self.arith;
        let strong = &self.strong;
        let cap = self.cap;
        let lv = &mut self.levels[i];
        let mut frontier = Vec::new();
        for &x in &lv.points {
            let y = fastmat::key(&ar.mat_vec(n, &strong[new_gen], &fastmat::unkey(n, x)));
            if let std::collections::hash_map::Entry::Vacant(e) = lv.tree.entry(y) {
                e.insert((x, new_gen as u32));
                frontier.push(y);
            }
        }
        let mut head = 0;
        while head < frontier.len() {
            let x = frontier[head];
            head += 1;
            let xv = fastmat::unkey(n, x);
            for &s in &lv.gens {
                let y = fastmat::key(&ar.mat_vec(n, &strong[s], &xv));
                if let std::collections::hash_map::Entry::Vacant(e) = lv.tree.entry(y) {
                    e.insert((x, s as u32));
                    frontier.push(y);
                }
            }
            if lv.tree.len() > cap {
                return Err(Error::TooLarge(lv.tree.len()));
            }
        }
        lv.points.extend(frontier);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.points.len()))
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.points.len()).collect()
    }

    pub fn base(&self) -> Vec<Vec<Fe>> {
        self.levels
            .iter()
            .map(|l| fastmat::unkey(self.n, l.point).into_iter().map(|x| Fe(x as u32)).collect())
            .collect()
    }

    pub fn strong_gens(&self) -> Vec<FMat> {
        self.strong.iter().map(|s| fastmat::unpack(self.n, s)).collect()
    }

    /// Coset representative u with u * base[level] = point, if the point is in the orbit.
    pub fn coset_rep(&self, level: usize, point: &[Fe]) -> Option<FMat> {
        let lv = self.levels.get(level)?;
        let bytes: Vec<u8> = point.iter().map(|x| x.0 as u8).collect();
        Some(fastmat::unpack(self.n, &self.rep_bytes(lv, fastmat::key(&bytes))?))
    }

    fn rep_bytes(&self, lv: &Level, mut k: u128) -> Option<Vec<u8>> {
        lv.tree.get(&k)?;
        let mut u = fastmat::identity(self.n);
        while k != lv.point {
            let (parent, s) = lv.tree[&k];
            u = self.arith.mat_mul(self.n, &u, &self.strong[s as usize]);
            k = parent;
        }
        Some(u)
    }

    pub fn contains(&self, g: &FMat) -> bool {
        if g.rows != self.n || g.cols != self.n || g.data.iter().any(|x| x.0 as usize >= self.arith.q) {
            return false;
        }
        let (res, lvl) = self.sift(fastmat::pack(g));
        lvl == self.levels.len() && fastmat::is_identity(self.n, &res)
    }

    /// Visit every element (as a product of coset representatives), up to `limit`.
    pub fn for_each_element(&self, limit: u64, mut visit: impl FnMut(&FMat)) -> Result<()> {
        let order = self.order();
        if order > BigUint::from(limit) {
            return Err(Error::TooLarge(usize::try_from(limit).unwrap_or(usize::MAX)));
        }
        let reps: Vec<Vec<Vec<u8>>> = self
            .levels
            .iter()
            .map(|lv| lv.points.iter().map(|&k| self.rep_bytes(lv, k).unwrap()).collect())
            .collect();
        let n = self.n;
        let mut stack = vec![(0usize, fastmat::identity(n))];
        while let Some((depth, acc)) = stack.pop() {
            if depth == reps.len() {
                visit(&fastmat::unpack(n, &acc));
                continue;
            }
            for u in &reps[depth] {
                stack.push((depth + 1, self.arith.mat_mul(n, &acc, u)));
            }
        }
        Ok(())
    }
}

/// Convenience: order of the group generated by `gens`.
pub fn group_order(f: &Field, gens: &[FMat], seed: u64, cfg: &BsgsConfig) -> Result<BigUint> {
    Ok(Bsgs::build(f, gens, seed, cfg)?.order())
}
