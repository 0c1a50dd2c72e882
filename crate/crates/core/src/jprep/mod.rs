//! Rigid Jordan-Pochhammer tuples: construction and verification.

mod construct;
pub mod meataxe;

use serde::{Deserialize, Serialize};

pub use construct::{construct, construct_with_pivot};
pub use meataxe::{meataxe, Irreducibility};

use crate::cyclo::JPParams;
use crate::error::{Error, Result};
use crate::exactalg::linalg::{self, column_space, eigenspace_dim, nullspace, rank, FMat};
use crate::exactalg::{Fe, Field, Matrix, Ring};

/// Generators g_1..g_{n+1} with their parameters.
#[derive(Clone, Debug)]
pub struct JPTuple<R: Ring> {
    pub ring: R,
    pub params: JPParams<R::Elem>,
    pub gens: Vec<Matrix<R::Elem>>,
}

impl<R: Ring> JPTuple<R> {
    /// Wrap arbitrary matrices; use [`verify`] to check them.
    pub fn from_parts(ring: R, params: JPParams<R::Elem>, gens: Vec<Matrix<R::Elem>>) -> Self {
        JPTuple { ring, params, gens }
    }

    /// Dimension of the underlying space.
    pub fn dim(&self) -> usize {
        self.gens.first().map_or(0, |g| g.rows)
    }

    /// Ordered product g_S for a 1-based index list.
    pub fn product(&self, s: &[usize]) -> Matrix<R::Elem> {
        let r = &self.ring;
        s.iter()
            .fold(Matrix::identity(r, self.dim()), |acc, &i| acc.mul(r, &self.gens[i - 1]))
    }

    /// Inverses of all generators.
    pub fn inverses(&self) -> Result<Vec<Matrix<R::Elem>>> {
        self.gens.iter().map(|g| g.inverse_ring(&self.ring)).collect()
    }

    /// Determinant and product relations, valid over any ring.
    pub fn relation_checks(&self) -> (Vec<bool>, bool) {
        let r = &self.ring;
        let dets = self
            .gens
            .iter()
            .zip(&self.params.lambdas)
            .map(|(g, &l)| g.det(r) == r.mul(self.params.lambda0, l))
            .collect();
        let all: Vec<usize> = (1..=self.gens.len()).collect();
        let scalar = self.product(&all).as_scalar(r) == Some(self.params.lambda0);
        (dets, scalar)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pseudoreflections: Vec<bool>,
    pub determinants: Vec<bool>,
    pub scalar_product: bool,
    pub irreducible: Irreducibility,
    /// Whether lambda_0 != 1 and lambda_0 is not an eigenvalue of any g_i,
    /// in which case irreducibility is expected.
    pub irreducibility_expected: bool,
    pub ok: bool,
}

impl VerificationReport {
    /// 1-based indices of generators failing the pseudo-reflection check.
    pub fn failing_pseudoreflections(&self) -> Vec<usize> {
        self.pseudoreflections
            .iter()
            .enumerate()
            .filter(|(_, &ok)| !ok)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Check every defining property of a tuple over a field.
pub fn verify(t: &JPTuple<Field>, seed: u64) -> VerificationReport {
    let f = &t.ring;
    let n = t.dim();
    let pseudoreflections: Vec<bool> = t
        .gens
        .iter()
        .map(|g| g.is_square() && g.rows == n && rank(f, &g.shift(f, Fe(1))) == 1)
        .collect();
    let (determinants, scalar_product) = t.relation_checks();
    let l0 = t.params.lambda0;
    let irreducibility_expected = l0 != Fe(1)
        && t.gens
            .iter()
            .all(|g| g.rows == n && eigenspace_dim(f, g, l0) == 0);
    let irreducible = meataxe(f, &t.gens, seed, meataxe::DEFAULT_ATTEMPTS);
    let irreducible_ok = !irreducibility_expected || irreducible == Irreducibility::Irreducible;
    let ok = pseudoreflections.iter().all(|&b| b)
        && determinants.iter().all(|&b| b)
        && determinants.len() == t.gens.len()
        && scalar_product
        && irreducible_ok;
    VerificationReport {
        pseudoreflections,
        determinants,
        scalar_product,
        irreducible,
        irreducibility_expected,
        ok,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub subset: Vec<usize>,
    pub dim_ker_1: usize,
    pub dim_ker_lambda0: usize,
    /// det(g_S) / lambda_0^{|S|-1}; None in the scalar case.
    pub extra_eigenvalue: Option<Fe>,
    pub extra_is_eigenvalue: bool,
    /// S is the full index set, so g_S = lambda_0 I.
    pub scalar: bool,
    /// Agreement with (n - |S|, |S| - 1, lambda_0 lambda_S).
    pub matches: bool,
}

pub fn subset_spectrum(t: &JPTuple<Field>, s: &[usize]) -> Result<SpectrumReport> {
    let f = &t.ring;
    let n = t.dim();
    let k = s.len();
    if k == 0 || s.iter().any(|&i| i == 0 || i > t.gens.len()) {
        return Err(Error::Precondition(format!("invalid subset {s:?}")));
    }
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k {
        return Err(Error::Precondition(format!("repeated index in {s:?}")));
    }
    let gs = t.product(s);
    let l0 = t.params.lambda0;
    let dim_ker_1 = eigenspace_dim(f, &gs, Fe(1));
    let dim_ker_lambda0 = eigenspace_dim(f, &gs, l0);
    if k == t.gens.len() {
        let scalar = gs.as_scalar(f) == Some(l0);
        return Ok(SpectrumReport {
            subset: s.to_vec(),
            dim_ker_1,
            dim_ker_lambda0,
            extra_eigenvalue: None,
            extra_is_eigenvalue: false,
            scalar,
            matches: scalar,
        });
    }
    let d = linalg::det(f, &gs);
    let extra = f.mul(d, f.pow(f.inv(l0).ok_or(Error::Singular)?, (k - 1) as u64));
    let expected_extra = f.mul(l0, t.params.lambda_s(f, s));
    let extra_is_eigenvalue = eigenspace_dim(f, &gs, extra) > 0;
    let matches = dim_ker_1 == n - k
        && dim_ker_lambda0 == k - 1
        && extra == expected_extra
        && extra_is_eigenvalue;
    Ok(SpectrumReport {
        subset: s.to_vec(),
        dim_ker_1,
        dim_ker_lambda0,
        extra_eigenvalue: Some(extra),
        extra_is_eigenvalue,
        scalar: false,
        matches,
    })
}

/// Express each matrix of `mats` in the basis `w` (columns) of an invariant subspace.
fn restrict_to(f: &Field, w: &[Vec<Fe>], mats: &[FMat]) -> Result<Vec<FMat>> {
    let n = w[0].len();
    let k = w.len();
    let wm = Matrix::from_fn(n, k, |i, j| w[j][i]);
    mats.iter()
        .map(|h| {
            let mut cols = Vec::with_capacity(k);
            for v in w {
                let hv = h.mul_vec(f, v);
                let x = linalg::solve(f, &wm, &hv)
                    .ok_or_else(|| Error::NoSolution("subspace is not invariant".into()))?;
                cols.push(x);
            }
            Ok(Matrix::from_fn(k, k, |i, j| cols[j][i]))
        })
        .collect()
}

/// Restriction of (g_i : i in S, lambda_0 g_S^-1) to im(g_S - 1).
pub fn restrict(t: &JPTuple<Field>, s: &[usize]) -> Result<JPTuple<Field>> {
    let f = &t.ring;
    if s.is_empty() || s.iter().any(|&i| i == 0 || i > t.gens.len()) {
        return Err(Error::Precondition(format!("invalid subset {s:?}")));
    }
    let ls = t.params.lambda_s(f, s);
    if ls == Fe(1) {
        return Err(Error::DegenerateRestriction);
    }
    let l0 = t.params.lambda0;
    let gs = t.product(s);
    let w = column_space(f, &gs.shift(f, Fe(1)));
    if w.len() != s.len() {
        return Err(Error::NoSolution(format!(
            "im(g_S - 1) has dimension {} instead of {}",
            w.len(),
            s.len()
        )));
    }
    let mut mats: Vec<FMat> = s.iter().map(|&i| t.gens[i - 1].clone()).collect();
    mats.push(linalg::inverse(f, &gs)?.scale(f, l0));
    let gens = restrict_to(f, &w, &mats)?;
    let last = f.inv(f.mul(l0, ls)).ok_or(Error::Singular)?;
    let mut lambdas: Vec<Fe> = s.iter().map(|&i| t.params.lambdas[i - 1]).collect();
    lambdas.push(last);
    Ok(JPTuple {
        ring: f.clone(),
        params: JPParams::new(l0, lambdas),
        gens,
    })
}

/// Parameter-level braid move: swap lambda_i and lambda_{i+1} (1-based, 1 <= i <= n).
pub fn braid_act<E: Copy + PartialEq>(params: &JPParams<E>, i: usize) -> Result<JPParams<E>> {
    if i == 0 || i >= params.lambdas.len() {
        return Err(Error::Precondition(format!("braid index {i} out of range")));
    }
    let mut p = params.clone();
    p.lambdas.swap(i - 1, i);
    Ok(p)
}

/// Tuple-level braid move: (.., g_i, g_{i+1}, ..) -> (.., g_{i+1}, g_{i+1}^-1 g_i g_{i+1}, ..).
pub fn braid_act_tuple<R: Ring>(t: &JPTuple<R>, i: usize) -> Result<JPTuple<R>> {
    let params = braid_act(&t.params, i)?;
    let r = &t.ring;
    let gi = &t.gens[i - 1];
    let gj = &t.gens[i];
    let gj_inv = gj.inverse_ring(r)?;
    let mut gens = t.gens.clone();
    gens[i - 1] = gj.clone();
    gens[i] = gj_inv.mul(r, gi).mul(r, gj);
    Ok(JPTuple {
        ring: r.clone(),
        params,
        gens,
    })
}

/// Basis of {X : X g_i = h_i X for all i}.
pub fn intertwiners(f: &Field, gs: &[FMat], hs: &[FMat]) -> Result<Vec<FMat>> {
    if gs.len() != hs.len() || gs.is_empty() {
        return Err(Error::Dimension("tuples of different lengths".into()));
    }
    let n = gs[0].rows;
    let m = hs[0].rows;
    // Unknown X is m x n, index a*n + b.
    let unknowns = m * n;
    let mut rows: Vec<Vec<Fe>> = Vec::new();
    for (g, h) in gs.iter().zip(hs) {
        for a in 0..m {
            for b in 0..n {
                let mut row = vec![Fe(0); unknowns];
                for c in 0..n {
                    let idx = a * n + c;
                    row[idx] = f.add(row[idx], g.get(c, b));
                }
                for c in 0..m {
                    let idx = c * n + b;
                    row[idx] = f.sub(row[idx], h.get(a, c));
                }
                rows.push(row);
            }
        }
    }
    let sys = Matrix::from_rows(&rows)?;
    Ok(nullspace(f, &sys)
        .into_iter()
        .map(|v| Matrix::new(m, n, v).expect("shape"))
        .collect())
}

/// Conjugacy certificate between two tuples: dimension of the intertwiner
/// space and, when it is 1 and the basis element is invertible, the matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyCert {
    pub dim: usize,
    pub conjugator: Option<FMat>,
}

pub fn conjugacy_cert(f: &Field, gs: &[FMat], hs: &[FMat]) -> Result<ConjugacyCert> {
    let sp = intertwiners(f, gs, hs)?;
    let conjugator = if sp.len() == 1 && sp[0].is_square() && linalg::det(f, &sp[0]) != Fe(0) {
        Some(sp[0].clone())
    } else {
        None
    };
    Ok(ConjugacyCert {
        dim: sp.len(),
        conjugator,
    })
}

/// Rigidity certificate for a tuple: compare with the construction using a
/// different quotient coordinate.
pub fn rigidity_cert(t: &JPTuple<Field>) -> Result<ConjugacyCert> {
    let other = construct_with_pivot(&t.ring, &t.params, t.gens.len() - 1)?;
    conjugacy_cert(&t.ring, &t.gens, &other.gens)
}

/// All nonempty proper subsets of {1..m} of size at most `max`, in lexicographic order.
pub fn subsets(m: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << m) {
        let s: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        if s.len() <= max {
            out.push(s);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(f: &Field, rows: &[&[i64]]) -> FMat {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect::<Vec<_>>()).unwrap()
    }

    /// Random valid params over F_q with no lambda equal to 1.
    fn random_params(f: &Field, n: usize, seed: u64) -> Option<JPParams<Fe>> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let mut pick = || Fe(rng.gen_range(2..f.q()));
            let l0 = pick();
            let mut ls: Vec<Fe> = (0..n).map(|_| pick()).collect();
            let prod = ls.iter().fold(l0, |a, &b| f.mul(a, b));
            let last = f.inv(prod).unwrap();
            if last == Fe(1) {
                continue;
            }
            ls.push(last);
            return Some(JPParams::new(l0, ls));
        }
        None
    }

    fn minus_one_tuple(p: u64) -> JPTuple<Field> {
        let f = Field::new(p, 1).unwrap();
        let gens = vec![m(&f, &[&[1, 2], &[0, 1]]), m(&f, &[&[1, 0], &[-2, 1]]), m(&f, &[&[-1, 2], &[-2, 3]])];
        let mo = f.from_i64(-1);
        JPTuple::from_parts(f, JPParams::new(mo, vec![mo, mo, mo]), gens)
    }

    #[test]
    fn explicit_minus_one_tuple_verifies_and_is_conjugate() {
        for p in [5u64, 7, 11, 13] {
            let t = minus_one_tuple(p);
            let rep = verify(&t, 0);
            assert!(rep.ok, "p={p}: {rep:?}");
            let c = construct(&t.ring, &t.params).unwrap();
            let cert = conjugacy_cert(&t.ring, &t.gens, &c.gens).unwrap();
            assert_eq!(cert.dim, 1);
            assert!(cert.conjugator.is_some());
        }
    }

    #[test]
    fn n2_eigenvalues() {
        let f = Field::new(13, 1).unwrap();
        let p = JPParams::new(Fe(2), vec![Fe(3), Fe(5), f.inv(Fe(30)).unwrap()]);
        let t = construct(&f, &p).unwrap();
        for (g, &l) in t.gens.iter().zip(&p.lambdas) {
            assert_eq!(eigenspace_dim(&f, g, Fe(1)), 1);
            assert_eq!(eigenspace_dim(&f, g, f.mul(Fe(2), l)), 1);
        }
    }

    #[test]
    fn replaced_generator_flagged() {
        let f = Field::new(7, 1).unwrap();
        let p = random_params(&f, 3, 4).unwrap();
        let mut t = construct(&f, &p).unwrap();
        t.gens[1] = Matrix::identity(&f, 3);
        let rep = verify(&t, 0);
        assert!(!rep.ok);
        assert_eq!(rep.failing_pseudoreflections(), vec![2]);
    }

    #[test]
    fn direct_sum_is_reducible() {
        let f = Field::new(11, 1).unwrap();
        let a = construct(&f, &random_params(&f, 2, 1).unwrap()).unwrap();
        let b = construct(&f, &random_params(&f, 2, 2).unwrap()).unwrap();
        let gens: Vec<FMat> = a.gens.iter().zip(&b.gens).map(|(x, y)| x.direct_sum(y, Fe(0))).collect();
        let t = JPTuple::from_parts(f.clone(), a.params.clone(), gens);
        let rep = verify(&t, 0);
        assert!(matches!(rep.irreducible, Irreducibility::Reducible { .. }));
        assert!(!rep.ok);
    }

    #[test]
    fn spectrum_edge_cases() {
        let f = Field::new(13, 1).unwrap();
        let p = random_params(&f, 4, 9).unwrap();
        let t = construct(&f, &p).unwrap();
        let one = subset_spectrum(&t, &[2]).unwrap();
        assert_eq!((one.dim_ker_1, one.dim_ker_lambda0), (3, 0));
        let full = subset_spectrum(&t, &[1, 2, 3, 4, 5]).unwrap();
        assert!(full.scalar && full.matches);
        let big = subset_spectrum(&t, &[1, 2, 3, 4]).unwrap();
        assert_eq!((big.dim_ker_1, big.dim_ker_lambda0), (0, 3));
        assert!(subset_spectrum(&t, &[]).is_err());
        assert!(subset_spectrum(&t, &[6]).is_err());
    }

    #[test]
    fn restrict_cases() {
        let f = Field::new(13, 1).unwrap();
        let p = random_params(&f, 4, 3).unwrap();
        let t = construct(&f, &p).unwrap();
        let r = restrict(&t, &[1]).unwrap();
        assert_eq!(r.dim(), 1);
        let prod = r.gens[0].mul(&f, &r.gens[1]);
        assert_eq!(prod.as_scalar(&f), Some(p.lambda0));
        // Force lambda_S = 1.
        let l1 = Fe(5);
        let l2 = f.inv(l1).unwrap();
        let l0 = Fe(3);
        let l3 = Fe(4);
        let l4 = f.inv(f.mul(l0, l3)).unwrap();
        let q = JPParams::new(l0, vec![l1, l2, l3, l4]);
        let t2 = construct(&f, &q).unwrap();
        assert_eq!(restrict(&t2, &[1, 2]).unwrap_err(), Error::DegenerateRestriction);
    }

    #[test]
    fn braid_param_level() {
        let p = JPParams::new(1u32, vec![2, 2, 3]);
        assert_eq!(braid_act(&p, 1).unwrap(), p);
        let q = braid_act(&p, 2).unwrap();
        assert_eq!(q.lambdas, vec![2, 3, 2]);
        assert_eq!(braid_act(&q, 2).unwrap(), p);
        assert!(braid_act(&p, 3).is_err());
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets(3, 2).len(), 6);
        assert_eq!(subsets(4, 4).len(), 15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn construct_verify_spectrum(seed in 0u64..10_000, n in 2usize..6, qi in 0usize..6) {
            let q = [5u64, 7, 9, 11, 16, 25][qi];
            let f = Field::of_order(q).unwrap();
            let Some(p) = random_params(&f, n, seed) else { return Ok(()) };
            let t = construct(&f, &p).unwrap();
            let rep = verify(&t, seed);
            prop_assert!(rep.ok, "{:?} {:?}", p, rep);
            for s in subsets(n + 1, n) {
                let sr = subset_spectrum(&t, &s).unwrap();
                prop_assert!(sr.matches, "S={:?} {:?}", s, sr);
            }
        }

        #[test]
        fn rigidity_intertwiner_is_one_dimensional(seed in 0u64..10_000, n in 2usize..6) {
            let f = Field::new(11, 1).unwrap();
            let Some(p) = random_params(&f, n, seed) else { return Ok(()) };
            let t = construct(&f, &p).unwrap();
            let cert = rigidity_cert(&t).unwrap();
            prop_assert_eq!(cert.dim, 1);
            prop_assert!(cert.conjugator.is_some());
        }

        #[test]
        fn rank_subadditivity(seed in 0u64..10_000, n in 3usize..6) {
            let f = Field::new(13, 1).unwrap();
            let Some(p) = random_params(&f, n, seed) else { return Ok(()) };
            let t = construct(&f, &p).unwrap();
            let s = vec![1, 2];
            let u = vec![3];
            let gs = t.product(&s);
            let gu = t.product(&u);
            let lhs = rank(&f, &gs.mul(&f, &gu).shift(&f, Fe(1)));
            let rhs = rank(&f, &gs.shift(&f, Fe(1))) + rank(&f, &gu.shift(&f, Fe(1)));
            prop_assert!(lhs <= rhs);
        }

        #[test]
        fn restrict_matches_parameter_restriction(seed in 0u64..10_000, n in 2usize..6, drop in 0usize..6) {
            let f = Field::new(13, 1).unwrap();
            let Some(p) = random_params(&f, n, seed) else { return Ok(()) };
            let t = construct(&f, &p).unwrap();
            let drop = drop % (n + 1) + 1;
            let s: Vec<usize> = (1..=n + 1).filter(|&i| i != drop).collect();
            let ls = p.lambda_s(&f, &s);
            prop_assume!(ls != Fe(1));
            let r = restrict(&t, &s).unwrap();
            prop_assume!(!r.params.lambdas.contains(&Fe(1)));
            let rep = verify(&r, seed);
            prop_assert!(rep.ok, "{:?}", rep);
            let c = construct(&f, &r.params).unwrap();
            prop_assert_eq!(conjugacy_cert(&f, &r.gens, &c.gens).unwrap().dim, 1);
        }

        #[test]
        fn braid_tuple_level(seed in 0u64..10_000, n in 2usize..6, i in 1usize..6) {
            let f = Field::new(11, 1).unwrap();
            let Some(p) = random_params(&f, n, seed) else { return Ok(()) };
            let t = construct(&f, &p).unwrap();
            let i = (i - 1) % n + 1;
            let b = braid_act_tuple(&t, i).unwrap();
            let rep = verify(&b, seed);
            prop_assert!(rep.ok, "{:?}", rep);
            let c = construct(&f, &b.params).unwrap();
            prop_assert_eq!(conjugacy_cert(&f, &b.gens, &c.gens).unwrap().dim, 1);
        }
    }
}
