//! Finite matrix groups: BSGS, classical orders, classification of images
//! and the pairwise product test.

mod bsgs;
mod classical;
mod fastmat;
mod registry;

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use bsgs::{group_order, Bsgs, BsgsConfig};
pub use classical::{classical_order, Family};
pub use registry::{canonical_form, ExceptionEntry, ExceptionRegistry};

use crate::cyclo::{reduce_params, ResidueData, SymbolicParams};
use crate::error::{Error, Result};
use crate::exactalg::linalg::{det, FMat};
use crate::exactalg::numth::lcm;
use crate::exactalg::{Fe, Field, Involution, Matrix};
use crate::forms::invariant_form;
use crate::jprep::{construct, meataxe, Irreducibility, JPTuple};

/// Serialize big integers as decimal strings.
pub mod bigdec {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.serialize_some(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
            let s = Option::<String>::deserialize(d)?;
            s.map(|v| v.parse().map_err(serde::de::Error::custom)).transpose()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    /// SL <= G <= GL (up to scalars).
    LinearRange,
    /// SU <= G <= GU (up to scalars).
    UnitaryRange,
    Symplectic,
    OrthogonalRange,
    ExtendedSL2,
    ComplexReflectionFinite { name: String },
    SymmetricSpn,
    Sporadic { name: String },
    Reducible,
    Unknown,
}

/// Field generated by the projective traces of a two-dimensional image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceField {
    pub generators: Vec<Fe>,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(with = "bigdec::opt")]
    pub group_order: Option<BigUint>,
    #[serde(with = "bigdec::opt")]
    pub classical_order: Option<BigUint>,
    /// Name of the matched classical group, e.g. "Sp_4(3)".
    pub classical_group: Option<String>,
    pub det_image_order: u64,
    pub form_kind: Option<String>,
    pub exception_hit: Option<String>,
    pub orbit_sizes: Vec<usize>,
    pub trace_field: Option<TraceField>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationResult {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub evidence: Evidence,
}

fn subfield_degrees(k: u32) -> Vec<u32> {
    (1..=k).filter(|d| k % d == 0).collect()
}

fn divides(a: &BigUint, b: &BigUint) -> bool {
    !a.is_zero() && (b % a).is_zero()
}

/// Order of the cyclic group generated by the determinants.
pub fn det_image_order(f: &Field, gens: &[FMat]) -> u64 {
    gens.iter().fold(1, |acc, g| lcm(acc, f.elem_order(det(f, g))))
}

/// Exponents e with zeta^e = lambda, if every parameter is such a power.
fn recover_exponents(f: &Field, zeta: Fe, n_order: u64, t: &JPTuple<Field>) -> Option<(u64, Vec<u64>)> {
    let mut logs = HashMap::new();
    let mut x = f.one();
    for e in 0..n_order {
        logs.entry(x).or_insert(e);
        x = f.mul(x, zeta);
    }
    let e0 = *logs.get(&t.params.lambda0)?;
    let es = t
        .params
        .lambdas
        .iter()
        .map(|l| logs.get(l).copied())
        .collect::<Option<Vec<u64>>>()?;
    Some((e0, es))
}

fn trace_field(f: &Field, gens: &[FMat]) -> TraceField {
    let mut elems: Vec<FMat> = gens.to_vec();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            elems.push(gens[i].mul(f, &gens[j]));
        }
    }
    let generators: Vec<Fe> = elems
        .iter()
        .map(|g| {
            let t = g.trace(f);
            f.div(f.mul(t, t), det(f, g)).expect("invertible generator")
        })
        .collect();
    let degree = generators
        .iter()
        .fold(1u64, |acc, &x| lcm(acc, f.degree_of(x) as u64)) as u32;
    TraceField { generators, degree }
}

/// Classify the image of a tuple reduced through embedding `which` of `rd`.
pub fn classify(
    t: &JPTuple<Field>,
    rd: &ResidueData,
    which: usize,
    seed: u64,
    cfg: &BsgsConfig,
) -> Result<ClassificationResult> {
    let f = &t.ring;
    if f.desc() != rd.field {
        return Err(Error::Precondition("tuple field differs from the residue field".into()));
    }
    let emb = rd
        .embeddings
        .get(which)
        .ok_or_else(|| Error::Precondition(format!("embedding index {which} out of range")))?;
    let n = t.dim();
    let mut ev = Evidence {
        group_order: None,
        classical_order: None,
        classical_group: None,
        det_image_order: det_image_order(f, &t.gens),
        form_kind: None,
        exception_hit: None,
        orbit_sizes: Vec::new(),
        trace_field: (n == 2).then(|| trace_field(f, &t.gens)),
    };
    if let Irreducibility::Reducible { .. } = meataxe(f, &t.gens, seed, meataxe::DEFAULT_ATTEMPTS) {
        return Ok(ClassificationResult {
            verdict: Verdict::Reducible,
            evidence: ev,
        });
    }
    if rd.n_prime == rd.n_order {
        if let Some((e0, es)) = recover_exponents(f, emb.zeta_image, rd.n_order, t) {
            ev.exception_hit = ExceptionRegistry::standard()
                .lookup_exponents(rd.n_order, e0, &es)
                .map(|x| x.name.clone());
        }
    }
    let mut form = invariant_form(t, Involution::Identity).ok().filter(|x| x.nondegenerate);
    if form.is_none() && f.k() % 2 == 0 {
        form = invariant_form(t, Involution::FrobeniusHalf).ok().filter(|x| x.nondegenerate);
    }
    ev.form_kind = form.as_ref().map(|x| x.kind().to_string());

    let b = Bsgs::build(f, &t.gens, seed, cfg)?;
    let order = b.order();
    ev.orbit_sizes = b.orbit_sizes();
    ev.group_order = Some(order.clone());

    if let Some(name) = ev.exception_hit.clone() {
        return Ok(ClassificationResult {
            verdict: Verdict::ComplexReflectionFinite { name },
            evidence: ev,
        });
    }

    let p = f.p() as u64;
    let q = f.q() as u64;
    let scalars = BigUint::from(q - 1);
    let nn = n as u32;
    let mut verdict = Verdict::Unknown;
    let mut found = |fam: &str, lower: BigUint, upper: BigUint, v: Verdict, ev: &mut Evidence, sub: u64| {
        if verdict == Verdict::Unknown && divides(&lower, &order) && divides(&order, &upper) {
            ev.classical_order = Some(lower);
            ev.classical_group = Some(format!("{fam}_{n}({sub})"));
            verdict = v;
        }
    };
    match ev.form_kind.as_deref() {
        Some("alternating") => {
            for d in subfield_degrees(f.k()) {
                let q0 = p.pow(d);
                let sp = classical_order(Family::Sp, nn, q0);
                found("Sp", sp.clone(), sp * &scalars, Verdict::Symplectic, &mut ev, q0);
            }
        }
        Some("hermitian") | Some("anti-hermitian") => {
            for d in subfield_degrees(f.k()).into_iter().filter(|d| d % 2 == 0) {
                let r = p.pow(d / 2);
                let su = classical_order(Family::SU, nn, r);
                let gu = classical_order(Family::GU, nn, r);
                found("SU", su, gu * &scalars, Verdict::UnitaryRange, &mut ev, r);
            }
        }
        Some(_) => {}
        None => {
            for d in subfield_degrees(f.k()) {
                let q0 = p.pow(d);
                let sl = classical_order(Family::SL, nn, q0);
                let gl = classical_order(Family::GL, nn, q0) * &scalars / BigUint::from(q0 - 1);
                found("SL", sl, gl, Verdict::LinearRange, &mut ev, q0);
            }
        }
    }
    if verdict == Verdict::Unknown && n == 2 {
        for d in subfield_degrees(f.k()) {
            let q0 = p.pow(d);
            let sl = classical_order(Family::SL, 2, q0);
            if divides(&sl, &order) {
                ev.classical_order = Some(sl);
                ev.classical_group = Some(format!("SL_2({q0})"));
                verdict = Verdict::ExtendedSL2;
            }
        }
    }
    Ok(ClassificationResult { verdict, evidence: ev })
}

/// Reduce symbolic parameters through one embedding, construct and classify.
pub fn classify_params(
    params: &SymbolicParams,
    rd: &ResidueData,
    which: usize,
    seed: u64,
    cfg: &BsgsConfig,
) -> Result<ClassificationResult> {
    let f = rd.residue_field()?;
    let reduced = reduce_params(params, rd, which)?;
    let t = construct(&f, &reduced)?;
    classify(&t, rd, which, seed, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairwiseVerdict {
    /// The image contains the full product of the two special parts.
    Surjective,
    /// The image is (up to center) the graph of an isomorphism.
    Graph,
    Intermediate,
    /// Some parameter reduces to 1 under one of the embeddings.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairwiseResult {
    pub verdict: PairwiseVerdict,
    #[serde(with = "bigdec::opt")]
    pub order: Option<BigUint>,
    #[serde(with = "bigdec::opt")]
    pub order1: Option<BigUint>,
    #[serde(with = "bigdec::opt")]
    pub order2: Option<BigUint>,
    /// Determinant-image orders (pair, first, second).
    pub det_orders: Option<(u64, u64, u64)>,
    /// Order of the determinant-one part of the joint image.
    #[serde(with = "bigdec::opt")]
    pub special_order: Option<BigUint>,
    #[serde(with = "bigdec::opt")]
    pub special_order1: Option<BigUint>,
    #[serde(with = "bigdec::opt")]
    pub special_order2: Option<BigUint>,
    /// (side, parameter index) of the first degenerate parameter.
    pub degenerate_at: Option<(usize, usize)>,
}

/// Order of the subgroup of (F*)^2 generated by the determinant pairs.
fn pair_det_order(f: &Field, g1: &[FMat], g2: &[FMat]) -> u64 {
    let dets: Vec<(Fe, Fe)> = g1.iter().zip(g2).map(|(a, b)| (det(f, a), det(f, b))).collect();
    let mut seen = HashSet::new();
    let mut stack = vec![(f.one(), f.one())];
    seen.insert((f.one(), f.one()));
    while let Some((x, y)) = stack.pop() {
        for &(a, b) in &dets {
            let z = (f.mul(x, a), f.mul(y, b));
            if seen.insert(z) {
                stack.push(z);
            }
        }
    }
    seen.len() as u64
}

/// Compare the image of g -> (g1, g2) with the images of the two factors.
pub fn pairwise_from_gens(
    f: &Field,
    gens1: &[FMat],
    gens2: &[FMat],
    seed: u64,
    cfg: &BsgsConfig,
) -> Result<PairwiseResult> {
    if gens1.len() != gens2.len() || gens1.is_empty() {
        return Err(Error::Dimension("need equally many generators on both sides".into()));
    }
    let joint: Vec<FMat> = gens1
        .iter()
        .zip(gens2)
        .map(|(a, b)| a.direct_sum(b, Fe(0)))
        .collect();
    let o1 = group_order(f, gens1, seed, cfg)?;
    let o2 = group_order(f, gens2, seed.wrapping_add(1), cfg)?;
    let o = group_order(f, &joint, seed.wrapping_add(2), cfg)?;
    let d1 = det_image_order(f, gens1);
    let d2 = det_image_order(f, gens2);
    let d = pair_det_order(f, gens1, gens2);
    let k1 = &o1 / BigUint::from(d1);
    let k2 = &o2 / BigUint::from(d2);
    let k = &o / BigUint::from(d);
    let verdict = if k == &k1 * &k2 {
        PairwiseVerdict::Surjective
    } else if divides(&k1.clone().max(k2.clone()), &k)
        && divides(&k, &(k1.clone().max(k2.clone()) * BigUint::from(f.q() - 1)))
    {
        PairwiseVerdict::Graph
    } else {
        PairwiseVerdict::Intermediate
    };
    Ok(PairwiseResult {
        verdict,
        order: Some(o),
        order1: Some(o1),
        order2: Some(o2),
        det_orders: Some((d, d1, d2)),
        special_order: Some(k),
        special_order1: Some(k1),
        special_order2: Some(k2),
        degenerate_at: None,
    })
}

/// Pairwise test for two (prime, embedding) choices over the same rational prime.
pub fn pairwise_test(
    params: &SymbolicParams,
    first: (&ResidueData, usize),
    second: (&ResidueData, usize),
    seed: u64,
    cfg: &BsgsConfig,
) -> Result<PairwiseResult> {
    if first.0.field != second.0.field {
        return Err(Error::Precondition("both embeddings must share a residue field".into()));
    }
    let f = first.0.residue_field()?;
    let mut tuples = Vec::new();
    for (side, (rd, which)) in [first, second].into_iter().enumerate() {
        match reduce_params(params, rd, which) {
            Ok(r) => tuples.push(construct(&f, &r)?),
            Err(Error::DegenerateParameter { index }) => {
                return Ok(PairwiseResult {
                    verdict: PairwiseVerdict::Degenerate,
                    order: None,
                    order1: None,
                    order2: None,
                    det_orders: None,
                    special_order: None,
                    special_order1: None,
                    special_order2: None,
                    degenerate_at: Some((side, index)),
                })
            }
            Err(e) => return Err(e),
        }
    }
    pairwise_from_gens(&f, &tuples[0].gens, &tuples[1].gens, seed, cfg)
}

/// Embed `g` as diag(g, 1) in one dimension more.
pub fn bump_dimension(f: &Field, g: &FMat) -> FMat {
    g.direct_sum(&Matrix::identity(f, 1), Fe(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::split_prime;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(f: &Field, rows: &[&[i64]]) -> FMat {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect::<Vec<_>>()).unwrap()
    }

    fn all_minus_one(f: &Field, n: usize) -> JPTuple<Field> {
        let m1 = f.neg(f.one());
        let params = crate::cyclo::JPParams::new(m1, vec![m1; n + 1]);
        construct(f, &params).unwrap()
    }

    fn rd_for(p: u64) -> ResidueData {
        split_prime(2, p).unwrap().remove(0)
    }

    #[test]
    fn explicit_tuple_mod_5_is_sp2() {
        let f = Field::new(5, 1).unwrap();
        let gens = [m(&f, &[&[1, 2], &[0, 1]]), m(&f, &[&[1, 0], &[-2, 1]]), m(&f, &[&[-1, 2], &[-2, 3]])];
        assert_eq!(group_order(&f, &gens, 0, &BsgsConfig::default()).unwrap(), classical_order(Family::Sp, 2, 5));
    }

    #[test]
    fn symplectic_cases() {
        for (n, p) in [(2usize, 3u64), (2, 5), (4, 3)] {
            let f = Field::new(p, 1).unwrap();
            let t = all_minus_one(&f, n);
            let r = classify(&t, &rd_for(p), 0, 7, &BsgsConfig::default()).unwrap();
            assert_eq!(r.verdict, Verdict::Symplectic, "n={n} p={p}");
            assert_eq!(r.evidence.group_order, Some(classical_order(Family::Sp, n as u32, p)));
        }
    }

    #[test]
    fn membership_properties() {
        let f = Field::new(5, 1).unwrap();
        let t = all_minus_one(&f, 2);
        let b = Bsgs::build(&f, &t.gens, 1, &BsgsConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let len = rng.gen_range(1..20);
            let w = (0..len).fold(Matrix::identity(&f, 2), |acc, _| acc.mul(&f, &t.gens[rng.gen_range(0..3)]));
            assert!(b.contains(&w));
        }
        // |G| divides |GL_2(5)|
        assert!((classical_order(Family::GL, 2, 5) % b.order()).is_zero());
        // a nonscalar diagonal element of the bumped group is not a member
        let bumped: Vec<FMat> = t.gens.iter().map(|g| bump_dimension(&f, g)).collect();
        let bb = Bsgs::build(&f, &bumped, 2, &BsgsConfig::default()).unwrap();
        assert_eq!(bb.order(), b.order());
        let mut outsider = bump_dimension(&f, &Matrix::identity(&f, 2));
        outsider.set(2, 2, Fe(2));
        assert!(!bb.contains(&outsider));
        assert!(bb.contains(&bumped[0]));
    }

    #[test]
    fn synthetic_products() {
        let f = Field::new(5, 1).unwrap();
        let a = m(&f, &[&[1, 1], &[0, 1]]);
        let b = m(&f, &[&[1, 0], &[1, 1]]);
        let i = Matrix::identity(&f, 2);
        let cfg = BsgsConfig::default();
        let diag = pairwise_from_gens(&f, &[a.clone(), b.clone()], &[a.clone(), b.clone()], 0, &cfg).unwrap();
        assert_eq!(diag.verdict, PairwiseVerdict::Graph);
        let full = pairwise_from_gens(
            &f,
            &[a.clone(), b.clone(), i.clone(), i.clone()],
            &[i.clone(), i.clone(), a.clone(), b.clone()],
            0,
            &cfg,
        )
        .unwrap();
        assert_eq!(full.verdict, PairwiseVerdict::Surjective);
        assert_eq!(full.order, Some(BigUint::from(120u32 * 120)));
        // twisting by an outer automorphism (conjugation by diag(2,1)) is still a graph
        let c = m(&f, &[&[2, 0], &[0, 1]]);
        let ci = crate::exactalg::linalg::inverse(&f, &c).unwrap();
        let tw = |g: &FMat| c.mul(&f, g).mul(&f, &ci);
        let twisted = pairwise_from_gens(&f, &[a.clone(), b.clone()], &[tw(&a), tw(&b)], 0, &cfg).unwrap();
        assert_eq!(twisted.verdict, PairwiseVerdict::Graph);
    }

    #[test]
    fn same_embedding_is_graph_and_degenerate_detected() {
        let rd = &split_prime(7, 2).unwrap()[0];
        let params = SymbolicParams::from_exponents(7, &[1, 1, 2, 3, 1, 5, 1]).unwrap();
        let r = pairwise_test(&params, (rd, 0), (rd, 0), 0, &BsgsConfig::default()).unwrap();
        assert_eq!(r.verdict, PairwiseVerdict::Graph);
        let deg = SymbolicParams::from_exponents(7, &[1, 1, 2, 3, 0, 0]).unwrap();
        let d = pairwise_test(&deg, (rd, 0), (rd, 1), 0, &BsgsConfig::default()).unwrap();
        assert_eq!(d.verdict, PairwiseVerdict::Degenerate);
        assert_eq!(d.degenerate_at, Some((0, 4)));
    }

    #[test]
    fn registry_exceptions_are_finite_and_stable() {
        let reg = ExceptionRegistry::standard();
        for entry in &reg.entries {
            let mut all = vec![entry.e0];
            all.extend(&entry.es);
            let params = SymbolicParams::from_exponents(6, &all).unwrap();
            let mut orders = Vec::new();
            for p in [7u64, 13] {
                let rd = split_prime(6, p).unwrap().remove(0);
                let r = classify_params(&params, &rd, 0, 3, &BsgsConfig::default()).unwrap();
                assert_eq!(r.verdict, Verdict::ComplexReflectionFinite { name: entry.name.clone() });
                orders.push(r.evidence.group_order.unwrap());
            }
            assert_eq!(orders[0], orders[1], "{}", entry.name);
        }
    }

    #[test]
    fn classical_range_for_generic_params() {
        // N = 7 at p = 2: split, residue field F_8, linear range expected
        let rd = split_prime(7, 2).unwrap().remove(0);
        let params = SymbolicParams::from_exponents(7, &[1, 1, 2, 4, 6]).unwrap();
        let r = classify_params(&params, &rd, 0, 0, &BsgsConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::LinearRange);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn never_exotic(q in prop::sample::select(vec![5u64, 7, 9, 11, 13]), n in 2usize..4, seed in any::<u64>()) {
            let f = Field::of_order(q).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut lam: Vec<Fe> = (0..n).map(|_| Fe(rng.gen_range(2..q as u32))).collect();
            let l0 = Fe(rng.gen_range(2..q as u32));
            let prod = lam.iter().fold(l0, |a, &b| f.mul(a, b));
            let last = f.inv(prod).unwrap();
            prop_assume!(last != f.one());
            lam.push(last);
            let t = construct(&f, &crate::cyclo::JPParams::new(l0, lam)).unwrap();
            let rd = ResidueData {
                n_order: q - 1,
                p: f.p() as u64,
                f: f.k(),
                l: 0,
                n_prime: q - 1,
                field: f.desc(),
                embeddings: vec![crate::cyclo::Embedding { u: 1, zeta_image: f.primitive_element() }],
                involution: Involution::SwapFactors,
                ramified: false,
                coset: vec![1],
            };
            let r = classify(&t, &rd, 0, seed, &BsgsConfig::default()).unwrap();
            let exotic = matches!(r.verdict, Verdict::OrthogonalRange | Verdict::SymmetricSpn | Verdict::Sporadic { .. });
            prop_assert!(!exotic, "{:?}", r.verdict);
        }
    }
}
