//! Command-line front end: argument parsing, dispatch to the library, JSON or
//! TSV rendering, and parameter sweeps with an on-disk cache.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cyclo::{params_from_weights, reduce_params, split_prime, ResidueData, SymbolicParams, WeightVector};
use crate::error::{Error, Result};
use crate::exactalg::{Fe, Field, Involution, Matrix};
use crate::forms::{
    invariant_form, invariant_pairing, parse_ratio, query_from_weights, signature_formula, signature_numeric,
    SignatureQuery, DEFAULT_TOL,
};
use crate::grpengine::{classify, pairwise_test, BsgsConfig};
use crate::jprep::{construct, verify, JPTuple};
use crate::lifting::{dual_tuple, lie_detect, sl2_w2_split_test, span_full, DetectConfig, LiftParams, Target};
use crate::prymstats::{
    self, expected_selmer, expected_selmer_brute, gu3_f2_selmer_average, parse_graph, sl_orbit_count,
    sl_orbit_count_brute, torus_rank_oracle, SelmerQuery,
};

mod sweep;

pub use sweep::{cache_key, SweepCell, CODE_VERSION_TAG};

/// Environment variable overriding the sweep cache directory.
pub const CACHE_ENV: &str = "JPMONO_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "jpmono", version, about = "Jordan-Pochhammer monodromy toolkit")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    pub output: Output,
    /// Sweep cache directory (overrides JPMONO_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build or verify a tuple.
    #[command(subcommand)]
    Jp(JpCmd),
    /// Invariant forms and Hermitian signatures.
    #[command(subcommand)]
    Forms(FormsCmd),
    /// Classify the image of a tuple.
    Classify(ParamArgs),
    /// Joint image of two embeddings.
    Pairwise(PairwiseArgs),
    /// Lie algebra detection mod the square of a prime.
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Counting formulas for covers and Pryms.
    #[command(subcommand)]
    Prym(PrymCmd),
    /// Selmer averages and Burnside counts.
    #[command(subcommand)]
    Selmer(SelmerCmd),
    /// Evaluate a grid of cells, one JSON line each.
    Sweep(sweep::SweepArgs),
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct ParamArgs {
    /// Order N of the root of unity.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n_order: u64,
    /// Exponents e_0,...,e_{n+1} of lambda_i = zeta_N^{e_i}.
    #[arg(long, value_delimiter = ',', required = true)]
    pub weights: Vec<u64>,
    /// Rational prime p.
    #[arg(long)]
    pub prime: u64,
    /// Which prime of the real subfield above p.
    #[arg(long, default_value_t = 0)]
    pub prime_index: usize,
    /// Which embedding of zeta_N into that residue field.
    #[arg(long, default_value_t = 0)]
    pub embedding: usize,
}

#[derive(Subcommand, Debug)]
pub enum JpCmd {
    /// Construct the tuple at the chosen residue prime.
    Build(ParamArgs),
    /// Check the product relation, local spectra and rigidity.
    Verify(ParamArgs),
}

#[derive(Subcommand, Debug)]
pub enum FormsCmd {
    /// Invariant form for the involution of the residue prime.
    Find(ParamArgs),
    /// Signature from rational exponents (or from --N and --weights).
    Signature(SignatureArgs),
}

#[derive(Args, Debug)]
pub struct SignatureArgs {
    /// Rational exponents such as 1/3,1/3,1/3.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["n_order", "weights"])]
    pub exponents: Option<Vec<String>>,
    #[arg(long = "N", requires = "weights")]
    pub n_order: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<u64>>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct PairwiseArgs {
    #[arg(long = "N")]
    pub n_order: u64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub weights: Vec<u64>,
    /// Rational prime p.
    #[arg(long)]
    pub prime: u64,
    /// First side as prime_index:embedding.
    #[arg(long, value_parser = parse_side, default_value = "0:0")]
    pub first: (usize, usize),
    /// Second side as prime_index:embedding.
    #[arg(long, value_parser = parse_side, default_value = "0:1")]
    pub second: (usize, usize),
}

fn parse_side(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or("expected prime_index:embedding")?;
    Ok((a.parse().map_err(|e| format!("{e}"))?, b.parse().map_err(|e| format!("{e}"))?))
}

#[derive(Subcommand, Debug)]
pub enum LiftCmd {
    /// Search for a nonscalar I + eps B in the image over F_p[eps].
    Detect(DetectArgs),
    /// Splitting test for SL_2(F_4) over W_2(F_4).
    Sl2w2,
}

#[derive(Args, Debug)]
pub struct DetectArgs {
    #[arg(long)]
    pub prime: u64,
    /// Residues lambda_0,...,lambda_{n+1} mod p (may be negative).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub lambdas: Vec<i64>,
    /// Deformation directions nu_0,...,nu_{n+1} mod p.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub nus: Vec<i64>,
    #[arg(long, default_value_t = 200)]
    pub random_budget: usize,
}

#[derive(Subcommand, Debug)]
pub enum PrymCmd {
    /// Eigenspace dimensions of differentials and the cover genus.
    Dims {
        #[arg(long = "N")]
        n_order: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(long)]
        d: Option<u64>,
    },
    /// Torus rank of a seminormal cover from an equivariant graph file.
    Torus {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Z[zeta_N]-rank of the Prym.
    Rank {
        #[arg(long)]
        points: u64,
        #[arg(long, default_value_t = 0)]
        genus: u64,
    },
    /// Multiplicity of a wildly ramified point.
    Wildmult {
        #[arg(long)]
        g_cover: u64,
        #[arg(long)]
        g_sub: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum SelmerCmd {
    /// Limiting average size of the l-Selmer group.
    Avg(SelmerArgs),
    /// SL_n(F_l) orbits on V + V*, by formula and by enumeration.
    Burnside {
        #[arg(long)]
        l: u64,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Args, Debug)]
pub struct SelmerArgs {
    #[arg(long)]
    pub l: u64,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub q_mod_3: u8,
    /// Accept l = 3.
    #[arg(long)]
    pub allow_l3: bool,
    /// Cross-check by enumeration.
    #[arg(long)]
    pub brute: bool,
}

fn ratio_json(r: Ratio<i64>) -> Value {
    if r.is_integer() {
        json!(r.to_integer())
    } else {
        json!(format!("{}/{}", r.numer(), r.denom()))
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports are always serializable")
}

/// Resolved parameters, residue prime and the reduced tuple.
pub struct Instance {
    pub params: SymbolicParams,
    pub rd: ResidueData,
    pub which: usize,
    pub field: Field,
    pub tuple: JPTuple<Field>,
}

fn residue(n_order: u64, p: u64, index: usize) -> Result<ResidueData> {
    let rds = split_prime(n_order, p)?;
    let count = rds.len();
    rds.into_iter()
        .nth(index)
        .ok_or_else(|| Error::Precondition(format!("prime index {index} out of range ({count} primes above {p})")))
}

pub fn instance(a: &ParamArgs) -> Result<Instance> {
    let params = params_from_weights(&WeightVector::new(a.n_order, a.weights.clone()))?;
    let rd = residue(a.n_order, a.prime, a.prime_index)?;
    if a.embedding >= rd.embeddings.len() {
        return Err(Error::Precondition(format!(
            "embedding {} out of range ({} available)",
            a.embedding,
            rd.embeddings.len()
        )));
    }
    let field = rd.residue_field()?;
    let tuple = construct(&field, &reduce_params(&params, &rd, a.embedding)?)?;
    Ok(Instance { params, rd, which: a.embedding, field, tuple })
}

fn params_json(a: &ParamArgs, i: &Instance) -> Value {
    json!({
        "input": to_value(a),
        "field": i.field.name(),
        "lambda0": i.tuple.params.lambda0,
        "lambdas": i.tuple.params.lambdas,
        "involution": to_value(&i.rd.involution),
        "ramified": i.rd.ramified,
    })
}

/// Report for `jp verify`; also used by sweeps.
pub fn verify_report(a: &ParamArgs, seed: u64) -> Result<Value> {
    let i = instance(a)?;
    let r = verify(&i.tuple, seed);
    Ok(json!({
        "anchor": "jprep::verify",
        "instance": params_json(a, &i),
        "report": to_value(&r),
        "ok": r.ok,
    }))
}

/// Report for `classify`; also used by sweeps.
pub fn classify_report(a: &ParamArgs, seed: u64) -> Result<Value> {
    let i = instance(a)?;
    let r = classify(&i.tuple, &i.rd, i.which, seed, &BsgsConfig::default())?;
    let mut v = to_value(&r);
    let obj = v.as_object_mut().expect("classification is an object");
    obj.insert("anchor".into(), json!("grpengine::classify"));
    obj.insert("instance".into(), params_json(a, &i));
    Ok(v)
}

fn forms_find(a: &ParamArgs) -> Result<Value> {
    let i = instance(a)?;
    let form = if i.rd.involution == Involution::SwapFactors {
        let other = ParamArgs { embedding: 1 - a.embedding.min(1), ..a.clone() };
        let j = instance(&other)?;
        invariant_pairing(&i.tuple, &j.tuple)?
    } else {
        invariant_form(&i.tuple, i.rd.involution)?
    };
    Ok(json!({
        "anchor": "forms::invariant_form",
        "instance": params_json(a, &i),
        "kind": form.kind(),
        "form": to_value(&form),
    }))
}

fn forms_signature(a: &SignatureArgs) -> Result<Value> {
    let q = match (&a.exponents, a.n_order, &a.weights) {
        (Some(ex), _, _) => SignatureQuery::new(ex.iter().map(|s| parse_ratio(s)).collect::<Result<_>>()?)?,
        (None, Some(n), Some(w)) => query_from_weights(n, w)?,
        _ => return Err(Error::Precondition("give --exponents or --N with --weights".into())),
    };
    let formula = signature_formula(&q)?;
    let (numeric, numeric_error) = match signature_numeric(&q, a.tol) {
        Ok(s) => (Some(s), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(json!({
        "anchor": "forms::signature",
        "exponents": q.exponents.iter().map(|r| format!("{r}")).collect::<Vec<_>>(),
        "formula": formula,
        "numeric": numeric,
        "numeric_error": numeric_error,
        "agree": numeric == Some(formula),
    }))
}

fn pairwise(a: &PairwiseArgs, seed: u64) -> Result<Value> {
    let params = params_from_weights(&WeightVector::new(a.n_order, a.weights.clone()))?;
    let r1 = residue(a.n_order, a.prime, a.first.0)?;
    let r2 = residue(a.n_order, a.prime, a.second.0)?;
    let r = pairwise_test(&params, (&r1, a.first.1), (&r2, a.second.1), seed, &BsgsConfig::default())?;
    let mut v = to_value(&r);
    v.as_object_mut().expect("object").insert("anchor".into(), json!("grpengine::pairwise"));
    Ok(v)
}

fn lift_detect(a: &DetectArgs, seed: u64) -> Result<Value> {
    let f = Field::new(a.prime, 1)?;
    if a.lambdas.len() < 4 || a.lambdas.len() != a.nus.len() {
        return Err(Error::Dimension("need matching lambdas and nus, at least four each".into()));
    }
    let lam: Vec<Fe> = a.lambdas.iter().map(|&x| f.from_i64(x)).collect();
    let base = crate::cyclo::JPParams::new(lam[0], lam[1..].to_vec());
    let lp = LiftParams::new(&f, base, a.nus.iter().map(|&x| f.from_i64(x)).collect())?;
    let cfg = DetectConfig { seed, random_budget: a.random_budget, ..DetectConfig::default() };
    let found = lie_detect(&f, &lp, &cfg)?;
    let t = dual_tuple(&f, &lp)?;
    let gens: Vec<_> = t.gens.iter().map(|g| g.map(|x| x.a)).collect();
    let minus_one = f.neg(f.one());
    let all_minus = lam.iter().all(|&x| x == minus_one);
    let target = if all_minus && lp.n() % 2 == 0 {
        let red = JPTuple::from_parts(f.clone(), t.params.map(|x| x.a), gens.clone());
        Target::SymplecticPiece { form: invariant_form(&red, Involution::Identity)?.a }
    } else {
        Target::Sl
    };
    let span = match &found {
        Some(x) => Some(span_full(&f, &x.b, &gens, &target)?),
        None => None,
    };
    Ok(json!({
        "anchor": "lifting::lie_detect",
        "element": found.as_ref().map(to_value),
        "word": found.as_ref().map(|x| x.word.to_string()),
        "target": match target { Target::Sl => "Sl", Target::Su => "Su", Target::SymplecticPiece { .. } => "SymplecticPiece" },
        "span_full": span,
    }))
}

fn prym(cmd: &PrymCmd) -> Result<Value> {
    match cmd {
        PrymCmd::Dims { n_order, weights, d } => {
            let w = WeightVector::new(*n_order, weights.clone());
            let ds: Vec<u64> = match d {
                Some(d) => vec![*d],
                None => (1..*n_order).collect(),
            };
            let dims = ds
                .iter()
                .map(|&d| Ok(json!({"d": d, "dim": prymstats::weight_dim(&w, d)?})))
                .collect::<Result<Vec<_>>>()?;
            let genus = prymstats::riemann_hurwitz_genus(&w).ok();
            Ok(json!({"anchor": "prymstats::weight_dim", "dims": dims, "genus": genus}))
        }
        PrymCmd::Torus { graph } => {
            let g = parse_graph(&std::fs::read_to_string(graph)?)?;
            let r = torus_rank_oracle(&g)?;
            Ok(json!({
                "anchor": "prymstats::torus_rank",
                "combinatorics": to_value(&r.combinatorics),
                "torus_rank": r.formula,
                "homology_check": r.oracle,
                "agree": r.formula == r.oracle,
            }))
        }
        PrymCmd::Rank { points, genus } => Ok(json!({
            "anchor": "prymstats::prym_rank",
            "rank": prymstats::prym_rank(*points, *genus)?,
        })),
        PrymCmd::Wildmult { g_cover, g_sub, p, l } => Ok(json!({
            "anchor": "prymstats::wild_multiplicity",
            "multiplicity": prymstats::wild_multiplicity(*g_cover, *g_sub, *p, *l)?,
        })),
    }
}

fn selmer(cmd: &SelmerCmd) -> Result<Value> {
    match cmd {
        SelmerCmd::Avg(a) => {
            let sq = SelmerQuery { n: a.n, l: a.l, q_mod_3: a.q_mod_3, allow_l3: a.allow_l3 };
            let e = expected_selmer(&sq)?;
            let mut v = json!({"anchor": "prymstats::expected_selmer", "expected": ratio_json(e)});
            if a.brute {
                let b = expected_selmer_brute(&sq)?;
                let obj = v.as_object_mut().expect("object");
                obj.insert("brute".into(), ratio_json(b));
                obj.insert("agree".into(), json!(b == e));
            }
            Ok(v)
        }
        SelmerCmd::Burnside { l, n } => {
            let formula = sl_orbit_count(*n, *l)?;
            let brute = sl_orbit_count_brute(*n, *l)?;
            let unitary = if *l == 2 {
                Some(
                    gu3_f2_selmer_average()?
                        .into_iter()
                        .map(|(d, r)| json!({"det": d, "report": to_value(&r)}))
                        .collect::<Vec<_>>(),
                )
            } else {
                None
            };
            Ok(json!({
                "anchor": "prymstats::burnside_coset_average",
                "formula": to_value(&formula),
                "brute": to_value(&brute),
                "orbits": formula.total(),
                "agree": formula == brute,
                "unitary_cosets": unitary,
            }))
        }
    }
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn anchor_of(cmd: &Command) -> &'static str {
    match cmd {
        Command::Jp(JpCmd::Build(_)) => "jprep::construct",
        Command::Jp(JpCmd::Verify(_)) => "jprep::verify",
        Command::Forms(FormsCmd::Find(_)) => "forms::invariant_form",
        Command::Forms(FormsCmd::Signature(_)) => "forms::signature",
        Command::Classify(_) => "grpengine::classify",
        Command::Pairwise(_) => "grpengine::pairwise",
        Command::Lift(LiftCmd::Detect(_)) => "lifting::lie_detect",
        Command::Lift(LiftCmd::Sl2w2) => "lifting::sl2_w2_split_test",
        Command::Prym(PrymCmd::Dims { .. }) => "prymstats::weight_dim",
        Command::Prym(PrymCmd::Torus { .. }) => "prymstats::torus_rank",
        Command::Prym(PrymCmd::Rank { .. }) => "prymstats::prym_rank",
        Command::Prym(PrymCmd::Wildmult { .. }) => "prymstats::wild_multiplicity",
        Command::Selmer(SelmerCmd::Avg(_)) => "prymstats::expected_selmer",
        Command::Selmer(SelmerCmd::Burnside { .. }) => "prymstats::burnside_coset_average",
        Command::Sweep(_) => "cli::sweep",
    }
}

/// Error report in the same shape for every subcommand.
pub fn error_json(anchor: &str, e: &Error) -> Value {
    json!({"anchor": anchor, "error": {"kind": error_kind(e), "message": e.to_string()}})
}

/// Compute the report for a non-sweep command.
pub fn dispatch(cli: &Cli) -> Result<Value> {
    let seed = cli.seed;
    match &cli.command {
        Command::Jp(JpCmd::Build(a)) => {
            let i = instance(a)?;
            Ok(json!({
                "anchor": "jprep::construct",
                "instance": params_json(a, &i),
                "generators": i.tuple.gens.iter().map(Matrix::to_rows).collect::<Vec<_>>(),
            }))
        }
        Command::Jp(JpCmd::Verify(a)) => verify_report(a, seed),
        Command::Forms(FormsCmd::Find(a)) => forms_find(a),
        Command::Forms(FormsCmd::Signature(a)) => forms_signature(a),
        Command::Classify(a) => classify_report(a, seed),
        Command::Pairwise(a) => pairwise(a, seed),
        Command::Lift(LiftCmd::Detect(a)) => lift_detect(a, seed),
        Command::Lift(LiftCmd::Sl2w2) => {
            let mut v = to_value(&sl2_w2_split_test());
            v.as_object_mut().expect("object").insert("anchor".into(), json!("lifting::sl2_w2_split_test"));
            Ok(v)
        }
        Command::Prym(p) => prym(p),
        Command::Selmer(s) => selmer(s),
        Command::Sweep(_) => Err(Error::Precondition("sweep streams its output; use run".into())),
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Render one report. TSV puts the top-level keys on a header line.
pub fn render(v: &Value, output: Output, header: bool) -> String {
    match (output, v) {
        (Output::Json, _) => format!("{v}\n"),
        (Output::Tsv, Value::Object(m)) => {
            let mut s = String::new();
            if header {
                s += &m.keys().cloned().collect::<Vec<_>>().join("\t");
                s.push('\n');
            }
            s += &m.values().map(cell_text).collect::<Vec<_>>().join("\t");
            s.push('\n');
            s
        }
        (Output::Tsv, other) => format!("{}\n", cell_text(other)),
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    if let Command::Sweep(s) = &cli.command {
        let cache = cli.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
        return match sweep::run_sweep(s, cli.seed, cli.output, cache.as_deref(), out, err) {
            Ok(failed) => failed as i32,
            Err(sweep::SweepError::Usage(msg)) => {
                let _ = writeln!(err, "error: {msg}");
                2
            }
            Err(sweep::SweepError::Domain(e)) => {
                let _ = write!(out, "{}", render(&error_json("cli::sweep", &e), cli.output, true));
                1
            }
        };
    }
    match dispatch(&cli) {
        Ok(v) => {
            let _ = write!(out, "{}", render(&v, cli.output, true));
            0
        }
        Err(e) => {
            let _ = write!(out, "{}", render(&error_json(anchor_of(&cli.command), &e), cli.output, true));
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("jpmono").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn parse(s: &str) -> Value {
        serde_json::from_str(s.trim()).unwrap()
    }

    #[test]
    fn verify_explicit_tuple() {
        let (code, out, _) = run_str(&["jp", "verify", "--N", "2", "--weights", "1,1,1,1", "--prime", "5"]);
        assert_eq!(code, 0);
        let v = parse(&out);
        assert_eq!(v["ok"], json!(true));
        assert_eq!(v["anchor"], json!("jprep::verify"));
        assert!(v["report"]["pseudoreflections"].as_array().unwrap().iter().all(|x| x == &json!(true)));
    }

    #[test]
    fn selmer_average() {
        let (code, out, _) = run_str(&["selmer", "avg", "--l", "7"]);
        assert_eq!(code, 0);
        assert_eq!(parse(&out)["expected"], json!(10));
        let (_, out, _) = run_str(&["selmer", "avg", "--l", "2", "--brute"]);
        let v = parse(&out);
        assert_eq!((v["expected"].clone(), v["agree"].clone()), (json!(3), json!(true)));
    }

    #[test]
    fn classify_exception() {
        let (code, out, _) = run_str(&["classify", "--N", "6", "--weights", "1,1,1,1,1,1", "--prime", "7"]);
        assert_eq!(code, 0);
        let v = parse(&out);
        assert_eq!(v["verdict"], json!("ComplexReflectionFinite"));
        assert_eq!(v["name"], json!("ST32"));
    }

    #[test]
    fn exit_codes() {
        let (code, out, err) = run_str(&["classify", "--N", "6", "--weights", "x", "--prime", "7"]);
        assert_eq!(code, 2);
        assert!(out.is_empty() && !err.is_empty());
        let (code, out, _) = run_str(&["classify", "--N", "6", "--weights", "1,1,1,1,1", "--prime", "7"]);
        assert_eq!(code, 1);
        assert_eq!(parse(&out)["error"]["kind"], json!("BadWeights"));
        let (code, out, _) = run_str(&["prym", "rank", "--points", "1"]);
        assert_eq!(code, 1);
        assert_eq!(parse(&out)["error"]["kind"], json!("NegativeRank"));
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn deterministic_and_tsv() {
        let args = ["classify", "--N", "4", "--weights", "1,1,1,1,1,1,2", "--prime", "3", "--seed", "3"];
        let a = run_str(&args);
        assert_eq!(a, run_str(&args));
        let (_, tsv, _) = run_str(&["--output", "tsv", "prym", "rank", "--points", "7"]);
        assert_eq!(tsv, "anchor\trank\nprymstats::prym_rank\t5\n");
    }

    #[test]
    fn other_subcommands() {
        let (c, out, _) = run_str(&["forms", "signature", "--exponents", "1/3,1/3,1/3,1/3,1/3,1/3"]);
        assert_eq!(c, 0);
        let v = parse(&out);
        assert_eq!((v["formula"].clone(), v["agree"].clone()), (json!([1, 3]), json!(true)));
        let (c, out, _) = run_str(&["forms", "find", "--N", "2", "--weights", "1,1,1,1", "--prime", "5"]);
        assert_eq!(c, 0);
        assert_eq!(parse(&out)["kind"], json!("alternating"));
        let (c, out, _) = run_str(&["lift", "detect", "--prime", "5", "--lambdas", "-1,-1,-1,-1,-1,-1", "--nus", "0,1,2,0,0,2"]);
        assert_eq!(c, 0);
        let v = parse(&out);
        assert_eq!((v["target"].clone(), v["span_full"].clone()), (json!("SymplecticPiece"), json!(true)));
        let (c, out, _) = run_str(&["lift", "sl2w2"]);
        assert_eq!(c, 0);
        assert_eq!(parse(&out)["splits"], json!(false));
        let (c, out, _) = run_str(&["prym", "dims", "--N", "3", "--weights", "1,1,1"]);
        assert_eq!(c, 0);
        assert_eq!(parse(&out)["genus"], json!(1));
        let (c, out, _) = run_str(&["prym", "wildmult", "--g-cover", "10", "--g-sub", "4", "--p", "3", "--l", "1"]);
        assert_eq!((c, parse(&out)["multiplicity"].clone()), (0, json!(3)));
        let (c, out, _) = run_str(&["selmer", "burnside", "--l", "5"]);
        assert_eq!((c, parse(&out)["orbits"].clone()), (0, json!(8)));
        let (c, out, _) = run_str(&["jp", "build", "--N", "2", "--weights", "1,1,1,1", "--prime", "5"]);
        assert_eq!(c, 0);
        assert_eq!(parse(&out)["generators"].as_array().unwrap().len(), 3);
    }
}
