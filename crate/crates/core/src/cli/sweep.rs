//! Grid sweeps: one JSON line per cell, in grid order, with a content-hashed
//! result cache.

use std::io::Write;
use std::path::Path;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{classify_report, error_json, render, verify_report, Output, ParamArgs};
use crate::error::Error;

/// Bumped whenever report contents change, so stale cache entries are ignored.
pub const CODE_VERSION_TAG: &str = concat!("jpmono-", env!("CARGO_PKG_VERSION"), "-r1");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepOp {
    Classify,
    Verify,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SweepOp::Classify)]
    pub op: SweepOp,
    /// Orders N, comma separated.
    #[arg(long = "N", value_delimiter = ',', required = true)]
    pub n_orders: Vec<u64>,
    /// Exponent vectors separated by ';', entries by ','.
    #[arg(long, value_delimiter = ';', required = true, value_parser = parse_vec)]
    pub weights: Vec<Vec<u64>>,
    /// Rational primes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub primes: Vec<u64>,
    /// Worker threads; output order never depends on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

fn parse_vec(s: &str) -> std::result::Result<Vec<u64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}")))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepCell {
    #[serde(rename = "N")]
    pub n_order: u64,
    pub weights: Vec<u64>,
    pub prime: u64,
}

pub enum SweepError {
    Usage(String),
    Domain(Error),
}

pub fn cache_key(op: SweepOp, seed: u64, cell: &SweepCell) -> String {
    let body = json!({"version": CODE_VERSION_TAG, "op": op, "seed": seed, "cell": cell});
    hex::encode(Sha256::digest(body.to_string().as_bytes()))
}

fn evaluate(op: SweepOp, seed: u64, cell: &SweepCell) -> Value {
    let a = ParamArgs {
        n_order: cell.n_order,
        weights: cell.weights.clone(),
        prime: cell.prime,
        prime_index: 0,
        embedding: 0,
    };
    let (r, anchor) = match op {
        SweepOp::Classify => (classify_report(&a, seed), "grpengine::classify"),
        SweepOp::Verify => (verify_report(&a, seed), "jprep::verify"),
    };
    r.unwrap_or_else(|e| error_json(anchor, &e))
}

/// Returns Ok(true) when some cell produced a domain error.
pub fn run_sweep(
    s: &SweepArgs,
    seed: u64,
    output: Output,
    cache: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool, SweepError> {
    if s.jobs == 0 {
        return Err(SweepError::Usage("--jobs must be at least 1".into()));
    }
    let mut cells = Vec::new();
    for &n in &s.n_orders {
        for w in &s.weights {
            for &p in &s.primes {
                cells.push(SweepCell { n_order: n, weights: w.clone(), prime: p });
            }
        }
    }
    if let Some(dir) = cache {
        std::fs::create_dir_all(dir).map_err(|e| SweepError::Domain(e.into()))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(s.jobs)
        .build()
        .map_err(|e| SweepError::Usage(e.to_string()))?;
    let mut hits = 0usize;
    let mut failed = false;
    let mut first = true;
    for chunk in cells.chunks(s.jobs) {
        let results: Vec<(Value, bool)> = pool.install(|| {
            chunk
                .par_iter()
                .map(|cell| {
                    let path = cache.map(|d| d.join(format!("{}.json", cache_key(s.op, seed, cell))));
                    if let Some(v) = path
                        .as_ref()
                        .and_then(|p| std::fs::read_to_string(p).ok())
                        .and_then(|t| serde_json::from_str::<Value>(&t).ok())
                    {
                        return (v, true);
                    }
                    let v = evaluate(s.op, seed, cell);
                    if let Some(p) = &path {
                        // a failed cache write only costs a recomputation later
                        let _ = std::fs::write(p, v.to_string());
                    }
                    (v, false)
                })
                .collect()
        });
        for (cell, (report, hit)) in chunk.iter().zip(results) {
            hits += hit as usize;
            failed |= report.get("error").is_some();
            let line = json!({"cell": cell, "report": report});
            write!(out, "{}", render(&line, output, first)).map_err(|e| SweepError::Domain(e.into()))?;
            first = false;
        }
        out.flush().map_err(|e| SweepError::Domain(e.into()))?;
    }
    let _ = writeln!(err, "sweep: {} cells, {} cache hits", cells.len(), hits);
    Ok(failed)
}
