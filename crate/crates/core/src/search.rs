//! Random search over `F_{q^m}`-linear codes with generator `(I_k | A)` for codes that
//! pass the dual-weight screen of [`crate::designs::am_check_code`].
//!
//! Candidate `i` is drawn from ChaCha8 keyed by the seed with stream `i`, so the record
//! stream depends only on the configuration and not on the number of workers.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::codes::{is_mrd_params, min_distance, Code, CodeError, Matrix, VectorCode, ENUMERATION_CEILING};
use crate::designs::{am_check_code, weights_in_range, DesignCertificate, DesignError};
use crate::duality::{dual_weight_distribution, DualityError};
use crate::field::{Elem, FieldError, GaloisField};
use crate::poly::bigint_json;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("parameters exceed the enumeration ceiling: {0}")]
    ParamsExceedCeiling(String),
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error(transparent)]
    Design(#[from] DesignError),
}

fn default_q() -> u64 {
    2
}

fn default_true() -> bool {
    true
}

fn default_cross() -> usize {
    50
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    #[serde(default = "default_q")]
    pub q: u64,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub count: u64,
    pub seed: u64,
    /// Thread count; `QPM_WORKERS` overrides it.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Skip candidates whose Galois orbit was already seen.
    #[serde(default = "default_true")]
    pub dedupe: bool,
    /// Directory for `records.jsonl`, `hits.jsonl`, `telemetry.jsonl` and `summary.json`.
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// How many candidates get their dual distribution recomputed by enumerating `C^⊥`.
    #[serde(default = "default_cross")]
    pub cross_validate: usize,
}

impl SearchConfig {
    fn validate(&self) -> Result<(), SearchError> {
        if self.m == 0 || self.k == 0 || self.t == 0 {
            return Err(SearchError::BadConfig("m, k and t must be positive".into()));
        }
        if self.k >= self.n || self.t >= self.n {
            return Err(SearchError::BadConfig(format!("need k < n and t < n, got n = {}, k = {}, t = {}", self.n, self.k, self.t)));
        }
        let size = u128::from(self.q).checked_pow((self.m * self.k) as u32).unwrap_or(u128::MAX);
        if size > ENUMERATION_CEILING {
            return Err(SearchError::ParamsExceedCeiling(format!("each code has {size} codewords")));
        }
        Ok(())
    }

    fn dual_enumerable(&self) -> bool {
        u128::from(self.q).checked_pow((self.m * (self.n - self.k)) as u32).is_some_and(|s| s <= ENUMERATION_CEILING)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Passes the screen and is not MRD.
    Hit,
    /// Passes the screen but is MRD, so its designs are complete.
    Trivial,
    /// Too many distinct dual weights.
    Fail,
    /// Minimum distance not above `t`.
    BelowDistance,
    /// Same Galois orbit as an earlier candidate.
    Duplicate,
}

#[derive(Debug, Clone)]
pub struct SearchRecord {
    pub id: u64,
    pub a: Matrix,
    pub weights: Vec<BigInt>,
    pub dual_weights: Vec<BigInt>,
    pub d: usize,
    pub distinct_dual_weights: usize,
    pub verdict: Verdict,
    pub duplicate_of: Option<u64>,
    /// Result of comparing `dual_weights` with enumeration of the dual code, when sampled.
    pub cross_check: Option<bool>,
    pub certificates: Vec<DesignCertificate>,
    pub micros: u128,
}

impl SearchRecord {
    /// The record line; timing goes to the telemetry file instead.
    #[must_use]
    pub fn to_json(&self, field: &GaloisField) -> Value {
        let mut v = json!({
            "id": self.id,
            "a": self.a.iter().map(|r| r.iter().map(|&x| field.format_elem(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "weights": self.weights.iter().map(bigint_json).collect::<Vec<_>>(),
            "dual_weights": self.dual_weights.iter().map(bigint_json).collect::<Vec<_>>(),
            "d": self.d,
            "distinct_dual_weights": self.distinct_dual_weights,
            "verdict": self.verdict,
            "trivial": self.verdict == Verdict::Trivial,
        });
        if let Some(of) = self.duplicate_of {
            v["duplicate_of"] = json!(of);
        }
        if let Some(ok) = self.cross_check {
            v["cross_check"] = json!(ok);
        }
        if !self.certificates.is_empty() {
            v["certificates"] = Value::Array(self.certificates.iter().map(DesignCertificate::to_json).collect());
        }
        v
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchSummary {
    pub field: String,
    pub records: u64,
    pub hits: u64,
    pub trivial: u64,
    pub fails: u64,
    pub below_distance: u64,
    pub duplicates: u64,
    pub cross_validated: u64,
    pub cross_mismatches: u64,
    pub hit_ids: Vec<u64>,
    pub elapsed_secs: f64,
}

/// `A` for candidate `index`: `k × (n - k)` entries drawn uniformly from `F_{q^m}`.
#[must_use]
pub fn sample_matrix(field: &GaloisField, k: usize, cols: usize, seed: u64, index: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let order = field.order();
    (0..k).map(|_| (0..cols).map(|_| Elem(rng.gen_range(0..order))).collect()).collect()
}

/// Lexicographically least image of `A` under the entrywise Frobenius powers.
#[must_use]
pub fn dedupe_galois(field: &GaloisField, a: &Matrix) -> Matrix {
    let mut best = a.clone();
    let mut cur = a.clone();
    for _ in 1..field.degree().max(1) {
        cur = cur.iter().map(|r| r.iter().map(|&x| field.frobenius(x)).collect()).collect();
        if cur < best {
            best = cur.clone();
        }
    }
    best
}

/// Size of the Galois orbit of `A`.
#[must_use]
pub fn orbit_size(field: &GaloisField, a: &Matrix) -> usize {
    let mut cur: Matrix = a.iter().map(|r| r.iter().map(|&x| field.frobenius(x)).collect()).collect();
    let mut size = 1;
    while &cur != a {
        cur = cur.iter().map(|r| r.iter().map(|&x| field.frobenius(x)).collect()).collect();
        size += 1;
    }
    size
}

/// The field `F_{q^m}` used by a search.
pub fn search_field(cfg: &SearchConfig) -> Result<Arc<GaloisField>, SearchError> {
    Ok(GaloisField::extension_default(GaloisField::gf(cfg.q)?, cfg.m)?)
}

/// Screens one candidate; hits are certified through [`am_check_code`].
pub fn evaluate(cfg: &SearchConfig, field: &Arc<GaloisField>, id: u64, a: Matrix, cross: bool) -> Result<SearchRecord, SearchError> {
    let start = Instant::now();
    let code = VectorCode::systematic(field.clone(), &a)?;
    let weights = code.weight_distribution()?;
    let qm = BigInt::from(code.qm());
    let dual_weights = dual_weight_distribution(&weights, cfg.q, 1, cfg.k as i64, &qm)?;
    let d = min_distance(&weights).unwrap_or(0);
    let in_range = weights_in_range(&dual_weights, cfg.n, cfg.t);
    let verdict = if d <= cfg.t {
        Verdict::BelowDistance
    } else if in_range.len() + cfg.t > d {
        Verdict::Fail
    } else if is_mrd_params(cfg.k * cfg.m, cfg.n, cfg.m, Some(d)) {
        Verdict::Trivial
    } else {
        Verdict::Hit
    };
    let certificates = if verdict == Verdict::Hit { am_check_code(&Code::Vector(code.clone()), cfg.t)?.certificates } else { Vec::new() };
    let cross_check = if cross { Some(code.dual().weight_distribution()? == dual_weights) } else { None };
    Ok(SearchRecord {
        id,
        a,
        weights,
        dual_weights,
        d,
        distinct_dual_weights: in_range.len(),
        verdict,
        duplicate_of: None,
        cross_check,
        certificates,
        micros: start.elapsed().as_micros(),
    })
}

fn worker_count(cfg: &SearchConfig) -> usize {
    std::env::var("QPM_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .or(cfg.workers)
        .filter(|&w| w > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

struct Sinks {
    records: BufWriter<File>,
    hits: BufWriter<File>,
    telemetry: BufWriter<File>,
}

/// Runs the search, handing every record to `visit` in candidate order, and writes the
/// output files when `cfg.out` is set.
pub fn run_search_with(cfg: &SearchConfig, mut visit: impl FnMut(&SearchRecord)) -> Result<SearchSummary, SearchError> {
    cfg.validate()?;
    let started = Instant::now();
    let field = search_field(cfg)?;
    let mut sinks = match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            Some(Sinks {
                records: BufWriter::new(File::create(dir.join("records.jsonl"))?),
                hits: BufWriter::new(File::create(dir.join("hits.jsonl"))?),
                telemetry: BufWriter::new(File::create(dir.join("telemetry.jsonl"))?),
            })
        }
        None => None,
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(worker_count(cfg)).build().map_err(|e| SearchError::BadConfig(e.to_string()))?;
    let cross_quota = if cfg.dual_enumerable() { cfg.cross_validate as u64 } else { 0 };
    let cross_stride = (cfg.count / cross_quota.max(1)).max(1);
    let cols = cfg.n - cfg.k;
    let mut seen: HashMap<Matrix, u64> = HashMap::new();
    // duplicates are never evaluated, so a sampled slot moves on to the next fresh candidate
    let mut crosses_assigned = 0u64;
    let mut summary = SearchSummary { field: field.spec_string(), ..Default::default() };
    const BATCH: u64 = 256;
    let mut next = 0;
    while next < cfg.count {
        let end = (next + BATCH).min(cfg.count);
        let mut jobs = Vec::with_capacity((end - next) as usize);
        for id in next..end {
            let a = sample_matrix(&field, cfg.k, cols, cfg.seed, id);
            let duplicate_of = if cfg.dedupe {
                let rep = dedupe_galois(&field, &a);
                match seen.get(&rep) {
                    Some(&first) => Some(first),
                    None => {
                        seen.insert(rep, id);
                        None
                    }
                }
            } else {
                None
            };
            let cross = duplicate_of.is_none()
                && crosses_assigned < cross_quota
                && id >= crosses_assigned.saturating_mul(cross_stride);
            crosses_assigned += u64::from(cross);
            jobs.push((id, a, duplicate_of, cross));
        }
        let results: Vec<Result<SearchRecord, SearchError>> = pool.install(|| {
            jobs.into_par_iter()
                .map(|(id, a, duplicate_of, cross)| match duplicate_of {
                    Some(first) => Ok(SearchRecord {
                        id,
                        a,
                        weights: Vec::new(),
                        dual_weights: Vec::new(),
                        d: 0,
                        distinct_dual_weights: 0,
                        verdict: Verdict::Duplicate,
                        duplicate_of: Some(first),
                        cross_check: None,
                        certificates: Vec::new(),
                        micros: 0,
                    }),
                    None => evaluate(cfg, &field, id, a, cross),
                })
                .collect()
        });
        for r in results {
            let r = r?;
            summary.records += 1;
            match r.verdict {
                Verdict::Hit => {
                    summary.hits += 1;
                    summary.hit_ids.push(r.id);
                }
                Verdict::Trivial => summary.trivial += 1,
                Verdict::Fail => summary.fails += 1,
                Verdict::BelowDistance => summary.below_distance += 1,
                Verdict::Duplicate => summary.duplicates += 1,
            }
            if let Some(ok) = r.cross_check {
                summary.cross_validated += 1;
                summary.cross_mismatches += u64::from(!ok);
            }
            if let Some(s) = sinks.as_mut() {
                let line = r.to_json(&field).to_string();
                writeln!(s.records, "{line}")?;
                if r.verdict == Verdict::Hit {
                    writeln!(s.hits, "{line}")?;
                }
                writeln!(s.telemetry, "{}", json!({ "id": r.id, "micros": r.micros as u64 }))?;
            }
            visit(&r);
        }
        if let Some(s) = sinks.as_mut() {
            s.records.flush()?;
            s.hits.flush()?;
            s.telemetry.flush()?;
        }
        next = end;
    }
    summary.elapsed_secs = started.elapsed().as_secs_f64();
    if let Some(dir) = &cfg.out {
        let body = json!({ "config": cfg, "summary": summary });
        fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&body).map_err(|e| SearchError::BadConfig(e.to_string()))? + "\n")?;
    }
    Ok(summary)
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchSummary, SearchError> {
    run_search_with(cfg, |_| {})
}
