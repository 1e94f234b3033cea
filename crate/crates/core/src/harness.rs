//! Seeded batch experiments over the sizes of completed caps.
//!
//! Run i draws everything from `SplitMix64::new(derive_seed(master, i))`:
//! first the sub-ovoid sample (if any), then the strategy's choices. Runs
//! are independent, so the records do not depend on the worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{PointId, SurfaceModel};
use crate::rng::{derive_seed, SplitMix64};
use crate::search::{complete_with_rng, sample_subcap, SearchConfig, StrategyKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedSpec {
    Empty,
    /// A fresh uniform n-subset of the canonical ovoid for every run.
    SubOvoid(usize),
    /// The same fixed cap for every run.
    FromFile {
        path: String,
        points: Vec<PointId>,
    },
}

impl SeedSpec {
    pub fn describe(&self) -> String {
        match self {
            SeedSpec::Empty => "empty".into(),
            SeedSpec::SubOvoid(n) => format!("sub-ovoid({n})"),
            SeedSpec::FromFile { path, .. } => format!("file({path})"),
        }
    }

    fn validate(&self, model: &SurfaceModel) -> Result<()> {
        match self {
            SeedSpec::SubOvoid(n) if *n > model.ovoid_size() => Err(Error::Argument(format!(
                "sub-ovoid size {n} exceeds q³+1 = {}",
                model.ovoid_size()
            ))),
            SeedSpec::FromFile { points, .. } => model.check_cap(points),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_index: u64,
    pub derived_seed: u64,
    pub strategy: StrategyKind,
    pub input_size: usize,
    pub final_size: usize,
    pub is_ovoid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub size: usize,
    pub count: u64,
    pub percent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub q: u32,
    pub strategy: StrategyKind,
    pub seed_spec: String,
    pub total_runs: u64,
    pub counts: BTreeMap<usize, u64>,
}

impl Histogram {
    pub fn from_records(
        q: u32,
        strategy: StrategyKind,
        seed_spec: &SeedSpec,
        records: &[RunRecord],
    ) -> Self {
        let mut counts = BTreeMap::new();
        for r in records {
            *counts.entry(r.final_size).or_insert(0) += 1;
        }
        Histogram {
            q,
            strategy,
            seed_spec: seed_spec.describe(),
            total_runs: records.len() as u64,
            counts,
        }
    }

    /// Rows sorted by size, with full-precision percentages.
    pub fn rows(&self) -> Vec<HistogramRow> {
        self.counts
            .iter()
            .map(|(&size, &count)| HistogramRow {
                size,
                count,
                percent: 100.0 * count as f64 / self.total_runs as f64,
            })
            .collect()
    }

    pub fn mean(&self) -> f64 {
        let total: f64 = self.counts.iter().map(|(&s, &c)| s as f64 * c as f64).sum();
        total / self.total_runs as f64
    }

    /// Most frequent sizes (several on ties).
    pub fn modes(&self) -> Vec<usize> {
        let best = self.counts.values().copied().max().unwrap_or(0);
        self.counts
            .iter()
            .filter(|&(_, &c)| c == best)
            .map(|(&s, _)| s)
            .collect()
    }

    pub fn fraction_of(&self, size: usize) -> f64 {
        self.counts.get(&size).copied().unwrap_or(0) as f64 / self.total_runs as f64
    }

    pub fn ovoid_rate(&self) -> f64 {
        self.fraction_of((self.q * self.q * self.q + 1) as usize)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Argument(format!("unknown format `{other}`"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// CSV: `size,count,percent` with one-decimal percentages. JSON: the whole
/// histogram plus full-precision rows.
pub fn emit_histogram(h: &Histogram, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["size", "count", "percent"])?;
            for row in h.rows() {
                w.write_record([
                    row.size.to_string(),
                    row.count.to_string(),
                    format!("{:.1}", row.percent),
                ])?;
            }
            w.into_inner().map_err(|e| Error::Io(e.into_error()))
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                histogram: &'a Histogram,
                rows: Vec<HistogramRow>,
            }
            let mut out = serde_json::to_vec_pretty(&Doc {
                histogram: h,
                rows: h.rows(),
            })?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

/// Parses the CSV written by [`emit_histogram`].
pub fn parse_histogram_csv(bytes: &[u8]) -> Result<Vec<HistogramRow>> {
    let mut r = csv::Reader::from_reader(bytes);
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// One JSON object per line, ordered by run index. Timings are left out
/// unless asked for, so logs from different worker counts compare equal.
pub fn write_run_log<W: Write>(
    records: &[RunRecord],
    include_timing: bool,
    mut out: W,
) -> Result<()> {
    for r in records {
        let mut r = r.clone();
        if !include_timing {
            r.wall_time_ms = None;
        }
        serde_json::to_writer(&mut out, &r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn run_one(
    model: &SurfaceModel,
    seed_spec: &SeedSpec,
    template: &SearchConfig,
    canonical_ovoid: &[PointId],
    master_seed: u64,
    run_index: u64,
) -> Result<RunRecord> {
    #[cfg(not(target_arch = "wasm32"))]
    let start = std::time::Instant::now();

    let derived = derive_seed(master_seed, run_index);
    let mut rng = SplitMix64::new(derived);
    let seed = match seed_spec {
        SeedSpec::Empty => Vec::new(),
        SeedSpec::SubOvoid(n) => sample_subcap(canonical_ovoid, *n, &mut rng)?,
        SeedSpec::FromFile { points, .. } => points.clone(),
    };
    let config = SearchConfig {
        rng_seed: derived,
        ..template.clone()
    };
    let outcome = complete_with_rng(model, &seed, &config, &mut rng)?;

    #[cfg(not(target_arch = "wasm32"))]
    let wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    #[cfg(target_arch = "wasm32")]
    let wall_time_ms = None;

    Ok(RunRecord {
        run_index,
        derived_seed: derived,
        strategy: template.strategy,
        input_size: seed.len(),
        final_size: outcome.size(),
        is_ovoid: outcome.is_ovoid,
        wall_time_ms,
    })
}

/// Runs `n_runs` seeded completions on `jobs` workers.
pub fn run_spectrum(
    model: &SurfaceModel,
    seed_spec: &SeedSpec,
    template: &SearchConfig,
    n_runs: u64,
    master_seed: u64,
    jobs: usize,
) -> Result<(Histogram, Vec<RunRecord>)> {
    if n_runs == 0 {
        return Err(Error::Argument("at least one run is required".into()));
    }
    seed_spec.validate(model)?;
    let ovoid = model.canonical_ovoid();
    let one = |i: u64| run_one(model, seed_spec, template, &ovoid, master_seed, i);

    let records: Vec<RunRecord> = if jobs > 1 {
        parallel_runs(n_runs, jobs, &one)?
    } else {
        (0..n_runs).map(one).collect::<Result<_>>()?
    };
    let histogram = Histogram::from_records(model.q(), template.strategy, seed_spec, &records);
    Ok((histogram, records))
}

#[cfg(feature = "parallel")]
fn parallel_runs(
    n_runs: u64,
    jobs: usize,
    one: &(dyn Fn(u64) -> Result<RunRecord> + Sync),
) -> Result<Vec<RunRecord>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Argument(format!("cannot start {jobs} workers: {e}")))?;
    pool.install(|| (0..n_runs).into_par_iter().map(one).collect())
}

#[cfg(not(feature = "parallel"))]
fn parallel_runs(
    n_runs: u64,
    _jobs: usize,
    one: &(dyn Fn(u64) -> Result<RunRecord> + Sync),
) -> Result<Vec<RunRecord>> {
    (0..n_runs).map(one).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub q: u32,
    /// (run index, size) of every complete cap with q³−q+1 < size < q³+1.
    pub violations: Vec<(u64, usize)>,
}

impl GapReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Flags complete caps strictly between q³−q+1 and q³+1.
pub fn gap_check(q: u32, records: &[RunRecord]) -> GapReport {
    let q = q as usize;
    let lo = q * q * q - q + 1;
    let hi = q * q * q + 1;
    GapReport {
        q: q as u32,
        violations: records
            .iter()
            .filter(|r| r.final_size > lo && r.final_size < hi)
            .map(|r| (r.run_index, r.final_size))
            .collect(),
    }
}
