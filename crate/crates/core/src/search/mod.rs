//! Completion strategies: grow a cap until every point of U is covered.

mod backtrack;
mod forward;
mod ovoid;
mod random;
mod relevance;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::capstate::CapState;
use crate::error::{Error, Result};
use crate::hermitian::{PointId, SurfaceModel};
use crate::rng::SplitMix64;

pub use backtrack::backtrack_enlarge;
pub use forward::{complete_forward, select_forward};
pub use ovoid::{sample_subcap, thin_ovoid, ThinnedOvoid};
pub use random::complete_random;
pub use relevance::complete_min_relevance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    /// Uniformly random uncovered point at each step.
    Random,
    /// Uncovered point of minimal relevance, ties at random.
    MinRelevance,
    /// One-step lookahead on the number of minimal-relevance points.
    Forward,
    /// Random completion followed by replacement of high-relevance points.
    Backtrack,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::Random,
        StrategyKind::MinRelevance,
        StrategyKind::Forward,
        StrategyKind::Backtrack,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Random => "random",
            StrategyKind::MinRelevance => "min-relevance",
            StrategyKind::Forward => "forward",
            StrategyKind::Backtrack => "backtrack",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown strategy `{s}`")))
    }
}

/// How the forward search ranks candidates by their count of
/// minimal-relevance points after insertion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieMode {
    /// Prefer the candidate leaving the most minimal-relevance points.
    #[default]
    MaxCount,
    /// Prefer the candidate leaving the fewest.
    MinCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub strategy: StrategyKind,
    pub rng_seed: u64,
    pub forward_tie_mode: TieMode,
    /// Maximum number of removals per backtracking attempt; `None` means q.
    pub backtrack_max_depth: Option<usize>,
    /// Subsample the forward-search candidates down to this many.
    pub candidate_cap: Option<usize>,
    pub record_trace: bool,
}

impl SearchConfig {
    pub fn new(strategy: StrategyKind, rng_seed: u64) -> Self {
        SearchConfig {
            strategy,
            rng_seed,
            forward_tie_mode: TieMode::MaxCount,
            backtrack_max_depth: None,
            candidate_cap: None,
            record_trace: false,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }

    pub(crate) fn depth(&self, model: &SurfaceModel) -> usize {
        self.backtrack_max_depth
            .unwrap_or(model.q() as usize)
            .max(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub point: PointId,
    /// r(point, C) just before the point joined C.
    pub relevance: u32,
    pub cap_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Sorted members of the complete cap.
    pub final_cap: Vec<PointId>,
    pub is_ovoid: bool,
    /// Number of points added.
    pub iterations: usize,
    pub trace: Vec<TraceStep>,
}

impl SearchOutcome {
    pub(crate) fn from_cap(cap: &CapState, iterations: usize, trace: Vec<TraceStep>) -> Self {
        debug_assert!(cap.is_complete());
        let final_cap = cap.sorted_members();
        let is_ovoid = final_cap.len() == cap.model().ovoid_size();
        SearchOutcome {
            final_cap,
            is_ovoid,
            iterations,
            trace,
        }
    }

    pub fn size(&self) -> usize {
        self.final_cap.len()
    }
}

/// Completion state shared by the strategies: the growing cap, the run's
/// RNG and the bookkeeping for the outcome.
pub(crate) struct Run<'a, 'm> {
    pub cap: CapState<'m>,
    pub rng: &'a mut SplitMix64,
    pub iterations: usize,
    pub trace: Option<Vec<TraceStep>>,
}

impl<'a, 'm> Run<'a, 'm> {
    pub fn new(
        model: &'m SurfaceModel,
        seed: &[PointId],
        tracking: bool,
        config: &SearchConfig,
        rng: &'a mut SplitMix64,
    ) -> Result<Self> {
        model.check_cap(seed)?;
        Ok(Run {
            cap: CapState::from_points(model, seed, tracking)?,
            rng,
            iterations: 0,
            trace: config.record_trace.then(Vec::new),
        })
    }

    pub fn push(&mut self, x: PointId) -> Result<()> {
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceStep {
                point: x,
                relevance: self.cap.relevance(x),
                cap_size: self.cap.len(),
            });
        }
        self.cap.add_point(x)?;
        self.iterations += 1;
        Ok(())
    }

    pub fn finish(self) -> SearchOutcome {
        SearchOutcome::from_cap(&self.cap, self.iterations, self.trace.unwrap_or_default())
    }
}

/// Runs the configured strategy with an RNG seeded from `config.rng_seed`.
pub fn complete(
    model: &SurfaceModel,
    seed: &[PointId],
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    let mut rng = SplitMix64::new(config.rng_seed);
    complete_with_rng(model, seed, config, &mut rng)
}

/// Runs the configured strategy, drawing from a caller-owned RNG.
pub fn complete_with_rng(
    model: &SurfaceModel,
    seed: &[PointId],
    config: &SearchConfig,
    rng: &mut SplitMix64,
) -> Result<SearchOutcome> {
    match config.strategy {
        StrategyKind::Random => random::run(model, seed, config, rng),
        StrategyKind::MinRelevance => relevance::run(model, seed, config, rng),
        StrategyKind::Forward => forward::run(model, seed, config, rng),
        StrategyKind::Backtrack => backtrack::run(model, seed, config, rng),
    }
}

/// Picks uniformly among the indices whose score ties the best one.
pub(crate) fn pick_best<T: Copy>(
    items: &[T],
    scores: &[f64],
    better: impl Fn(f64, f64) -> bool,
    rng: &mut SplitMix64,
) -> Option<T> {
    const TOL: f64 = 1e-9;
    let mut best: Option<f64> = None;
    let mut tied: Vec<T> = Vec::new();
    for (&item, &s) in items.iter().zip(scores) {
        match best {
            Some(b) if (s - b).abs() <= TOL => tied.push(item),
            Some(b) if !better(s, b) => {}
            _ => {
                best = Some(s);
                tied.clear();
                tied.push(item);
            }
        }
    }
    (!tied.is_empty()).then(|| *rng.choose(&tied))
}
