use crate::capstate::CapState;
use crate::error::{Error, Result};
use crate::hermitian::{PointId, SurfaceModel};
use crate::rng::SplitMix64;

use super::{pick_best, Run, SearchConfig, SearchOutcome, TieMode};

/// Chooses the next point by one-step lookahead.
///
/// If some uncovered point has relevance 1, one of those is returned.
/// Otherwise every uncovered candidate t is tried: with C₀ = C ∪ {t}, the
/// score of t is the number of uncovered points of C₀ whose relevance equals
/// r⁻(C₀) (zero when C₀ is already complete). The best score under the tie
/// mode wins; equal scores are broken at random.
///
/// The cap must track relevance; it is returned to its original member set.
pub fn select_forward(
    cap: &mut CapState,
    config: &SearchConfig,
    rng: &mut SplitMix64,
) -> Result<PointId> {
    let (r_min, _) = cap
        .min_relevance_count()
        .ok_or_else(|| Error::Argument("cap is already complete".into()))?;
    if r_min == 1 {
        let ones = cap.uncovered_with_relevance(1);
        return Ok(*rng.choose(&ones));
    }

    let mut candidates = cap.uncovered_sorted();
    if let Some(limit) = config.candidate_cap {
        if candidates.len() > limit {
            rng.partial_shuffle(&mut candidates, limit);
            candidates.truncate(limit);
            candidates.sort_unstable();
        }
    }

    let mut scores = Vec::with_capacity(candidates.len());
    for &t in &candidates {
        cap.add_point(t)?;
        let count = cap.min_relevance_count().map_or(0, |(_, n)| n);
        cap.remove_point(t)?;
        scores.push(count as f64);
    }
    let pick = match config.forward_tie_mode {
        TieMode::MaxCount => pick_best(&candidates, &scores, |a, b| a > b, rng),
        TieMode::MinCount => pick_best(&candidates, &scores, |a, b| a < b, rng),
    };
    Ok(pick.expect("incomplete cap has uncovered candidates"))
}

/// Completes a cap by repeated forward selection.
pub fn complete_forward(
    model: &SurfaceModel,
    seed_cap: &[PointId],
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    let mut rng = SplitMix64::new(config.rng_seed);
    run(model, seed_cap, config, &mut rng)
}

pub(super) fn run(
    model: &SurfaceModel,
    seed_cap: &[PointId],
    config: &SearchConfig,
    rng: &mut SplitMix64,
) -> Result<SearchOutcome> {
    let mut run = Run::new(model, seed_cap, true, config, rng)?;
    while !run.cap.is_complete() {
        let x = select_forward(&mut run.cap, config, run.rng)?;
        run.push(x)?;
    }
    Ok(run.finish())
}
