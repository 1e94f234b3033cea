use crate::error::Result;
use crate::hermitian::{PointId, SurfaceModel};
use crate::rng::SplitMix64;

use super::{Run, SearchConfig, SearchOutcome};

/// Biased completion: always add an uncovered point of minimal relevance,
/// breaking ties uniformly at random.
pub fn complete_min_relevance(
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
    let q = model.q() as usize;
    while let Some((r_min, _)) = run.cap.min_relevance_count() {
        // A relevance-1 point forces at least q² members.
        debug_assert!(r_min != 1 || run.cap.is_empty() || run.cap.len() >= q * q);
        let candidates = run.cap.uncovered_with_relevance(r_min);
        let x = *run.rng.choose(&candidates);
        run.push(x)?;
    }
    Ok(run.finish())
}
