use crate::error::Result;
use crate::hermitian::{PointId, SurfaceModel};
use crate::rng::SplitMix64;

use super::{Run, SearchConfig, SearchOutcome};

/// Basic completion: add uniformly random uncovered points until none is
/// left, stopping early once the cap reaches ovoid size q³+1.
pub fn complete_random(
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
    let mut run = Run::new(model, seed_cap, false, config, rng)?;
    extend_randomly(&mut run)?;
    Ok(run.finish())
}

pub(super) fn extend_randomly(run: &mut Run) -> Result<()> {
    let ovoid = run.cap.model().ovoid_size();
    while !run.cap.is_complete() && run.cap.len() < ovoid {
        let x = *run.rng.choose(run.cap.uncovered());
        run.push(x)?;
    }
    Ok(())
}
