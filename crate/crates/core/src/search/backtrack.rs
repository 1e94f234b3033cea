use crate::capstate::CapState;
use crate::error::{Error, Result};
use crate::hermitian::{PointId, SurfaceModel};
use crate::rng::SplitMix64;

use super::{pick_best, random, Run, SearchConfig, SearchOutcome};

/// Tries to replace members of a complete cap to reach a larger one.
///
/// Removes the unprotected member p maximizing r(p, C∖{p}) =: M. If some
/// uncovered point now has relevance below M, the one of least relevance is
/// added and the cap is completed by repeatedly adding the uncovered point
/// of least weight w(x, C∪{x}). Otherwise the step recurses on the smaller
/// cap, up to the configured number of removals. The larger-or-equal result
/// is returned; when no replacement succeeds the input cap comes back.
pub fn backtrack_enlarge(
    model: &SurfaceModel,
    protected_seed: &[PointId],
    complete_cap: &[PointId],
    config: &SearchConfig,
    rng: &mut SplitMix64,
) -> Result<SearchOutcome> {
    model.check_cap(complete_cap)?;
    let mut protected = vec![false; model.len()];
    for &p in protected_seed {
        if !complete_cap.contains(&p) {
            return Err(Error::Argument(format!("seed point {p} is not in the cap")));
        }
        protected[p.index()] = true;
    }
    let cap = CapState::from_points(model, complete_cap, true)?;
    if !cap.is_complete() {
        return Err(Error::Argument("backtracking needs a complete cap".into()));
    }

    let mut run = Run {
        cap,
        rng,
        iterations: 0,
        trace: config.record_trace.then(Vec::new),
    };
    let improved = large_cap(&mut run, &protected, 0, config.depth(model))?;
    if improved && run.cap.len() >= complete_cap.len() {
        return Ok(run.finish());
    }
    let mut input = complete_cap.to_vec();
    input.sort_unstable();
    let is_ovoid = input.len() == model.ovoid_size();
    Ok(SearchOutcome {
        final_cap: input,
        is_ovoid,
        iterations: 0,
        trace: Vec::new(),
    })
}

fn large_cap(run: &mut Run, protected: &[bool], depth: usize, max_depth: usize) -> Result<bool> {
    if depth >= max_depth {
        return Ok(false);
    }
    let removable: Vec<PointId> = run
        .cap
        .members()
        .iter()
        .copied()
        .filter(|p| !protected[p.index()])
        .collect();
    if removable.is_empty() {
        return Ok(false);
    }
    let scores = removable
        .iter()
        .map(|&t| run.cap.relevance_without(t).map(|r| r as f64))
        .collect::<Result<Vec<_>>>()?;
    let p = pick_best(&removable, &scores, |a, b| a > b, run.rng).unwrap();
    let max_rel = scores.iter().copied().fold(0.0, f64::max) as u32;
    run.cap.remove_point(p)?;

    let (r_min, _) = run.cap.min_relevance_count().expect("removal uncovers p");
    if r_min < max_rel {
        let candidates = run.cap.uncovered_with_relevance(r_min);
        let x = *run.rng.choose(&candidates);
        run.push(x)?;
        extend_by_weight(run)?;
        return Ok(true);
    }
    if large_cap(run, protected, depth + 1, max_depth)? {
        extend_by_weight(run)?;
        return Ok(true);
    }
    run.cap.add_point(p)?;
    Ok(false)
}

/// Completes the cap by always adding the uncovered x minimizing w(x, C∪{x}).
fn extend_by_weight(run: &mut Run) -> Result<()> {
    while !run.cap.is_complete() {
        let candidates = run.cap.uncovered_sorted();
        let weights: Vec<f64> = candidates
            .iter()
            .map(|&x| run.cap.weight_if_added(x))
            .collect();
        let x = pick_best(&candidates, &weights, |a, b| a < b, run.rng).unwrap();
        run.push(x)?;
    }
    Ok(())
}

/// Random completion, then backtracking for as long as it strictly grows the cap.
pub(super) fn run(
    model: &SurfaceModel,
    seed_cap: &[PointId],
    config: &SearchConfig,
    rng: &mut SplitMix64,
) -> Result<SearchOutcome> {
    let mut first = Run::new(model, seed_cap, false, config, rng)?;
    random::extend_randomly(&mut first)?;
    let mut iterations = first.iterations;
    let mut trace = first.trace.take().unwrap_or_default();
    let mut current = first.cap.sorted_members();
    let rng = first.rng;

    let mut seed = seed_cap.to_vec();
    seed.sort_unstable();
    loop {
        let next = backtrack_enlarge(model, &seed, &current, config, rng)?;
        if next.final_cap.len() <= current.len() {
            break;
        }
        iterations += next.iterations;
        trace.extend(next.trace);
        current = next.final_cap;
    }
    let is_ovoid = current.len() == model.ovoid_size();
    Ok(SearchOutcome {
        final_cap: current,
        is_ovoid,
        iterations,
        trace,
    })
}
