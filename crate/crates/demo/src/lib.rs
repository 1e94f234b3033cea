//! Browser front end for hermcap. Each exported function returns a JSON
//! string; the plain-Rust versions are exported too so they can be tested
//! natively.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use hermcap::harness::{emit_histogram, run_spectrum, Format, SeedSpec};
use hermcap::search::{complete_with_rng, sample_subcap};
use hermcap::{CapState, SearchConfig, SplitMix64, StrategyKind, SurfaceModel};

/// Largest q the page offers; q=7 already needs about 30 MB of tangent sets.
pub const MAX_Q: u32 = 7;
pub const MAX_RUNS: u64 = 5000;

thread_local! {
    static MODELS: RefCell<HashMap<u32, Rc<SurfaceModel>>> = RefCell::new(HashMap::new());
}

fn model(q: u32) -> Result<Rc<SurfaceModel>, String> {
    if q > MAX_Q {
        return Err(format!(
            "q = {q} is too large for the demo (at most {MAX_Q})"
        ));
    }
    if let Some(m) = MODELS.with(|c| c.borrow().get(&q).cloned()) {
        return Ok(m);
    }
    let m = Rc::new(SurfaceModel::for_q(q).map_err(|e| e.to_string())?);
    MODELS.with(|c| c.borrow_mut().insert(q, m.clone()));
    Ok(m)
}

fn strategy(name: &str) -> Result<StrategyKind, String> {
    name.parse::<StrategyKind>().map_err(|e| e.to_string())
}

fn seed_spec(seed_size: u32) -> SeedSpec {
    if seed_size == 0 {
        SeedSpec::Empty
    } else {
        SeedSpec::SubOvoid(seed_size as usize)
    }
}

#[derive(Serialize)]
struct SurfaceInfo {
    q: u32,
    points: usize,
    gx: usize,
    generators: usize,
    points_per_generator: usize,
    ovoid: usize,
}

/// Counts for the surface over GF(q²).
pub fn surface_info_json(q: u32) -> Result<String, String> {
    let m = model(q)?;
    let qq = q as usize;
    let info = SurfaceInfo {
        q,
        points: m.len(),
        gx: m.gx_len(),
        generators: (qq * qq * qq + 1) * (qq + 1),
        points_per_generator: qq * qq + 1,
        ovoid: m.canonical_ovoid().len(),
    };
    serde_json::to_string(&info).map_err(|e| e.to_string())
}

/// Size histogram of `runs` completions; `seed_size` 0 means the empty seed.
pub fn spectrum_json(
    q: u32,
    strategy_name: &str,
    seed_size: u32,
    runs: u32,
    master: u64,
) -> Result<String, String> {
    if runs == 0 || runs as u64 > MAX_RUNS {
        return Err(format!("runs must be between 1 and {MAX_RUNS}"));
    }
    let m = model(q)?;
    let config = SearchConfig::new(strategy(strategy_name)?, 0);
    let (hist, _) = run_spectrum(&m, &seed_spec(seed_size), &config, runs as u64, master, 1)
        .map_err(|e| e.to_string())?;
    let bytes = emit_histogram(&hist, Format::Json).map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct TracePoint {
    cap_size: usize,
    relevance: u32,
    covered: usize,
    r_min: Option<u32>,
    r_max: Option<u32>,
}

#[derive(Serialize)]
struct Trace {
    q: u32,
    strategy: String,
    seed_size: usize,
    final_size: usize,
    is_ovoid: bool,
    total_points: usize,
    steps: Vec<TracePoint>,
}

/// One completion with the relevance of every added point and the coverage
/// and relevance range after each step.
pub fn completion_trace_json(
    q: u32,
    strategy_name: &str,
    seed_size: u32,
    seed: u64,
) -> Result<String, String> {
    let m = model(q)?;
    let kind = strategy(strategy_name)?;
    let mut rng = SplitMix64::new(seed);
    let start = if seed_size == 0 {
        Vec::new()
    } else {
        sample_subcap(&m.canonical_ovoid(), seed_size as usize, &mut rng)
            .map_err(|e| e.to_string())?
    };
    let config = SearchConfig::new(kind, seed).with_trace();
    let outcome = complete_with_rng(&m, &start, &config, &mut rng).map_err(|e| e.to_string())?;

    let mut replay = CapState::from_points(&m, &start, true).map_err(|e| e.to_string())?;
    let mut steps = Vec::with_capacity(outcome.trace.len());
    for step in &outcome.trace {
        if replay.contains(step.point) || replay.is_covered(step.point) {
            // backtracking rewrites the cap; show its additions without replay
            steps.push(TracePoint {
                cap_size: step.cap_size,
                relevance: step.relevance,
                covered: 0,
                r_min: None,
                r_max: None,
            });
            continue;
        }
        replay.add_point(step.point).map_err(|e| e.to_string())?;
        let extrema = replay.r_extrema();
        steps.push(TracePoint {
            cap_size: step.cap_size,
            relevance: step.relevance,
            covered: replay.covered_count(),
            r_min: extrema.map(|e| e.0),
            r_max: extrema.map(|e| e.1),
        });
    }
    let trace = Trace {
        q,
        strategy: kind.to_string(),
        seed_size: start.len(),
        final_size: outcome.size(),
        is_ovoid: outcome.is_ovoid,
        total_points: m.len(),
        steps,
    };
    serde_json::to_string(&trace).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn surface_info(q: u32) -> Result<String, JsError> {
    surface_info_json(q).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn spectrum(
    q: u32,
    strategy: &str,
    seed_size: u32,
    runs: u32,
    master: u64,
) -> Result<String, JsError> {
    spectrum_json(q, strategy, seed_size, runs, master).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn completion_trace(
    q: u32,
    strategy: &str,
    seed_size: u32,
    seed: u64,
) -> Result<String, JsError> {
    completion_trace_json(q, strategy, seed_size, seed).map_err(|e| JsError::new(&e))
}
