use crate::capstate::CapState;
use crate::error::{Error, Result};
use crate::hermitian::{PointId, SurfaceModel};
use crate::rng::SplitMix64;

const THIN_ATTEMPTS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinnedOvoid {
    /// O∖Ω, sorted.
    pub kept: Vec<PointId>,
    /// Ω, sorted.
    pub removed: Vec<PointId>,
    /// Ω₀, Ω₁, …, Ω_{q−1} in construction order; Ωᵢ has q−i points.
    pub layers: Vec<Vec<PointId>>,
    /// The witness Pᵢ off the ovoid behind each layer.
    pub witnesses: Vec<PointId>,
}

/// Removes q(q+1)/2 points from an ovoid so that the ovoid is still the
/// only complete cap containing what is left.
///
/// Layer i picks a witness Pᵢ off the ovoid, still covered by at least
/// q+1−i kept points, and removes q−i of those. Choices that would leave
/// some point off the ovoid uncovered are rejected and redrawn, so every
/// point of U∖O stays covered by the kept points and the only uncovered
/// points are the removed ones.
pub fn thin_ovoid(
    model: &SurfaceModel,
    ovoid: &[PointId],
    rng: &mut SplitMix64,
) -> Result<ThinnedOvoid> {
    let expected = model.ovoid_size();
    let mut sorted = ovoid.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != expected || !model.is_cap(&sorted) {
        return Err(Error::NotAnOvoid {
            size: ovoid.len(),
            expected,
        });
    }
    let q = model.q() as usize;
    let mut in_ovoid = vec![false; model.len()];
    for p in &sorted {
        in_ovoid[p.index()] = true;
    }
    let off: Vec<PointId> = model.ids().filter(|p| !in_ovoid[p.index()]).collect();

    for _ in 0..THIN_ATTEMPTS {
        let mut kept = in_ovoid.clone();
        // Kept coverers of each point off the ovoid; q+1 to begin with.
        let mut cover = vec![0u32; model.len()];
        for &y in &off {
            cover[y.index()] = q as u32 + 1;
        }
        let mut layers = Vec::with_capacity(q);
        let mut witnesses = Vec::with_capacity(q);
        let mut used = vec![false; model.len()];

        for i in 0..q {
            let need = q - i;
            let mut order = off.clone();
            let tries = order.len().min(64);
            rng.partial_shuffle(&mut order, tries);
            let mut placed = false;
            for &w in &order[..tries] {
                if used[w.index()] || (cover[w.index()] as usize) < q + 1 - i {
                    continue;
                }
                let mut coverers: Vec<PointId> = model
                    .tangent_set(w)
                    .iter()
                    .copied()
                    .filter(|p| kept[p.index()])
                    .collect();
                rng.partial_shuffle(&mut coverers, need);
                coverers.truncate(need);
                if remove_keeps_coverage(model, &coverers, &in_ovoid, &mut cover) {
                    for p in &coverers {
                        kept[p.index()] = false;
                    }
                    used[w.index()] = true;
                    coverers.sort_unstable();
                    layers.push(coverers);
                    witnesses.push(w);
                    placed = true;
                    break;
                }
            }
            if !placed {
                break;
            }
        }
        if layers.len() == q {
            let mut removed: Vec<PointId> = layers.iter().flatten().copied().collect();
            removed.sort_unstable();
            let kept: Vec<PointId> = sorted.iter().copied().filter(|p| kept[p.index()]).collect();
            debug_assert_eq!(removed.len(), q * (q + 1) / 2);
            debug_assert!({
                let cap = CapState::from_points(model, &kept, false).unwrap();
                cap.uncovered_sorted() == removed
            });
            return Ok(ThinnedOvoid {
                kept,
                removed,
                layers,
                witnesses,
            });
        }
    }
    Err(Error::Argument(
        "could not thin the ovoid while keeping U∖O covered".into(),
    ))
}

/// Decrements coverage for the removed points; rolls back and returns false
/// if some point off the ovoid would lose its last kept coverer.
fn remove_keeps_coverage(
    model: &SurfaceModel,
    removed: &[PointId],
    in_ovoid: &[bool],
    cover: &mut [u32],
) -> bool {
    let mut touched = Vec::new();
    let mut ok = true;
    'outer: for &o in removed {
        for &y in model.tangent_set(o).iter() {
            if in_ovoid[y.index()] {
                continue;
            }
            cover[y.index()] -= 1;
            touched.push(y);
            if cover[y.index()] == 0 {
                ok = false;
                break 'outer;
            }
        }
    }
    if !ok {
        for y in touched {
            cover[y.index()] += 1;
        }
    }
    ok
}

/// Uniformly random n-subset of `points`, sorted.
pub fn sample_subcap(points: &[PointId], n: usize, rng: &mut SplitMix64) -> Result<Vec<PointId>> {
    if n > points.len() {
        return Err(Error::Argument(format!(
            "cannot sample {n} points from a set of {}",
            points.len()
        )));
    }
    let mut pool = points.to_vec();
    rng.partial_shuffle(&mut pool, n);
    pool.truncate(n);
    pool.sort_unstable();
    Ok(pool)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thinning_sizes_and_disjoint_layers() {
        for (q, removed) in [(2u32, 3usize), (3, 6), (5, 15)] {
            let m = SurfaceModel::for_q(q).unwrap();
            let ovoid = m.canonical_ovoid();
            for seed in 0..5 {
                let t = thin_ovoid(&m, &ovoid, &mut SplitMix64::new(seed)).unwrap();
                assert_eq!(t.removed.len(), removed);
                assert_eq!(t.kept.len(), ovoid.len() - removed);
                for (i, layer) in t.layers.iter().enumerate() {
                    assert_eq!(layer.len(), q as usize - i);
                    for other in &t.layers[i + 1..] {
                        assert!(layer.iter().all(|p| !other.contains(p)));
                    }
                }
                let cap = CapState::from_points(&m, &t.kept, false).unwrap();
                assert_eq!(cap.uncovered_sorted(), t.removed);
            }
        }
    }

    #[test]
    fn thinning_rejects_non_ovoids() {
        let m = SurfaceModel::for_q(2).unwrap();
        let ovoid = m.canonical_ovoid();
        let err = thin_ovoid(&m, &ovoid[1..], &mut SplitMix64::new(0));
        assert!(matches!(err, Err(Error::NotAnOvoid { .. })));
    }

    #[test]
    fn sampling_edge_cases() {
        let m = SurfaceModel::for_q(5).unwrap();
        let ovoid = m.canonical_ovoid();
        let mut rng = SplitMix64::new(4);
        assert_eq!(sample_subcap(&ovoid, ovoid.len(), &mut rng).unwrap(), ovoid);
        assert!(sample_subcap(&ovoid, 0, &mut rng).unwrap().is_empty());
        assert!(sample_subcap(&ovoid, 127, &mut rng).is_err());
        let s = sample_subcap(&ovoid, 69, &mut rng).unwrap();
        assert_eq!(s.len(), 69);
        assert!(m.is_cap(&s));
        let again = sample_subcap(&ovoid, 69, &mut SplitMix64::new(4)).unwrap();
        let first = sample_subcap(&ovoid, 69, &mut SplitMix64::new(4)).unwrap();
        assert_eq!(again, first);
    }
}
