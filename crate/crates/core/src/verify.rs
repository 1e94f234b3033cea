//! Invariant suite run by `hermcap verify`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::capfile::CapFile;
use crate::capstate::CapState;
use crate::hermitian::{PointId, SurfaceModel};
use crate::rng::SplitMix64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub name: &'static str,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.detail)
    }
}

impl std::error::Error for Failure {}

/// Names of the passed checks, or the first failure.
pub type Report = std::result::Result<Vec<&'static str>, Failure>;

struct Suite {
    passed: Vec<&'static str>,
}

impl Suite {
    fn check(
        &mut self,
        name: &'static str,
        ok: bool,
        detail: impl FnOnce() -> String,
    ) -> Result<(), Failure> {
        if ok {
            self.passed.push(name);
            Ok(())
        } else {
            Err(Failure {
                name,
                detail: detail(),
            })
        }
    }
}

pub fn verify_model(model: &SurfaceModel, deep: bool) -> Report {
    let mut s = Suite { passed: Vec::new() };
    let f = model.field();
    let q = model.q() as usize;

    let conj_ok = f.elements().all(|x| f.conj(f.conj(x)) == x);
    s.check("field.conjugation_involution", conj_ok, || {
        "conj∘conj ≠ id".into()
    })?;
    let fixed = f.elements().filter(|&x| f.in_subfield(x)).count();
    s.check("field.subfield_size", fixed == q, || {
        format!("{fixed} fixed points, expected {q}")
    })?;
    let inv_ok = f
        .elements()
        .skip(1)
        .all(|x| f.mul(x, f.inv(x).unwrap()) == crate::FieldElem::ONE);
    s.check("field.inverses", inv_ok, || "x·x⁻¹ ≠ 1".into())?;

    let expected_points = (q * q * q + 1) * (q * q + 1);
    s.check(
        "surface.point_count",
        model.len() == expected_points,
        || format!("{} points, expected {expected_points}", model.len()),
    )?;
    let gx = q * q * q + q * q + 1;
    let bad_tangent = model.ids().find(|&x| {
        let t = model.tangent_set(x);
        t.len() != gx || t.binary_search(&x).is_err()
    });
    s.check("surface.tangent_sets", bad_tangent.is_none(), || {
        format!(
            "tangent set of {} has wrong size or misses the point",
            bad_tangent.unwrap()
        )
    })?;

    let mut rng = SplitMix64::new(0x5EED);
    let mut asym = None;
    for _ in 0..1000 {
        let x = PointId(rng.below(model.len()) as u32);
        let y = PointId(rng.below(model.len()) as u32);
        let in_x = model.tangent_set(x).binary_search(&y).is_ok();
        let in_y = model.tangent_set(y).binary_search(&x).is_ok();
        if in_x != in_y || in_x != model.conjugate(x, y) {
            asym = Some((x, y));
            break;
        }
    }
    s.check("surface.conjugacy_symmetric", asym.is_none(), || {
        format!("{asym:?}")
    })?;

    let ovoid = model.canonical_ovoid();
    s.check("ovoid.size", ovoid.len() == q * q * q + 1, || {
        format!("{} points", ovoid.len())
    })?;
    s.check("ovoid.is_cap", model.is_cap(&ovoid), || {
        "conjugate pair in ovoid".into()
    })?;
    let cap = CapState::from_points(model, &ovoid, false).map_err(|e| Failure {
        name: "ovoid.is_cap",
        detail: e.to_string(),
    })?;
    s.check("ovoid.complete", cap.is_complete(), || {
        "ovoid leaves points uncovered".into()
    })?;
    let target = BigRational::from_integer(BigInt::from(q * q + 1));
    let heavy = ovoid.iter().find(|&&x| cap.weight(x).unwrap() != target);
    s.check("ovoid.weights", heavy.is_none(), || {
        format!("weight of {} ≠ q²+1", heavy.unwrap())
    })?;

    let mut random_cap = CapState::new(model);
    let mut identity_ok = true;
    for _ in 0..q.min(8) {
        let x = *rng.choose(random_cap.uncovered());
        random_cap.add_point(x).unwrap();
        identity_ok &= model
            .ids()
            .step_by(7)
            .all(|y| (random_cap.relevance(y) + random_cap.coverage_intersect(y)) as usize == gx);
    }
    s.check("capstate.relevance_identity", identity_ok, || {
        "r + |Gx∩GC| ≠ |Gx|".into()
    })?;

    if deep {
        deep_checks(model, &mut s, &ovoid, &mut rng)?;
    }
    Ok(s.passed)
}

fn deep_checks(
    model: &SurfaceModel,
    s: &mut Suite,
    ovoid: &[PointId],
    rng: &mut SplitMix64,
) -> Result<(), Failure> {
    let q = model.q() as usize;
    let gens = model.generators();
    let expected = (q * q * q + 1) * (q + 1);
    s.check("generators.count", gens.len() == expected, || {
        format!("{} generators, expected {expected}", gens.len())
    })?;
    let wrong_len = gens.iter().find(|g| g.points.len() != q * q + 1);
    s.check("generators.points_per_line", wrong_len.is_none(), || {
        format!(
            "generator {} has {} points",
            wrong_len.unwrap().id,
            wrong_len.unwrap().points.len()
        )
    })?;
    let through = model.generators_through();
    let wrong_deg = through.iter().position(|g| g.len() != q + 1);
    s.check("generators.per_point", wrong_deg.is_none(), || {
        format!(
            "point #{} lies on {} generators",
            wrong_deg.unwrap(),
            through[wrong_deg.unwrap()].len()
        )
    })?;
    let not_iso = gens.iter().find(|g| {
        !g.points
            .iter()
            .all(|&a| g.points.iter().all(|&b| model.conjugate(a, b)))
    });
    s.check("generators.totally_isotropic", not_iso.is_none(), || {
        format!("generator {} has a non-conjugate pair", not_iso.unwrap().id)
    })?;
    let miss = gens.iter().find(|g| {
        g.points
            .iter()
            .filter(|p| ovoid.binary_search(p).is_ok())
            .count()
            != 1
    });
    s.check("ovoid.meets_generators_once", miss.is_none(), || {
        format!("generator {} meets the ovoid wrongly", miss.unwrap().id)
    })?;

    let mut bad_pair = None;
    for _ in 0..1000 {
        let x = PointId(rng.below(model.len()) as u32);
        let y = PointId(rng.below(model.len()) as u32);
        let share = through[x.index()]
            .iter()
            .any(|g| through[y.index()].contains(g));
        if share != model.conjugate(x, y) {
            bad_pair = Some((x, y));
            break;
        }
    }
    s.check(
        "generators.conjugacy_equivalence",
        bad_pair.is_none(),
        || format!("{bad_pair:?}"),
    )?;

    if q <= 3 {
        let top = (q * (q * q + q - 1)) as u32;
        let mut single_values = BTreeSet::new();
        let mut pair_values = BTreeSet::new();
        for y in model.ids() {
            let cap = CapState::from_points(model, &[y], false).unwrap();
            for &x in cap.uncovered() {
                single_values.insert(cap.relevance(x));
            }
        }
        s.check(
            "oracle.singleton_relevance",
            single_values == BTreeSet::from([top]),
            || format!("{single_values:?}"),
        )?;
        if q == 2 {
            for y in model.ids() {
                for z in model.ids().filter(|&z| z > y && !model.conjugate(y, z)) {
                    let cap = CapState::from_points(model, &[y, z], false).unwrap();
                    for &x in cap.uncovered() {
                        pair_values.insert(cap.relevance(x));
                    }
                }
            }
            let q3 = (q * q * q + q * q - 2 * q) as u32;
            let expected = BTreeSet::from([top, q3, q3 - 1]);
            s.check("oracle.pair_relevance", pair_values == expected, || {
                format!("{pair_values:?}")
            })?;
        }
    }
    Ok(())
}

/// Checks a cap file against the model: metadata, points on U, cap property.
pub fn verify_cap_file(model: &SurfaceModel, text: &str) -> Report {
    let file = CapFile::from_json(text).map_err(|e| Failure {
        name: "capfile.parse",
        detail: e.to_string(),
    })?;
    let ids = file.surface_points(model).map_err(|e| Failure {
        name: "capfile.points_on_surface",
        detail: e.to_string(),
    })?;
    let mut s = Suite {
        passed: vec!["capfile.parse", "capfile.points_on_surface"],
    };
    let pair = model.find_conjugate_pair(&ids);
    s.check("capfile.is_cap", pair.is_none(), || {
        let (a, b) = pair.unwrap();
        format!("{a} and {b} are conjugate")
    })?;
    let reencoded = CapFile::from_points(model, &ids).to_json();
    s.check("capfile.canonical", reencoded == text, || {
        "file is not in canonical form".into()
    })?;
    Ok(s.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deep_suite_passes_q2() {
        let m = SurfaceModel::for_q(2).unwrap();
        let passed = verify_model(&m, true).unwrap();
        assert!(passed.contains(&"oracle.pair_relevance"));
    }

    #[test]
    fn shallow_suite_passes_q5() {
        let m = SurfaceModel::for_q(5).unwrap();
        assert!(verify_model(&m, false).is_ok());
    }

    #[test]
    fn corrupted_cap_file_names_the_invariant() {
        let m = SurfaceModel::for_q(2).unwrap();
        let ovoid = m.canonical_ovoid();
        let good = CapFile::from_points(&m, &ovoid).to_json();
        assert!(verify_cap_file(&m, &good).is_ok());

        let mut file = CapFile::from_points(&m, &ovoid);
        file.points[0] = [0, 0, 0, 1];
        let fail = verify_cap_file(&m, &file.to_json()).unwrap_err();
        assert_eq!(fail.name, "capfile.points_on_surface");

        let line = CapFile::from_points(&m, &m.generators()[0].points).to_json();
        assert_eq!(
            verify_cap_file(&m, &line).unwrap_err().name,
            "capfile.is_cap"
        );

        assert_eq!(
            verify_cap_file(&m, "not json").unwrap_err().name,
            "capfile.parse"
        );
    }
}
