//! The Hermitian surface U of PG(3,q²) under the diagonal form
//! H(x,y) = Σ xᵢ·yᵢ^q, its unitary polarity and generator lines.

use std::borrow::Cow;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{FieldElem, FieldTables};

/// Default memory budget for the dense tangent-set table.
pub const DEFAULT_CONJUGACY_BUDGET: usize = 1 << 30;

/// Largest surface `SurfaceModel::for_q` will enumerate.
pub const MAX_SURFACE_POINTS: u64 = 1 << 22;

/// Index of a point of U in the model's lexicographic point order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct PointId(pub u32);

impl PointId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Homogeneous coordinates, normalized so the first nonzero entry is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    pub coords: [FieldElem; 4],
}

impl ProjPoint {
    /// Normalizes a nonzero vector; `None` for the zero vector.
    pub fn normalize(field: &FieldTables, v: [FieldElem; 4]) -> Option<Self> {
        let lead = v.iter().copied().find(|c| !c.is_zero())?;
        let inv = field.inv(lead)?;
        Some(ProjPoint {
            coords: v.map(|c| field.mul(c, inv)),
        })
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.coords;
        write!(f, "({a},{b},{c},{d})")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorLine {
    pub id: usize,
    pub points: Vec<PointId>,
}

enum Conjugacy {
    /// Sorted tangent sets, all of length `gx_len`, stored back to back.
    Dense(Vec<PointId>),
    OnDemand,
}

pub struct SurfaceModel {
    field: FieldTables,
    points: Vec<ProjPoint>,
    /// Projective rank → PointId, `u32::MAX` off the surface.
    rank_to_id: Vec<u32>,
    gx_len: usize,
    conjugacy: Conjugacy,
    generators: OnceLock<Vec<GeneratorLine>>,
}

impl fmt::Debug for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceModel")
            .field("q", &self.q())
            .field("points", &self.points.len())
            .field("dense_tangents", &self.has_dense_tangents())
            .finish()
    }
}

impl SurfaceModel {
    pub fn new(field: FieldTables) -> Self {
        Self::with_budget(field, DEFAULT_CONJUGACY_BUDGET)
    }

    pub fn for_q(q: u32) -> Result<Self> {
        let spec = crate::galois::FieldSpec::for_q(q)?;
        let points = (q as u64).pow(3).saturating_add(1) * ((q as u64).pow(2) + 1);
        if points > MAX_SURFACE_POINTS {
            return Err(Error::UnsupportedField(format!(
                "q = {q}: {points} surface points exceed the supported {MAX_SURFACE_POINTS}"
            )));
        }
        Ok(Self::new(FieldTables::build(spec)?))
    }

    /// Enumerates U; tangent sets are precomputed when they fit in `budget` bytes.
    pub fn with_budget(field: FieldTables, budget: usize) -> Self {
        let order = field.order() as u64;
        let n_ranks = (order.pow(4) - 1) / (order - 1);
        let mut rank_to_id = vec![u32::MAX; n_ranks as usize];
        let mut points = Vec::new();
        for rank in 0..n_ranks {
            let p = unrank(order, rank);
            if hermitian_inner(&field, &p, &p).is_zero() {
                rank_to_id[rank as usize] = points.len() as u32;
                points.push(p);
            }
        }
        let q = field.q() as usize;
        let gx_len = q * q * q + q * q + 1;

        let mut model = SurfaceModel {
            field,
            points,
            rank_to_id,
            gx_len,
            conjugacy: Conjugacy::OnDemand,
            generators: OnceLock::new(),
        };
        let bytes = model.points.len() * gx_len * std::mem::size_of::<PointId>();
        if bytes <= budget {
            model.conjugacy = Conjugacy::Dense(model.dense_tangents());
        }
        model
    }

    fn dense_tangents(&self) -> Vec<PointId> {
        let stride = self.gx_len;
        let mut flat = vec![PointId(0); self.points.len() * stride];
        let fill = |(i, chunk): (usize, &mut [PointId])| {
            let set = self.compute_tangent_set(PointId(i as u32));
            chunk.copy_from_slice(&set);
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            flat.par_chunks_mut(stride).enumerate().for_each(fill);
        }
        #[cfg(not(feature = "parallel"))]
        flat.chunks_mut(stride).enumerate().for_each(fill);
        flat
    }

    pub fn field(&self) -> &FieldTables {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// |Gx| = q³+q²+1.
    pub fn gx_len(&self) -> usize {
        self.gx_len
    }

    pub fn ovoid_size(&self) -> usize {
        let q = self.q() as usize;
        q * q * q + 1
    }

    pub fn has_dense_tangents(&self) -> bool {
        matches!(self.conjugacy, Conjugacy::Dense(_))
    }

    pub fn point(&self, id: PointId) -> &ProjPoint {
        &self.points[id.index()]
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn ids(&self) -> impl Iterator<Item = PointId> {
        (0..self.points.len() as u32).map(PointId)
    }

    pub fn id_of(&self, p: &ProjPoint) -> Option<PointId> {
        let normalized = ProjPoint::normalize(&self.field, p.coords)?;
        let rank = rank(self.field.order() as u64, &normalized);
        match self.rank_to_id[rank as usize] {
            u32::MAX => None,
            id => Some(PointId(id)),
        }
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        hermitian_inner(&self.field, p, p).is_zero()
    }

    /// True when H(x,y) = 0.
    #[inline]
    pub fn conjugate(&self, x: PointId, y: PointId) -> bool {
        hermitian_inner(&self.field, self.point(x), self.point(y)).is_zero()
    }

    /// Gx = T_xU ∩ U, sorted by PointId.
    pub fn tangent_set(&self, x: PointId) -> Cow<'_, [PointId]> {
        match &self.conjugacy {
            Conjugacy::Dense(flat) => {
                let start = x.index() * self.gx_len;
                Cow::Borrowed(&flat[start..start + self.gx_len])
            }
            Conjugacy::OnDemand => Cow::Owned(self.compute_tangent_set(x)),
        }
    }

    fn compute_tangent_set(&self, x: PointId) -> Vec<PointId> {
        let mut set: Vec<PointId> = self
            .polar_plane_points(self.point(x))
            .into_iter()
            .filter_map(
                |p| match self.rank_to_id[rank(self.field.order() as u64, &p) as usize] {
                    u32::MAX => None,
                    id => Some(PointId(id)),
                },
            )
            .collect();
        set.sort_unstable();
        debug_assert_eq!(set.len(), self.gx_len);
        set
    }

    /// Every point of PG(3,q²) on the polar plane {y : H(y,a) = 0} of `a`.
    pub fn polar_plane_points(&self, a: &ProjPoint) -> Vec<ProjPoint> {
        let f = &self.field;
        let u = polar_coefficients(f, a);
        let pivot = (0..4)
            .rev()
            .find(|&i| !u[i].is_zero())
            .expect("nonzero point");
        let neg_inv = f.neg(f.inv(u[pivot]).unwrap());
        let others: Vec<usize> = (0..4).filter(|&i| i != pivot).collect();
        let order = f.order() as u64;
        let n_plane = (order.pow(3) - 1) / (order - 1);
        let mut out = Vec::with_capacity(n_plane as usize);
        for r in 0..n_plane {
            let t = unrank3(order, r);
            let mut v = [FieldElem::ZERO; 4];
            let mut acc = FieldElem::ZERO;
            for (slot, &i) in others.iter().enumerate() {
                v[i] = t[slot];
                acc = f.add(acc, f.mul(u[i], t[slot]));
            }
            v[pivot] = f.mul(neg_inv, acc);
            out.push(ProjPoint::normalize(f, v).unwrap());
        }
        out
    }

    /// Pole of the plane Σ uᵢyᵢ = 0.
    pub fn pole_of_plane(&self, u: [FieldElem; 4]) -> Option<ProjPoint> {
        ProjPoint::normalize(&self.field, u.map(|c| self.field.conj(c)))
    }

    /// Coefficients of the polar plane of `a`.
    pub fn polar_plane(&self, a: &ProjPoint) -> [FieldElem; 4] {
        polar_coefficients(&self.field, a)
    }

    /// Lexicographically first point of PG(3,q²) off U.
    pub fn canonical_pole(&self) -> ProjPoint {
        let order = self.field.order() as u64;
        let r = self
            .rank_to_id
            .iter()
            .position(|&id| id == u32::MAX)
            .expect("U is a proper subset");
        unrank(order, r as u64)
    }

    /// The plane section {x ∈ U : H(x, pole) = 0} of a non-tangent plane.
    pub fn classical_ovoid(&self, pole: &ProjPoint) -> Result<Vec<PointId>> {
        if self.contains(pole) {
            return Err(Error::TangentPlane);
        }
        Ok(self
            .ids()
            .filter(|&x| hermitian_inner(&self.field, self.point(x), pole).is_zero())
            .collect())
    }

    pub fn canonical_ovoid(&self) -> Vec<PointId> {
        self.classical_ovoid(&self.canonical_pole())
            .expect("canonical pole lies off the surface")
    }

    /// True iff the members are distinct and pairwise non-conjugate.
    pub fn is_cap(&self, points: &[PointId]) -> bool {
        self.find_conjugate_pair(points).is_none()
    }

    pub fn find_conjugate_pair(&self, points: &[PointId]) -> Option<(PointId, PointId)> {
        for (i, &x) in points.iter().enumerate() {
            for &y in &points[i + 1..] {
                if x == y || self.conjugate(x, y) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn check_cap(&self, points: &[PointId]) -> Result<()> {
        if let Some(&bad) = points.iter().find(|p| p.index() >= self.len()) {
            return Err(Error::Argument(format!("point {bad} out of range")));
        }
        match self.find_conjugate_pair(points) {
            Some((x, y)) => Err(Error::NotACap(x, y)),
            None => Ok(()),
        }
    }

    /// Generator lines, built on first use and cached.
    pub fn generators(&self) -> &[GeneratorLine] {
        self.generators.get_or_init(|| self.enumerate_generators())
    }

    fn enumerate_generators(&self) -> Vec<GeneratorLine> {
        let f = &self.field;
        let mut lines = Vec::new();
        let mut seen = vec![false; self.len()];
        for x in self.ids() {
            let gx = self.tangent_set(x);
            for &y in gx.iter() {
                seen[y.index()] = false;
            }
            let px = self.point(x).coords;
            for &y in gx.iter() {
                if y == x || seen[y.index()] {
                    continue;
                }
                let py = self.point(y).coords;
                let mut line = vec![x];
                for mu in f.elements() {
                    let v = [0, 1, 2, 3].map(|i| f.add(py[i], f.mul(mu, px[i])));
                    let p = ProjPoint::normalize(f, v).unwrap();
                    let id = self.id_of(&p).expect("generator points lie on U");
                    line.push(id);
                }
                for &z in &line {
                    seen[z.index()] = true;
                }
                line.sort_unstable();
                if line[0] == x {
                    lines.push(GeneratorLine {
                        id: lines.len(),
                        points: line,
                    });
                }
            }
        }
        lines
    }

    /// Indices of the generators through each point.
    pub fn generators_through(&self) -> Vec<Vec<usize>> {
        let mut through = vec![Vec::new(); self.len()];
        for g in self.generators() {
            for p in &g.points {
                through[p.index()].push(g.id);
            }
        }
        through
    }
}

/// H(x,y) = Σ xᵢ·conj(yᵢ).
#[inline]
pub fn hermitian_inner(field: &FieldTables, x: &ProjPoint, y: &ProjPoint) -> FieldElem {
    let mut acc = FieldElem::ZERO;
    for i in 0..4 {
        acc = field.add(acc, field.mul(x.coords[i], field.conj(y.coords[i])));
    }
    acc
}

fn polar_coefficients(field: &FieldTables, a: &ProjPoint) -> [FieldElem; 4] {
    a.coords.map(|c| field.conj(c))
}

/// Lexicographic rank of a normalized point among all points of PG(3,Q).
fn rank(order: u64, p: &ProjPoint) -> u64 {
    let c = p.coords.map(|e| e.0 as u64);
    let pivot = c.iter().position(|&x| x != 0).unwrap();
    // Blocks by pivot, in lexicographic order: pivot 3, 2, 1, 0.
    let mut offset = 0;
    for j in (pivot + 1..4).rev() {
        offset += order.pow((3 - j) as u32);
    }
    let tail = c[pivot + 1..].iter().fold(0, |acc, &x| acc * order + x);
    offset + tail
}

fn unrank(order: u64, mut r: u64) -> ProjPoint {
    let mut coords = [FieldElem::ZERO; 4];
    for pivot in (0..4).rev() {
        let block = order.pow((3 - pivot) as u32);
        if r < block {
            coords[pivot] = FieldElem::ONE;
            for j in (pivot + 1..4).rev() {
                coords[j] = FieldElem((r % order) as u16);
                r /= order;
            }
            return ProjPoint { coords };
        }
        r -= block;
    }
    unreachable!("rank out of range")
}

fn unrank3(order: u64, mut r: u64) -> [FieldElem; 3] {
    let mut out = [FieldElem::ZERO; 3];
    for pivot in (0..3).rev() {
        let block = order.pow((2 - pivot) as u32);
        if r < block {
            out[pivot] = FieldElem::ONE;
            for j in (pivot + 1..3).rev() {
                out[j] = FieldElem((r % order) as u16);
                r /= order;
            }
            return out;
        }
        r -= block;
    }
    unreachable!("rank out of range")
}
