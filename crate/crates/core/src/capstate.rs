//! A cap with incrementally maintained coverage multiplicities.
//!
//! `cmult[y]` counts the members x with y ∈ Gx. Adding or removing a member
//! is one pass over its tangent set. The uncovered points are kept in an
//! indexed list so they can be sampled in O(1).
//!
//! Optionally the state also tracks, for every point x, the relevance
//! `rel[x] = #{y ∈ Gx : cmult[y] = 0}` together with a histogram of the
//! relevance values of uncovered points. Each 0↔1 transition of `cmult[y]`
//! then costs one extra pass over Gy, which pays off for the strategies that
//! query r⁻ repeatedly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hermitian::{PointId, SurfaceModel};

const ABSENT: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct RelevanceTracker {
    rel: Vec<u32>,
    /// hist[r] = number of uncovered points of relevance r.
    hist: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct CapState<'m> {
    model: &'m SurfaceModel,
    members: Vec<PointId>,
    member_pos: Vec<u32>,
    cmult: Vec<u32>,
    covered: usize,
    uncovered: Vec<PointId>,
    uncovered_pos: Vec<u32>,
    tracker: Option<RelevanceTracker>,
}

impl<'m> CapState<'m> {
    pub fn new(model: &'m SurfaceModel) -> Self {
        let n = model.len();
        CapState {
            model,
            members: Vec::new(),
            member_pos: vec![ABSENT; n],
            cmult: vec![0; n],
            covered: 0,
            uncovered: model.ids().collect(),
            uncovered_pos: (0..n as u32).collect(),
            tracker: None,
        }
    }

    /// Empty cap that also maintains per-point relevance.
    pub fn with_relevance_tracking(model: &'m SurfaceModel) -> Self {
        let mut cap = Self::new(model);
        let gx = model.gx_len() as u32;
        let mut hist = vec![0; gx as usize + 1];
        hist[gx as usize] = model.len() as u32;
        cap.tracker = Some(RelevanceTracker {
            rel: vec![gx; model.len()],
            hist,
        });
        cap
    }

    pub fn from_points(
        model: &'m SurfaceModel,
        points: &[PointId],
        tracking: bool,
    ) -> Result<Self> {
        let mut cap = if tracking {
            Self::with_relevance_tracking(model)
        } else {
            Self::new(model)
        };
        for &p in points {
            if p.index() >= model.len() {
                return Err(Error::Argument(format!("point {p} out of range")));
            }
            cap.add_point(p)?;
        }
        Ok(cap)
    }

    pub fn model(&self) -> &'m SurfaceModel {
        self.model
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in insertion-dependent order.
    pub fn members(&self) -> &[PointId] {
        &self.members
    }

    pub fn sorted_members(&self) -> Vec<PointId> {
        let mut m = self.members.clone();
        m.sort_unstable();
        m
    }

    pub fn contains(&self, x: PointId) -> bool {
        self.member_pos[x.index()] != ABSENT
    }

    pub fn is_covered(&self, y: PointId) -> bool {
        self.cmult[y.index()] > 0
    }

    /// |GC|.
    pub fn covered_count(&self) -> usize {
        self.covered
    }

    /// Points not covered by the cap, in internal order.
    pub fn uncovered(&self) -> &[PointId] {
        &self.uncovered
    }

    pub fn uncovered_sorted(&self) -> Vec<PointId> {
        let mut u = self.uncovered.clone();
        u.sort_unstable();
        u
    }

    pub fn is_complete(&self) -> bool {
        self.covered == self.model.len()
    }

    pub fn add_point(&mut self, x: PointId) -> Result<()> {
        if self.cmult[x.index()] > 0 {
            return Err(Error::CapViolation(x));
        }
        let model = self.model;
        for &y in model.tangent_set(x).iter() {
            let c = &mut self.cmult[y.index()];
            *c += 1;
            if *c == 1 {
                self.covered += 1;
                self.unlist_uncovered(y);
                if let Some(t) = self.tracker.as_mut() {
                    t.hist[t.rel[y.index()] as usize] -= 1;
                    for &z in model.tangent_set(y).iter() {
                        let r = &mut t.rel[z.index()];
                        if self.cmult[z.index()] == 0 {
                            t.hist[*r as usize] -= 1;
                            *r -= 1;
                            t.hist[*r as usize] += 1;
                        } else {
                            *r -= 1;
                        }
                    }
                }
            }
        }
        self.member_pos[x.index()] = self.members.len() as u32;
        self.members.push(x);
        Ok(())
    }

    pub fn remove_point(&mut self, x: PointId) -> Result<()> {
        let pos = self.member_pos[x.index()];
        if pos == ABSENT {
            return Err(Error::NotMember(x));
        }
        self.members.swap_remove(pos as usize);
        if let Some(&moved) = self.members.get(pos as usize) {
            self.member_pos[moved.index()] = pos;
        }
        self.member_pos[x.index()] = ABSENT;

        let model = self.model;
        for &y in model.tangent_set(x).iter() {
            let c = &mut self.cmult[y.index()];
            *c -= 1;
            if *c == 0 {
                self.covered -= 1;
                self.list_uncovered(y);
                if let Some(t) = self.tracker.as_mut() {
                    for &z in model.tangent_set(y).iter() {
                        let r = &mut t.rel[z.index()];
                        if z != y && self.cmult[z.index()] == 0 {
                            t.hist[*r as usize] -= 1;
                            *r += 1;
                            t.hist[*r as usize] += 1;
                        } else {
                            *r += 1;
                        }
                    }
                    t.hist[t.rel[y.index()] as usize] += 1;
                }
            }
        }
        Ok(())
    }

    fn unlist_uncovered(&mut self, y: PointId) {
        let pos = self.uncovered_pos[y.index()] as usize;
        self.uncovered.swap_remove(pos);
        if let Some(&moved) = self.uncovered.get(pos) {
            self.uncovered_pos[moved.index()] = pos as u32;
        }
        self.uncovered_pos[y.index()] = ABSENT;
    }

    fn list_uncovered(&mut self, y: PointId) {
        self.uncovered_pos[y.index()] = self.uncovered.len() as u32;
        self.uncovered.push(y);
    }

    /// r(x,C) = |Gx ∖ GC|; zero for members.
    pub fn relevance(&self, x: PointId) -> u32 {
        match &self.tracker {
            Some(t) => t.rel[x.index()],
            None => self.scan_relevance(x),
        }
    }

    fn scan_relevance(&self, x: PointId) -> u32 {
        self.model
            .tangent_set(x)
            .iter()
            .filter(|y| self.cmult[y.index()] == 0)
            .count() as u32
    }

    /// c(y,C): the number of members whose tangent section contains y.
    pub fn coverage_mult(&self, y: PointId) -> u32 {
        self.cmult[y.index()]
    }

    /// |Gx ∩ GC|.
    pub fn coverage_intersect(&self, x: PointId) -> u32 {
        self.model
            .tangent_set(x)
            .iter()
            .filter(|y| self.cmult[y.index()] > 0)
            .count() as u32
    }

    /// r(x, C∖{x}) for a member x: the points only x covers.
    pub fn relevance_without(&self, x: PointId) -> Result<u32> {
        if !self.contains(x) {
            return Err(Error::NotMember(x));
        }
        Ok(self
            .model
            .tangent_set(x)
            .iter()
            .filter(|y| self.cmult[y.index()] == 1)
            .count() as u32)
    }

    /// w(x,C) = Σ_{y∈Gx} 1/c(y,C), exactly.
    pub fn weight(&self, x: PointId) -> Result<BigRational> {
        if !self.contains(x) {
            return Err(Error::NotMember(x));
        }
        let mut by_cover: BTreeMap<u32, u64> = BTreeMap::new();
        for y in self.model.tangent_set(x).iter() {
            *by_cover.entry(self.cmult[y.index()]).or_default() += 1;
        }
        Ok(by_cover
            .into_iter()
            .fold(BigRational::zero(), |acc, (c, n)| {
                acc + BigRational::new(BigInt::from(n), BigInt::from(c))
            }))
    }

    pub fn weight_f64(&self, x: PointId) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::NotMember(x));
        }
        Ok(self
            .model
            .tangent_set(x)
            .iter()
            .map(|y| 1.0 / self.cmult[y.index()] as f64)
            .sum())
    }

    /// w(x, C∪{x}) for an uncovered x, without modifying the cap.
    pub fn weight_if_added(&self, x: PointId) -> f64 {
        self.model
            .tangent_set(x)
            .iter()
            .map(|y| 1.0 / (self.cmult[y.index()] + 1) as f64)
            .sum()
    }

    /// (r⁻, r⁺) over uncovered points; `None` when the cap is complete.
    pub fn r_extrema(&self) -> Option<(u32, u32)> {
        if self.is_complete() {
            return None;
        }
        if let Some(t) = &self.tracker {
            let lo = t.hist.iter().position(|&n| n > 0)?;
            let hi = t.hist.iter().rposition(|&n| n > 0)?;
            return Some((lo as u32, hi as u32));
        }
        let mut lo = u32::MAX;
        let mut hi = 0;
        for &x in &self.uncovered {
            let r = self.scan_relevance(x);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        Some((lo, hi))
    }

    /// r⁻ and the number of uncovered points attaining it.
    pub fn min_relevance_count(&self) -> Option<(u32, usize)> {
        if self.is_complete() {
            return None;
        }
        if let Some(t) = &self.tracker {
            let lo = t.hist.iter().position(|&n| n > 0)?;
            return Some((lo as u32, t.hist[lo] as usize));
        }
        let mut lo = u32::MAX;
        let mut count = 0;
        for &x in &self.uncovered {
            let r = self.scan_relevance(x);
            if r < lo {
                lo = r;
                count = 1;
            } else if r == lo {
                count += 1;
            }
        }
        Some((lo, count))
    }

    /// Uncovered points with relevance exactly `r`, in internal order.
    pub fn uncovered_with_relevance(&self, r: u32) -> Vec<PointId> {
        self.uncovered
            .iter()
            .copied()
            .filter(|&x| self.relevance(x) == r)
            .collect()
    }

    /// Raw multiplicity counters, indexed by PointId.
    pub fn multiplicities(&self) -> &[u32] {
        &self.cmult
    }
}
