//! Brute-force reference model for prime q, built straight from the
//! Hermitian form with schoolbook GF(q²) arithmetic. Shares no code with
//! the library beyond the coordinate encoding of cap files.

#![allow(dead_code)]

use std::collections::HashMap;

use hermcap::{PointId, SurfaceModel};

pub struct Oracle {
    pub q: u32,
    /// Normalized coordinates, element a + b·t encoded as a + b·q.
    pub points: Vec<[u32; 4]>,
    /// adj[i] has bit j set iff points i and j are conjugate (i included).
    pub adj: Vec<Vec<u64>>,
    pub words: usize,
    /// Library id of each oracle point.
    pub lib_id: Vec<PointId>,
    /// Oracle index of each library id.
    pub from_lib: Vec<usize>,
}

struct Gf {
    p: u32,
    // t² = c0' + c1'·t, stored already negated
    t2: (u32, u32),
}

impl Gf {
    fn new(p: u32) -> Self {
        // smallest monic irreducible t² + c1·t + c0, ordered by c1 then c0
        for c1 in 0..p {
            for c0 in 0..p {
                if (0..p).all(|r| (r * r + c1 * r + c0) % p != 0) {
                    return Gf {
                        p,
                        t2: ((p - c0) % p, (p - c1) % p),
                    };
                }
            }
        }
        unreachable!("an irreducible quadratic always exists")
    }

    fn split(&self, x: u32) -> (u32, u32) {
        (x % self.p, x / self.p)
    }

    fn join(&self, a: u32, b: u32) -> u32 {
        a % self.p + (b % self.p) * self.p
    }

    fn add(&self, x: u32, y: u32) -> u32 {
        let (a, b) = self.split(x);
        let (c, d) = self.split(y);
        self.join(a + c, b + d)
    }

    fn mul(&self, x: u32, y: u32) -> u32 {
        let p = self.p;
        let (a, b) = self.split(x);
        let (c, d) = self.split(y);
        let hi = b * d % p;
        let lo = a * c + hi * self.t2.0;
        let mid = a * d + b * c + hi * self.t2.1;
        self.join(lo % p, mid % p)
    }

    fn conj(&self, x: u32) -> u32 {
        (1..self.p).fold(x, |acc, _| self.mul(acc, x))
    }

    fn herm(&self, x: &[u32; 4], y: &[u32; 4]) -> u32 {
        (0..4).fold(0, |acc, i| self.add(acc, self.mul(x[i], self.conj(y[i]))))
    }
}

impl Oracle {
    pub fn new(model: &SurfaceModel) -> Self {
        let q = model.q();
        let gf = Gf::new(q);
        let n = q * q;
        let mut points = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = [a, b, c, d];
                        let first = v.iter().find(|&&x| x != 0);
                        if first == Some(&1) && gf.herm(&v, &v) == 0 {
                            points.push(v);
                        }
                    }
                }
            }
        }
        let words = points.len().div_ceil(64);
        let mut adj = vec![vec![0u64; words]; points.len()];
        for i in 0..points.len() {
            for j in 0..points.len() {
                if gf.herm(&points[i], &points[j]) == 0 {
                    adj[i][j / 64] |= 1 << (j % 64);
                }
            }
        }
        let by_coords: HashMap<[u32; 4], usize> =
            points.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut from_lib = vec![usize::MAX; model.len()];
        let mut lib_id = vec![PointId(u32::MAX); points.len()];
        for id in model.ids() {
            let coords = model.point(id).coords.map(|c| c.0 as u32);
            if let Some(&i) = by_coords.get(&coords) {
                from_lib[id.index()] = i;
                lib_id[i] = id;
            }
        }
        Oracle {
            q,
            points,
            adj,
            words,
            lib_id,
            from_lib,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn conjugate(&self, i: usize, j: usize) -> bool {
        self.adj[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn gx_len(&self, i: usize) -> usize {
        self.adj[i].iter().map(|w| w.count_ones() as usize).sum()
    }

    /// c(y,C) for every y, C given as oracle indices.
    pub fn multiplicities(&self, cap: &[usize]) -> Vec<u32> {
        let mut c = vec![0u32; self.len()];
        for &x in cap {
            for (y, slot) in c.iter_mut().enumerate() {
                if self.conjugate(x, y) {
                    *slot += 1;
                }
            }
        }
        c
    }

    /// r(x,C) = #{y ∈ Gx : c(y,C) = 0}.
    pub fn relevance(&self, x: usize, mult: &[u32]) -> u32 {
        (0..self.len())
            .filter(|&y| self.conjugate(x, y) && mult[y] == 0)
            .count() as u32
    }

    pub fn lib(&self, xs: &[usize]) -> Vec<PointId> {
        xs.iter().map(|&i| self.lib_id[i]).collect()
    }

    pub fn indices(&self, xs: &[PointId]) -> Vec<usize> {
        xs.iter().map(|x| self.from_lib[x.index()]).collect()
    }

    /// Every maximal set of pairwise non-conjugate points, as bit masks.
    /// Only for surfaces with at most 64 points.
    pub fn complete_caps(&self) -> Vec<u64> {
        assert!(self.len() <= 64);
        let all = if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        };
        let free: Vec<u64> = self.adj.iter().map(|a| !a[0] & all).collect();
        let mut out = Vec::new();
        bron_kerbosch(&free, 0, all, 0, &mut out);
        out
    }
}

fn bron_kerbosch(nbr: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = (p | x).trailing_zeros() as usize;
    let mut cand = p & !nbr[pivot];
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        bron_kerbosch(nbr, r | 1 << v, p & nbr[v], x & nbr[v], out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}
