//! Table-driven arithmetic in GF(q²), q = p^k, with the Frobenius
//! conjugation x ↦ x^q.
//!
//! Elements are encoded as the base-p integer of their coefficient vector
//! over GF(p) in the polynomial basis 1, t, t², … modulo a fixed monic
//! irreducible polynomial of degree 2k. The polynomial is the
//! lexicographically smallest one (coefficients compared from degree 2k−1
//! downwards), so the encoding is reproducible without external tables.
//!
//! Addition goes through Zech logarithms: for a primitive element g,
//! `zech[n] = log(1 + gⁿ)`, so `gᵃ + gᵇ = gᵃ·(1 + g^(b−a))`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported order of GF(q²).
pub const MAX_ORDER: u32 = 6561;

const NO_LOG: u16 = u16::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
}

impl FieldSpec {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::UnsupportedField(format!(
                "characteristic {p} is not prime"
            )));
        }
        if k == 0 {
            return Err(Error::UnsupportedField(
                "extension degree must be at least 1".into(),
            ));
        }
        let spec = FieldSpec { p, k };
        match p.checked_pow(2 * k) {
            Some(order) if order <= MAX_ORDER => Ok(spec),
            _ => Err(Error::UnsupportedField(format!(
                "GF({p}^{}) exceeds the supported order {MAX_ORDER}",
                2 * k
            ))),
        }
    }

    /// Splits a prime power q into (p, k).
    pub fn for_q(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::UnsupportedField(format!(
                "q = {q} is not a prime power"
            )));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
        let mut rest = q;
        let mut k = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(Error::UnsupportedField(format!(
                "q = {q} is not a prime power"
            )));
        }
        Self::new(p, k)
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.k)
    }

    /// Order of the ambient field, q².
    pub fn order2(&self) -> u32 {
        self.p.pow(2 * self.k)
    }
}

/// An element of GF(q²) under the canonical base-p encoding.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElem(pub u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Immutable arithmetic tables for GF(q²).
#[derive(Clone, Debug)]
pub struct FieldTables {
    spec: FieldSpec,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u16>,
    log: Vec<u16>,
    zech: Vec<u16>,
    neg: Vec<u16>,
    conj: Vec<u16>,
}

impl FieldTables {
    pub fn build(spec: FieldSpec) -> Result<Self> {
        let spec = FieldSpec::new(spec.p, spec.k)?;
        let p = spec.p;
        let degree = 2 * spec.k as usize;
        let order = spec.order2();
        let modulus = smallest_irreducible(p, degree);

        let mut neg = vec![0u16; order as usize];
        for (x, slot) in neg.iter_mut().enumerate() {
            let digits: Vec<u32> = to_digits(x as u32, p, degree)
                .into_iter()
                .map(|d| (p - d) % p)
                .collect();
            *slot = from_digits(&digits, p) as u16;
        }

        // Smallest primitive element under the encoding.
        let group = order - 1;
        let (generator, exp) = (1..order)
            .find_map(|g| {
                let powers = powers_of(g, p, &modulus, group);
                (powers.len() == group as usize).then_some((g, powers))
            })
            .expect("the multiplicative group of a finite field is cyclic");
        debug_assert!(generator > 0);

        let mut log = vec![NO_LOG; order as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u16;
        }

        let mut zech = vec![NO_LOG; group as usize];
        for (n, slot) in zech.iter_mut().enumerate() {
            let sum = add_digits(exp[n] as u32, 1, p, degree);
            *slot = log[sum as usize];
        }

        let q = spec.q();
        let mut conj = vec![0u16; order as usize];
        for x in 1..order as usize {
            let l = log[x] as u64 * q as u64 % group as u64;
            conj[x] = exp[l as usize];
        }

        Ok(FieldTables {
            spec,
            order,
            modulus,
            exp,
            log,
            zech,
            neg,
            conj,
        })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn q(&self) -> u32 {
        self.spec.q()
    }

    /// Number of elements, q².
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients of the defining polynomial, constant term first, leading 1 last.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order as u16).map(FieldElem)
    }

    pub fn elem(&self, index: u32) -> Option<FieldElem> {
        (index < self.order).then_some(FieldElem(index as u16))
    }

    /// gⁱ for the table's primitive element g.
    #[inline]
    pub fn exp(&self, i: u32) -> FieldElem {
        FieldElem(self.exp[(i % (self.order - 1)) as usize])
    }

    #[inline]
    pub fn log(&self, a: FieldElem) -> Option<u32> {
        match self.log[a.index()] {
            NO_LOG => None,
            l => Some(l as u32),
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let group = self.order - 1;
        let la = self.log[a.index()] as u32;
        let lb = self.log[b.index()] as u32;
        let n = (lb + group - la) % group;
        match self.zech[n as usize] {
            NO_LOG => FieldElem::ZERO,
            z => FieldElem(self.exp[((la + z as u32) % group) as usize]),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        let group = self.order - 1;
        let l = (self.log[a.index()] as u32 + self.log[b.index()] as u32) % group;
        FieldElem(self.exp[l as usize])
    }

    #[inline]
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        let group = self.order - 1;
        let l = (group - self.log[a.index()] as u32) % group;
        Some(FieldElem(self.exp[l as usize]))
    }

    /// Frobenius conjugation x ↦ x^q.
    #[inline]
    pub fn conj(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.conj[a.index()])
    }

    /// a^(q+1) = a·conj(a), always in GF(q).
    #[inline]
    pub fn norm(&self, a: FieldElem) -> FieldElem {
        self.mul(a, self.conj(a))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        match self.log(a) {
            None => FieldElem::ZERO,
            Some(l) => {
                let group = (self.order - 1) as u64;
                FieldElem(self.exp[(l as u64 * (e % group) % group) as usize])
            }
        }
    }

    pub fn in_subfield(&self, a: FieldElem) -> bool {
        self.conj(a) == a
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn to_digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut digits = vec![0; len];
    for d in digits.iter_mut() {
        *d = x % p;
        x /= p;
    }
    digits
}

fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn add_digits(a: u32, b: u32, p: u32, len: usize) -> u32 {
    let da = to_digits(a, p, len);
    let db = to_digits(b, p, len);
    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
    from_digits(&sum, p)
}

/// Multiplies two residues modulo the monic `modulus` (coefficients low first).
fn mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let degree = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * degree];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for top in (degree..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (i, &m) in modulus.iter().enumerate() {
            let idx = top - degree + i;
            prod[idx] = (prod[idx] + (p - c) * m) % p;
        }
    }
    prod.truncate(degree);
    prod
}

/// Successive powers g⁰, g¹, … until they return to 1 (or `limit` is reached).
fn powers_of(g: u32, p: u32, modulus: &[u32], limit: u32) -> Vec<u16> {
    let degree = modulus.len() - 1;
    let base = to_digits(g, p, degree);
    let mut cur = to_digits(1, p, degree);
    let mut out = Vec::with_capacity(limit as usize);
    for _ in 0..limit {
        out.push(from_digits(&cur, p) as u16);
        cur = mul_mod(&cur, &base, modulus, p);
        if from_digits(&cur, p) == 1 {
            break;
        }
    }
    out
}

fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead_inv = mod_inv(den[dd], p);
    while rem.len() > dd {
        let top = rem.len() - 1;
        let c = rem[top] * lead_inv % p;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = (rem[idx] + (p - c) * d % p) % p;
            }
        }
        rem.pop();
    }
    rem
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p)
        .find(|&x| a * x % p == 1)
        .expect("nonzero residue mod a prime")
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let degree = f.len() - 1;
    for d in 1..=degree / 2 {
        for n in 0..p.pow(d as u32) {
            let mut g = to_digits(n, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, degree: usize) -> Vec<u32> {
    (0..p.pow(degree as u32))
        .map(|n| {
            let mut f = to_digits(n, p, degree);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIGS: [(u32, u32); 6] = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2)];

    #[test]
    fn zero_and_one_are_canonical() {
        for (p, k) in CONFIGS {
            let f = FieldTables::build(FieldSpec::new(p, k).unwrap()).unwrap();
            let x = f.exp(3);
            assert_eq!(f.add(FieldElem::ZERO, x), x);
            assert_eq!(f.mul(FieldElem::ONE, x), x);
            assert_eq!(f.mul(FieldElem::ZERO, x), FieldElem::ZERO);
        }
    }

    #[test]
    fn gf4_conjugation_is_squaring_and_swaps_non_subfield_pair() {
        let f = FieldTables::build(FieldSpec::new(2, 1).unwrap()).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        for x in f.elements() {
            assert_eq!(f.conj(x), f.mul(x, x));
        }
        assert_eq!(f.conj(FieldElem(2)), FieldElem(3));
        assert_eq!(f.conj(FieldElem(3)), FieldElem(2));
    }

    #[test]
    fn subfield_size_is_q() {
        // (5,1): 5 fixed points; (3,2): 9 fixed points, counted from the table.
        for (p, k, expected) in [(5, 1, 5), (3, 2, 9), (7, 1, 7), (2, 2, 4)] {
            let f = FieldTables::build(FieldSpec::new(p, k).unwrap()).unwrap();
            assert_eq!(f.elements().filter(|&x| f.in_subfield(x)).count(), expected);
        }
    }

    #[test]
    fn gf25_norm_is_six_to_one() {
        let f = FieldTables::build(FieldSpec::new(5, 1).unwrap()).unwrap();
        assert_eq!(f.norm(FieldElem::ZERO), FieldElem::ZERO);
        assert_eq!(f.norm(FieldElem::ONE), FieldElem::ONE);
        let mut counts = std::collections::HashMap::new();
        for x in f.elements().skip(1) {
            let n = f.norm(x);
            assert!(f.in_subfield(n));
            *counts.entry(n).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 4);
        assert!(counts.values().all(|&c| c == 6));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, k) in CONFIGS {
            let f = FieldTables::build(FieldSpec::new(p, k).unwrap()).unwrap();
            let elems: Vec<_> = f.elements().collect();
            for &a in &elems {
                assert_eq!(f.conj(f.conj(a)), a);
                assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
                if let Some(inv) = f.inv(a) {
                    assert_eq!(f.mul(a, inv), FieldElem::ONE);
                } else {
                    assert!(a.is_zero());
                }
                for &b in &elems {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.conj(f.mul(a, b)), f.mul(f.conj(a), f.conj(b)));
                    assert_eq!(f.conj(f.add(a, b)), f.add(f.conj(a), f.conj(b)));
                    for &c in &elems {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn exp_log_consistency() {
        let f = FieldTables::build(FieldSpec::new(3, 2).unwrap()).unwrap();
        let group = f.order() - 1;
        for i in 0..group {
            for j in (0..group).step_by(7) {
                assert_eq!(f.mul(f.exp(i), f.exp(j)), f.exp((i + j) % group));
            }
            assert_eq!(f.log(f.exp(i)), Some(i));
        }
    }

    #[test]
    fn addition_matches_digitwise_sum() {
        let f = FieldTables::build(FieldSpec::new(3, 2).unwrap()).unwrap();
        for a in 0..81u32 {
            for b in 0..81u32 {
                let expected = add_digits(a, b, 3, 4);
                assert_eq!(
                    f.add(FieldElem(a as u16), FieldElem(b as u16)).0 as u32,
                    expected
                );
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(FieldSpec::new(4, 1).is_err());
        assert!(FieldSpec::new(3, 0).is_err());
        assert!(FieldSpec::new(3, 5).is_err());
        assert!(FieldSpec::for_q(6).is_err());
        assert!(FieldSpec::for_q(1).is_err());
        assert_eq!(FieldSpec::for_q(9).unwrap(), FieldSpec { p: 3, k: 2 });
        assert_eq!(FieldSpec::for_q(7).unwrap(), FieldSpec { p: 7, k: 1 });
    }

    #[test]
    fn modulus_is_lexicographically_smallest() {
        let f = FieldTables::build(FieldSpec::new(5, 1).unwrap()).unwrap();
        assert_eq!(f.modulus(), &[2, 0, 1]);
        let f = FieldTables::build(FieldSpec::new(3, 1).unwrap()).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }
}
