//! Horizontal diagram algebras: A_n (no pole, N = 1) and B_{n,N} without the
//! label part, i.e. words in the generators t_0i and t_ij(a) modulo locality,
//! labelled 4T, NT1 and NT2. The quotient is computed degree by degree.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::free::GradedAlgebra;
use crate::linalg::{Echelon, SparseVec};
use crate::ring::{qi, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    /// Chord from the pole to strand i.
    Pole(u8),
    /// t_ij(a) with i < j.
    Chord(u8, u8, u8),
}

/// Element of the free algebra on the generators, truncated at `cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct HElem {
    pub cap: usize,
    pub terms: FxHashMap<Vec<u16>, Q>,
}

impl HElem {
    pub fn zero(cap: usize) -> Self {
        HElem { cap, terms: FxHashMap::default() }
    }

    pub fn one(cap: usize) -> Self {
        let mut s = Self::zero(cap);
        s.terms.insert(Vec::new(), Q::one());
        s
    }

    fn add_term(&mut self, w: Vec<u16>, c: Q) {
        if c.is_zero() || w.len() > self.cap {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        s.cap = self.cap.min(o.cap);
        s.terms.retain(|w, _| w.len() <= s.cap);
        for (w, c) in &o.terms {
            s.add_term(w.clone(), c.clone());
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut s = self.clone();
        if c.is_zero() {
            s.terms.clear();
        } else {
            s.terms.values_mut().for_each(|v| *v *= c);
        }
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        let cap = self.cap.min(o.cap);
        let mut s = Self::zero(cap);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                if w1.len() + w2.len() > cap {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                s.add_term(w, c1 * c2);
            }
        }
        s
    }

    pub fn bracket(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn degree_part(&self, k: usize) -> Self {
        let mut s = self.clone();
        s.terms.retain(|w, _| w.len() == k);
        s
    }

    pub fn exp(&self) -> Self {
        let mut acc = Self::one(self.cap);
        let mut pw = acc.clone();
        for k in 1..=self.cap {
            pw = pw.mul(self).scale(&Q::new(1.into(), (k as i64).into()));
            acc = acc.add(&pw);
        }
        acc
    }

    /// Inverse of an element with constant term 1.
    pub fn inverse(&self) -> Self {
        let x = Self::one(self.cap).sub(self);
        let mut acc = Self::one(self.cap);
        let mut pw = acc.clone();
        for _ in 1..=self.cap {
            pw = pw.mul(&x);
            acc = acc.add(&pw);
        }
        acc
    }

    pub fn map_gens(&self, f: impl Fn(u16) -> u16) -> Self {
        let mut s = Self::zero(self.cap);
        for (w, c) in &self.terms {
            s.add_term(w.iter().map(|&g| f(g)).collect(), c.clone());
        }
        s
    }
}

impl GradedAlgebra for HElem {
    fn unit_like(&self) -> Self {
        Self::one(self.cap)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn scaled(&self, c: &Q) -> Self {
        self.scale(c)
    }
    fn is_null(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The presented algebra on `n` downward strands, with or without the pole.
pub struct Horizontal {
    pub n: u8,
    pub pole: bool,
    pub big_n: u8,
    pub gens: Vec<Gen>,
    index: FxHashMap<Gen, u16>,
    relations: Vec<HElem>,
    quotients: RefCell<BTreeMap<usize, Echelon>>,
}

impl Horizontal {
    pub fn new(n: u8, pole: bool, big_n: u8) -> Self {
        let mut gens = Vec::new();
        if pole {
            for i in 1..=n {
                gens.push(Gen::Pole(i));
            }
        }
        for i in 1..=n {
            for j in i + 1..=n {
                for a in 0..big_n {
                    gens.push(Gen::Chord(i, j, a));
                }
            }
        }
        let index = gens.iter().enumerate().map(|(k, g)| (*g, k as u16)).collect();
        let mut h = Horizontal { n, pole, big_n, gens, index, relations: Vec::new(), quotients: RefCell::new(BTreeMap::new()) };
        h.relations = h.build_relations();
        h
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    fn g(&self, g: Gen, cap: usize) -> HElem {
        let mut s = HElem::zero(cap);
        s.add_term(vec![self.index[&g]], Q::one());
        s
    }

    pub fn t0(&self, i: u8, cap: usize) -> HElem {
        assert!(self.pole);
        self.g(Gen::Pole(i), cap)
    }

    /// t_ij(a) for i ≠ j, using t_ji(a) = t_ij(-a).
    pub fn t(&self, i: u8, j: u8, a: i64, cap: usize) -> HElem {
        let nn = self.big_n as i64;
        if i < j {
            self.g(Gen::Chord(i, j, a.rem_euclid(nn) as u8), cap)
        } else {
            self.g(Gen::Chord(j, i, (-a).rem_euclid(nn) as u8), cap)
        }
    }

    /// Σ_{i∈I, j∈J} t_ij(a).
    pub fn t_block(&self, is: &[u8], js: &[u8], a: i64, cap: usize) -> HElem {
        let mut s = HElem::zero(cap);
        for &i in is {
            for &j in js {
                s = s.add(&self.t(i, j, a, cap));
            }
        }
        s
    }

    /// Σ_a t_ij(a).
    pub fn t_sum(&self, i: u8, j: u8, cap: usize) -> HElem {
        let mut s = HElem::zero(cap);
        for a in 0..self.big_n as i64 {
            s = s.add(&self.t(i, j, a, cap));
        }
        s
    }

    /// Conjugation by c loops on strand s: x ↦ τ_s^c x τ_s^{-c}.
    pub fn ad_tau(&self, x: &HElem, s: u8, c: i64) -> HElem {
        let nn = self.big_n as i64;
        x.map_gens(|g| match self.gens[g as usize] {
            Gen::Chord(i, j, a) if j == s => self.index[&Gen::Chord(i, j, (a as i64 + c).rem_euclid(nn) as u8)],
            Gen::Chord(i, j, a) if i == s => self.index[&Gen::Chord(i, j, (a as i64 - c).rem_euclid(nn) as u8)],
            _ => g,
        })
    }

    fn build_relations(&self) -> Vec<HElem> {
        let cap = 2;
        let n = self.n;
        let nn = self.big_n as i64;
        let mut rels = Vec::new();
        let pairs: Vec<(u8, u8)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        for &(i, j) in &pairs {
            for &(k, l) in &pairs {
                if (i, j) < (k, l) && i != k && i != l && j != k && j != l {
                    for a in 0..nn {
                        for b in 0..nn {
                            rels.push(self.t(i, j, a, cap).bracket(&self.t(k, l, b, cap)));
                        }
                    }
                }
            }
        }
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    if i == j || i == k || j == k {
                        continue;
                    }
                    for a in 0..nn {
                        for b in 0..nn {
                            let x = self.t(i, j, a, cap);
                            let y = self.t(i, k, a + b, cap).add(&self.t(j, k, b, cap));
                            rels.push(x.bracket(&y));
                        }
                    }
                }
            }
        }
        if self.pole {
            for i in 1..=n {
                for &(j, k) in &pairs {
                    if i != j && i != k {
                        for a in 0..nn {
                            rels.push(self.t0(i, cap).bracket(&self.t(j, k, a, cap)));
                        }
                    }
                }
                for j in 1..=n {
                    if i != j {
                        let y = self.t0(j, cap).add(&self.t_sum(i, j, cap));
                        rels.push(self.t0(i, cap).bracket(&y));
                    }
                }
            }
            for &(i, j) in &pairs {
                let x = self.t0(i, cap).add(&self.t0(j, cap)).add(&self.t_sum(i, j, cap));
                for b in 0..nn {
                    rels.push(x.bracket(&self.t(i, j, b, cap)));
                }
            }
        }
        rels.retain(|r| !r.terms.is_empty());
        rels
    }

    fn word_index(&self, w: &[u16]) -> usize {
        let g = self.gens.len();
        w.iter().fold(0usize, |acc, &x| acc * g + x as usize)
    }

    fn with_quotient<T>(&self, k: usize, f: impl FnOnce(&Echelon) -> T) -> T {
        let mut qs = self.quotients.borrow_mut();
        let e = qs.entry(k).or_insert_with(|| self.build_quotient(k));
        f(e)
    }

    fn build_quotient(&self, k: usize) -> Echelon {
        let mut e = Echelon::new();
        if k < 2 {
            return e;
        }
        let g = self.gens.len();
        let outer = k - 2;
        for r in &self.relations {
            for left_len in 0..=outer {
                let right_len = outer - left_len;
                for u in 0..g.pow(left_len as u32) {
                    for v in 0..g.pow(right_len as u32) {
                        let mut row = SparseVec::new();
                        for (w, c) in &r.terms {
                            let idx = (u * g.pow(2) + self.word_index(w)) * g.pow(right_len as u32) + v;
                            row.insert(idx, c.clone());
                        }
                        e.insert(&row);
                    }
                }
            }
        }
        e
    }

    /// Dimension of the degree-k part of the quotient.
    pub fn dim(&self, k: usize) -> usize {
        let total = self.gens.len().pow(k as u32);
        total - self.with_quotient(k, |e| e.rank())
    }

    /// Coordinates of the degree-k part of `x` in the quotient.
    pub fn reduce(&self, x: &HElem, k: usize) -> SparseVec {
        let mut v = SparseVec::new();
        for (w, c) in &x.terms {
            if w.len() == k {
                let e = v.entry(self.word_index(w)).or_insert_with(Q::zero);
                *e += c;
            }
        }
        v.retain(|_, c| !c.is_zero());
        self.with_quotient(k, |e| e.reduce(&v))
    }

    /// First degree ≤ cap at which `x` is nonzero in the quotient.
    pub fn first_nonzero(&self, x: &HElem) -> Option<(usize, SparseVec)> {
        (0..=x.cap).find_map(|k| {
            let r = self.reduce(x, k);
            (!r.is_empty()).then_some((k, r))
        })
    }

    pub fn scalar(&self, c: i64, cap: usize) -> HElem {
        HElem::one(cap).scale(&qi(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a3_degree_two() {
        let h = Horizontal::new(3, false, 1);
        assert_eq!(h.num_gens().pow(2), 9);
        assert_eq!(h.dim(2), 7);
    }

    #[test]
    fn a2_is_commutative() {
        let h = Horizontal::new(2, false, 1);
        assert_eq!(h.dim(3), 1);
    }

    #[test]
    fn tau_conjugation_shifts_labels() {
        let h = Horizontal::new(2, true, 3);
        let x = h.t(1, 2, 0, 2);
        assert_eq!(h.ad_tau(&x, 2, 1), h.t(1, 2, 1, 2));
        assert_eq!(h.ad_tau(&x, 1, 1), h.t(1, 2, -1, 2));
        assert_eq!(h.ad_tau(&h.t0(2, 2), 2, 1), h.t0(2, 2));
    }
}
