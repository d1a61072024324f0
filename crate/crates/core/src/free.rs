//! Truncated free associative algebra over ℚ, Lyndon basis of the free Lie
//! algebra, exp/log and substitution into other graded algebras.
//!
//! Letter 0 is `a`, letter k ≥ 1 is `b(k-1)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::error::AlgebraError;
use crate::ring::{fmt_q, parse_q, q, Q};

pub type Word = Vec<u8>;

/// A graded algebra with truncated multiplication that free series can be
/// substituted into.
pub trait GradedAlgebra: Clone {
    fn unit_like(&self) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn scaled(&self, c: &Q) -> Self;
    fn is_null(&self) -> bool;
}

#[derive(Clone, PartialEq, Eq)]
pub struct FreeSeries {
    pub letters: u8,
    pub cap: usize,
    pub terms: FxHashMap<Word, Q>,
}

impl std::fmt::Debug for FreeSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl FreeSeries {
    pub fn zero(letters: u8, cap: usize) -> Self {
        FreeSeries { letters, cap, terms: FxHashMap::default() }
    }

    pub fn one(letters: u8, cap: usize) -> Self {
        let mut s = Self::zero(letters, cap);
        s.terms.insert(Vec::new(), Q::one());
        s
    }

    pub fn letter(letters: u8, cap: usize, l: u8) -> Self {
        let mut s = Self::zero(letters, cap);
        if cap >= 1 {
            s.terms.insert(vec![l], Q::one());
        }
        s
    }

    pub fn from_terms(letters: u8, cap: usize, t: impl IntoIterator<Item = (Word, Q)>) -> Self {
        let mut s = Self::zero(letters, cap);
        for (w, c) in t {
            if w.len() <= cap {
                s.add_term(w, c);
            }
        }
        s
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn coeff(&self, w: &[u8]) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant(&self) -> Q {
        self.coeff(&[])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let cap = self.cap.min(o.cap);
        let mut s = self.clone();
        s.cap = cap;
        for (w, c) in &o.terms {
            s.add_term(w.clone(), c.clone());
        }
        s.terms.retain(|w, _| w.len() <= cap);
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
        let mut s = Self::zero(self.letters.max(o.letters), cap);
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

    pub fn truncate(&self, cap: usize) -> Self {
        let mut s = self.clone();
        s.cap = cap;
        s.terms.retain(|w, _| w.len() <= cap);
        s
    }

    pub fn exp(&self) -> Result<Self, AlgebraError> {
        if !self.constant().is_zero() {
            return Err(AlgebraError::ConstantTerm { expected: "0" });
        }
        let mut acc = Self::one(self.letters, self.cap);
        let mut pw = acc.clone();
        for k in 1..=self.cap {
            pw = pw.mul(self).scale(&q(1, k as i64));
            acc = acc.add(&pw);
        }
        Ok(acc)
    }

    pub fn log(&self) -> Result<Self, AlgebraError> {
        if self.constant() != Q::one() {
            return Err(AlgebraError::ConstantTerm { expected: "1" });
        }
        let x = self.sub(&Self::one(self.letters, self.cap));
        let mut acc = Self::zero(self.letters, self.cap);
        let mut pw = Self::one(self.letters, self.cap);
        for k in 1..=self.cap {
            pw = pw.mul(&x);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&pw.scale(&q(sign, k as i64)));
        }
        Ok(acc)
    }

    /// Inverse of a series with constant term 1.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.constant() != Q::one() {
            return Err(AlgebraError::ConstantTerm { expected: "1" });
        }
        let x = Self::one(self.letters, self.cap).sub(self);
        let mut acc = Self::one(self.letters, self.cap);
        let mut pw = acc.clone();
        for _ in 1..=self.cap {
            pw = pw.mul(&x);
            acc = acc.add(&pw);
        }
        Ok(acc)
    }

    /// Image under a letter map (letters with no image are sent to zero).
    pub fn substitute<A: GradedAlgebra>(&self, images: &[A]) -> Result<A, AlgebraError> {
        if images.len() < self.letters as usize {
            return Err(AlgebraError::Arity { expected: self.letters as usize, got: images.len() });
        }
        let unit = images[0].unit_like();
        let mut trie: BTreeMap<Word, Q> = BTreeMap::new();
        for (w, c) in &self.terms {
            trie.insert(w.clone(), c.clone());
        }
        Ok(sub_rec(&trie, &[], images, &unit))
    }

    /// Apply a linear letter map l ↦ Σ c·word (a homomorphism of free algebras).
    pub fn substitute_free(&self, images: &[FreeSeries]) -> Result<FreeSeries, AlgebraError> {
        self.substitute(images)
    }

    /// Sorted text serialization: "degree word coefficient" per line.
    pub fn to_text(&self) -> String {
        let mut v: Vec<(usize, Word, &Q)> = self.terms.iter().map(|(w, c)| (w.len(), w.clone(), c)).collect();
        v.sort();
        let mut s = format!("free letters={} cap={}\n", self.letters, self.cap);
        for (k, w, c) in v {
            s.push_str(&format!("{} {} {}\n", k, word_text(&w), fmt_q(c)));
        }
        s
    }

    pub fn from_text(t: &str) -> Result<Self, AlgebraError> {
        let perr = |line: usize, msg: &str| AlgebraError::Parse { line, msg: msg.to_string() };
        let mut lines = t.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let (_, head) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
        let rest = head.trim().strip_prefix("free letters=").ok_or_else(|| perr(1, "missing header"))?;
        let (l, c) = rest.split_once(" cap=").ok_or_else(|| perr(1, "missing cap"))?;
        let letters: u8 = l.parse().map_err(|_| perr(1, "bad letter count"))?;
        let cap: usize = c.trim().parse().map_err(|_| perr(1, "bad cap"))?;
        let mut s = Self::zero(letters, cap);
        for (i, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(perr(i + 1, "expected three fields"));
            }
            let w = parse_word(f[1]).ok_or_else(|| perr(i + 1, "bad word"))?;
            let c = parse_q(f[2]).ok_or_else(|| perr(i + 1, "bad coefficient"))?;
            if w.iter().any(|&x| x >= letters) || w.len() != f[0].parse::<usize>().unwrap_or(usize::MAX) {
                return Err(perr(i + 1, "word does not match header"));
            }
            s.add_term(w, c);
        }
        Ok(s)
    }
}

fn sub_rec<A: GradedAlgebra>(trie: &BTreeMap<Word, Q>, prefix: &[u8], images: &[A], unit: &A) -> A {
    // value of Σ_{w ⊇ prefix} c_w · img(w[len(prefix)..])
    let mut acc = match trie.get(prefix) {
        Some(c) => unit.scaled(c),
        None => unit.scaled(&Q::zero()),
    };
    let mut next = prefix.to_vec();
    next.push(0);
    let mut letters: Vec<u8> = Vec::new();
    for w in trie.range(next.clone()..).map(|(w, _)| w) {
        if !w.starts_with(prefix) {
            break;
        }
        if w.len() > prefix.len() {
            let l = w[prefix.len()];
            if letters.last() != Some(&l) {
                letters.push(l);
            }
        }
    }
    for l in letters {
        let mut p = prefix.to_vec();
        p.push(l);
        let tail = sub_rec(trie, &p, images, unit);
        if !tail.is_null() {
            acc = acc.plus(&images[l as usize].times(&tail));
        }
    }
    acc
}

impl GradedAlgebra for FreeSeries {
    fn unit_like(&self) -> Self {
        Self::one(self.letters, self.cap)
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
        self.is_zero()
    }
}

impl GradedAlgebra for crate::diagram::DiagramSeries {
    fn unit_like(&self) -> Self {
        Self::unit(self.skel.clone(), self.n, self.cap)
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
        self.is_zero()
    }
}

pub fn word_text(w: &[u8]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|&l| if l == 0 { "a".to_string() } else { format!("b{}", l - 1) }).collect::<Vec<_>>().join(".")
}

pub fn parse_word(s: &str) -> Option<Word> {
    if s == "1" {
        return Some(Vec::new());
    }
    s.split('.')
        .map(|t| {
            if t == "a" {
                Some(0)
            } else {
                t.strip_prefix('b')?.parse::<u8>().ok().map(|k| k + 1)
            }
        })
        .collect()
}

/// Lyndon words of exact length `k` over `m` letters, in lexicographic order.
pub fn lyndon_words(m: u8, k: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if k == 0 || m == 0 {
        return out;
    }
    // Duval's generation of all Lyndon words up to length k
    let mut w: Vec<i32> = vec![-1];
    while !w.is_empty() {
        let last = w.len() - 1;
        w[last] += 1;
        if w.len() == k {
            out.push(w.iter().map(|&x| x as u8).collect());
        }
        let n = w.len();
        while w.len() < k {
            let x = w[w.len() - n];
            w.push(x);
        }
        while let Some(&l) = w.last() {
            if l == m as i32 - 1 {
                w.pop();
            } else {
                break;
            }
        }
    }
    out
}

/// Standard factorization w = u v with v the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[u8]) -> (Word, Word) {
    for i in 1..w.len() {
        if is_lyndon(&w[i..]) {
            return (w[..i].to_vec(), w[i..].to_vec());
        }
    }
    unreachable!("single letters are handled by the caller")
}

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty()
        && (1..w.len()).all(|i| {
            let rot: Vec<u8> = w[i..].iter().chain(w[..i].iter()).copied().collect();
            w < rot.as_slice()
        })
}

/// The bracketed Lie element of a Lyndon word.
pub fn lyndon_bracket(letters: u8, cap: usize, w: &[u8]) -> FreeSeries {
    if w.len() == 1 {
        return FreeSeries::letter(letters, cap, w[0]);
    }
    let (u, v) = standard_factorization(w);
    lyndon_bracket(letters, cap, &u).bracket(&lyndon_bracket(letters, cap, &v))
}

/// Left-normed bracketing ρ(w1…wk) = [[w1,w2],…,wk] extended linearly.
fn dynkin(x: &FreeSeries) -> FreeSeries {
    let mut out = FreeSeries::zero(x.letters, x.cap);
    for (w, c) in &x.terms {
        if w.is_empty() {
            continue;
        }
        let mut acc = FreeSeries::letter(x.letters, x.cap, w[0]);
        for &l in &w[1..] {
            acc = acc.bracket(&FreeSeries::letter(x.letters, x.cap, l));
        }
        out = out.add(&acc.scale(c));
    }
    out
}

/// Returns the first degree at which `x` has a non-Lie component.
pub fn non_lie_degree(x: &FreeSeries) -> Option<usize> {
    if !x.constant().is_zero() {
        return Some(0);
    }
    (1..=x.cap).find(|&k| {
        let p = x.degree_part(k);
        dynkin(&p) != p.scale(&q(k as i64, 1))
    })
}

/// Coordinates of a Lie element in the Lyndon basis.
pub fn lyndon_coordinates(x: &FreeSeries) -> Result<BTreeMap<Word, Q>, AlgebraError> {
    let mut rest = x.clone();
    let mut out = BTreeMap::new();
    while let Some(w) = rest.terms.keys().min_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b))).cloned() {
        if !is_lyndon(&w) {
            return Err(AlgebraError::Infeasible { degree: w.len(), what: "element is not a Lie series".into() });
        }
        let c = rest.coeff(&w);
        rest = rest.sub(&lyndon_bracket(x.letters, x.cap, &w).scale(&c));
        out.insert(w, c);
    }
    Ok(out)
}

/// Group-likeness test: `g` has constant term 1 and log(g) is Lie.
pub fn group_like_failure(g: &FreeSeries) -> Option<(usize, FreeSeries)> {
    let Ok(l) = g.log() else {
        return Some((0, g.degree_part(0)));
    };
    non_lie_degree(&l).map(|k| (k, l.degree_part(k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witt(m: i64, k: usize) -> usize {
        // (1/k) Σ_{d|k} μ(d) m^{k/d}
        let mu = |n: usize| -> i64 {
            let mut n = n;
            let mut r = 1;
            let mut p = 2;
            while p * p <= n {
                if n.is_multiple_of(p) {
                    n /= p;
                    if n.is_multiple_of(p) {
                        return 0;
                    }
                    r = -r;
                }
                p += 1;
            }
            if n > 1 {
                r = -r;
            }
            r
        };
        let s: i64 = (1..=k).filter(|d| k.is_multiple_of(*d)).map(|d| mu(d) * m.pow((k / d) as u32)).sum();
        (s / k as i64) as usize
    }

    #[test]
    fn witt_counts() {
        for m in [2u8, 3] {
            for k in 1..=6 {
                assert_eq!(lyndon_words(m, k).len(), witt(m as i64, k), "m={m} k={k}");
            }
        }
        assert_eq!(lyndon_words(2, 2), vec![vec![0, 1]]);
        assert_eq!(lyndon_words(2, 3), vec![vec![0, 0, 1], vec![0, 1, 1]]);
    }

    #[test]
    fn exp_log_basics() {
        let a = FreeSeries::letter(2, 4, 0);
        assert_eq!(a.exp().unwrap().log().unwrap(), a);
        let e = a.exp().unwrap();
        assert_eq!(e.mul(&e), a.scale(&q(2, 1)).exp().unwrap());
        let b = FreeSeries::letter(2, 4, 1);
        let g = a.add(&a.bracket(&b)).exp().unwrap();
        assert!(group_like_failure(&g).is_none());
        let bad = FreeSeries::one(2, 4).add(&a.mul(&b));
        assert_eq!(group_like_failure(&bad).map(|x| x.0), Some(2));
    }

    #[test]
    fn substitute_is_multiplicative() {
        let a = FreeSeries::letter(2, 3, 0);
        let b = FreeSeries::letter(2, 3, 1);
        let f = a.add(&a.mul(&b));
        let g = b.sub(&b.mul(&a));
        let imgs = vec![a.add(&b), a.mul(&b).sub(&b)];
        let lhs = f.mul(&g).substitute(&imgs).unwrap();
        let rhs = f.substitute(&imgs).unwrap().mul(&g.substitute(&imgs).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lyndon_coordinates_round_trip() {
        let w = vec![0, 0, 1];
        let x = lyndon_bracket(2, 3, &w).scale(&q(3, 2));
        let c = lyndon_coordinates(&x).unwrap();
        assert_eq!(c.get(&w), Some(&q(3, 2)));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn text_round_trip() {
        let a = FreeSeries::letter(3, 3, 0);
        let b = FreeSeries::letter(3, 3, 2);
        let x = a.bracket(&b).scale(&q(-5, 7)).add(&b);
        assert_eq!(FreeSeries::from_text(&x.to_text()).unwrap(), x);
    }
}
