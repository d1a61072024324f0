//! Enumeration of N-diagrams and the quotient B_N(S) by 4T, labelled 4T,
//! NT1 and NT2 (Nat is built into the canonical form).
//!
//! Relations preserve the residues and the label sum of every component, so
//! the quotient splits into sectors. Residues are a pure tag: all relation
//! work happens with residues 0 and the residue vector is carried alongside.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use rustc_hash::{FxHashMap, FxHashSet};

use crate::diagram::{canonical, CompDecor, Decor, DiagramSeries};
use crate::error::AlgebraError;
use crate::linalg::{Echelon, SparseVec};
use crate::ring::{fmt_q, qi, Q};
use crate::skeleton::{Component, Skeleton};

/// Key of a sector: per component (residue, label sum).
pub type Sector = Vec<(u8, u8)>;

fn is_circle(skel: &Skeleton, c: usize) -> bool {
    matches!(skel.comps[c], Component::Circle)
}

fn zero_res(d: &Decor) -> Decor {
    let mut d = d.clone();
    d.comps.iter_mut().for_each(|c| c.res = 0);
    d
}

/// Insert a strand point with chord id `id` at `pos` on component `c`; the
/// label of the split segment becomes (l1, l - l1).
fn insert_point(skel: &Skeleton, n: u8, d: &mut Decor, c: usize, pos: usize, id: u16, l1: i64) {
    let nn = n as i64;
    let cd = &mut d.comps[c];
    let k = cd.pts.len();
    if is_circle(skel, c) {
        if k == 0 {
            cd.pts.push(id);
            return;
        }
        if pos == k {
            cd.pts.push(id);
            let l = cd.labels[0] as i64;
            cd.labels.push(l1.rem_euclid(nn) as u8);
            cd.labels[0] = (l - l1).rem_euclid(nn) as u8;
            return;
        }
    }
    let l = cd.labels[pos] as i64;
    cd.pts.insert(pos, id);
    cd.labels[pos] = l1.rem_euclid(nn) as u8;
    cd.labels.insert(pos + 1, (l - l1).rem_euclid(nn) as u8);
}

/// Insertion gaps on component c: arcs have k+1, circles max(k,1).
fn gaps(skel: &Skeleton, d: &Decor, c: usize) -> usize {
    let k = d.comps[c].pts.len();
    if is_circle(skel, c) {
        k.max(1)
    } else {
        k + 1
    }
}

/// Whether a gap carries a label that can be split (empty circles cannot).
fn splittable(skel: &Skeleton, d: &Decor, c: usize) -> bool {
    !(is_circle(skel, c) && d.comps[c].pts.is_empty())
}

/// All canonical diagrams of a given degree with residues 0.
pub fn enumerate(skel: &Skeleton, n: u8, degree: usize) -> Vec<Decor> {
    let mut level: FxHashSet<Decor> = FxHashSet::default();
    let ncomp = skel.comps.len();
    // degree 0: one free label per component
    let total = (n as usize).pow(ncomp as u32);
    for code in 0..total {
        let mut d = Decor::empty(skel);
        let mut c = code;
        for comp in d.comps.iter_mut() {
            comp.labels[0] = (c % n as usize) as u8;
            c /= n as usize;
        }
        level.insert(canonical(skel, n, &d));
    }
    for _ in 0..degree {
        let mut next: FxHashSet<Decor> = FxHashSet::default();
        for d in &level {
            let id = d.degree() as u16;
            for c1 in 0..ncomp {
                for g1 in 0..gaps(skel, d, c1) {
                    let s1 = if splittable(skel, d, c1) { n as i64 } else { 1 };
                    for l1 in 0..s1 {
                        let mut d1 = d.clone();
                        insert_point(skel, n, &mut d1, c1, g1, id, l1);
                        if skel.pole {
                            for q in 0..=d1.pole.len() {
                                let mut d2 = d1.clone();
                                d2.pole.insert(q, id);
                                next.insert(canonical(skel, n, &d2));
                            }
                        }
                        for c2 in c1..ncomp {
                            for g2 in 0..gaps(skel, &d1, c2) {
                                let s2 = if splittable(skel, &d1, c2) { n as i64 } else { 1 };
                                for l2 in 0..s2 {
                                    let mut d2 = d1.clone();
                                    insert_point(skel, n, &mut d2, c2, g2, id, l2);
                                    next.insert(canonical(skel, n, &d2));
                                }
                            }
                        }
                    }
                }
            }
        }
        level = next;
    }
    let mut v: Vec<Decor> = level.into_iter().collect();
    v.sort();
    v
}

/// Index of the strand point of chord `id` on component c (first occurrence).
fn find_points(d: &Decor, id: u16) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (c, cd) in d.comps.iter().enumerate() {
        for (i, p) in cd.pts.iter().enumerate() {
            if *p == id {
                out.push((c, i));
            }
        }
    }
    out
}

/// Relation rows of a given degree, as lists of (raw decoration, coefficient).
pub fn relations(skel: &Skeleton, n: u8, degree: usize) -> Vec<Vec<(Decor, Q)>> {
    let mut rels = Vec::new();
    if degree == 0 {
        return rels;
    }
    let nn = n as i64;
    let lower = enumerate(skel, n, degree - 1);
    let ncomp = skel.comps.len();
    for base in &lower {
        let new = base.degree() as u16;
        let nch = base.degree() as u16;
        // relations with the free end x on a strand: 4T for ordinary chords, NT1 for pole chords
        for cx in 0..ncomp {
            for gx in 0..gaps(skel, base, cx) {
                let sx = if splittable(skel, base, cx) { nn } else { 1 };
                for lx in 0..sx {
                    let mut with_x = base.clone();
                    insert_point(skel, n, &mut with_x, cx, gx, new, lx);
                    for c in 0..nch {
                        let ends = find_points(&with_x, c);
                        let on_pole = with_x.pole.iter().position(|p| *p == c);
                        let mut row: Vec<(Decor, Q)> = Vec::new();
                        // strand endpoints of c: new end just after (+) or just before (-) each
                        let label_range: Vec<i64> = if on_pole.is_some() { (0..nn).collect() } else { vec![0] };
                        for &(ce, ie) in &ends {
                            for &a in &label_range {
                                let l_after = with_x.comps[ce].labels.get(ie + 1).copied();
                                let _ = l_after;
                                let mut after = with_x.clone();
                                insert_point(skel, n, &mut after, ce, ie + 1, new, -a);
                                row.push((after, Q::one()));
                                let mut before = with_x.clone();
                                let l_before = with_x.comps[ce].labels[ie] as i64;
                                insert_point(skel, n, &mut before, ce, ie, new, l_before - a);
                                row.push((before, -Q::one()));
                            }
                        }
                        if let Some(pp) = on_pole {
                            // pole endpoint: later in the pole order is earlier in orientation terms
                            let mut before = with_x.clone();
                            before.pole.insert(pp, new);
                            row.push((before, Q::one()));
                            let mut after = with_x.clone();
                            after.pole.insert(pp + 1, new);
                            row.push((after, -Q::one()));
                        }
                        rels.push(row);
                    }
                }
            }
        }
        // NT2: free end on the pole, c an ordinary chord
        if skel.pole {
            for qpos in 0..=base.pole.len() {
                for c in 0..nch {
                    if base.pole.contains(&c) {
                        continue;
                    }
                    let mut row: Vec<(Decor, Q)> = Vec::new();
                    for (side, sign) in [(1usize, Q::one()), (0usize, -Q::one())] {
                        let ends = find_points(base, c);
                        let ((c1, i1), (c2, i2)) = (ends[0], ends[1]);
                        // pole chords from the fixed pole position to either end of c
                        for &(ce, ie) in &[(c1, i1), (c2, i2)] {
                            let mut d = base.clone();
                            d.pole.insert(qpos, new);
                            adjacent_insert(skel, n, &mut d, ce, ie, side, new, 0);
                            row.push((d, sign.clone()));
                        }
                        // Σ_a t(a) parallel to c on the same side, labels around the first end
                        for a in 0..nn {
                            let mut d = base.clone();
                            let new2 = new;
                            // insert at the later position first so indices of the earlier stay valid
                            let (first, second) = if (c1, i1) <= (c2, i2) { ((c1, i1, a), (c2, i2, 0)) } else { ((c2, i2, 0), (c1, i1, a)) };
                            adjacent_insert(skel, n, &mut d, second.0, second.1, side, new2, second.2);
                            adjacent_insert(skel, n, &mut d, first.0, first.1, side, new2, first.2);
                            row.push((d, sign.clone()));
                        }
                    }
                    rels.push(row);
                }
            }
        }
    }
    rels
}

/// Insert a new point just after (side = 1) or just before (side = 0) the
/// point at index `ie` of component `ce`, with labels (-a, a) around it.
fn adjacent_insert(skel: &Skeleton, n: u8, d: &mut Decor, ce: usize, ie: usize, side: usize, id: u16, a: i64) {
    if side == 1 {
        insert_point(skel, n, d, ce, ie + 1, id, -a);
    } else {
        let l = d.comps[ce].labels[ie] as i64;
        insert_point(skel, n, d, ce, ie, id, l - a);
    }
}

/// Quotient data of one degree.
pub struct DegreeQuotient {
    pub columns: Vec<Decor>,
    pub index: FxHashMap<Decor, usize>,
    pub echelon: Echelon,
}

impl DegreeQuotient {
    pub fn basis(&self) -> Vec<&Decor> {
        (0..self.columns.len()).filter(|&i| !self.echelon.is_pivot(i)).map(|i| &self.columns[i]).collect()
    }
}

/// Lazily computed quotient B_N(S) of one skeleton.
pub struct Quotient {
    pub skel: Arc<Skeleton>,
    pub n: u8,
    pub max_columns: usize,
    degrees: BTreeMap<usize, DegreeQuotient>,
}

/// Reduced coordinates: (degree, sector) → coordinates over basis columns.
pub type Coords = BTreeMap<(usize, Sector), SparseVec>;

impl Quotient {
    pub fn new(skel: Arc<Skeleton>, n: u8) -> Self {
        Quotient { skel, n, max_columns: 2_000_000, degrees: BTreeMap::new() }
    }

    pub fn degree(&mut self, k: usize) -> Result<&DegreeQuotient, AlgebraError> {
        if !self.degrees.contains_key(&k) {
            let dq = self.build(k)?;
            self.degrees.insert(k, dq);
        }
        Ok(&self.degrees[&k])
    }

    fn build(&self, k: usize) -> Result<DegreeQuotient, AlgebraError> {
        let columns = enumerate(&self.skel, self.n, k);
        if columns.len() > self.max_columns {
            return Err(AlgebraError::ResourceCap { degree: k, what: format!("{} diagrams", columns.len()) });
        }
        let index: FxHashMap<Decor, usize> = columns.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
        let mut echelon = Echelon::new();
        for rel in relations(&self.skel, self.n, k) {
            let mut row = SparseVec::new();
            for (d, c) in rel {
                let key = canonical(&self.skel, self.n, &d);
                let i = index[&key];
                let e = row.entry(i).or_insert_with(Q::zero);
                *e += c;
                if e.is_zero() {
                    row.remove(&i);
                }
            }
            if !row.is_empty() {
                echelon.insert(&row);
            }
        }
        Ok(DegreeQuotient { columns, index, echelon })
    }

    /// Dimensions per sector (label sums only; residues are free tags).
    pub fn dims(&mut self, k: usize) -> Result<BTreeMap<Vec<u8>, usize>, AlgebraError> {
        let n = self.n;
        let dq = self.degree(k)?;
        let mut out: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
        for (i, d) in dq.columns.iter().enumerate() {
            let e = out.entry(d.sector(n).iter().map(|s| s.1).collect()).or_default();
            if !dq.echelon.is_pivot(i) {
                *e += 1;
            }
        }
        Ok(out)
    }

    pub fn total_dim(&mut self, k: usize) -> Result<usize, AlgebraError> {
        Ok(self.dims(k)?.values().sum())
    }

    /// Reduce a series to basis coordinates.
    pub fn reduce(&mut self, s: &DiagramSeries) -> Result<Coords, AlgebraError> {
        if *s.skel != *self.skel {
            return Err(AlgebraError::Parse { line: 0, msg: "series skeleton differs from the quotient skeleton".into() });
        }
        let n = self.n;
        let mut raw: BTreeMap<(usize, Sector), Vec<(Decor, Q)>> = BTreeMap::new();
        for (d, c) in &s.terms {
            raw.entry((d.degree(), d.sector(n))).or_default().push((zero_res(d), c.clone()));
        }
        let mut out = Coords::new();
        for ((k, sec), terms) in raw {
            let dq = self.degree(k)?;
            let mut v = SparseVec::new();
            for (d, c) in terms {
                let i = *dq.index.get(&d).ok_or_else(|| AlgebraError::Parse { line: 0, msg: "diagram not enumerated".into() })?;
                let e = v.entry(i).or_insert_with(Q::zero);
                *e += c;
            }
            v.retain(|_, c| !c.is_zero());
            let r = dq.echelon.reduce(&v);
            if !r.is_empty() {
                out.insert((k, sec), r);
            }
        }
        Ok(out)
    }
}

impl Quotient {
    /// One line per nonzero coordinate: degree, sector, basis diagram, value.
    pub fn coords_text(&mut self, c: &Coords) -> Result<String, AlgebraError> {
        let mut s = String::new();
        for ((k, sec), v) in c {
            let dq = self.degree(*k)?;
            for (i, x) in v {
                let sec: Vec<String> = sec.iter().map(|(r, l)| format!("{r}:{l}")).collect();
                s.push_str(&format!("{k} [{}] {} {}\n", sec.join(","), dq.columns[*i].to_text(), fmt_q(x)));
            }
        }
        Ok(s)
    }
}

/// Sum of labels per component and the set of sectors present in a series.
pub fn sectors(s: &DiagramSeries) -> BTreeSet<Sector> {
    s.terms.keys().map(|d| d.sector(s.n)).collect()
}

/// Project a diagram series from N to N' | N: labels mod N', pole chords ×N/N'.
pub fn project_series(s: &DiagramSeries, n2: u8) -> Result<DiagramSeries, AlgebraError> {
    let n = s.n;
    if n2 == 0 || !n.is_multiple_of(n2) {
        return Err(AlgebraError::NotDivisor(n2 as usize, n as usize));
    }
    let ratio = qi((n / n2) as i64);
    let mut out = DiagramSeries::zero(s.skel.clone(), n2, s.cap);
    for (d, c) in &s.terms {
        let mut e = d.clone();
        for comp in e.comps.iter_mut() {
            comp.labels.iter_mut().for_each(|l| *l %= n2);
        }
        let mut coef = c.clone();
        for _ in 0..e.pole.len() {
            coef *= &ratio;
        }
        out.add_term(canonical(&s.skel, n2, &e), coef);
    }
    Ok(out)
}

/// Raw decoration helper for tests and callers: points, labels, residue.
pub fn comp(pts: &[u16], labels: &[u8], res: u8) -> CompDecor {
    CompDecor { pts: pts.to_vec(), labels: labels.to_vec(), res }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Strands;
    use crate::horizontal::{Gen, Horizontal};
    use crate::skeleton::Sign::*;

    fn circle() -> Arc<Skeleton> {
        Arc::new(Skeleton::new(false, vec![], vec![], vec![Component::Circle]).unwrap())
    }

    #[test]
    fn framed_circle_dims() {
        let mut q = Quotient::new(circle(), 1);
        let dims: Vec<usize> = (0..4).map(|k| q.total_dim(k).unwrap()).collect();
        assert_eq!(dims, vec![1, 1, 2, 3]);
    }

    #[test]
    fn pole_strand_degree_zero() {
        let st = Strands::new(true, &[Plus]);
        assert_eq!(enumerate(&st.skel, 2, 0).len(), 2);
    }

    #[test]
    fn relations_reduce_to_zero() {
        let st = Strands::new(true, &[Plus, Minus]);
        let mut q = Quotient::new(st.skel.clone(), 2);
        for rel in relations(&st.skel, 2, 2) {
            let mut s = DiagramSeries::zero(st.skel.clone(), 2, 3);
            for (d, c) in rel {
                s.add_term(canonical(&st.skel, 2, &d), c);
            }
            assert!(q.reduce(&s).unwrap().is_empty());
        }
    }

    fn word_series(h: &Horizontal, st: &Strands, n: u8, w: &[u16], cap: usize) -> DiagramSeries {
        let mut s = DiagramSeries::unit(st.skel.clone(), n, cap);
        for &g in w {
            let d = match h.gens[g as usize] {
                Gen::Pole(i) => st.chord(0, i as usize, 0, n),
                Gen::Chord(i, j, a) => st.chord(i as usize, j as usize, a as i64, n),
            };
            s = s.mul(&DiagramSeries::single(st.skel.clone(), n, cap, d, Q::one()));
        }
        s
    }

    fn horizontal_factors(strands: u8, n: u8, k: usize) {
        let h = Horizontal::new(strands, true, n);
        let st = Strands::new(true, &vec![Plus; strands as usize]);
        let mut q = Quotient::new(st.skel.clone(), n);
        let g = h.num_gens();
        let decode = |mut idx: usize| {
            let mut w = vec![0u16; k];
            for p in (0..k).rev() {
                w[p] = (idx % g) as u16;
                idx /= g;
            }
            w
        };
        for idx in 0..g.pow(k as u32) {
            let w = decode(idx);
            let mut x = crate::horizontal::HElem::zero(k);
            x.terms.insert(w.clone(), Q::one());
            let mut img = word_series(&h, &st, n, &w, k);
            for (j, c) in h.reduce(&x, k) {
                img = img.sub(&word_series(&h, &st, n, &decode(j), k).scale(&c));
            }
            assert!(q.reduce(&img).unwrap().is_empty(), "word {:?}", w);
        }
        // the horizontal basis stays independent in the diagram quotient
        let mut e = Echelon::new();
        let mut rank = 0;
        let mut keys: Vec<(usize, Sector)> = Vec::new();
        for idx in 0..g.pow(k as u32) {
            let w = decode(idx);
            let mut x = crate::horizontal::HElem::zero(k);
            x.terms.insert(w.clone(), Q::one());
            let r = h.reduce(&x, k);
            if r.len() != 1 || r.get(&idx) != Some(&Q::one()) {
                continue;
            }
            let coords = q.reduce(&word_series(&h, &st, n, &w, k)).unwrap();
            let mut v = SparseVec::new();
            for (key, vec) in coords {
                let slot = keys.iter().position(|x| *x == key).unwrap_or_else(|| {
                    keys.push(key.clone());
                    keys.len() - 1
                });
                for (i, c) in vec {
                    v.insert(slot * 1_000_000 + i, c);
                }
            }
            if e.insert(&v) {
                rank += 1;
            }
        }
        assert_eq!(rank, h.dim(k));
    }

    #[test]
    fn horizontal_relations_hold_in_diagrams() {
        horizontal_factors(2, 1, 2);
        horizontal_factors(2, 2, 2);
        horizontal_factors(2, 3, 2);
        horizontal_factors(3, 2, 2);
        horizontal_factors(2, 2, 3);
    }
}
