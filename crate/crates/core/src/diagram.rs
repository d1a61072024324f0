//! N-chord diagrams on skeleta: canonical form, composition with the residue
//! rule, tensor products and truncated series.
//!
//! Labels are orientation-relative: a label `a` on a segment of a `-` strand is
//! the geometric label `-a`. On each component the points are listed in
//! orientation order; `labels[j]` sits just before point `j` (for arcs there is
//! one extra label after the last point, for circles `labels[0]` closes the loop).
//! The Nat relations are single-diagram identifications and are applied as a
//! gauge normal form.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::error::DiagramError;
use crate::ring::{fmt_q, parse_q, Q};
use crate::skeleton::{Component, End, Sign, Skeleton};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompDecor {
    pub pts: Vec<u16>,
    pub labels: Vec<u8>,
    pub res: u8,
}

/// Decoration of a fixed skeleton. Canonical when produced by [`canonical`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decor {
    pub comps: Vec<CompDecor>,
    /// Chords ending on the pole, bottom to top.
    pub pole: Vec<u16>,
}

impl Decor {
    pub fn degree(&self) -> usize {
        (self.comps.iter().map(|c| c.pts.len()).sum::<usize>() + self.pole.len()) / 2
    }

    /// Residues and label sums per component: preserved by every relation.
    pub fn sector(&self, n: u8) -> Vec<(u8, u8)> {
        self.comps
            .iter()
            .map(|c| (c.res, (c.labels.iter().map(|&l| l as u32).sum::<u32>() % n as u32) as u8))
            .collect()
    }

    /// Empty decoration of a skeleton.
    pub fn empty(skel: &Skeleton) -> Decor {
        Decor {
            comps: skel
                .comps
                .iter()
                .map(|_| CompDecor { pts: Vec::new(), labels: vec![0], res: 0 })
                .collect(),
            pole: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let j = |v: &[u16]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        for c in &self.comps {
            let l = c.labels.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            s.push_str(&format!("[{}|{}|{}]", j(&c.pts), l, c.res));
        }
        s.push_str(&format!("P[{}]", j(&self.pole)));
        s
    }

    pub fn from_text(t: &str) -> Option<Decor> {
        let t = t.trim();
        let (body, pole) = t.split_once("P[")?;
        let pole = pole.strip_suffix(']')?;
        let nums16 = |s: &str| -> Option<Vec<u16>> {
            if s.is_empty() {
                Some(Vec::new())
            } else {
                s.split(',').map(|x| x.parse().ok()).collect()
            }
        };
        let mut comps = Vec::new();
        for part in body.split('[').skip(1) {
            let part = part.strip_suffix(']')?;
            let mut f = part.split('|');
            let pts = nums16(f.next()?)?;
            let labels = f.next()?.split(',').map(|x| x.parse().ok()).collect::<Option<Vec<u8>>>()?;
            let res = f.next()?.parse().ok()?;
            comps.push(CompDecor { pts, labels, res });
        }
        Some(Decor { comps, pole: nums16(pole)? })
    }
}

fn is_circle(skel: &Skeleton, i: usize) -> bool {
    matches!(skel.comps[i], Component::Circle)
}

/// Check shape constraints of a raw decoration.
pub fn validate(skel: &Skeleton, n: u8, d: &Decor) -> Result<(), DiagramError> {
    if d.comps.len() != skel.comps.len() {
        return Err(DiagramError::Invalid("component count".into()));
    }
    if !skel.pole && !d.pole.is_empty() {
        return Err(DiagramError::Invalid("pole chord without a pole".into()));
    }
    let mut count: FxHashMap<u16, (u8, u8)> = FxHashMap::default();
    for (i, c) in d.comps.iter().enumerate() {
        let want = if is_circle(skel, i) { c.pts.len().max(1) } else { c.pts.len() + 1 };
        if c.labels.len() != want {
            return Err(DiagramError::Invalid(format!("component {i} needs {want} labels")));
        }
        if c.labels.iter().any(|&l| l >= n) || c.res > 1 {
            return Err(DiagramError::Invalid(format!("component {i} has an out-of-range label or residue")));
        }
        for p in &c.pts {
            count.entry(*p).or_default().0 += 1;
        }
    }
    for p in &d.pole {
        count.entry(*p).or_default().1 += 1;
    }
    for (id, (s, p)) in count {
        if p >= 2 {
            return Err(DiagramError::PolePoleChord(id as usize));
        }
        if s + p != 2 {
            return Err(DiagramError::Invalid(format!("chord {id} has {} endpoints", s + p)));
        }
    }
    Ok(())
}

/// Renumber chords by first occurrence along `order` (component indices with a
/// rotation for circles) and bring labels to gauge normal form.
fn normal_for(skel: &Skeleton, n: u8, d: &Decor, order: &[(usize, usize)]) -> Decor {
    let mut comps: Vec<CompDecor> = order
        .iter()
        .map(|&(i, rot)| {
            let c = &d.comps[i];
            if rot == 0 {
                c.clone()
            } else {
                let k = c.pts.len();
                CompDecor {
                    pts: (0..k).map(|j| c.pts[(j + rot) % k]).collect(),
                    labels: (0..k).map(|j| c.labels[(j + rot) % k]).collect(),
                    res: c.res,
                }
            }
        })
        .collect();
    let max_id = comps.iter().flat_map(|c| c.pts.iter()).chain(d.pole.iter()).copied().max().map_or(0, |m| m as usize + 1);
    let mut map = vec![u16::MAX; max_id];
    let mut next = 0u16;
    for c in &mut comps {
        for p in &mut c.pts {
            if map[*p as usize] == u16::MAX {
                map[*p as usize] = next;
                next += 1;
            }
            *p = map[*p as usize];
        }
    }
    let pole: Vec<u16> = d.pole.iter().map(|p| map[*p as usize]).collect();
    if n > 1 {
        gauge_normalize(skel, n, &mut comps, order, next as usize);
    }
    Decor { comps, pole }
}

fn gauge_normalize(skel: &Skeleton, n: u8, comps: &mut [CompDecor], order: &[(usize, usize)], nch: usize) {
    // vertices: 0 = boundary, c + 1 = chord c; edges = labelled segments
    let mut edges: Vec<(usize, usize, usize, usize)> = Vec::new(); // (u, v, comp, slot)
    for (ci, c) in comps.iter().enumerate() {
        let circle = is_circle(skel, order[ci].0);
        let k = c.pts.len();
        if k == 0 {
            continue;
        }
        let v = |j: usize| c.pts[j] as usize + 1;
        if circle {
            for j in 0..k {
                edges.push((v((j + k - 1) % k), v(j), ci, j));
            }
        } else {
            edges.push((0, v(0), ci, 0));
            for j in 1..k {
                edges.push((v(j - 1), v(j), ci, j));
            }
            edges.push((v(k - 1), 0, ci, k));
        }
    }
    let nv = nch + 1;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (e, &(u, v, _, _)) in edges.iter().enumerate() {
        adj[u].push(e);
        if v != u {
            adj[v].push(e);
        }
    }
    let nn = n as i64;
    let mut g: Vec<Option<i64>> = vec![None; nv];
    let mut q = VecDeque::new();
    for root in 0..nv {
        if g[root].is_some() {
            continue;
        }
        g[root] = Some(0);
        q.push_back(root);
        while let Some(x) = q.pop_front() {
            for &e in &adj[x] {
                let (u, v, ci, slot) = edges[e];
                let l = comps[ci].labels[slot] as i64;
                if u == x && g[v].is_none() {
                    g[v] = Some(g[u].unwrap() - l);
                    q.push_back(v);
                } else if v == x && g[u].is_none() {
                    g[u] = Some(l + g[v].unwrap());
                    q.push_back(u);
                }
            }
        }
    }
    for &(u, v, ci, slot) in &edges {
        let l = comps[ci].labels[slot] as i64 + g[v].unwrap() - g[u].unwrap();
        comps[ci].labels[slot] = l.rem_euclid(nn) as u8;
    }
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Canonical representative of a decoration.
pub fn canonical(skel: &Skeleton, n: u8, d: &Decor) -> Decor {
    let arcs: Vec<usize> = (0..skel.comps.len()).filter(|&i| !is_circle(skel, i)).collect();
    let circles: Vec<usize> = (0..skel.comps.len()).filter(|&i| is_circle(skel, i)).collect();
    let mut best: Option<Decor> = None;
    for perm in permutations(&circles) {
        let rots: Vec<usize> = perm.iter().map(|&i| d.comps[i].pts.len().max(1)).collect();
        let total: usize = rots.iter().product();
        for mut code in 0..total {
            let mut order: Vec<(usize, usize)> = arcs.iter().map(|&i| (i, 0)).collect();
            for (k, &i) in perm.iter().enumerate() {
                order.push((i, code % rots[k]));
                code /= rots[k];
            }
            let cand = normal_for(skel, n, d, &order);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_else(|| Decor { comps: Vec::new(), pole: Vec::new() })
}

/// A single N-chord diagram.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NDiagram {
    pub skel: Arc<Skeleton>,
    pub n: u8,
    pub d: Decor,
}

impl fmt::Debug for NDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {}", self.skel, self.d.to_text())
    }
}

impl NDiagram {
    /// Validate and canonicalize.
    pub fn new(skel: Arc<Skeleton>, n: u8, d: Decor) -> Result<NDiagram, DiagramError> {
        validate(&skel, n, &d)?;
        let d = canonical(&skel, n, &d);
        Ok(NDiagram { skel, n, d })
    }

    pub fn identity(skel: Arc<Skeleton>, n: u8) -> NDiagram {
        let d = Decor::empty(&skel);
        NDiagram { skel, n, d }
    }

    pub fn degree(&self) -> usize {
        self.d.degree()
    }

    pub fn compose(a: &NDiagram, b: &NDiagram) -> Result<NDiagram, DiagramError> {
        let plan = a.skel.glue(&b.skel)?;
        let skel = Arc::new(plan.skel.clone());
        let d = glue_decor(&plan, a.n, &a.d, &b.d, a.d.degree() as u16);
        Ok(NDiagram { d: canonical(&skel, a.n, &d), skel, n: a.n })
    }

    pub fn tensor(a: &NDiagram, b: &NDiagram) -> Result<NDiagram, DiagramError> {
        let (skel, origin) = a.skel.tensor(&b.skel)?;
        let d = tensor_decor(&origin, &a.d, &b.d, a.d.degree() as u16);
        let skel = Arc::new(skel);
        Ok(NDiagram { d: canonical(&skel, a.n, &d), skel, n: a.n })
    }
}

fn merge_labels(n: u8, a: u8, b: u8) -> u8 {
    ((a as u16 + b as u16) % n as u16) as u8
}

/// Decoration of `bottom ∘ top` along a glue plan (not canonicalized).
pub fn glue_decor(plan: &crate::skeleton::GluePlan, n: u8, bottom: &Decor, top: &Decor, offset: u16) -> Decor {
    let layer = |l: u8| if l == 0 { bottom } else { top };
    let shift = |l: u8, p: u16| if l == 0 { p } else { p + offset };
    let mut comps = Vec::with_capacity(plan.pieces.len());
    for (ci, pieces) in plan.pieces.iter().enumerate() {
        let circle = matches!(plan.skel.comps[ci], Component::Circle);
        let mut pts = Vec::new();
        let mut labels: Vec<u8> = Vec::new();
        let mut res = plan.residue_shift[ci];
        for &(l, k) in pieces {
            let c = &layer(l).comps[k];
            res ^= c.res;
            pts.extend(c.pts.iter().map(|&p| shift(l, p)));
            if let Some(last) = labels.last_mut() {
                *last = merge_labels(n, *last, c.labels[0]);
                labels.extend_from_slice(&c.labels[1..]);
            } else {
                labels.extend_from_slice(&c.labels);
            }
        }
        let single_circle = pieces.len() == 1 && {
            let (l, k) = pieces[0];
            let c = &layer(l).comps[k];
            c.labels.len() != c.pts.len() + 1
        };
        if circle && !single_circle {
            // chain closed into a loop: the last segment joins the first
            let last = labels.pop().unwrap();
            if labels.is_empty() {
                labels.push(last);
            } else {
                labels[0] = merge_labels(n, labels[0], last);
            }
        }
        comps.push(CompDecor { pts, labels, res });
    }
    let mut pole: Vec<u16> = bottom.pole.clone();
    pole.extend(top.pole.iter().map(|&p| p + offset));
    Decor { comps, pole }
}

fn tensor_decor(origin: &[(u8, usize)], left: &Decor, right: &Decor, offset: u16) -> Decor {
    let comps = origin
        .iter()
        .map(|&(l, k)| {
            if l == 0 {
                left.comps[k].clone()
            } else {
                let c = &right.comps[k];
                CompDecor { pts: c.pts.iter().map(|p| p + offset).collect(), labels: c.labels.clone(), res: c.res }
            }
        })
        .collect();
    Decor { comps, pole: left.pole.clone() }
}

/// Truncated linear combination of canonical diagrams on one skeleton.
#[derive(Clone)]
pub struct DiagramSeries {
    pub skel: Arc<Skeleton>,
    pub n: u8,
    pub cap: usize,
    pub terms: FxHashMap<Decor, Q>,
}

impl PartialEq for DiagramSeries {
    fn eq(&self, o: &Self) -> bool {
        self.skel == o.skel && self.n == o.n && self.terms == o.terms
    }
}

impl fmt::Debug for DiagramSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl DiagramSeries {
    pub fn zero(skel: Arc<Skeleton>, n: u8, cap: usize) -> Self {
        DiagramSeries { skel, n, cap, terms: FxHashMap::default() }
    }

    pub fn unit(skel: Arc<Skeleton>, n: u8, cap: usize) -> Self {
        let mut s = Self::zero(skel.clone(), n, cap);
        s.terms.insert(Decor::empty(&skel), Q::one());
        s
    }

    pub fn identity(pole: bool, w: &[Sign], n: u8, cap: usize) -> Self {
        Self::unit(Arc::new(Skeleton::identity(pole, w)), n, cap)
    }

    /// Series with one term; `d` need not be canonical.
    pub fn single(skel: Arc<Skeleton>, n: u8, cap: usize, d: Decor, c: Q) -> Self {
        let mut s = Self::zero(skel.clone(), n, cap);
        if d.degree() <= cap {
            s.add_term(canonical(&skel, n, &d), c);
        }
        s
    }

    pub fn add_term(&mut self, d: Decor, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        s.cap = s.cap.min(o.cap);
        for (d, c) in &o.terms {
            s.add_term(d.clone(), c.clone());
        }
        s.truncate(s.cap);
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
            for v in s.terms.values_mut() {
                *v *= c;
            }
        }
        s
    }

    pub fn truncate(&mut self, cap: usize) {
        self.cap = cap;
        self.terms.retain(|d, _| d.degree() <= cap);
    }

    pub fn degree_part(&self, k: usize) -> Self {
        let mut s = self.clone();
        s.terms.retain(|d, _| d.degree() == k);
        s
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|d| d.degree()).min()
    }

    /// `bottom` followed by `top`.
    pub fn compose(bottom: &Self, top: &Self) -> Result<Self, DiagramError> {
        let plan = bottom.skel.glue(&top.skel)?;
        let skel = Arc::new(plan.skel.clone());
        let cap = bottom.cap.min(top.cap);
        let n = bottom.n;
        let mut out = Self::zero(skel.clone(), n, cap);
        let mut tops: Vec<(&Decor, &Q, usize)> = top.terms.iter().map(|(d, c)| (d, c, d.degree())).collect();
        tops.sort_by_key(|t| t.2);
        for (d1, c1) in &bottom.terms {
            let k1 = d1.degree();
            for &(d2, c2, k2) in &tops {
                if k1 + k2 > cap {
                    break;
                }
                let d = glue_decor(&plan, n, d1, d2, k1 as u16);
                out.add_term(canonical(&skel, n, &d), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Product in an endomorphism algebra, `self` on top of `o`.
    pub fn mul(&self, o: &Self) -> Self {
        Self::compose(o, self).expect("composable")
    }

    pub fn tensor(left: &Self, right: &Self) -> Result<Self, DiagramError> {
        let (skel, origin) = left.skel.tensor(&right.skel)?;
        let skel = Arc::new(skel);
        let cap = left.cap.min(right.cap);
        let mut out = Self::zero(skel.clone(), left.n, cap);
        for (d1, c1) in &left.terms {
            let k1 = d1.degree();
            for (d2, c2) in &right.terms {
                if k1 + d2.degree() > cap {
                    continue;
                }
                let d = tensor_decor(&origin, d1, d2, k1 as u16);
                out.add_term(canonical(&skel, left.n, &d), c1 * c2);
            }
        }
        Ok(out)
    }

    /// exp of a series without degree-0 part, in an endomorphism algebra.
    pub fn exp(&self) -> Self {
        let mut acc = Self::unit(self.skel.clone(), self.n, self.cap);
        let mut pw = acc.clone();
        for k in 1..=self.cap {
            pw = pw.mul(self).scale(&Q::new(1.into(), (k as i64).into()));
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        acc
    }

    /// Sorted text: one line per term, "degree coefficient decoration".
    pub fn to_text(&self) -> String {
        let mut lines: Vec<(usize, String, String)> =
            self.terms.iter().map(|(d, c)| (d.degree(), d.to_text(), fmt_q(c))).collect();
        lines.sort();
        let mut s = format!("series N={} cap={} skeleton {}\n", self.n, self.cap, skeleton_text(&self.skel));
        for (k, d, c) in lines {
            s.push_str(&format!("{k} {c} {d}\n"));
        }
        s
    }

    pub fn from_text(t: &str) -> Result<Self, DiagramError> {
        let perr = |line: usize, msg: &str| DiagramError::Parse { line, msg: msg.to_string() };
        let mut lines = t.lines();
        let head = lines.next().ok_or_else(|| perr(1, "empty input"))?;
        let rest = head.strip_prefix("series N=").ok_or_else(|| perr(1, "missing header"))?;
        let (nstr, rest) = rest.split_once(" cap=").ok_or_else(|| perr(1, "missing cap"))?;
        let (capstr, sk) = rest.split_once(" skeleton ").ok_or_else(|| perr(1, "missing skeleton"))?;
        let n: u8 = nstr.parse().map_err(|_| perr(1, "bad N"))?;
        let cap: usize = capstr.parse().map_err(|_| perr(1, "bad cap"))?;
        let skel = Arc::new(skeleton_from_text(sk).ok_or_else(|| perr(1, "bad skeleton"))?);
        let mut s = Self::zero(skel.clone(), n, cap);
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut f = line.split_whitespace();
            let _deg = f.next();
            let c = f.next().and_then(parse_q).ok_or_else(|| perr(i + 2, "bad coefficient"))?;
            let d = f.next().and_then(Decor::from_text).ok_or_else(|| perr(i + 2, "bad decoration"))?;
            validate(&skel, n, &d)?;
            s.add_term(canonical(&skel, n, &d), c);
        }
        Ok(s)
    }
}

pub fn skeleton_text(s: &Skeleton) -> String {
    let e = |x: &End| match x {
        End::Source(i) => format!("S{i}"),
        End::Target(i) => format!("T{i}"),
    };
    let mut parts = vec![format!(
        "{}{}>{}{}",
        if s.pole { "*" } else { "" },
        crate::skeleton::word_str(&s.source),
        if s.pole { "*" } else { "" },
        crate::skeleton::word_str(&s.target)
    )];
    for c in &s.comps {
        parts.push(match c {
            Component::Arc { start, end } => format!("{}{}", e(start), e(end)),
            Component::Circle => "O".into(),
        });
    }
    parts.join(",")
}

pub fn skeleton_from_text(t: &str) -> Option<Skeleton> {
    let mut parts = t.trim().split(',');
    let (src, tgt) = parts.next()?.split_once('>')?;
    let pole = src.starts_with('*');
    let word = |s: &str| -> Option<Vec<Sign>> {
        s.trim_start_matches('*')
            .chars()
            .map(|c| match c {
                '+' => Some(Sign::Plus),
                '-' => Some(Sign::Minus),
                _ => None,
            })
            .collect()
    };
    let end = |s: &str| -> Option<End> {
        let (k, i) = s.split_at(1);
        let i = i.parse().ok()?;
        match k {
            "S" => Some(End::Source(i)),
            "T" => Some(End::Target(i)),
            _ => None,
        }
    };
    let mut comps = Vec::new();
    for p in parts {
        if p == "O" {
            comps.push(Component::Circle);
        } else {
            let k = p[1..].find(['S', 'T'])? + 1;
            comps.push(Component::Arc { start: end(&p[..k])?, end: end(&p[k..])? });
        }
    }
    Skeleton::new(pole, word(src)?, word(tgt)?, comps).ok()
}

/// Builders for elementary decorations on the identity skeleton of a word.
pub struct Strands {
    pub skel: Arc<Skeleton>,
    pub word: Vec<Sign>,
    /// Component index of strand i (0-based).
    pub comp: Vec<usize>,
}

impl Strands {
    pub fn new(pole: bool, word: &[Sign]) -> Strands {
        let skel = Skeleton::identity(pole, word);
        let comp = (0..word.len()).map(|i| skel.comp_at(End::Source(i))).collect();
        Strands { skel: Arc::new(skel), word: word.to_vec(), comp }
    }

    fn blank(&self) -> Decor {
        Decor::empty(&self.skel)
    }

    /// Chord between strands i and j (1-based; 0 is the pole) carrying the
    /// labels (-a, a) around its endpoint on strand i.
    pub fn chord(&self, i: usize, j: usize, a: i64, n: u8) -> Decor {
        assert!(i != j && j != 0);
        let mut d = self.blank();
        let nn = n as i64;
        if i == 0 {
            let c = &mut d.comps[self.comp[j - 1]];
            c.pts = vec![0];
            c.labels = vec![0, 0];
            d.pole = vec![0];
        } else {
            let ci = &mut d.comps[self.comp[i - 1]];
            ci.pts = vec![0];
            ci.labels = vec![(-a).rem_euclid(nn) as u8, a.rem_euclid(nn) as u8];
            let cj = &mut d.comps[self.comp[j - 1]];
            cj.pts = vec![0];
            cj.labels = vec![0, 0];
        }
        d
    }

    /// Chord with both ends on strand i: labels (0, a, -a).
    pub fn self_chord(&self, i: usize, a: i64, n: u8) -> Decor {
        let nn = n as i64;
        let mut d = self.blank();
        let c = &mut d.comps[self.comp[i - 1]];
        c.pts = vec![0, 0];
        c.labels = vec![0, a.rem_euclid(nn) as u8, (-a).rem_euclid(nn) as u8];
        d
    }

    /// Orientation-relative label `a` on strand i.
    pub fn label(&self, i: usize, a: i64, n: u8) -> Decor {
        let mut d = self.blank();
        d.comps[self.comp[i - 1]].labels = vec![a.rem_euclid(n as i64) as u8];
        d
    }

    /// Geometric loop label: τ^a on strand i.
    pub fn tau(&self, i: usize, a: i64, n: u8) -> Decor {
        self.label(i, a * self.word[i - 1].eps(), n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::*;

    #[test]
    fn labels_add_along_strand() {
        let st = Strands::new(true, &[Plus]);
        let a = DiagramSeries::single(st.skel.clone(), 3, 2, st.label(1, 1, 3), Q::one());
        let b = DiagramSeries::single(st.skel.clone(), 3, 2, st.label(1, 1, 3), Q::one());
        let ab = a.mul(&b);
        let expect = DiagramSeries::single(st.skel.clone(), 3, 2, st.label(1, 2, 3), Q::one());
        assert_eq!(ab, expect);
    }

    #[test]
    fn gauge_slides_label_through_pole_chord() {
        let st = Strands::new(true, &[Plus]);
        let t0 = DiagramSeries::single(st.skel.clone(), 3, 2, st.chord(0, 1, 0, 3), Q::one());
        let tau = DiagramSeries::single(st.skel.clone(), 3, 2, st.label(1, 1, 3), Q::one());
        assert_eq!(t0.mul(&tau), tau.mul(&t0));
    }

    #[test]
    fn text_round_trip() {
        let st = Strands::new(true, &[Plus, Minus]);
        let s = DiagramSeries::single(st.skel.clone(), 2, 3, st.chord(1, 2, 1, 2), Q::new(3.into(), 7.into()));
        let t = s.to_text();
        assert_eq!(DiagramSeries::from_text(&t).unwrap(), s);
    }

    #[test]
    fn pole_pole_chord_rejected() {
        let st = Strands::new(true, &[Plus]);
        let d = Decor { comps: vec![CompDecor { pts: vec![], labels: vec![0], res: 0 }], pole: vec![0, 0] };
        assert_eq!(validate(&st.skel, 1, &d), Err(DiagramError::PolePoleChord(0)));
    }
}
