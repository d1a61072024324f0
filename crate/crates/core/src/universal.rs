//! Symbols of singular words and a realization of every N-chord diagram by a
//! singular word, used to check that the leading term of G on a singular word
//! is its diagram.

use std::sync::Arc;

use num_traits::One;

use crate::diagram::{canonical, Decor, DiagramSeries, Strands};
use crate::error::EvalError;
use crate::invariant::{t_zero, Structure};
use crate::quotient::Quotient;
use crate::ring::Q;
use crate::skeleton::{Component, End, Sign, Skeleton};
use crate::tangle::{Orient, Slice, TangleWord};

fn bare(pole: bool, w: &[Sign], s: &Slice, n: u8, cap: usize) -> DiagramSeries {
    let sk = TangleWord::slice_skeleton(pole, w, s);
    let d = Decor::empty(&sk);
    DiagramSeries::single(Arc::new(sk), n, cap, d, Q::one())
}

/// Diagram of a singular word: a chord per double point, the pole chord t⁰
/// per singular pole crossing, labels for loop generators, bare skeleton
/// elsewhere.
pub fn symbol(t: &TangleWord, n: u8) -> Result<DiagramSeries, EvalError> {
    let cap = t.slices.iter().filter(|s| s.is_singular()).count();
    let lv = t.levels();
    let mut acc = DiagramSeries::identity(t.pole, &t.source, n, cap);
    for (k, s) in t.slices.iter().enumerate() {
        let w = &lv[k];
        let piece = match *s {
            Slice::SingCross { pos } => {
                let sk = TangleWord::slice_skeleton(t.pole, w, &Slice::Cross { pos, sign: Sign::Plus });
                let mut d = Decor::empty(&sk);
                for e in [End::Source(pos - 1), End::Source(pos)] {
                    let c = &mut d.comps[sk.comp_at(e)];
                    c.pts = vec![0];
                    c.labels = vec![0, 0];
                }
                DiagramSeries::single(Arc::new(sk), n, cap, d, Q::one())
            }
            Slice::SingPole => t_zero(&Strands::new(true, w), 1, n, cap),
            Slice::Pole { sign } => {
                let st = Strands::new(true, w);
                let d = st.tau(1, sign.eps(), n);
                DiagramSeries::single(st.skel.clone(), n, cap, d, Q::one())
            }
            _ => bare(t.pole, w, s, n, cap),
        };
        acc = DiagramSeries::compose(&acc, &piece)?;
    }
    Ok(acc)
}

/// Word under construction, tracking which column sits at each position.
struct Builder {
    pole: bool,
    source: Vec<Sign>,
    slices: Vec<Slice>,
    order: Vec<usize>,
    letter: Vec<Sign>,
}

impl Builder {
    fn pos(&self, col: usize) -> usize {
        self.order.iter().position(|&c| c == col).expect("live column") + 1
    }

    fn new_col(&mut self, x: Sign) -> usize {
        self.letter.push(x);
        self.letter.len() - 1
    }

    fn cross(&mut self, pos: usize, singular: bool) {
        self.slices.push(if singular { Slice::SingCross { pos } } else { Slice::Cross { pos, sign: Sign::Plus } });
        self.order.swap(pos - 1, pos);
    }

    /// Cup at `pos` whose left letter is `x`; returns the new (left, right) columns.
    fn cup(&mut self, pos: usize, x: Sign) -> (usize, usize) {
        let a = self.new_col(x);
        let b = self.new_col(x.flip());
        self.slices.push(Slice::Cup { pos, orient: Orient::with_left(x) });
        self.order.insert(pos - 1, b);
        self.order.insert(pos - 1, a);
        (a, b)
    }

    fn cap_pair(&mut self, a: usize, b: usize) {
        let p = self.pos(a);
        assert_eq!(self.order[p], b, "cap on non-adjacent columns");
        self.slices.push(Slice::Cap { pos: p });
        self.order.drain(p - 1..=p);
    }

    fn bring(&mut self, col: usize, target: usize) {
        while self.pos(col) > target {
            let p = self.pos(col);
            self.cross(p - 1, false);
        }
        while self.pos(col) < target {
            let p = self.pos(col);
            self.cross(p, false);
        }
    }

    fn restore(&mut self, home: &[usize]) {
        for (i, &c) in home.iter().enumerate() {
            self.bring(c, i + 1);
        }
    }

    /// Orientation-relative label `l` on a column, applied at position 1.
    fn label(&mut self, col: usize, l: u8, home: &[usize]) {
        if l == 0 {
            return;
        }
        self.bring(col, 1);
        let sign = self.letter[col];
        for _ in 0..l {
            self.slices.push(Slice::Pole { sign });
        }
        self.restore(home);
    }

    fn curl(&mut self, col: usize) {
        let p = self.pos(col);
        let x = self.letter[col];
        let (_, b) = self.cup(p + 1, x);
        self.cross(p, false);
        self.cap_pair(col, b);
    }
}

/// Where a component's serpentine sits.
struct Serpentine {
    /// Column of each point, in orientation order.
    points: Vec<usize>,
    /// Column carrying the labels when there are no points.
    plain: usize,
    /// Column pairs closed by caps at the end.
    caps: Vec<(usize, usize)>,
    /// Column left over once the caps are closed.
    top: usize,
}

fn build(skel: &Skeleton, d: &Decor, curls: &[bool]) -> Result<TangleWord, EvalError> {
    let closed = skel.source.is_empty() && skel.target.is_empty();
    if !closed && !skel.is_identity() {
        return Err(EvalError::Other("realization needs an identity or closed skeleton".into()));
    }
    if !skel.pole && d.comps.iter().any(|c| c.labels.iter().any(|&l| l != 0)) {
        return Err(EvalError::Other("labels need the pole".into()));
    }
    let mut b = Builder { pole: skel.pole, source: skel.source.clone(), slices: Vec::new(), order: Vec::new(), letter: Vec::new() };
    // main column of each component, plus the return column of each circle
    let mut main = vec![usize::MAX; skel.comps.len()];
    let mut circle_ret: Vec<(usize, usize)> = Vec::new();
    for (i, &x) in skel.source.iter().enumerate() {
        let c = b.new_col(x);
        b.order.push(c);
        let ci = skel.comp_at(End::Source(i));
        main[ci] = c;
    }
    for (ci, comp) in skel.comps.iter().enumerate() {
        if matches!(comp, Component::Circle) {
            let (a, r) = b.cup(b.order.len() + 1, Sign::Plus);
            main[ci] = a;
            circle_ret.push((ci, r));
        }
    }
    // expand from the right so that earlier positions stay put
    let mut by_pos: Vec<usize> = (0..skel.comps.len()).collect();
    by_pos.sort_by_key(|&ci| std::cmp::Reverse(b.pos(main[ci])));
    let mut serp: Vec<Option<Serpentine>> = (0..skel.comps.len()).map(|_| None).collect();
    for ci in by_pos {
        let m = d.comps[ci].pts.len();
        let c0 = main[ci];
        let x = b.letter[c0];
        let p = b.pos(c0);
        let mut s = Serpentine { points: Vec::new(), plain: c0, caps: Vec::new(), top: c0 };
        if m > 0 {
            match x {
                Sign::Plus => {
                    // columns 1..2m-1 left to right, the last one is c0
                    let mut cols = Vec::new();
                    for j in 0..m - 1 {
                        let (u, v) = b.cup(p + 2 * j, Sign::Plus);
                        cols.push(u);
                        cols.push(v);
                    }
                    cols.push(c0);
                    for j in 0..m {
                        s.points.push(cols[2 * j]);
                    }
                    for j in 0..m - 1 {
                        s.caps.push((cols[2 * j + 1], cols[2 * j + 2]));
                    }
                    s.top = cols[0];
                }
                Sign::Minus => {
                    // columns 1..2m+1 left to right, the first one is c0
                    let mut cols = vec![c0];
                    for j in 0..m {
                        let (u, v) = b.cup(p + 1 + 2 * j, Sign::Plus);
                        cols.push(u);
                        cols.push(v);
                    }
                    for j in 0..m {
                        s.points.push(cols[2 * j + 1]);
                    }
                    for j in 0..m {
                        s.caps.push((cols[2 * j], cols[2 * j + 1]));
                    }
                    s.top = cols[2 * m];
                }
            }
        }
        serp[ci] = Some(s);
    }
    let serp: Vec<Serpentine> = serp.into_iter().map(|s| s.expect("every component expanded")).collect();
    let home = b.order.clone();

    // labels after the last point of an arc sit below it
    for (ci, comp) in skel.comps.iter().enumerate() {
        let c = &d.comps[ci];
        let s = &serp[ci];
        if c.pts.is_empty() {
            b.label(s.plain, c.labels[0], &home);
        } else if matches!(comp, Component::Arc { .. }) {
            b.label(*s.points.last().unwrap(), c.labels[c.pts.len()], &home);
        }
    }

    // chords: each endpoint is (component, index) or the pole
    let mut ends: std::collections::BTreeMap<u16, Vec<usize>> = Default::default();
    for (ci, c) in d.comps.iter().enumerate() {
        for (j, &h) in c.pts.iter().enumerate() {
            ends.entry(h).or_default().push(serp[ci].points[j]);
        }
    }
    for cols in ends.values() {
        if cols.len() == 2 {
            let (l, r) = if b.pos(cols[0]) < b.pos(cols[1]) { (cols[0], cols[1]) } else { (cols[1], cols[0]) };
            let target = b.pos(l) + 1;
            b.bring(r, target);
            let p = b.pos(l);
            b.cross(p, true);
            b.restore(&home);
        }
    }
    for h in &d.pole {
        let cols = &ends[h];
        if cols.len() != 1 {
            return Err(EvalError::Other(format!("pole chord {h} has {} strand ends", cols.len())));
        }
        b.bring(cols[0], 1);
        b.slices.push(Slice::SingPole);
        b.restore(&home);
    }

    // labels before each point sit above it
    for (ci, c) in d.comps.iter().enumerate() {
        for (j, &col) in serp[ci].points.iter().enumerate() {
            b.label(col, c.labels[j], &home);
        }
    }

    for (ci, &want) in curls.iter().enumerate() {
        if want {
            let s = &serp[ci];
            b.curl(s.points.first().copied().unwrap_or(s.plain));
        }
    }
    for s in &serp {
        for &(u, v) in &s.caps {
            b.cap_pair(u, v);
        }
    }
    for &(ci, r) in &circle_ret {
        b.cap_pair(serp[ci].top, r);
    }
    Ok(TangleWord::new(b.pole, b.source, b.slices)?)
}

/// A singular word whose symbol is exactly the given diagram.
pub fn realize(skel: &Skeleton, n: u8, d: &Decor) -> Result<TangleWord, EvalError> {
    let target = canonical(skel, n, d);
    let k = skel.comps.len();
    for mask in 0..1u32 << k {
        let curls: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
        let t = build(skel, d, &curls)?;
        let s = symbol(&t, n)?;
        if s.terms.len() == 1 && s.terms.get(&target).is_some_and(|c| c.is_one()) {
            return Ok(t);
        }
    }
    Err(EvalError::Other(format!("no realization of {}", d.to_text())))
}

/// Check that G of the realization of `d` starts with `d` in the quotient:
/// nothing below degree deg(d), and the degree-deg(d) part equals `d`.
pub fn leading_term_matches(sd: &Structure, q: &mut Quotient, d: &Decor) -> Result<bool, EvalError> {
    let k = d.degree();
    let t = realize(&q.skel, q.n, d)?;
    let g = sd.evaluate_singular(&t)?;
    let expect = DiagramSeries::single(q.skel.clone(), q.n, sd.cap, d.clone(), Q::one());
    let mut diff = g.degree_part(k).sub(&expect);
    for i in 0..k {
        diff = diff.add(&g.degree_part(i));
    }
    Ok(q.reduce(&diff)?.is_empty())
}
