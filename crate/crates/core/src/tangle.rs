//! Sliced presentations of framed oriented B-tangles: the word DSL, stacking,
//! tensor products, the skein resolution of singular slices and local moves.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::TangleError;
use crate::ring::Q;
use crate::skeleton::{word_str, Component, End, Sign, Skeleton};

/// Orientation of a cup, read left to right along its two new endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orient {
    /// New letters `+-`.
    Lr,
    /// New letters `-+`.
    Rl,
}

impl Orient {
    pub fn letters(self) -> (Sign, Sign) {
        match self {
            Orient::Lr => (Sign::Plus, Sign::Minus),
            Orient::Rl => (Sign::Minus, Sign::Plus),
        }
    }
    /// Cup whose left letter is `s`.
    pub fn with_left(s: Sign) -> Orient {
        match s {
            Sign::Plus => Orient::Lr,
            Sign::Minus => Orient::Rl,
        }
    }
}

/// One elementary level. Positions are 1-based among the non-pole strands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slice {
    Cross { pos: usize, sign: Sign },
    Cup { pos: usize, orient: Orient },
    Cap { pos: usize },
    Pole { sign: Sign },
    SingCross { pos: usize },
    SingPole,
}

impl Slice {
    pub fn is_singular(&self) -> bool {
        matches!(self, Slice::SingCross { .. } | Slice::SingPole)
    }

    /// (first position, strands consumed, strands produced).
    fn footprint(&self) -> (usize, usize, usize) {
        match *self {
            Slice::Cross { pos, .. } | Slice::SingCross { pos } => (pos, 2, 2),
            Slice::Cup { pos, .. } => (pos, 0, 2),
            Slice::Cap { pos } => (pos, 2, 0),
            Slice::Pole { .. } | Slice::SingPole => (1, 1, 1),
        }
    }

    fn with_pos(&self, p: usize) -> Slice {
        match *self {
            Slice::Cross { sign, .. } => Slice::Cross { pos: p, sign },
            Slice::SingCross { .. } => Slice::SingCross { pos: p },
            Slice::Cup { orient, .. } => Slice::Cup { pos: p, orient },
            Slice::Cap { .. } => Slice::Cap { pos: p },
            s => s,
        }
    }
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slice::Cross { pos, sign } => write!(f, "X {pos} {}", sign.ch()),
            Slice::Cup { pos, orient } => {
                write!(f, "U {pos} {}", if *orient == Orient::Lr { "lr" } else { "rl" })
            }
            Slice::Cap { pos } => write!(f, "A {pos}"),
            Slice::Pole { sign } => write!(f, "T {}", sign.ch()),
            Slice::SingCross { pos } => write!(f, "S {pos}"),
            Slice::SingPole => write!(f, "S0"),
        }
    }
}

/// A validated word of slices, read bottom (source) to top (target).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TangleWord {
    pub pole: bool,
    pub source: Vec<Sign>,
    pub slices: Vec<Slice>,
}

impl fmt::Debug for TangleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

impl fmt::Display for TangleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

fn obj_str(pole: bool, w: &[Sign]) -> String {
    format!("{}{}", if pole { "*" } else { "" }, word_str(w))
}

/// Word after applying `s` to `w`, or a description of the mismatch.
fn apply_slice(pole: bool, w: &[Sign], s: &Slice) -> Result<Vec<Sign>, (bool, String)> {
    let n = w.len();
    let need = |k: usize, p: usize| -> Result<(), (bool, String)> {
        if p == 0 {
            return Err((true, "position 0 is the pole".into()));
        }
        if p + k - 1 > n {
            return Err((false, format!("at least {} strands", p + k - 1)));
        }
        Ok(())
    };
    match *s {
        Slice::Cross { pos, .. } | Slice::SingCross { pos } => {
            need(2, pos)?;
            let mut v = w.to_vec();
            v.swap(pos - 1, pos);
            Ok(v)
        }
        Slice::Cup { pos, orient } => {
            if pos == 0 {
                return Err((true, "cup touching the pole".into()));
            }
            if pos > n + 1 {
                return Err((false, format!("at least {} strands", pos - 1)));
            }
            let (a, b) = orient.letters();
            let mut v = w.to_vec();
            v.splice(pos - 1..pos - 1, [a, b]);
            Ok(v)
        }
        Slice::Cap { pos } => {
            need(2, pos)?;
            if w[pos - 1] == w[pos] {
                return Err((false, "opposite letters under the cap".into()));
            }
            let mut v = w.to_vec();
            v.drain(pos - 1..pos + 1);
            Ok(v)
        }
        Slice::Pole { .. } | Slice::SingPole => {
            if !pole {
                return Err((true, "pole loop without a pole".into()));
            }
            if n == 0 {
                return Err((false, "at least 1 strand".into()));
            }
            Ok(w.to_vec())
        }
    }
}

/// Braid exponent of a crossing: the geometric over/under type, independent of
/// orientation. The DSL sign is the oriented crossing sign.
pub fn braid_exponent(sign: Sign, left: Sign, right: Sign) -> i64 {
    sign.eps() * if left == right { 1 } else { -1 }
}

pub fn sign_from_exponent(e: i64, left: Sign, right: Sign) -> Sign {
    if e * if left == right { 1 } else { -1 } > 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

impl TangleWord {
    pub fn identity(pole: bool, word: &[Sign]) -> TangleWord {
        TangleWord { pole, source: word.to_vec(), slices: Vec::new() }
    }

    pub fn new(pole: bool, source: Vec<Sign>, slices: Vec<Slice>) -> Result<TangleWord, TangleError> {
        let t = TangleWord { pole, source, slices };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<Vec<Vec<Sign>>, TangleError> {
        let mut lv = vec![self.source.clone()];
        for (k, s) in self.slices.iter().enumerate() {
            let w = lv.last().unwrap();
            match apply_slice(self.pole, w, s) {
                Ok(v) => lv.push(v),
                Err((true, msg)) => return Err(TangleError::Pole { slice: k + 1, line: 0, msg }),
                Err((false, expected)) => {
                    return Err(TangleError::Stacking {
                        slice: k + 1,
                        line: 0,
                        expected,
                        found: obj_str(self.pole, w),
                    })
                }
            }
        }
        Ok(lv)
    }

    /// Words at every level: `levels()[k]` is the input of slice k.
    pub fn levels(&self) -> Vec<Vec<Sign>> {
        self.check().expect("validated word")
    }

    pub fn target(&self) -> Vec<Sign> {
        self.levels().pop().unwrap()
    }

    pub fn is_singular(&self) -> bool {
        self.slices.iter().any(|s| s.is_singular())
    }

    pub fn is_closed(&self) -> bool {
        self.source.is_empty() && self.target().is_empty()
    }

    pub fn serialize(&self) -> String {
        let mut s = format!("obj {} ;", obj_str(self.pole, &self.source));
        for sl in &self.slices {
            s.push_str(&format!(" {sl} ;"));
        }
        s
    }

    /// Skeleton of a single slice applied to `w`.
    pub fn slice_skeleton(pole: bool, w: &[Sign], s: &Slice) -> Skeleton {
        let out = apply_slice(pole, w, s).expect("valid slice");
        // pairs of boundary points joined by the slice
        let mut pairs: Vec<(End, End)> = Vec::new();
        let n = w.len();
        match *s {
            Slice::Cross { pos, .. } | Slice::SingCross { pos } => {
                for i in 0..n {
                    let j = if i == pos - 1 {
                        pos
                    } else if i == pos {
                        pos - 1
                    } else {
                        i
                    };
                    pairs.push((End::Source(i), End::Target(j)));
                }
            }
            Slice::Cup { pos, .. } => {
                for i in 0..n {
                    let j = if i < pos - 1 { i } else { i + 2 };
                    pairs.push((End::Source(i), End::Target(j)));
                }
                pairs.push((End::Target(pos - 1), End::Target(pos)));
            }
            Slice::Cap { pos } => {
                for i in 0..n {
                    if i == pos - 1 || i == pos {
                        continue;
                    }
                    let j = if i < pos - 1 { i } else { i - 2 };
                    pairs.push((End::Source(i), End::Target(j)));
                }
                pairs.push((End::Source(pos - 1), End::Source(pos)));
            }
            Slice::Pole { .. } | Slice::SingPole => {
                for i in 0..n {
                    pairs.push((End::Source(i), End::Target(i)));
                }
            }
        }
        let is_start = |e: End| match e {
            End::Source(i) => w[i] == Sign::Minus,
            End::Target(j) => out[j] == Sign::Plus,
        };
        let comps = pairs
            .into_iter()
            .map(|(a, b)| if is_start(a) { Component::Arc { start: a, end: b } } else { Component::Arc { start: b, end: a } })
            .collect();
        Skeleton::new(pole, w.to_vec(), out, comps).expect("slice skeleton")
    }

    pub fn skeleton(&self) -> Skeleton {
        let lv = self.levels();
        let mut sk = Skeleton::identity(self.pole, &self.source);
        for (k, s) in self.slices.iter().enumerate() {
            let piece = Self::slice_skeleton(self.pole, &lv[k], s);
            sk = sk.glue(&piece).expect("stacked slices glue").skel;
        }
        sk
    }

    /// Stack `t2` on top of `t1`.
    pub fn compose(t1: &TangleWord, t2: &TangleWord) -> Result<TangleWord, TangleError> {
        if t1.pole != t2.pole || t1.target() != t2.source {
            return Err(TangleError::Incomposable(obj_str(t1.pole, &t1.target()), obj_str(t2.pole, &t2.source)));
        }
        let mut slices = t1.slices.clone();
        slices.extend_from_slice(&t2.slices);
        Ok(TangleWord { pole: t1.pole, source: t1.source.clone(), slices })
    }

    /// `bt` on the left, `t` on the right; at each height the left slice comes first.
    pub fn tensor(bt: &TangleWord, t: &TangleWord) -> Result<TangleWord, TangleError> {
        if t.pole {
            return Err(TangleError::DoublePole);
        }
        let lb = bt.levels();
        let mut slices = Vec::new();
        for k in 0..bt.slices.len().max(t.slices.len()) {
            if let Some(s) = bt.slices.get(k) {
                slices.push(*s);
            }
            if let Some(s) = t.slices.get(k) {
                let width = lb[(k + 1).min(bt.slices.len())].len();
                let (p, _, _) = s.footprint();
                slices.push(s.with_pos(p + width));
            }
        }
        let mut source = bt.source.clone();
        source.extend_from_slice(&t.source);
        TangleWord::new(bt.pole, source, slices)
    }

    /// Per-component winding around the pole and blackboard self-writhe.
    /// Arcs come in skeleton order, then circles in the order they close.
    pub fn winding_and_twist(&self) -> Result<Vec<(i64, i64)>, TangleError> {
        if self.is_singular() {
            return Err(TangleError::Singular);
        }
        let (comp_of, n_comp) = self.strand_components();
        let lv = self.levels();
        let mut rec = vec![(0i64, 0i64); n_comp];
        for (k, s) in self.slices.iter().enumerate() {
            match *s {
                Slice::Cross { pos, sign } => {
                    let a = comp_of[k][pos - 1];
                    if a == comp_of[k][pos] {
                        rec[a].1 += sign.eps();
                    }
                }
                Slice::Pole { sign } => {
                    let a = comp_of[k][0];
                    rec[a].0 += sign.eps() * lv[k][0].eps();
                }
                _ => {}
            }
        }
        Ok(rec)
    }

    /// Component id of every strand segment at every level, numbered as in
    /// [`TangleWord::winding_and_twist`].
    pub fn strand_components(&self) -> (Vec<Vec<usize>>, usize) {
        let lv = self.levels();
        // union-find over (level, position)
        let mut offs = Vec::new();
        let mut total = 0;
        for w in &lv {
            offs.push(total);
            total += w.len();
        }
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        let union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra.max(rb)] = ra.min(rb);
            }
        };
        let mut closing_level: Vec<(usize, usize)> = Vec::new();
        for (k, s) in self.slices.iter().enumerate() {
            let n = lv[k].len();
            let (o0, o1) = (offs[k], offs[k + 1]);
            match *s {
                Slice::Cross { pos, .. } | Slice::SingCross { pos } => {
                    for i in 0..n {
                        let j = if i == pos - 1 {
                            pos
                        } else if i == pos {
                            pos - 1
                        } else {
                            i
                        };
                        union(&mut parent, o0 + i, o1 + j);
                    }
                }
                Slice::Cup { pos, .. } => {
                    for i in 0..n {
                        let j = if i < pos - 1 { i } else { i + 2 };
                        union(&mut parent, o0 + i, o1 + j);
                    }
                    union(&mut parent, o1 + pos - 1, o1 + pos);
                }
                Slice::Cap { pos } => {
                    for i in 0..n {
                        if i == pos - 1 || i == pos {
                            continue;
                        }
                        let j = if i < pos - 1 { i } else { i - 2 };
                        union(&mut parent, o0 + i, o1 + j);
                    }
                    union(&mut parent, o0 + pos - 1, o0 + pos);
                    closing_level.push((k, o0 + pos - 1));
                }
                Slice::Pole { .. } | Slice::SingPole => {
                    for i in 0..n {
                        union(&mut parent, o0 + i, o1 + i);
                    }
                }
            }
        }
        let sk = self.skeleton();
        let mut id_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut next = 0;
        let last = lv.len() - 1;
        for c in &sk.comps {
            if let Component::Arc { start, .. } = c {
                let node = match *start {
                    End::Source(i) => i,
                    End::Target(j) => offs[last] + j,
                };
                let r = find(&mut parent, node);
                id_of_root.insert(r, next);
                next += 1;
            }
        }
        for (_, node) in closing_level {
            let r = find(&mut parent, node);
            if let std::collections::btree_map::Entry::Vacant(e) = id_of_root.entry(r) {
                e.insert(next);
                next += 1;
            }
        }
        let comp_of = lv
            .iter()
            .enumerate()
            .map(|(k, w)| (0..w.len()).map(|i| id_of_root[&find(&mut parent, offs[k] + i)]).collect())
            .collect();
        (comp_of, next)
    }
}

/// Parse the tangle DSL.
pub fn parse_tangle_word(text: &str) -> Result<TangleWord, TangleError> {
    let mut stmts: Vec<(usize, usize, Vec<String>)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut col = 1;
        for part in line.split(';') {
            let trimmed = part.trim_start();
            let c = col + (part.len() - trimmed.len());
            let toks: Vec<String> = part.split_whitespace().map(|s| s.to_string()).collect();
            if !toks.is_empty() {
                stmts.push((ln + 1, c, toks));
            }
            col += part.chars().count() + 1;
        }
    }
    let syn = |line: usize, col: usize, msg: String| TangleError::Syntax { line, col, msg };
    let Some((l0, c0, head)) = stmts.first() else {
        return Err(syn(1, 1, "missing obj statement".into()));
    };
    if head[0] != "obj" || head.len() > 2 {
        return Err(syn(*l0, *c0, "expected `obj <word>`".into()));
    }
    let wtxt = head.get(1).map(|s| s.as_str()).unwrap_or("");
    let mut pole = false;
    let mut source = Vec::new();
    for (i, ch) in wtxt.chars().enumerate() {
        match ch {
            '*' if i == 0 => pole = true,
            '+' => source.push(Sign::Plus),
            '-' => source.push(Sign::Minus),
            _ => return Err(syn(*l0, *c0, format!("bad object letter {ch:?}"))),
        }
    }
    let parse_pos = |l: usize, c: usize, s: &str| -> Result<usize, TangleError> {
        s.parse::<usize>().map_err(|_| syn(l, c, format!("bad position {s:?}")))
    };
    let parse_sign = |l: usize, c: usize, s: &str| -> Result<Sign, TangleError> {
        match s {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            _ => Err(syn(l, c, format!("bad sign {s:?}"))),
        }
    };
    let mut slices = Vec::new();
    let mut lines = Vec::new();
    for (l, c, toks) in &stmts[1..] {
        let (l, c) = (*l, *c);
        let args: Vec<&str> = toks.iter().map(|s| s.as_str()).collect();
        let s = match args.as_slice() {
            ["X", p, s] => Slice::Cross { pos: parse_pos(l, c, p)?, sign: parse_sign(l, c, s)? },
            ["U", p, "lr"] => Slice::Cup { pos: parse_pos(l, c, p)?, orient: Orient::Lr },
            ["U", p, "rl"] => Slice::Cup { pos: parse_pos(l, c, p)?, orient: Orient::Rl },
            ["A", p] => Slice::Cap { pos: parse_pos(l, c, p)? },
            ["T", s] => Slice::Pole { sign: parse_sign(l, c, s)? },
            ["S0"] | ["S", "0"] => Slice::SingPole,
            ["S", p] => Slice::SingCross { pos: parse_pos(l, c, p)? },
            ["obj", ..] => return Err(syn(l, c, "repeated obj statement".into())),
            _ => return Err(syn(l, c, format!("unknown statement `{}`", args.join(" ")))),
        };
        slices.push(s);
        lines.push(l);
    }
    TangleWord::new(pole, source, slices).map_err(|e| match e {
        TangleError::Stacking { slice, expected, found, .. } => {
            TangleError::Stacking { slice, line: lines[slice - 1], expected, found }
        }
        TangleError::Pole { slice, msg, .. } => TangleError::Pole { slice, line: lines[slice - 1], msg },
        e => e,
    })
}

/// Formal rational combination of tangle words keyed by serialization.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TangleCombination {
    pub terms: BTreeMap<String, (TangleWord, Q)>,
}

impl TangleCombination {
    pub fn add_term(&mut self, t: TangleWord, c: Q) {
        let key = t.serialize();
        let e = self.terms.entry(key.clone()).or_insert_with(|| (t, Q::zero()));
        e.1 += c;
        if e.1.is_zero() {
            self.terms.remove(&key);
        }
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = (&TangleWord, &Q)> {
        self.terms.values().map(|(t, c)| (t, c))
    }
}

/// Expand every singular slice by the skein rules.
pub fn resolve_singular(st: &TangleWord, n: i64) -> Result<TangleCombination, TangleError> {
    if n < 1 {
        return Err(TangleError::BadN(n));
    }
    let mut partial: Vec<(Vec<Slice>, Q)> = vec![(Vec::new(), Q::one())];
    for s in &st.slices {
        let options: Vec<(Vec<Slice>, Q)> = match *s {
            Slice::SingCross { pos } => vec![
                (vec![Slice::Cross { pos, sign: Sign::Plus }], Q::one()),
                (vec![Slice::Cross { pos, sign: Sign::Minus }], -Q::one()),
            ],
            Slice::SingPole => vec![(vec![Slice::Pole { sign: Sign::Plus }; n as usize], Q::one()), (vec![], -Q::one())],
            s => vec![(vec![s], Q::one())],
        };
        let mut next = Vec::new();
        for (w, c) in &partial {
            for (o, oc) in &options {
                let mut w2 = w.clone();
                w2.extend_from_slice(o);
                next.push((w2, c * oc));
            }
        }
        partial = next;
    }
    let mut out = TangleCombination::default();
    for (sl, c) in partial {
        out.add_term(TangleWord { pole: st.pole, source: st.source.clone(), slices: sl }, c);
    }
    Ok(out)
}

/// Local rewrites that preserve the isotopy class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// Insert `X pos s ; X pos -s` before slice `site`.
    R2Insert { pos: usize, sign: Sign },
    /// Remove a crossing followed by its inverse.
    R2Remove,
    /// Third Reidemeister move on three crossings.
    R3,
    /// Swap two adjacent slices acting on disjoint strands.
    FarCommute,
    /// Insert a snake on strand `pos`; `left` puts the cup on the left.
    ZigzagInsert { pos: usize, left: bool },
    ZigzagRemove,
    /// Exchange a right curl with the left curl of the same sign.
    CurlFlip,
    /// Pull a strand through a cup or cap (three slices to one).
    PitchforkContract,
    /// Inverse of the contraction: `from_left` picks the side the strand
    /// comes from, `exponent` its braid exponent.
    PitchforkExpand { from_left: bool, exponent: i64 },
    /// Insert `T s ; T -s`.
    PoleCancelInsert { sign: Sign },
    PoleCancelRemove,
    /// `T t ; X 1 ; T t ; X 1` and `X 1 ; T t ; X 1 ; T t` in either direction.
    Reflection,
    /// Insert the full loop of a cup (or cap) pair around the pole.
    DualityInsert { cap: bool, sign: Sign },
    DualityRemove,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Braid exponent of a crossing inside the duality loop, given the loop sign.
/// Fixed by the quantum evaluation in the tests.
pub const DUALITY_EXPONENT: i64 = 1;

fn dual_loop(sign: Sign, left: Sign) -> Vec<Slice> {
    // the pair (left, left.flip()) goes once around the pole
    let e = DUALITY_EXPONENT * sign.eps();
    let (a, b) = (left, left.flip());
    vec![
        Slice::Pole { sign },
        Slice::Cross { pos: 1, sign: sign_from_exponent(e, a, b) },
        Slice::Pole { sign },
        Slice::Cross { pos: 1, sign: sign_from_exponent(e, b, a) },
    ]
}

/// Apply `mv` at slice index `site` (an insertion point for insert moves).
pub fn apply_move(t: &TangleWord, mv: &Move, site: usize) -> Result<TangleWord, TangleError> {
    let err = || TangleError::MoveMismatch { mv: mv.to_string(), site };
    let lv = t.levels();
    let sl = &t.slices;
    let at = |k: usize| sl.get(k).copied();
    let mut out = sl.clone();
    match *mv {
        Move::R2Insert { pos, sign } => {
            if site > sl.len() || pos == 0 || pos + 1 > lv[site].len() {
                return Err(err());
            }
            out.splice(site..site, [Slice::Cross { pos, sign }, Slice::Cross { pos, sign: sign.flip() }]);
        }
        Move::R2Remove => match (at(site), at(site + 1)) {
            (Some(Slice::Cross { pos: p, sign: s }), Some(Slice::Cross { pos: q, sign: r })) if p == q && s == r.flip() => {
                out.drain(site..site + 2);
            }
            _ => return Err(err()),
        },
        Move::R3 => {
            let (Some(Slice::Cross { pos: p1, sign: s1 }), Some(Slice::Cross { pos: p2, sign: s2 }), Some(Slice::Cross { pos: p3, sign: s3 })) =
                (at(site), at(site + 1), at(site + 2))
            else {
                return Err(err());
            };
            if p1 != p3 || p2.abs_diff(p1) != 1 {
                return Err(err());
            }
            let e = |k: usize, p: usize, s: Sign| braid_exponent(s, lv[k][p - 1], lv[k][p]);
            let (a, b, c) = (e(site, p1, s1), e(site + 1, p2, s2), e(site + 2, p3, s3));
            if b != a && b != c {
                return Err(err());
            }
            let mut w = lv[site].clone();
            let mut new = Vec::new();
            for (p, x) in [(p2, c), (p1, b), (p2, a)] {
                new.push(Slice::Cross { pos: p, sign: sign_from_exponent(x, w[p - 1], w[p]) });
                w.swap(p - 1, p);
            }
            out.splice(site..site + 3, new);
        }
        Move::FarCommute => {
            let (Some(a), Some(b)) = (at(site), at(site + 1)) else { return Err(err()) };
            let (pa, ia, oa) = a.footprint();
            let (pb, ib, ob) = b.footprint();
            let (a2, b2) = if pb + ib <= pa && !(ib == 0 && pb == pa) {
                (a.with_pos(pa + ob - ib), b)
            } else if pb >= pa + oa && !(ib == 0 && pb == pa + oa && oa == 0) {
                (a, b.with_pos(pb + ia - oa))
            } else {
                return Err(err());
            };
            if matches!(a2, Slice::Pole { .. } | Slice::SingPole) && a2.footprint().0 != 1 {
                return Err(err());
            }
            if matches!(a, Slice::Pole { .. } | Slice::SingPole) && pb + ib <= pa {
                return Err(err());
            }
            out[site] = b2;
            out[site + 1] = a2;
        }
        Move::ZigzagInsert { pos, left } => {
            if site > sl.len() || pos == 0 || pos > lv[site].len() {
                return Err(err());
            }
            let x = lv[site][pos - 1];
            let new = if left {
                [Slice::Cup { pos, orient: Orient::with_left(x) }, Slice::Cap { pos: pos + 1 }]
            } else {
                [Slice::Cup { pos: pos + 1, orient: Orient::with_left(x.flip()) }, Slice::Cap { pos }]
            };
            out.splice(site..site, new);
        }
        Move::ZigzagRemove => match (at(site), at(site + 1)) {
            (Some(Slice::Cup { pos: p, .. }), Some(Slice::Cap { pos: q })) if q + 1 == p || p + 1 == q => {
                out.drain(site..site + 2);
            }
            _ => return Err(err()),
        },
        Move::CurlFlip => {
            let (Some(Slice::Cup { pos: pu, orient }), Some(Slice::Cross { pos: px, sign }), Some(Slice::Cap { pos: pa })) =
                (at(site), at(site + 1), at(site + 2))
            else {
                return Err(err());
            };
            let (l, _) = orient.letters();
            let new = if px + 1 == pu && pa == pu {
                // right curl on strand px, whose letter is the cup's left letter
                let i = px;
                vec![Slice::Cup { pos: i, orient: Orient::with_left(l.flip()) }, Slice::Cross { pos: i + 1, sign }, Slice::Cap { pos: i }]
            } else if px == pu + 1 && pa == pu {
                let i = pu;
                vec![Slice::Cup { pos: i + 1, orient: Orient::with_left(l.flip()) }, Slice::Cross { pos: i, sign }, Slice::Cap { pos: i + 1 }]
            } else {
                return Err(err());
            };
            out.splice(site..site + 3, new);
        }
        Move::PitchforkContract => {
            let (Some(a), Some(b), Some(c)) = (at(site), at(site + 1), at(site + 2)) else { return Err(err()) };
            let e = |k: usize, s: &Slice| match *s {
                Slice::Cross { pos, sign } => Some(braid_exponent(sign, lv[k][pos - 1], lv[k][pos])),
                _ => None,
            };
            let new = match (a, b, c) {
                (Slice::Cup { pos: u, orient }, Slice::Cross { pos: x1, .. }, Slice::Cross { pos: x2, .. })
                    if e(site + 1, &b) == e(site + 2, &c) =>
                {
                    if u >= 2 && x1 == u - 1 && x2 == u {
                        Slice::Cup { pos: u - 1, orient }
                    } else if x1 == u + 1 && x2 == u {
                        Slice::Cup { pos: u + 1, orient }
                    } else {
                        return Err(err());
                    }
                }
                (Slice::Cross { pos: x1, .. }, Slice::Cross { pos: x2, .. }, Slice::Cap { pos: p })
                    if e(site, &a) == e(site + 1, &b) =>
                {
                    if x1 == p && x2 == p - 1 && p >= 2 {
                        Slice::Cap { pos: p - 1 }
                    } else if x1 == p && x2 == p + 1 {
                        Slice::Cap { pos: p + 1 }
                    } else {
                        return Err(err());
                    }
                }
                _ => return Err(err()),
            };
            out.splice(site..site + 3, [new]);
        }
        Move::PitchforkExpand { from_left, exponent } => {
            let Some(s) = at(site) else { return Err(err()) };
            let w = &lv[site];
            let n = w.len();
            // (slices before the crossings, crossing positions, slices after)
            let (pre, xs, post): (Option<Slice>, [usize; 2], Option<Slice>) = match (s, from_left) {
                (Slice::Cup { pos, orient }, true) if pos <= n => (Some(Slice::Cup { pos: pos + 1, orient }), [pos, pos + 1], None),
                (Slice::Cup { pos, orient }, false) if pos >= 2 => (Some(Slice::Cup { pos: pos - 1, orient }), [pos, pos - 1], None),
                (Slice::Cap { pos }, true) if pos >= 2 => (None, [pos - 1, pos], Some(Slice::Cap { pos: pos - 1 })),
                (Slice::Cap { pos }, false) if pos + 2 <= n => (None, [pos + 1, pos], Some(Slice::Cap { pos: pos + 1 })),
                _ => return Err(err()),
            };
            let mut cur = match pre {
                Some(c) => apply_slice(t.pole, w, &c).map_err(|_| err())?,
                None => w.clone(),
            };
            let mut new: Vec<Slice> = pre.into_iter().collect();
            for p in xs {
                if p == 0 || p >= cur.len() {
                    return Err(err());
                }
                new.push(Slice::Cross { pos: p, sign: sign_from_exponent(exponent, cur[p - 1], cur[p]) });
                cur.swap(p - 1, p);
            }
            new.extend(post);
            out.splice(site..site + 1, new);
        }
        Move::PoleCancelInsert { sign } => {
            if !t.pole || site > sl.len() || lv[site].is_empty() {
                return Err(err());
            }
            out.splice(site..site, [Slice::Pole { sign }, Slice::Pole { sign: sign.flip() }]);
        }
        Move::PoleCancelRemove => match (at(site), at(site + 1)) {
            (Some(Slice::Pole { sign: a }), Some(Slice::Pole { sign: b })) if a == b.flip() => {
                out.drain(site..site + 2);
            }
            _ => return Err(err()),
        },
        Move::Reflection => {
            let four: Vec<Slice> = (0..4).filter_map(|k| at(site + k)).collect();
            if four.len() != 4 {
                return Err(err());
            }
            let exps = |k0: usize| -> Option<(i64, i64, i64)> {
                // (pole sign, first crossing exponent, second crossing exponent)
                let mut tsgn = None;
                let mut ex = Vec::new();
                for (j, s) in four.iter().enumerate() {
                    match *s {
                        Slice::Pole { sign } => {
                            if tsgn.is_some_and(|x| x != sign) {
                                return None;
                            }
                            tsgn = Some(sign);
                        }
                        Slice::Cross { pos: 1, sign } => {
                            let w = &lv[k0 + j];
                            ex.push(braid_exponent(sign, w[0], w[1]));
                        }
                        _ => return None,
                    }
                }
                if ex.len() != 2 {
                    return None;
                }
                Some((tsgn?.eps(), ex[0], ex[1]))
            };
            let pole_first = matches!(four[0], Slice::Pole { .. });
            let pattern_ok = (0..4).all(|j| matches!(four[j], Slice::Pole { .. }) == ((j % 2 == 0) == pole_first));
            let Some((ts, e1, e2)) = exps(site) else { return Err(err()) };
            if !pattern_ok || e1 != ts || e2 != ts {
                return Err(err());
            }
            let sign = if ts > 0 { Sign::Plus } else { Sign::Minus };
            let mut w = lv[site].clone();
            let mut new = Vec::new();
            for j in 0..4 {
                if (j % 2 == 0) != pole_first {
                    new.push(Slice::Pole { sign });
                } else {
                    new.push(Slice::Cross { pos: 1, sign: sign_from_exponent(ts, w[0], w[1]) });
                    w.swap(0, 1);
                }
            }
            out.splice(site..site + 4, new);
        }
        Move::DualityInsert { cap, sign } => {
            if !t.pole || site > sl.len() {
                return Err(err());
            }
            if cap {
                // before a cap at position 1
                match at(site) {
                    Some(Slice::Cap { pos: 1 }) => {
                        let left = lv[site][0];
                        out.splice(site..site, dual_loop(sign, left));
                    }
                    _ => return Err(err()),
                }
            } else {
                match site.checked_sub(1).and_then(at) {
                    Some(Slice::Cup { pos: 1, orient }) => {
                        out.splice(site..site, dual_loop(sign, orient.letters().0));
                    }
                    _ => return Err(err()),
                }
            }
        }
        Move::DualityRemove => {
            let four: Vec<Slice> = (0..4).filter_map(|k| at(site + k)).collect();
            let ok = four.len() == 4
                && matches!(four[0], Slice::Pole { .. })
                && {
                    let Slice::Pole { sign } = four[0] else { unreachable!() };
                    four == dual_loop(sign, lv[site][0])
                }
                && (matches!(site.checked_sub(1).and_then(at), Some(Slice::Cup { pos: 1, .. }))
                    || matches!(at(site + 4), Some(Slice::Cap { pos: 1 })));
            if !ok {
                return Err(err());
            }
            out.drain(site..site + 4);
        }
    }
    TangleWord::new(t.pole, t.source.clone(), out).map_err(|_| err())
}

/// All (move, site) pairs that apply to `t`, including insertions with every
/// parameter choice.
pub fn applicable_moves(t: &TangleWord) -> Vec<(Move, usize)> {
    let mut cands = Vec::new();
    let lv = t.levels();
    for site in 0..=t.slices.len() {
        let w = lv[site].len();
        for pos in 1..w {
            for sign in [Sign::Plus, Sign::Minus] {
                cands.push((Move::R2Insert { pos, sign }, site));
            }
        }
        for pos in 1..=w {
            for left in [true, false] {
                cands.push((Move::ZigzagInsert { pos, left }, site));
            }
        }
        if t.pole && w > 0 {
            for sign in [Sign::Plus, Sign::Minus] {
                cands.push((Move::PoleCancelInsert { sign }, site));
                cands.push((Move::DualityInsert { cap: true, sign }, site));
                cands.push((Move::DualityInsert { cap: false, sign }, site));
            }
        }
        for from_left in [true, false] {
            for exponent in [1, -1] {
                cands.push((Move::PitchforkExpand { from_left, exponent }, site));
            }
        }
        for mv in [
            Move::R2Remove,
            Move::R3,
            Move::FarCommute,
            Move::ZigzagRemove,
            Move::CurlFlip,
            Move::PitchforkContract,
            Move::PoleCancelRemove,
            Move::Reflection,
            Move::DualityRemove,
        ] {
            cands.push((mv, site));
        }
    }
    cands.into_iter().filter(|(m, s)| apply_move(t, m, *s).is_ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let t = parse_tangle_word("obj *+ ; T + ;").unwrap();
        assert_eq!(t.slices, vec![Slice::Pole { sign: Sign::Plus }]);
        assert!(parse_tangle_word("obj ++ ; X 1 + ; X 1 - ;").is_ok());
        let e = parse_tangle_word("obj *+ ;\nX 1 + ;").unwrap_err();
        assert!(matches!(e, TangleError::Stacking { slice: 1, line: 2, .. }), "{e:?}");
        assert!(matches!(parse_tangle_word("obj ++ ;\nU 0 lr ;"), Err(TangleError::Pole { .. })));
        assert!(matches!(parse_tangle_word("obj + ;\nQ 1 ;"), Err(TangleError::Syntax { line: 2, .. })));
    }

    #[test]
    fn tensor_shifts() {
        let a = parse_tangle_word("obj *+ ; T + ;").unwrap();
        let b = parse_tangle_word("obj ++ ; X 1 + ;").unwrap();
        let c = TangleWord::tensor(&a, &b).unwrap();
        assert_eq!(c.serialize(), "obj *+++ ; T + ; X 2 + ;");
        assert_eq!(TangleWord::tensor(&a, &a), Err(TangleError::DoublePole));
    }

    #[test]
    fn kink_twist() {
        let t = parse_tangle_word("obj + ; U 2 lr ; X 1 + ; A 2 ;").unwrap();
        assert_eq!(t.winding_and_twist().unwrap(), vec![(0, 1)]);
        let id = TangleWord::identity(false, &[Sign::Plus]);
        assert_eq!(id.winding_and_twist().unwrap(), vec![(0, 0)]);
    }

    #[test]
    fn resolution_counts() {
        let t = parse_tangle_word("obj *++ ; S0 ; S 1 ;").unwrap();
        let r = resolve_singular(&t, 3).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.terms.contains_key("obj *++ ; T + ; T + ; T + ; X 1 + ;"));
        assert_eq!(resolve_singular(&t, 0), Err(TangleError::BadN(0)));
    }
}
