//! Skeleta: oriented 1-manifolds with ordered boundary words, and their gluing.

use std::fmt;

use crate::error::DiagramError;

/// Boundary letter. `Plus` strands run downward: toward the source at the
/// bottom and away from the target at the top.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
    pub fn eps(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
    pub fn ch(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

pub fn word_str(w: &[Sign]) -> String {
    w.iter().map(|s| s.ch()).collect()
}

/// A boundary point: index into the source (bottom) or target (top) word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Source(usize),
    Target(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    /// Interval oriented from `start` to `end`.
    Arc { start: End, end: End },
    Circle,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Skeleton {
    pub pole: bool,
    pub source: Vec<Sign>,
    pub target: Vec<Sign>,
    /// Arcs sorted by start point, then circles.
    pub comps: Vec<Component>,
}

impl fmt::Debug for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{} -> {}{} {:?}",
            if self.pole { "*" } else { "" },
            word_str(&self.source),
            if self.pole { "*" } else { "" },
            word_str(&self.target),
            self.comps
        )
    }
}

fn end_key(e: &End) -> (u8, usize) {
    match e {
        End::Source(i) => (0, *i),
        End::Target(i) => (1, *i),
    }
}

/// One piece of a glued component: (layer 0 = bottom / 1 = top, component index).
pub type Piece = (u8, usize);

/// How the components of a glued skeleton are assembled from the pieces.
#[derive(Clone, Debug)]
pub struct GluePlan {
    pub skel: Skeleton,
    /// For each component of `skel`, its pieces in orientation order.
    pub pieces: Vec<Vec<Piece>>,
    /// Residue correction per component from interleaving pieces in one layer.
    pub residue_shift: Vec<u8>,
}

impl Skeleton {
    pub fn new(pole: bool, source: Vec<Sign>, target: Vec<Sign>, mut comps: Vec<Component>) -> Result<Self, DiagramError> {
        comps.sort_by(|a, b| match (a, b) {
            (Component::Arc { start: s1, .. }, Component::Arc { start: s2, .. }) => end_key(s1).cmp(&end_key(s2)),
            (Component::Arc { .. }, Component::Circle) => std::cmp::Ordering::Less,
            (Component::Circle, Component::Arc { .. }) => std::cmp::Ordering::Greater,
            _ => std::cmp::Ordering::Equal,
        });
        let s = Skeleton { pole, source, target, comps };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), DiagramError> {
        let mut seen_s = vec![false; self.source.len()];
        let mut seen_t = vec![false; self.target.len()];
        for c in &self.comps {
            if let Component::Arc { start, end } = c {
                for (e, is_start) in [(start, true), (end, false)] {
                    let (seen, letter, toward) = match e {
                        End::Source(i) => (seen_s.get_mut(*i), self.source.get(*i), Sign::Plus),
                        End::Target(i) => (seen_t.get_mut(*i), self.target.get(*i), Sign::Minus),
                    };
                    let (Some(seen), Some(letter)) = (seen, letter) else {
                        return Err(DiagramError::Skeleton(format!("endpoint {e:?} out of range")));
                    };
                    if *seen {
                        return Err(DiagramError::Skeleton(format!("endpoint {e:?} used twice")));
                    }
                    *seen = true;
                    let oriented_toward = !is_start;
                    if (*letter == toward) != oriented_toward {
                        return Err(DiagramError::Skeleton(format!("orientation of {e:?} disagrees with its letter")));
                    }
                }
            }
        }
        if seen_s.iter().chain(&seen_t).any(|x| !x) {
            return Err(DiagramError::Skeleton("unmatched boundary point".into()));
        }
        Ok(())
    }

    /// Identity skeleton on a word.
    pub fn identity(pole: bool, w: &[Sign]) -> Skeleton {
        let comps = w
            .iter()
            .enumerate()
            .map(|(i, s)| match s {
                Sign::Plus => Component::Arc { start: End::Target(i), end: End::Source(i) },
                Sign::Minus => Component::Arc { start: End::Source(i), end: End::Target(i) },
            })
            .collect();
        Skeleton::new(pole, w.to_vec(), w.to_vec(), comps).expect("identity skeleton")
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == Skeleton::identity(self.pole, &self.source)
    }

    pub fn n_circles(&self) -> usize {
        self.comps.iter().filter(|c| matches!(c, Component::Circle)).count()
    }

    /// Component index containing a boundary point.
    pub fn comp_at(&self, e: End) -> usize {
        self.comps
            .iter()
            .position(|c| matches!(c, Component::Arc { start, end } if *start == e || *end == e))
            .expect("boundary point belongs to an arc")
    }

    /// Position of a boundary point on the circle bounding the strip:
    /// source left to right, then target right to left.
    fn cyclic_pos(&self, e: End) -> usize {
        match e {
            End::Source(i) => i,
            End::Target(j) => self.source.len() + (self.target.len() - 1 - j),
        }
    }

    /// r(α, α′) for two arcs of this skeleton.
    pub fn interleave(&self, a: usize, b: usize) -> u8 {
        let (Component::Arc { start: s1, end: e1 }, Component::Arc { start: s2, end: e2 }) = (&self.comps[a], &self.comps[b]) else {
            return 0;
        };
        let (mut x1, mut y1) = (self.cyclic_pos(*s1), self.cyclic_pos(*e1));
        if x1 > y1 {
            std::mem::swap(&mut x1, &mut y1);
        }
        let inside = |p: usize| x1 < p && p < y1;
        u8::from(inside(self.cyclic_pos(*s2)) != inside(self.cyclic_pos(*e2)))
    }

    /// Glue `self` (bottom) with `top`.
    pub fn glue(&self, top: &Skeleton) -> Result<GluePlan, DiagramError> {
        if self.target != top.source {
            return Err(DiagramError::Incomposable(word_str(&self.target), word_str(&top.source)));
        }
        if top.pole && !self.pole || self.pole && !top.pole {
            return Err(DiagramError::Incomposable("pole".into(), "no pole".into()));
        }
        let layers = [self, top];
        // piece starting at a middle point i
        let mut start_mid: [Vec<Option<usize>>; 2] = [vec![None; self.target.len()], vec![None; self.target.len()]];
        for (l, sk) in layers.iter().enumerate() {
            for (ci, c) in sk.comps.iter().enumerate() {
                if let Component::Arc { start, .. } = c {
                    let mid = match (l, start) {
                        (0, End::Target(i)) => Some(*i),
                        (1, End::Source(i)) => Some(*i),
                        _ => None,
                    };
                    if let Some(i) = mid {
                        start_mid[l][i] = Some(ci);
                    }
                }
            }
        }
        let next = |p: Piece| -> Option<Piece> {
            let Component::Arc { end, .. } = &layers[p.0 as usize].comps[p.1] else { return None };
            match (p.0, end) {
                (0, End::Target(i)) => Some((1, start_mid[1][*i].expect("glue"))),
                (1, End::Source(i)) => Some((0, start_mid[0][*i].expect("glue"))),
                _ => None,
            }
        };
        let outer_start = |p: Piece| -> Option<End> {
            let Component::Arc { start, .. } = &layers[p.0 as usize].comps[p.1] else { return None };
            match (p.0, start) {
                (0, End::Source(i)) => Some(End::Source(*i)),
                (1, End::Target(i)) => Some(End::Target(*i)),
                _ => None,
            }
        };
        let outer_end = |p: Piece| -> Option<End> {
            let Component::Arc { end, .. } = &layers[p.0 as usize].comps[p.1] else { return None };
            match (p.0, end) {
                (0, End::Source(i)) => Some(End::Source(*i)),
                (1, End::Target(i)) => Some(End::Target(*i)),
                _ => None,
            }
        };
        let mut used = [vec![false; self.comps.len()], vec![false; top.comps.len()]];
        let mut arcs: Vec<(End, End, Vec<Piece>)> = Vec::new();
        let mut circles: Vec<Vec<Piece>> = Vec::new();
        for l in 0..2u8 {
            for ci in 0..layers[l as usize].comps.len() {
                if let Some(s) = outer_start((l, ci)) {
                    let mut p = (l, ci);
                    let mut seq = vec![p];
                    used[l as usize][ci] = true;
                    while let Some(n) = next(p) {
                        p = n;
                        used[p.0 as usize][p.1] = true;
                        seq.push(p);
                    }
                    let e = outer_end(p).expect("arc ends on outer boundary");
                    arcs.push((s, e, seq));
                }
            }
        }
        for l in 0..2u8 {
            for ci in 0..layers[l as usize].comps.len() {
                if used[l as usize][ci] {
                    continue;
                }
                if matches!(layers[l as usize].comps[ci], Component::Circle) {
                    continue;
                }
                let mut p = (l, ci);
                let mut seq = Vec::new();
                loop {
                    used[p.0 as usize][p.1] = true;
                    seq.push(p);
                    p = next(p).expect("closed chain");
                    if p == (l, ci) {
                        break;
                    }
                }
                circles.push(seq);
            }
        }
        for l in 0..2u8 {
            for (ci, c) in layers[l as usize].comps.iter().enumerate() {
                if matches!(c, Component::Circle) {
                    circles.push(vec![(l, ci)]);
                }
            }
        }
        arcs.sort_by_key(|a| end_key(&a.0));
        let mut comps = Vec::new();
        let mut pieces = Vec::new();
        for (s, e, seq) in arcs {
            comps.push(Component::Arc { start: s, end: e });
            pieces.push(seq);
        }
        for seq in circles {
            comps.push(Component::Circle);
            pieces.push(seq);
        }
        let residue_shift = pieces
            .iter()
            .map(|seq| {
                let mut r = 0u8;
                for i in 0..seq.len() {
                    for j in i + 1..seq.len() {
                        if seq[i].0 == seq[j].0 {
                            r ^= layers[seq[i].0 as usize].interleave(seq[i].1, seq[j].1);
                        }
                    }
                }
                r
            })
            .collect();
        let skel = Skeleton { pole: self.pole, source: self.source.clone(), target: top.target.clone(), comps };
        Ok(GluePlan { skel, pieces, residue_shift })
    }

    /// Side-by-side union, `self` on the left.
    pub fn tensor(&self, right: &Skeleton) -> Result<(Skeleton, Vec<(u8, usize)>), DiagramError> {
        if right.pole {
            return Err(DiagramError::PoleOnRight);
        }
        let (ns, nt) = (self.source.len(), self.target.len());
        let shift = |e: &End| match e {
            End::Source(i) => End::Source(i + ns),
            End::Target(i) => End::Target(i + nt),
        };
        let mut tagged: Vec<(Component, (u8, usize))> = Vec::new();
        for (i, c) in self.comps.iter().enumerate() {
            tagged.push((c.clone(), (0, i)));
        }
        for (i, c) in right.comps.iter().enumerate() {
            let c2 = match c {
                Component::Arc { start, end } => Component::Arc { start: shift(start), end: shift(end) },
                Component::Circle => Component::Circle,
            };
            tagged.push((c2, (1, i)));
        }
        tagged.sort_by(|a, b| match (&a.0, &b.0) {
            (Component::Arc { start: s1, .. }, Component::Arc { start: s2, .. }) => end_key(s1).cmp(&end_key(s2)),
            (Component::Arc { .. }, Component::Circle) => std::cmp::Ordering::Less,
            (Component::Circle, Component::Arc { .. }) => std::cmp::Ordering::Greater,
            _ => a.1.cmp(&b.1),
        });
        let mut source = self.source.clone();
        source.extend_from_slice(&right.source);
        let mut target = self.target.clone();
        target.extend_from_slice(&right.target);
        let origin = tagged.iter().map(|t| t.1).collect();
        let skel = Skeleton { pole: self.pole, source, target, comps: tagged.into_iter().map(|t| t.0).collect() };
        Ok((skel, origin))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::*;

    #[test]
    fn crossing_closes_to_circle_with_residue() {
        // crossing on ++ followed by the closure of both strands gives one circle
        let x = Skeleton::new(
            false,
            vec![Plus, Plus],
            vec![Plus, Plus],
            vec![
                Component::Arc { start: End::Target(1), end: End::Source(0) },
                Component::Arc { start: End::Target(0), end: End::Source(1) },
            ],
        )
        .unwrap();
        assert_eq!(x.interleave(0, 1), 1);
        let id = Skeleton::identity(false, &[Plus, Plus]);
        assert_eq!(id.interleave(0, 1), 0);
        let g = x.glue(&x).unwrap();
        assert!(g.skel.is_identity());
        assert_eq!(g.residue_shift, vec![0, 0]);
    }
}
