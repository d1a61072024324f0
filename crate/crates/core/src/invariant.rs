//! The functor G from B-tangle words to N-diagram series, built from an
//! associator pair on the strictified category whose objects are words read
//! as M ⊗ (((w1 w2) w3) …).

use std::cell::RefCell;
use std::sync::Arc;

use num_traits::One;
use rustc_hash::FxHashMap;

use crate::associator::AssociatorPair;
use crate::diagram::{DiagramSeries, Strands};
use crate::error::{AlgebraError, EvalError, TangleError};
use crate::free::FreeSeries;
use crate::quotient::{Coords, Quotient};
use crate::ring::{q, Q};
use crate::skeleton::{Sign, Skeleton};
use crate::tangle::{braid_exponent, parse_tangle_word, Orient, Slice, TangleWord};

/// Series inverse of 1 + y in an endomorphism algebra.
pub fn series_inverse(s: &DiagramSeries) -> DiagramSeries {
    let unit = DiagramSeries::unit(s.skel.clone(), s.n, s.cap);
    let y = s.sub(&unit);
    let mut acc = unit.clone();
    let mut pw = unit;
    for _ in 0..s.cap {
        pw = pw.mul(&y).scale(&-Q::one());
        if pw.is_zero() {
            break;
        }
        acc = acc.add(&pw);
    }
    acc
}

/// Σ_{i∈U, j∈V} ε_i ε_j t_ij(a) on the identity skeleton of `st`.
pub fn t_block(st: &Strands, us: &[usize], vs: &[usize], a: i64, n: u8, cap: usize) -> DiagramSeries {
    let mut s = DiagramSeries::zero(st.skel.clone(), n, cap);
    for &i in us {
        for &j in vs {
            let c = Q::from_integer((st.word[i - 1].eps() * st.word[j - 1].eps()).into());
            let d = st.chord(i, j, a, n);
            s = s.add(&DiagramSeries::single(st.skel.clone(), n, cap, d, c));
        }
    }
    s
}

/// t⁰ between the pole and strand i: the pole chord for `+`; for `-` the
/// negated pole chord plus the self-chords Σ_a C(a).
pub fn t_zero(st: &Strands, i: usize, n: u8, cap: usize) -> DiagramSeries {
    let pole = DiagramSeries::single(st.skel.clone(), n, cap, st.chord(0, i, 0, n), Q::one());
    match st.word[i - 1] {
        Sign::Plus => pole,
        Sign::Minus => {
            let mut s = pole.scale(&-Q::one());
            for a in 0..n as i64 {
                s = s.add(&DiagramSeries::single(st.skel.clone(), n, cap, st.self_chord(i, a, n), Q::one()));
            }
            s
        }
    }
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..=b).collect()
}

/// Structure morphisms of the braided module category, with per-slice caches.
pub struct Structure {
    pub n: u8,
    pub cap: usize,
    pub pair: AssociatorPair,
    phi_inv: FreeSeries,
    psi_inv: FreeSeries,
    slices: RefCell<FxHashMap<(bool, Vec<Sign>, Slice), Arc<DiagramSeries>>>,
    zigzag: RefCell<FxHashMap<Sign, Arc<DiagramSeries>>>,
}

impl Structure {
    pub fn new(pair: AssociatorPair, cap: usize) -> Result<Structure, EvalError> {
        if cap > pair.cap {
            return Err(AlgebraError::DegreeOverflow { got: cap, cap: pair.cap }.into());
        }
        let phi = pair.phi.truncate(cap);
        let psi = pair.psi.truncate(cap);
        let phi_inv = phi.inverse()?;
        let psi_inv = psi.inverse()?;
        let pair = AssociatorPair { phi, psi, ..pair };
        Ok(Structure {
            n: pair.n,
            cap,
            pair,
            phi_inv,
            psi_inv,
            slices: RefCell::new(FxHashMap::default()),
            zigzag: RefCell::new(FxHashMap::default()),
        })
    }

    /// α_{U,V,W} = Φ(t_{U,V}, t_{V,W}) (or its inverse): (UV)W → U(VW).
    pub fn alpha(&self, st: &Strands, us: &[usize], vs: &[usize], ws: &[usize], inverse: bool) -> DiagramSeries {
        let (n, cap) = (self.n, self.cap);
        if us.is_empty() || vs.is_empty() || ws.is_empty() {
            return DiagramSeries::unit(st.skel.clone(), n, cap);
        }
        let imgs = [t_block(st, us, vs, 0, n, cap), t_block(st, vs, ws, 0, n, cap)];
        let f = if inverse { &self.phi_inv } else { &self.pair.phi };
        f.substitute(&imgs).expect("two images")
    }

    /// Ψ_{•,x,R} with x = strand 1 and R the remaining strands: M(xR) → (Mx)R.
    pub fn psi(&self, st: &Strands, inverse: bool) -> DiagramSeries {
        let (n, cap) = (self.n, self.cap);
        let rest = range(2, st.word.len());
        let mut imgs = vec![t_zero(st, 1, n, cap)];
        for k in 0..n as i64 {
            imgs.push(t_block(st, &[1], &rest, k, n, cap));
        }
        let f = if inverse { &self.psi_inv } else { &self.pair.psi };
        f.substitute(&imgs).expect("N+1 images")
    }

    /// Reassociation ((x w2) w3)… → x((w2 w3)…) on the identity skeleton.
    fn isolate_first(&self, st: &Strands, inverse: bool) -> DiagramSeries {
        let k = st.word.len();
        let mut acc = DiagramSeries::unit(st.skel.clone(), self.n, self.cap);
        for last in 3..=k {
            let a = self.alpha(st, &[1], &range(2, last - 1), &[last], inverse);
            acc = if inverse { acc.mul(&a) } else { a.mul(&acc) };
        }
        acc
    }

    /// Inverse of the zigzag series on a single strand with letter `a`.
    fn zigzag_inverse(&self, a: Sign) -> Arc<DiagramSeries> {
        if let Some(z) = self.zigzag.borrow().get(&a) {
            return z.clone();
        }
        let cup = Orient::with_left(a);
        let t = TangleWord::new(false, vec![a], vec![Slice::Cup { pos: 1, orient: cup }, Slice::Cap { pos: 2 }])
            .expect("zigzag word");
        let lv = t.levels();
        let mut acc = DiagramSeries::identity(false, &[a], self.n, self.cap);
        for (k, s) in t.slices.iter().enumerate() {
            let g = self.slice_raw(false, &lv[k], s, true);
            acc = DiagramSeries::compose(&acc, &g).expect("zigzag glue");
        }
        let z = Arc::new(series_inverse(&acc));
        self.zigzag.borrow_mut().insert(a, z.clone());
        z
    }

    /// Copy a single-strand series onto strand i of `st`.
    fn on_strand(&self, src: &DiagramSeries, st: &Strands, i: usize) -> DiagramSeries {
        let mut out = DiagramSeries::zero(st.skel.clone(), self.n, self.cap);
        for (d, c) in &src.terms {
            let mut e = crate::diagram::Decor::empty(&st.skel);
            e.comps[st.comp[i - 1]] = d.comps[0].clone();
            out.add_term(crate::diagram::canonical(&st.skel, self.n, &e), c.clone());
        }
        out
    }

    fn bare(&self, pole: bool, w: &[Sign], s: &Slice) -> DiagramSeries {
        DiagramSeries::unit(Arc::new(TangleWord::slice_skeleton(pole, w, s)), self.n, self.cap)
    }

    fn slice_raw(&self, pole: bool, w: &[Sign], s: &Slice, bare_cups: bool) -> DiagramSeries {
        let (n, cap) = (self.n, self.cap);
        let st = Strands::new(pole, w);
        match *s {
            Slice::Cross { pos, sign } => {
                let e = braid_exponent(sign, w[pos - 1], w[pos]);
                let before = range(1, pos - 1);
                let a1 = self.alpha(&st, &before, &[pos], &[pos + 1], false);
                let ex = t_block(&st, &[pos], &[pos + 1], 0, n, cap).scale(&q(e, 2)).exp();
                let mut w2 = w.to_vec();
                w2.swap(pos - 1, pos);
                let st2 = Strands::new(pole, &w2);
                let a2 = self.alpha(&st2, &before, &[pos], &[pos + 1], true);
                let low = ex.mul(&a1);
                let mid = DiagramSeries::compose(&low, &self.bare(pole, w, s)).expect("crossing glue");
                DiagramSeries::compose(&mid, &a2).expect("crossing glue")
            }
            Slice::Cup { pos, orient } => {
                let (x, y) = orient.letters();
                let mut w2 = w.to_vec();
                w2.splice(pos - 1..pos - 1, [x, y]);
                let st2 = Strands::new(pole, &w2);
                let a = self.alpha(&st2, &range(1, pos - 1), &[pos], &[pos + 1], true);
                let top = if bare_cups {
                    a
                } else {
                    let z = self.zigzag_inverse(x);
                    a.mul(&self.on_strand(&z, &st2, pos))
                };
                DiagramSeries::compose(&self.bare(pole, w, s), &top).expect("cup glue")
            }
            Slice::Cap { pos } => {
                let a = self.alpha(&st, &range(1, pos - 1), &[pos], &[pos + 1], false);
                DiagramSeries::compose(&a, &self.bare(pole, w, s)).expect("cap glue")
            }
            Slice::Pole { sign } => {
                let nq = Q::new(1.into(), (n as i64).into());
                let t0 = t_zero(&st, 1, n, cap);
                let gamma = match sign {
                    Sign::Plus => {
                        let tau = DiagramSeries::single(st.skel.clone(), n, cap, st.tau(1, 1, n), Q::one());
                        t0.scale(&nq).exp().mul(&tau)
                    }
                    Sign::Minus => {
                        let tau = DiagramSeries::single(st.skel.clone(), n, cap, st.tau(1, -1, n), Q::one());
                        tau.mul(&t0.scale(&-nq).exp())
                    }
                };
                if w.len() == 1 {
                    return gamma;
                }
                let a = self.isolate_first(&st, false);
                let ai = self.isolate_first(&st, true);
                let p = self.psi(&st, false);
                let pi = self.psi(&st, true);
                ai.mul(&p.mul(&gamma.mul(&pi.mul(&a))))
            }
            Slice::SingCross { .. } | Slice::SingPole => unreachable!("singular slices are resolved first"),
        }
    }

    /// Image of one slice applied to the word `w`.
    pub fn slice(&self, pole: bool, w: &[Sign], s: &Slice) -> Arc<DiagramSeries> {
        let key = (pole, w.to_vec(), *s);
        if let Some(g) = self.slices.borrow().get(&key) {
            return g.clone();
        }
        let g = Arc::new(self.slice_raw(pole, w, s, false));
        self.slices.borrow_mut().insert(key, g.clone());
        g
    }

    /// G of a non-singular word, truncated at the structure cap.
    pub fn evaluate(&self, t: &TangleWord) -> Result<DiagramSeries, EvalError> {
        if t.is_singular() {
            return Err(TangleError::Singular.into());
        }
        let lv = t.levels();
        let mut acc = DiagramSeries::identity(t.pole, &t.source, self.n, self.cap);
        for (k, s) in t.slices.iter().enumerate() {
            acc = DiagramSeries::compose(&acc, &self.slice(t.pole, &lv[k], s))?;
        }
        Ok(acc)
    }

    /// G extended linearly over the skein resolution of a singular word,
    /// composing the resolved differences slice by slice.
    pub fn evaluate_singular(&self, t: &TangleWord) -> Result<DiagramSeries, EvalError> {
        let lv = t.levels();
        let mut acc = DiagramSeries::identity(t.pole, &t.source, self.n, self.cap);
        for (k, s) in t.slices.iter().enumerate() {
            let w = &lv[k];
            let piece = match *s {
                Slice::SingCross { pos } => {
                    let plus = self.slice(t.pole, w, &Slice::Cross { pos, sign: Sign::Plus });
                    let minus = self.slice(t.pole, w, &Slice::Cross { pos, sign: Sign::Minus });
                    Arc::new(plus.sub(&minus))
                }
                Slice::SingPole => {
                    let g = self.slice(t.pole, w, &Slice::Pole { sign: Sign::Plus });
                    let mut p = DiagramSeries::identity(t.pole, w, self.n, self.cap);
                    for _ in 0..self.n {
                        p = p.mul(&g);
                    }
                    Arc::new(p.sub(&DiagramSeries::identity(t.pole, w, self.n, self.cap)))
                }
                _ => self.slice(t.pole, w, s),
            };
            acc = DiagramSeries::compose(&acc, &piece)?;
        }
        Ok(acc)
    }

    /// Parse and evaluate a word given in the DSL.
    pub fn evaluate_text(&self, text: &str) -> Result<DiagramSeries, EvalError> {
        self.evaluate(&parse_tangle_word(text)?)
    }
}

/// Per-degree comparison of two series in quotient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    /// First degree at which the reduced difference is nonzero.
    pub first_failure: Option<usize>,
    pub difference: Coords,
}

pub fn compare(q: &mut Quotient, a: &DiagramSeries, b: &DiagramSeries) -> Result<Comparison, AlgebraError> {
    if a == b {
        return Ok(Comparison { first_failure: None, difference: Coords::new() });
    }
    let diff = q.reduce(&a.sub(b))?;
    Ok(Comparison { first_failure: diff.keys().map(|k| k.0).min(), difference: diff })
}

/// Skeleton shared by a word and its rewritten forms.
pub fn skeleton_of(t: &TangleWord) -> Arc<Skeleton> {
    Arc::new(t.skeleton())
}
