//! Verification suites shared by the command line and the test harness.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagram::{canonical, DiagramSeries, Strands};
use crate::error::EvalError;
use crate::invariant::{compare, Structure};
use crate::quantum::{eval_link, hbar_expand, QuantumData};
use crate::quotient::{enumerate, project_series, relations, Quotient};
use crate::ring::{Cyclo, LamPoly, Ring};
use crate::skeleton::{Component, Sign, Skeleton};
use crate::tangle::{applicable_moves, apply_move, parse_tangle_word, TangleWord};
use crate::universal::{leading_term_matches, realize};
use crate::weights::WeightSystem;

/// Starting words for randomized move trials.
pub const MOVE_SEEDS: &[&str] = &[
    "obj ++ ; X 1 + ;",
    "obj +- ; X 1 + ;",
    "obj *+ ; T + ;",
    "obj *- ; T + ;",
    "obj *++ ; T + ; X 1 + ;",
    "obj *+- ; T - ; X 1 - ;",
    "obj *+ ; U 2 lr ; X 1 + ;",
    "obj + ; U 2 rl ; A 1 ;",
    "obj * ; U 1 lr ; T + ; A 1 ;",
    "obj * ; U 1 rl ; T - ; A 1 ;",
    "obj *++ ; T + ; X 1 + ; T + ; X 1 + ;",
    "obj *+- ; X 1 - ; T - ; X 1 - ; T - ;",
    "obj *+- ; A 1 ;",
    "obj * ; U 1 lr ;",
    "obj *+ ; U 2 lr ; X 1 + ; A 2 ;",
    "obj +++ ; X 1 + ; X 2 + ; X 1 + ;",
];

/// Skeleton of a named shape: `knot` (pole and one circle), `unknot` (one
/// circle) or a boundary word such as `*++` for the identity skeleton.
pub fn named_skeleton(name: &str) -> Result<Arc<Skeleton>, EvalError> {
    match name {
        "knot" => Ok(Arc::new(Skeleton::new(true, vec![], vec![], vec![Component::Circle])?)),
        "unknot" => Ok(Arc::new(Skeleton::new(false, vec![], vec![], vec![Component::Circle])?)),
        w => {
            let (pole, rest) = match w.strip_prefix('*') {
                Some(r) => (true, r),
                None => (false, w),
            };
            let word = rest
                .chars()
                .map(|c| match c {
                    '+' => Ok(Sign::Plus),
                    '-' => Ok(Sign::Minus),
                    _ => Err(EvalError::Other(format!("unknown skeleton {name}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Strands::new(pole, &word).skel)
        }
    }
}

#[derive(Clone, Debug)]
pub struct MoveTrial {
    pub word: String,
    pub mv: String,
    pub site: usize,
    /// Lowest degree where the two sides differ in the quotient.
    pub first_failure: Option<usize>,
}

fn move_kind(mv: &crate::tangle::Move) -> String {
    let s = format!("{mv:?}");
    s.split([' ', '{']).next().unwrap_or_default().to_string()
}

/// Seeded random walk through move applications. Each step picks a move kind
/// uniformly among those applicable, then a site, and compares G on both
/// sides. Words longer than `max_len` restart from a seed word.
pub fn move_trials(sd: &Structure, trials: usize, seed: u64, max_len: usize) -> Result<Vec<MoveTrial>, EvalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<TangleWord> = MOVE_SEEDS.iter().map(|w| parse_tangle_word(w)).collect::<Result<_, _>>()?;
    let mut quotients: BTreeMap<Skeleton, Quotient> = BTreeMap::new();
    let mut cur = seeds.choose(&mut rng).expect("seed words").clone();
    let mut out = Vec::new();
    while out.len() < trials {
        let mut by_kind: BTreeMap<String, Vec<_>> = BTreeMap::new();
        for c in applicable_moves(&cur) {
            by_kind.entry(move_kind(&c.0)).or_default().push(c);
        }
        let kinds: Vec<&String> = by_kind.keys().collect();
        let kind = kinds.choose(&mut rng).expect("insert moves always apply");
        let (mv, site) = *by_kind[*kind].choose(&mut rng).expect("nonempty kind");
        let next = apply_move(&cur, &mv, site)?;
        let g1 = sd.evaluate(&cur)?;
        let g2 = sd.evaluate(&next)?;
        let q = quotients.entry((*g1.skel).clone()).or_insert_with(|| Quotient::new(g1.skel.clone(), sd.n));
        let c = compare(q, &g1, &g2)?;
        out.push(MoveTrial { word: cur.serialize(), mv: mv.to_string(), site, first_failure: c.first_failure });
        cur = if next.slices.len() > max_len { seeds.choose(&mut rng).expect("seed words").clone() } else { next };
    }
    Ok(out)
}

/// Move kinds exercised by a batch of trials, with (tried, failed) counts.
pub fn trial_summary(trials: &[MoveTrial]) -> BTreeMap<String, (usize, usize)> {
    let mut m: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for t in trials {
        let kind = t.mv.split([' ', '{']).next().unwrap_or_default().to_string();
        let e = m.entry(kind).or_default();
        e.0 += 1;
        e.1 += usize::from(t.first_failure.is_some());
    }
    m
}

/// Universality on one skeleton and degree: diagrams checked and the ones
/// whose realization has the wrong leading term.
pub fn universality(sd: &Structure, skel: &Arc<Skeleton>, degree: usize) -> Result<(usize, Vec<String>), EvalError> {
    let mut q = Quotient::new(skel.clone(), sd.n);
    let ds = enumerate(skel, sd.n, degree);
    let mut bad = Vec::new();
    for d in &ds {
        if !leading_term_matches(sd, &mut q, d)? {
            let t = realize(skel, sd.n, d)?;
            bad.push(format!("{} via {}", d.to_text(), t.serialize()));
        }
    }
    Ok((ds.len(), bad))
}

/// Degrees at which the weight-system image of G (times z^{-W}, W the total
/// winding) and the ħ-expansion of the quantum value disagree.
pub fn oracle(sd: &Structure, ws: &WeightSystem, qd: &QuantumData, t: &TangleWord) -> Result<Vec<usize>, EvalError> {
    let winding: i64 = t.winding_and_twist()?.iter().map(|x| x.0).sum();
    let g = sd.evaluate(t)?;
    let spec = ws.specialize(&g, sd.cap)?;
    let zf = LamPoly::constant(Cyclo::zeta_pow(2 * sd.n as u32, -winding));
    let qv = hbar_expand(&eval_link(t, qd)?, sd.cap);
    Ok((0..=sd.cap).filter(|&k| spec[k].get(0, 0).mul(&zf) != qv[k]).collect())
}

/// Relation instances on a skeleton at one degree: (count, nonzero reductions).
pub fn relations_vanish(skel: &Arc<Skeleton>, n: u8, degree: usize) -> Result<(usize, usize), EvalError> {
    let mut q = Quotient::new(skel.clone(), n);
    let rels = relations(skel, n, degree);
    let mut bad = 0;
    for r in &rels {
        let mut s = DiagramSeries::zero(skel.clone(), n, degree);
        for (d, c) in r {
            s.add_term(canonical(skel, n, d), c.clone());
        }
        if !q.reduce(&s)?.is_empty() {
            bad += 1;
        }
    }
    Ok((rels.len(), bad))
}

/// Projection compatibility: G over N projected to N' agrees with G over N'
/// built from the projected associator pair.
pub fn projection_agrees(hi: &Structure, lo: &Structure, t: &TangleWord) -> Result<bool, EvalError> {
    let g_hi = hi.evaluate(t)?;
    let g_lo = lo.evaluate(t)?;
    let p = project_series(&g_hi, lo.n)?;
    let mut q = Quotient::new(g_lo.skel.clone(), lo.n);
    Ok(compare(&mut q, &p, &g_lo)?.first_failure.is_none())
}
