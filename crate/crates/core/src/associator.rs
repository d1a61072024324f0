//! Degree-by-degree solvers for a Drinfeld associator Φ and a cyclotomic
//! associator Ψ, their verification, and the projections P_{N,N'}.

use num_traits::Zero;

use crate::error::AlgebraError;
use crate::free::{group_like_failure, lyndon_bracket, lyndon_words, FreeSeries};
use crate::horizontal::{HElem, Horizontal};
use crate::linalg::{solve_dense, SparseVec};
use crate::ring::{q, qi, Q};

pub const SOLVER_VERSION: u32 = 1;

/// Record of one degree of a solve: unknowns, rank of the system, free count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveStep {
    pub degree: usize,
    pub unknowns: usize,
    pub rank: usize,
}

impl SolveStep {
    pub fn free(&self) -> usize {
        self.unknowns - self.rank
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssociatorPair {
    pub n: u8,
    pub cap: usize,
    pub phi: FreeSeries,
    pub psi: FreeSeries,
    pub log: Vec<SolveStep>,
}

/// Residual of one equation at one degree, in quotient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub equation: &'static str,
    pub degree: usize,
    pub coords: SparseVec,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checked: Vec<(&'static str, usize)>,
    pub failures: Vec<Residual>,
    pub group_like: Vec<(&'static str, Option<usize>)>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.group_like.iter().all(|g| g.1.is_none())
    }
}

/// Free-algebra images of a, b for the hexagon: letters 0 = a, 1 = b.
fn hexagon_residual(phi: &FreeSeries) -> FreeSeries {
    let cap = phi.cap;
    let a = FreeSeries::letter(2, cap, 0);
    let b = FreeSeries::letter(2, cap, 1);
    let c = a.add(&b).scale(&qi(-1));
    let half = q(1, 2);
    let e = |x: &FreeSeries| x.scale(&half).exp().expect("no constant term");
    let f = |x: &FreeSeries, y: &FreeSeries| phi.substitute(&[x.clone(), y.clone()]).expect("two letters");
    let lhs = e(&a).mul(&f(&c, &a)).mul(&e(&c)).mul(&f(&b, &c)).mul(&e(&b)).mul(&f(&a, &b));
    lhs.sub(&FreeSeries::one(2, cap))
}

fn pentagon_residual(h: &Horizontal, phi: &FreeSeries) -> HElem {
    let cap = phi.cap;
    let t = |i, j| h.t(i, j, 0, cap);
    let f = |x: HElem, y: HElem| phi.substitute(&[x, y]).expect("two letters");
    let lhs = f(t(1, 2), t(2, 3).add(&t(2, 4))).mul(&f(t(1, 3).add(&t(2, 3)), t(3, 4)));
    let rhs = f(t(2, 3), t(3, 4))
        .mul(&f(t(1, 2).add(&t(1, 3)), t(2, 4).add(&t(3, 4))))
        .mul(&f(t(1, 2), t(2, 3)));
    lhs.sub(&rhs)
}

fn free_coords(x: &FreeSeries, k: usize) -> SparseVec {
    // words of length k as base-`letters` integers
    let m = x.letters as usize;
    let mut v = SparseVec::new();
    for (w, c) in &x.terms {
        if w.len() == k {
            let idx = w.iter().fold(0usize, |acc, &l| acc * m + l as usize);
            v.insert(idx, c.clone());
        }
    }
    v
}

/// Ψ-images in B_{3,N} and B_{2,N}.
pub struct CycloAlgebras {
    pub b3: Horizontal,
    pub b2: Horizontal,
    pub a4: Horizontal,
}

impl CycloAlgebras {
    pub fn new(n: u8) -> Self {
        CycloAlgebras { b3: Horizontal::new(3, true, n), b2: Horizontal::new(2, true, n), a4: Horizontal::new(4, false, 1) }
    }
}

fn psi_images(h: &Horizontal, a: HElem, b: impl Fn(i64) -> HElem) -> Vec<HElem> {
    let mut v = vec![a];
    for k in 0..h.big_n as i64 {
        v.push(b(k));
    }
    v
}

fn mixed_pentagon_residual(h: &Horizontal, phi: &FreeSeries, psi: &FreeSeries) -> HElem {
    let cap = psi.cap.min(phi.cap);
    let s = |imgs: Vec<HElem>| psi.substitute(&imgs).expect("arity");
    let p_1_23 = s(psi_images(h, h.t0(1, cap), |a| h.t(1, 2, a, cap).add(&h.t(1, 3, a, cap))));
    let p_01_2_3 = s(psi_images(h, h.t0(2, cap).add(&h.t_sum(1, 2, cap)), |a| h.t(2, 3, a, cap)));
    let p_12_3 = s(psi_images(h, h.t0(1, cap).add(&h.t0(2, cap)).add(&h.t_sum(1, 2, cap)), |a| {
        h.t(1, 3, a, cap).add(&h.t(2, 3, a, cap))
    }));
    let p_1_2 = s(psi_images(h, h.t0(1, cap), |a| h.t(1, 2, a, cap)));
    let f = phi.substitute(&[h.t(1, 2, 0, cap), h.t(2, 3, 0, cap)]).expect("two letters");
    p_1_23.mul(&p_01_2_3).sub(&f.mul(&p_12_3).mul(&p_1_2))
}

fn octagon_residual(h: &Horizontal, psi: &FreeSeries) -> HElem {
    let cap = psi.cap;
    let nq = qi(h.big_n as i64);
    let s = |imgs: Vec<HElem>| psi.substitute(&imgs).expect("arity");
    let p = s(psi_images(h, h.t0(1, cap), |a| h.t(1, 2, a, cap)));
    let p021 = s(psi_images(h, h.t0(2, cap), |a| h.t(1, 2, -a, cap)));
    let half_t = h.t(1, 2, 0, cap).scale(&q(1, 2)).exp();
    let e02 = h.t0(2, cap).scale(&(Q::from_integer(1.into()) / &nq)).exp();
    let lhs = h.t0(2, cap).add(&h.t_sum(1, 2, cap)).scale(&(Q::from_integer(1.into()) / &nq)).exp();
    let tail = p021.inverse().mul(&half_t).mul(&p);
    let rhs = p.inverse().mul(&half_t).mul(&p021).mul(&e02).mul(&h.ad_tau(&tail, 2, 1));
    lhs.sub(&rhs)
}

/// Solve for the Lie coefficients of degree k, one column per Lyndon word,
/// given a residual function returning the stacked degree-k coordinates.
fn solve_degree(
    letters: u8,
    k: usize,
    lie: &FreeSeries,
    residual: &dyn Fn(&FreeSeries) -> Vec<SparseVec>,
) -> Result<(FreeSeries, SolveStep), AlgebraError> {
    let cap = lie.cap;
    let basis: Vec<FreeSeries> = lyndon_words(letters, k).iter().map(|w| lyndon_bracket(letters, cap, w)).collect();
    let base = residual(&lie.truncate(k));
    let cols: Vec<Vec<SparseVec>> = basis
        .iter()
        .map(|p| {
            let r = residual(&lie.add(p).truncate(k));
            r.iter()
                .zip(&base)
                .map(|(x, y)| {
                    let mut d = x.clone();
                    crate::linalg::axpy(&mut d, &qi(-1), y);
                    d
                })
                .collect()
        })
        .collect();
    // rows: every (block, coordinate) that appears anywhere
    let mut keys: Vec<(usize, usize)> = Vec::new();
    for (blk, v) in base.iter().enumerate() {
        keys.extend(v.keys().map(|&c| (blk, c)));
    }
    for col in &cols {
        for (blk, v) in col.iter().enumerate() {
            keys.extend(v.keys().map(|&c| (blk, c)));
        }
    }
    keys.sort_unstable();
    keys.dedup();
    let get = |v: &[SparseVec], key: &(usize, usize)| v[key.0].get(&key.1).cloned().unwrap_or_else(Q::zero);
    let rows: Vec<Vec<Q>> = keys.iter().map(|key| cols.iter().map(|c| get(c, key)).collect()).collect();
    let rhs: Vec<Q> = keys.iter().map(|key| -get(&base, key)).collect();
    let rank = crate::linalg::rank_dense(&rows);
    let x = solve_dense(&rows, &rhs, basis.len())
        .ok_or_else(|| AlgebraError::Infeasible { degree: k, what: "associator equations".into() })?;
    let mut out = lie.clone();
    for (p, c) in basis.iter().zip(&x) {
        if !c.is_zero() {
            out = out.add(&p.scale(c));
        }
    }
    Ok((out, SolveStep { degree: k, unknowns: basis.len(), rank }))
}

fn exp_lie(l: &FreeSeries) -> FreeSeries {
    l.exp().expect("Lie series has no constant term")
}

/// Φ to the given degree: pentagon in A_4 and hexagon in the free algebra.
pub fn solve_associator(cap: usize, a4: &Horizontal) -> Result<(FreeSeries, Vec<SolveStep>), AlgebraError> {
    let mut lie = FreeSeries::zero(2, cap);
    let mut log = Vec::new();
    for k in 1..=cap {
        let res = |l: &FreeSeries| -> Vec<SparseVec> {
            let phi = exp_lie(l);
            vec![a4.reduce(&pentagon_residual(a4, &phi), k), free_coords(&hexagon_residual(&phi), k)]
        };
        let (l, step) = solve_degree(2, k, &lie, &res)?;
        lie = l;
        log.push(step);
    }
    Ok((exp_lie(&lie), log))
}

/// Ψ to the given degree for a fixed Φ (solved to at least the same degree).
pub fn solve_cyclotomic(
    n: u8,
    phi: &FreeSeries,
    cap: usize,
    alg: &CycloAlgebras,
) -> Result<(FreeSeries, Vec<SolveStep>), AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::Infeasible { degree: 0, what: "N must be positive".into() });
    }
    let letters = n + 1;
    let mut lie = FreeSeries::zero(letters, cap);
    let mut log = Vec::new();
    for k in 1..=cap {
        let phi_k = phi.truncate(k);
        let res = |l: &FreeSeries| -> Vec<SparseVec> {
            let psi = exp_lie(l);
            vec![
                alg.b3.reduce(&mixed_pentagon_residual(&alg.b3, &phi_k, &psi), k),
                alg.b2.reduce(&octagon_residual(&alg.b2, &psi), k),
            ]
        };
        let (l, step) = solve_degree(letters, k, &lie, &res)?;
        lie = l;
        log.push(step);
    }
    Ok((exp_lie(&lie), log))
}

/// Solve both associators for N up to `cap`.
pub fn solve_pair(n: u8, cap: usize) -> Result<AssociatorPair, AlgebraError> {
    let alg = CycloAlgebras::new(n);
    let (phi, mut log) = solve_associator(cap, &alg.a4)?;
    let (psi, log2) = solve_cyclotomic(n, &phi, cap, &alg)?;
    log.extend(log2);
    Ok(AssociatorPair { n, cap, phi, psi, log })
}

/// Check pentagon, hexagon, mixed pentagon and octagon degree by degree.
pub fn verify_equations(pair: &AssociatorPair, alg: &CycloAlgebras) -> Report {
    let mut rep = Report::default();
    rep.group_like.push(("phi", group_like_failure(&pair.phi).map(|x| x.0)));
    rep.group_like.push(("psi", group_like_failure(&pair.psi).map(|x| x.0)));
    let pent = pentagon_residual(&alg.a4, &pair.phi);
    let hex = hexagon_residual(&pair.phi);
    let mixed = mixed_pentagon_residual(&alg.b3, &pair.phi, &pair.psi);
    let oct = octagon_residual(&alg.b2, &pair.psi);
    for k in 0..=pair.cap {
        let checks: [(&'static str, SparseVec); 4] = [
            ("pentagon", alg.a4.reduce(&pent, k)),
            ("hexagon", free_coords(&hex, k)),
            ("mixed pentagon", alg.b3.reduce(&mixed, k)),
            ("octagon", alg.b2.reduce(&oct, k)),
        ];
        for (name, coords) in checks {
            rep.checked.push((name, k));
            if !coords.is_empty() {
                rep.failures.push(Residual { equation: name, degree: k, coords });
            }
        }
    }
    rep
}

/// P_{N,N'} on free series: a ↦ (N/N')a, b(i) ↦ b(i mod N').
pub fn project_free(x: &FreeSeries, n: u8, n2: u8) -> Result<FreeSeries, AlgebraError> {
    if n2 == 0 || !n.is_multiple_of(n2) {
        return Err(AlgebraError::NotDivisor(n2 as usize, n as usize));
    }
    let cap = x.cap;
    let mut imgs = vec![FreeSeries::letter(n2 + 1, cap, 0).scale(&qi((n / n2) as i64))];
    for i in 0..n {
        imgs.push(FreeSeries::letter(n2 + 1, cap, 1 + i % n2));
    }
    let mut out = x.substitute(&imgs)?;
    out.letters = n2 + 1;
    Ok(out)
}

pub fn project_pair(p: &AssociatorPair, n2: u8) -> Result<AssociatorPair, AlgebraError> {
    Ok(AssociatorPair { n: n2, cap: p.cap, phi: p.phi.clone(), psi: project_free(&p.psi, p.n, n2)?, log: p.log.clone() })
}

impl AssociatorPair {
    pub fn to_text(&self) -> String {
        let mut s = format!("associator N={} cap={} version={}\n", self.n, self.cap, SOLVER_VERSION);
        for st in &self.log {
            s.push_str(&format!("# degree {}: {} unknowns, rank {}, {} set to zero\n", st.degree, st.unknowns, st.rank, st.free()));
        }
        s.push_str("phi\n");
        s.push_str(&self.phi.to_text());
        s.push_str("psi\n");
        s.push_str(&self.psi.to_text());
        s
    }

    pub fn from_text(t: &str) -> Result<Self, AlgebraError> {
        let perr = |msg: &str| AlgebraError::Parse { line: 1, msg: msg.to_string() };
        let head = t.lines().next().ok_or_else(|| perr("empty input"))?;
        let mut n = None;
        let mut cap = None;
        for f in head.split_whitespace().skip(1) {
            if let Some(v) = f.strip_prefix("N=") {
                n = v.parse().ok();
            } else if let Some(v) = f.strip_prefix("cap=") {
                cap = v.parse().ok();
            }
        }
        let (n, cap) = (n.ok_or_else(|| perr("missing N"))?, cap.ok_or_else(|| perr("missing cap"))?);
        let mut log = Vec::new();
        for l in t.lines().filter_map(|l| l.strip_prefix("# degree ")) {
            let nums: Vec<usize> = l.split(|c: char| !c.is_ascii_digit()).filter_map(|x| x.parse().ok()).collect();
            if nums.len() >= 3 {
                log.push(SolveStep { degree: nums[0], unknowns: nums[1], rank: nums[2] });
            }
        }
        let body: Vec<&str> = t.lines().collect();
        let pi = body.iter().position(|l| *l == "phi").ok_or_else(|| perr("missing phi"))?;
        let si = body.iter().position(|l| *l == "psi").ok_or_else(|| perr("missing psi"))?;
        let phi = FreeSeries::from_text(&body[pi + 1..si].join("\n"))?;
        let psi = FreeSeries::from_text(&body[si + 1..].join("\n"))?;
        Ok(AssociatorPair { n, cap, phi, psi, log })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_low_degrees() {
        let a4 = Horizontal::new(4, false, 1);
        let (phi, _) = solve_associator(3, &a4).unwrap();
        assert!(phi.degree_part(1).is_zero());
        let a = FreeSeries::letter(2, 3, 0);
        let b = FreeSeries::letter(2, 3, 1);
        assert_eq!(phi.degree_part(2), a.bracket(&b).scale(&q(1, 24)));
    }

    #[test]
    fn pair_n2_degree2_verifies() {
        let p = solve_pair(2, 2).unwrap();
        let alg = CycloAlgebras::new(2);
        let rep = verify_equations(&p, &alg);
        assert!(rep.ok(), "{:?}", rep.failures);
    }
}
