//! Weight systems: N-diagrams evaluated in a representation of a metrized
//! Lie algebra with a finite-order automorphism σ.
//!
//! Chords act by the metric tensor t in orientation reading along each
//! component; a pole chord acts on its strand by N(t_l + ½ m(t_l)) with the
//! pole factor evaluated in a one-dimensional module M of the fixed
//! subalgebra l; a label a acts by σ_V^a. Residues evaluate to 1.

use std::collections::BTreeMap;

use crate::diagram::{Decor, DiagramSeries};
use crate::error::EvalError;
use crate::ring::{Cyclo, LamPoly, Matrix, Ring, Q};
use crate::skeleton::{Component, End, Skeleton};

type Mat = Matrix<LamPoly>;

/// Lie algebra data with basis X_0..X_{d-1}, all entries in ℚ(ζ_m).
#[derive(Clone, Debug)]
pub struct LieDatum {
    pub m: u32,
    pub n: u8,
    pub dim: usize,
    /// bracket[a][b][c]: coefficient of X_c in [X_a, X_b].
    pub bracket: Vec<Vec<Vec<Cyclo>>>,
    /// t = Σ t[a][b] X_a ⊗ X_b.
    pub metric: Vec<Vec<Cyclo>>,
    /// σ(X_a) = Σ_c sigma[c][a] X_c.
    pub sigma: Vec<Vec<Cyclo>>,
    /// Representation V: rho[a] is the matrix of X_a.
    pub rho: Vec<Matrix<Cyclo>>,
    pub sigma_v: Matrix<Cyclo>,
    /// Character of the one-dimensional module M on the basis (used on l only).
    pub chi: Vec<LamPoly>,
}

fn cmat(rows: &[Vec<Cyclo>]) -> Matrix<Cyclo> {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    Matrix { rows: r, cols: c, a: rows.iter().flatten().cloned().collect() }
}

fn lift(m: &Matrix<Cyclo>) -> Mat {
    m.map_entries_to(|x| LamPoly::constant(x.clone()))
}

trait MapTo<R: Ring> {
    fn map_entries_to<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S>;
}

impl<R: Ring> MapTo<R> for Matrix<R> {
    fn map_entries_to<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, a: self.a.iter().map(f).collect() }
    }
}

impl LieDatum {
    fn zero(&self) -> Cyclo {
        Cyclo::zero(self.m)
    }

    fn bracket_vec(&self, x: &[Cyclo], y: &[Cyclo]) -> Vec<Cyclo> {
        let mut out = vec![self.zero(); self.dim];
        for a in 0..self.dim {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..self.dim {
                if y[b].is_zero() {
                    continue;
                }
                let s = x[a].mul(&y[b]);
                for c in 0..self.dim {
                    out[c] = out[c].add(&s.mul(&self.bracket[a][b][c]));
                }
            }
        }
        out
    }

    fn unit_vec(&self, a: usize) -> Vec<Cyclo> {
        let mut v = vec![self.zero(); self.dim];
        v[a] = Cyclo::one(self.m);
        v
    }

    fn rho_of(&self, v: &[Cyclo]) -> Matrix<Cyclo> {
        let mut acc = Matrix::zeros(self.rho[0].rows, self.rho[0].cols, &self.zero());
        for (a, c) in v.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.rho[a].map_entries(|x| x.mul(c)));
            }
        }
        acc
    }

    fn sigma_mat(&self) -> Matrix<Cyclo> {
        cmat(&self.sigma)
    }

    /// Matrix of the projection onto the σ-fixed part, (1/N) Σ σ^k.
    fn fixed_projection(&self) -> Matrix<Cyclo> {
        let s = self.sigma_mat();
        let mut pw = Matrix::identity(self.dim, &self.zero());
        let mut acc = Matrix::zeros(self.dim, self.dim, &self.zero());
        for _ in 0..self.n {
            acc = acc.add(&pw);
            pw = s.mul(&pw);
        }
        acc.scale(&Q::new(1.into(), (self.n as i64).into()))
    }

    /// t_l = (π ⊗ π)(t).
    pub fn metric_l(&self) -> Matrix<Cyclo> {
        let p = self.fixed_projection();
        p.mul(&cmat(&self.metric)).mul(&p.transpose())
    }

    /// Check every structural identity; the error names the first failure.
    pub fn validate(&self) -> Result<(), EvalError> {
        let fail = |s: String| Err(EvalError::LieDatum(s));
        let d = self.dim;
        let e: Vec<Vec<Cyclo>> = (0..d).map(|a| self.unit_vec(a)).collect();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let j1 = self.bracket_vec(&self.bracket_vec(&e[a], &e[b]), &e[c]);
                    let j2 = self.bracket_vec(&self.bracket_vec(&e[b], &e[c]), &e[a]);
                    let j3 = self.bracket_vec(&self.bracket_vec(&e[c], &e[a]), &e[b]);
                    if (0..d).any(|k| !j1[k].add(&j2[k]).add(&j3[k]).is_zero()) {
                        return fail(format!("Jacobi identity fails on basis ({a}, {b}, {c})"));
                    }
                }
            }
        }
        for a in 0..d {
            for b in 0..d {
                let lhs = self.rho_of(&self.bracket_vec(&e[a], &e[b]));
                let rhs = self.rho[a].mul(&self.rho[b]).sub(&self.rho[b].mul(&self.rho[a]));
                if lhs != rhs {
                    return fail(format!("V is not a representation on ({a}, {b})"));
                }
            }
        }
        let t = cmat(&self.metric);
        if t != t.transpose() {
            return fail("metric tensor is not symmetric".into());
        }
        for x in 0..d {
            // ad_x as a matrix: column a holds [X_x, X_a]
            let cols: Vec<Vec<Cyclo>> = (0..d).map(|a| self.bracket_vec(&e[x], &e[a])).collect();
            let ad = cmat(&cols).transpose();
            if !ad.mul(&t).add(&t.mul(&ad.transpose())).is_zero() {
                return fail(format!("metric tensor is not invariant under X_{x}"));
            }
        }
        let s = self.sigma_mat();
        let mut pw = Matrix::identity(d, &self.zero());
        for k in 1..=self.n {
            pw = s.mul(&pw);
            let is_id = pw == Matrix::identity(d, &self.zero());
            if is_id != (k == self.n) {
                return fail(format!("σ does not have order {}", self.n));
            }
        }
        let sv = |a: usize| -> Vec<Cyclo> { (0..d).map(|c| self.sigma[c][a].clone()).collect() };
        for a in 0..d {
            for b in 0..d {
                let lhs: Vec<Cyclo> = {
                    let br = self.bracket_vec(&e[a], &e[b]);
                    (0..d).map(|c| (0..d).fold(self.zero(), |acc, k| acc.add(&self.sigma[c][k].mul(&br[k])))).collect()
                };
                if lhs != self.bracket_vec(&sv(a), &sv(b)) {
                    return fail(format!("σ does not preserve the bracket on ({a}, {b})"));
                }
            }
        }
        if s.mul(&t).mul(&s.transpose()) != t {
            return fail("σ ⊗ σ does not fix the metric tensor".into());
        }
        for a in 0..d {
            if self.sigma_v.mul(&self.rho[a]) != self.rho_of(&sv(a)).mul(&self.sigma_v) {
                return fail(format!("σ_V does not intertwine X_{a}"));
            }
        }
        let p = self.fixed_projection();
        if p.mul(&p) != p {
            return fail("fixed-part projection is not idempotent".into());
        }
        Ok(())
    }

    /// Operator of a pole chord on its strand: N(t_l + ½ m(t_l)) with the
    /// first factor evaluated by the character of M.
    pub fn pole_operator(&self) -> Mat {
        let tl = self.metric_l();
        let dv = self.rho[0].rows;
        let mut acc = Matrix::zeros(dv, dv, &LamPoly::zero(self.m));
        for a in 0..self.dim {
            for b in 0..self.dim {
                let c = tl.get(a, b);
                if c.is_zero() {
                    continue;
                }
                let lin = lift(&self.rho[b]).map_entries(|x| x.mul(&self.chi[a]).mul(&LamPoly::constant(c.clone())));
                let quad = lift(&self.rho[a].mul(&self.rho[b]).map_entries(|x| x.mul(c).scale(&Q::new(1.into(), 2.into()))));
                acc = acc.add(&lin).add(&quad);
            }
        }
        acc.scale(&Q::from_integer((self.n as i64).into()))
    }
}

/// The sl2 datum at N: basis (e, f, h), t = e⊗f + f⊗e + h⊗h/2, σ = Ad of a
/// torus element with σ(e) = ζe, V the fundamental representation with
/// σ_V = diag(ζ, 1), M the weight module h ↦ λ.
pub fn sl2_datum(n: u8) -> Result<LieDatum, EvalError> {
    if n == 0 {
        return Err(EvalError::LieDatum("N must be at least 1".into()));
    }
    let m = 2 * n as u32;
    let z = || Cyclo::zero(m);
    let o = || Cyclo::one(m);
    let r = |x: i64| Cyclo::from_q(m, Q::from_integer(x.into()));
    let zeta = Cyclo::zeta_pow(m, 2);
    let zeta_inv = Cyclo::zeta_pow(m, -2);
    // [e,f] = h, [h,e] = 2e, [h,f] = -2f
    let mut br = vec![vec![vec![z(); 3]; 3]; 3];
    br[0][1][2] = o();
    br[1][0][2] = r(-1);
    br[2][0][0] = r(2);
    br[0][2][0] = r(-2);
    br[2][1][1] = r(-2);
    br[1][2][1] = r(2);
    let mut t = vec![vec![z(); 3]; 3];
    t[0][1] = o();
    t[1][0] = o();
    t[2][2] = Cyclo::from_q(m, Q::new(1.into(), 2.into()));
    let mut sigma = vec![vec![z(); 3]; 3];
    sigma[0][0] = zeta.clone();
    sigma[1][1] = zeta_inv;
    sigma[2][2] = o();
    let mk = |e: [[i64; 2]; 2]| cmat(&e.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect::<Vec<_>>());
    let rho = vec![mk([[0, 1], [0, 0]]), mk([[0, 0], [1, 0]]), mk([[1, 0], [0, -1]])];
    let sigma_v = cmat(&[vec![zeta, z()], vec![z(), o()]]);
    let chi = vec![LamPoly::zero(m), LamPoly::zero(m), LamPoly::lambda(m)];
    let d = LieDatum { m, n, dim: 3, bracket: br, metric: t, sigma, rho, sigma_v, chi };
    d.validate()?;
    Ok(d)
}

/// Evaluation context: cached powers of σ_V and the pole operator.
pub struct WeightSystem {
    pub datum: LieDatum,
    sigma_pows: Vec<Mat>,
    pole: Mat,
    /// Nonzero metric entries (a, b, t^{ab}).
    pairs: Vec<(usize, usize, LamPoly)>,
    dv: usize,
}

impl WeightSystem {
    pub fn new(datum: LieDatum) -> Result<Self, EvalError> {
        datum.validate()?;
        let sv = lift(&datum.sigma_v);
        let dv = datum.rho[0].rows;
        let mut sigma_pows = vec![Matrix::identity(dv, &LamPoly::zero(datum.m))];
        for k in 1..datum.n as usize {
            sigma_pows.push(sv.mul(&sigma_pows[k - 1]));
        }
        let pole = datum.pole_operator();
        let mut pairs = Vec::new();
        for a in 0..datum.dim {
            for b in 0..datum.dim {
                if !datum.metric[a][b].is_zero() {
                    pairs.push((a, b, LamPoly::constant(datum.metric[a][b].clone())));
                }
            }
        }
        Ok(WeightSystem { datum, sigma_pows, pole, pairs, dv })
    }

    fn zero(&self) -> LamPoly {
        LamPoly::zero(self.datum.m)
    }

    /// Operator V^{⊗source} → V^{⊗target} of a single diagram (without ħ).
    pub fn eval_diagram(&self, skel: &Skeleton, d: &Decor) -> Result<Mat, EvalError> {
        if d.comps.len() != skel.comps.len() {
            return Err(EvalError::Other("decoration does not match the skeleton".into()));
        }
        if self.dv != 2 && (!skel.source.is_empty() || !skel.target.is_empty()) {
            return Err(EvalError::Other("open skeleta need a two-dimensional V".into()));
        }
        let deg = d.degree();
        let on_pole: Vec<bool> = (0..deg as u16).map(|c| d.pole.contains(&c)).collect();
        let ordinary: Vec<u16> = (0..deg as u16).filter(|c| !on_pole[*c as usize]).collect();
        let mut slot = vec![usize::MAX; deg];
        for (k, c) in ordinary.iter().enumerate() {
            slot[*c as usize] = k;
        }
        let lifted: Vec<Mat> = self.datum.rho.iter().map(lift).collect();
        let total_assign = self.pairs.len().pow(ordinary.len() as u32);
        let ns = skel.source.len();
        let nt = skel.target.len();
        let mut out = Matrix::zeros(1 << nt, 1 << ns, &self.zero());
        for code in 0..total_assign {
            let mut choice = Vec::with_capacity(ordinary.len());
            let mut cc = code;
            let mut coef = self.zero().one_like();
            for _ in 0..ordinary.len() {
                let p = &self.pairs[cc % self.pairs.len()];
                cc /= self.pairs.len();
                coef = coef.mul(&p.2);
                choice.push((p.0, p.1));
            }
            let mut seen = vec![false; deg];
            let mut arcs: Vec<(End, End, Mat)> = Vec::new();
            let mut scalar = coef;
            for (ci, comp) in skel.comps.iter().enumerate() {
                let cd = &d.comps[ci];
                let mut acc = self.sigma_pows[cd.labels[0] as usize].clone();
                for (j, &p) in cd.pts.iter().enumerate() {
                    let op = if on_pole[p as usize] {
                        &self.pole
                    } else {
                        let (a, b) = choice[slot[p as usize]];
                        let first = !seen[p as usize];
                        seen[p as usize] = true;
                        &lifted[if first { a } else { b }]
                    };
                    acc = acc.mul(op);
                    if let Some(&l) = cd.labels.get(j + 1) {
                        acc = acc.mul(&self.sigma_pows[l as usize]);
                    }
                }
                match comp {
                    Component::Circle => {
                        let mut tr = self.zero();
                        for i in 0..self.dv {
                            tr = tr.add(acc.get(i, i));
                        }
                        scalar = scalar.mul(&tr);
                    }
                    Component::Arc { start, end } => arcs.push((*start, *end, acc)),
                }
            }
            if scalar.is_zero() {
                continue;
            }
            let bit = |e: End, row: usize, col: usize| match e {
                End::Target(j) => (row >> (nt - 1 - j)) & 1,
                End::Source(i) => (col >> (ns - 1 - i)) & 1,
            };
            for row in 0..1 << nt {
                for col in 0..1 << ns {
                    let mut v = scalar.clone();
                    for (s, e, a) in &arcs {
                        v = v.mul(a.get(bit(*s, row, col), bit(*e, row, col)));
                        if v.is_zero() {
                            break;
                        }
                    }
                    let cur = out.get(row, col).add(&v);
                    out.set(row, col, cur);
                }
            }
        }
        Ok(out)
    }

    /// ħ-graded specialization: entry k is the degree-k part evaluated.
    pub fn specialize(&self, s: &DiagramSeries, cap: usize) -> Result<Vec<Mat>, EvalError> {
        let ns = s.skel.source.len();
        let nt = s.skel.target.len();
        let mut out = vec![Matrix::zeros(1 << nt, 1 << ns, &self.zero()); cap + 1];
        let mut by_degree: BTreeMap<usize, Vec<(&Decor, &Q)>> = BTreeMap::new();
        for (d, c) in &s.terms {
            by_degree.entry(d.degree()).or_default().push((d, c));
        }
        for (k, terms) in by_degree {
            if k > cap {
                continue;
            }
            for (d, c) in terms {
                let m = self.eval_diagram(&s.skel, d)?;
                out[k] = out[k].add(&m.scale(c));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Strands;
    use crate::skeleton::Sign::*;

    #[test]
    fn sl2_loads_for_small_n() {
        for n in 1..=4 {
            sl2_datum(n).unwrap();
        }
    }

    #[test]
    fn wrong_order_is_rejected() {
        let mut d = sl2_datum(3).unwrap();
        d.n = 2;
        assert!(d.validate().is_err());
    }

    #[test]
    fn pole_chord_eigenvalue() {
        let n = 3;
        let ws = WeightSystem::new(sl2_datum(n).unwrap()).unwrap();
        let lam = LamPoly::lambda(6);
        let expect = lam.scale(&Q::new(3.into(), 2.into())).add(&LamPoly::constant(Cyclo::from_q(6, Q::new(3.into(), 4.into()))));
        assert_eq!(ws.pole.get(0, 0), &expect);
    }

    #[test]
    fn chord_on_two_plus_strands() {
        let ws = WeightSystem::new(sl2_datum(1).unwrap()).unwrap();
        let st = Strands::new(false, &[Plus, Plus]);
        let m = ws.eval_diagram(&st.skel, &st.chord(1, 2, 0, 1)).unwrap();
        let half = LamPoly::constant(Cyclo::from_q(2, Q::new(1.into(), 2.into())));
        assert_eq!(m.get(0, 0), &half);
    }
}
