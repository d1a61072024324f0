//! U_q(sl2) evaluation of B-links: R-matrix, pivotal cups and caps, the pole
//! element E and the loop operator R̄⁻¹(E ⊗ 1).
//!
//! Scalars are Laurent polynomials in ν₄ = q^{1/4} and L = q^{λ/2} over
//! ℚ(ζ_{2N}); the generator z = ζ_{2N} plays the role of ζ^{1/2}. The
//! quantum-group parameter entering R, K and the pivotal element is
//! q^{1/2} = ν₄², so Ř on V ⊗ V has eigenvalues ν₄ and −ν₄⁻³.

use crate::error::EvalError;
use crate::ring::{q, Cyclo, CycloLaurent, LamPoly, Matrix, Ring};
use crate::skeleton::Sign;
use crate::tangle::{braid_exponent, sign_from_exponent, Orient, Slice, TangleWord};

#[derive(Clone, Debug)]
pub struct QuantumData {
    pub n: usize,
    /// Order of the coefficient field: 2N.
    pub m: u32,
}

type M = Matrix<CycloLaurent>;

impl QuantumData {
    /// Build the data for `ζ = z²`, `z = exp(iπ/N)`, and verify Yang-Baxter,
    /// the skein relation and the framed first Reidemeister move.
    pub fn new(n: usize) -> Result<QuantumData, EvalError> {
        if n == 0 {
            return Err(EvalError::Other("N must be at least 1".into()));
        }
        let qd = QuantumData { n, m: 2 * n as u32 };
        qd.check()?;
        Ok(qd)
    }

    pub fn zero(&self) -> CycloLaurent {
        CycloLaurent::zero(self.m)
    }
    pub fn one(&self) -> CycloLaurent {
        self.zero().one_like()
    }
    /// ν₄^a · L^b · z^c
    pub fn mono(&self, a: i64, b: i64, c: i64) -> CycloLaurent {
        CycloLaurent::monomial(Cyclo::zeta_pow(self.m, c), a, b)
    }
    fn scalar(&self, k: i64) -> CycloLaurent {
        self.one().scale(&q(k, 1))
    }

    fn mat(&self, r: usize, c: usize, entries: &[(usize, usize, CycloLaurent)]) -> M {
        let mut m = Matrix::zeros(r, c, &self.zero());
        for (i, j, v) in entries {
            m.set(*i, *j, v.clone());
        }
        m
    }

    /// Weight of basis vector `a` ∈ {0, 1} on a strand with letter `x`.
    fn h(x: Sign, a: usize) -> i64 {
        x.eps() * if a == 0 { 1 } else { -1 }
    }

    fn e_gen(&self, x: Sign) -> M {
        match x {
            Sign::Plus => self.mat(2, 2, &[(0, 1, self.one())]),
            Sign::Minus => self.mat(2, 2, &[(1, 0, self.mono(2, 0, 0).neg())]),
        }
    }
    fn f_gen(&self, x: Sign) -> M {
        match x {
            Sign::Plus => self.mat(2, 2, &[(1, 0, self.one())]),
            Sign::Minus => self.mat(2, 2, &[(0, 1, self.mono(-2, 0, 0).neg())]),
        }
    }
    fn k_inv(&self, x: Sign) -> M {
        self.mat(2, 2, &[(0, 0, self.mono(-2 * Self::h(x, 0), 0, 0)), (1, 1, self.mono(-2 * Self::h(x, 1), 0, 0))])
    }
    fn id(&self, d: usize) -> M {
        Matrix::identity(d, &self.zero())
    }
    fn c_q(&self) -> CycloLaurent {
        self.mono(2, 0, 0).sub(&self.mono(-2, 0, 0))
    }

    /// Coproduct image of F on a word.
    fn f_word(&self, w: &[Sign]) -> M {
        let d = 1 << w.len();
        let mut acc = Matrix::zeros(d, d, &self.zero());
        for j in 0..w.len() {
            let mut t = self.id(1);
            for (i, x) in w.iter().enumerate() {
                let f = if i < j {
                    self.k_inv(*x)
                } else if i == j {
                    self.f_gen(*x)
                } else {
                    self.id(2)
                };
                t = t.kron(&f);
            }
            acc = acc.add(&t);
        }
        acc
    }

    fn swap(&self) -> M {
        let o = self.one();
        self.mat(4, 4, &[(0, 0, o.clone()), (1, 2, o.clone()), (2, 1, o.clone()), (3, 3, o)])
    }

    /// R on V_x ⊗ V_y.
    fn r(&self, x: Sign, y: Sign, inverse: bool) -> M {
        let s = if inverse { -1 } else { 1 };
        let mut d = Matrix::zeros(4, 4, &self.zero());
        for a in 0..2 {
            for b in 0..2 {
                d.set(2 * a + b, 2 * a + b, self.mono(s * Self::h(x, a) * Self::h(y, b), 0, 0));
            }
        }
        let ef = self.e_gen(x).kron(&self.f_gen(y)).map_entries(|v| v.mul(&self.c_q()));
        if inverse {
            self.id(4).sub(&ef).mul(&d)
        } else {
            d.mul(&self.id(4).add(&ef))
        }
    }

    /// Crossing operator V_x ⊗ V_y → V_y ⊗ V_x with geometric exponent `e`.
    pub fn crossing(&self, x: Sign, y: Sign, e: i64) -> M {
        if e > 0 {
            self.swap().mul(&self.r(x, y, false))
        } else {
            self.r(y, x, true).mul(&self.swap())
        }
    }

    pub fn cup(&self, o: Orient) -> M {
        match o {
            Orient::Lr => self.mat(4, 1, &[(0, 0, self.one()), (3, 0, self.one())]),
            Orient::Rl => self.mat(4, 1, &[(0, 0, self.mono(-2, 0, 0)), (3, 0, self.mono(2, 0, 0))]),
        }
    }

    pub fn cap(&self, x: Sign) -> M {
        match x {
            Sign::Plus => self.mat(1, 4, &[(0, 0, self.mono(2, 0, 0)), (0, 3, self.mono(-2, 0, 0))]),
            Sign::Minus => self.mat(1, 4, &[(0, 0, self.one()), (0, 3, self.one())]),
        }
    }

    /// The pole element on M_λ ⊗ V_x: q^{λh/2 + h²/4} σ, or its inverse.
    pub fn pole_element(&self, x: Sign, inverse: bool) -> M {
        let s = if inverse { -1 } else { 1 };
        let entries: Vec<(usize, usize, CycloLaurent)> = (0..2)
            .map(|a| {
                let h = Self::h(x, a);
                (a, a, self.mono(s * h * h, s * h, s * h))
            })
            .collect();
        self.mat(2, 2, &entries)
    }

    /// Image of the pole loop on M ⊗ V^{⊗w}: (1 ⊗ R̄_{V,rest})⁻¹ (E ⊗ 1).
    pub fn loop_operator(&self, w: &[Sign], inverse: bool) -> M {
        assert!(!w.is_empty());
        let rest = &w[1..];
        let dr = 1 << rest.len();
        let e = self.pole_element(w[0], inverse).kron(&self.id(dr));
        if rest.is_empty() {
            return e;
        }
        let ef = self.e_gen(w[0]).kron(&self.f_word(rest)).map_entries(|v| v.mul(&self.c_q()));
        if inverse {
            e.mul(&self.id(2 * dr).add(&ef))
        } else {
            self.id(2 * dr).sub(&ef).mul(&e)
        }
    }

    /// Matrix of a single slice acting on the word `w`.
    pub fn slice_operator(&self, w: &[Sign], s: &Slice) -> Result<M, EvalError> {
        let n = w.len();
        let embed = |p: usize, k_in: usize, op: M| -> M {
            let left = self.id(1 << p);
            let right = self.id(1 << (n - p - k_in));
            left.kron(&op).kron(&right)
        };
        Ok(match *s {
            Slice::Cross { pos, sign } => {
                let (x, y) = (w[pos - 1], w[pos]);
                embed(pos - 1, 2, self.crossing(x, y, braid_exponent(sign, x, y)))
            }
            Slice::Cup { pos, orient } => embed(pos - 1, 0, self.cup(orient)),
            Slice::Cap { pos } => embed(pos - 1, 2, self.cap(w[pos - 1])),
            Slice::Pole { sign } => self.loop_operator(w, sign == Sign::Minus),
            Slice::SingCross { .. } | Slice::SingPole => {
                return Err(EvalError::Tangle(crate::error::TangleError::Singular))
            }
        })
    }

    /// Matrix of a non-singular word from V^{source} to V^{target}.
    pub fn operator(&self, t: &TangleWord) -> Result<M, EvalError> {
        let lv = t.levels();
        let mut acc = self.id(1 << t.source.len());
        for (k, s) in t.slices.iter().enumerate() {
            acc = self.slice_operator(&lv[k], s)?.mul(&acc);
        }
        Ok(acc)
    }

    fn check(&self) -> Result<(), EvalError> {
        use crate::tangle::parse_tangle_word;
        let op = |s: &str| self.operator(&parse_tangle_word(s).expect("built-in word"));
        let bad = |what: &str| Err(EvalError::Other(format!("quantum data check failed: {what}")));
        let braid = |w: &[Sign], ps: &[usize]| -> Result<M, EvalError> {
            let mut cur = w.to_vec();
            let mut sl = Vec::new();
            for &p in ps {
                sl.push(Slice::Cross { pos: p, sign: sign_from_exponent(1, cur[p - 1], cur[p]) });
                cur.swap(p - 1, p);
            }
            self.operator(&TangleWord::new(false, w.to_vec(), sl).expect("braid word"))
        };
        use Sign::{Minus as Mi, Plus as Pl};
        for w in [[Pl, Pl, Pl], [Pl, Mi, Pl], [Mi, Mi, Pl], [Mi, Pl, Mi]] {
            if braid(&w, &[1, 2, 1])? != braid(&w, &[2, 1, 2])? {
                return bad("Yang-Baxter");
            }
        }
        let r = self.crossing(Sign::Plus, Sign::Plus, 1);
        // eigenvalues ν₄ and −ν₄⁻³, ratio −q
        let a = self.id(4).map_entries(|v| v.mul(&self.mono(1, 0, 0)));
        let b = self.id(4).map_entries(|v| v.mul(&self.mono(-3, 0, 0).neg()));
        if !r.sub(&a).mul(&r.sub(&b)).is_zero() {
            return bad("skein");
        }
        if op("obj + ; U 2 lr ; X 1 + ; A 2 ;")? != op("obj + ; U 1 rl ; X 2 + ; A 1 ;")? {
            return bad("framed Reidemeister I");
        }
        let _ = self.scalar(1);
        Ok(())
    }
}

/// Evaluate a closed B-link to a scalar.
pub fn eval_link(t: &TangleWord, qd: &QuantumData) -> Result<CycloLaurent, EvalError> {
    if !t.is_closed() {
        return Err(EvalError::NotClosed(crate::skeleton::word_str(&t.source)));
    }
    let m = qd.operator(t)?;
    Ok(m.get(0, 0).clone())
}

/// Expansion in ħ with q = e^ħ and q^{λ/2} = e^{ħλ/2}; entry k is the ħ^k
/// coefficient as a polynomial in λ.
pub fn hbar_expand(p: &CycloLaurent, cap: usize) -> Vec<LamPoly> {
    let mm = p.m;
    let mut out = vec![LamPoly::zero(mm); cap + 1];
    for ((a, b), c) in &p.terms {
        // exponent x = a/4 + bλ/2; e^{ħx} = Σ x^k ħ^k / k!
        let x = LamPoly::constant(Cyclo::one(mm).scale(&q(*a, 4))).add(&LamPoly::lambda(mm).scale(&q(*b, 2)));
        let mut pw = LamPoly::constant(c.clone());
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                pw = pw.mul(&x).scale(&q(1, k as i64));
            }
            *slot = slot.add(&pw);
        }
    }
    out
}

/// Ring-membership check for link values: coefficients are integral in the
/// power basis of ℚ(ζ_{2N}) and all ν₄ exponents share one parity, so the
/// value is ν₄^r times a Laurent polynomial in ν = q^{1/2} and L. Returns r.
pub fn polynomiality(p: &CycloLaurent) -> Option<i64> {
    let mut par = None;
    for ((a, _), c) in &p.terms {
        if !c.c.iter().all(crate::ring::q_is_integer) {
            return None;
        }
        let r = a.rem_euclid(2);
        if par.is_some_and(|x| x != r) {
            return None;
        }
        par = Some(r);
    }
    Some(par.unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::parse_tangle_word;

    fn w(n: usize, a: i64, b: i64, c: i64) -> CycloLaurent {
        QuantumData { n, m: 2 * n as u32 }.mono(a, b, c)
    }

    #[test]
    fn unknots() {
        let qd = QuantumData::new(3).unwrap();
        let u = eval_link(&parse_tangle_word("obj ; U 1 lr ; A 1 ;").unwrap(), &qd).unwrap();
        assert_eq!(u, w(3, 2, 0, 0).add(&w(3, -2, 0, 0)));
        let u2 = eval_link(&parse_tangle_word("obj ; U 1 rl ; A 1 ;").unwrap(), &qd).unwrap();
        assert_eq!(u, u2);
        let p = eval_link(&parse_tangle_word("obj * ; U 1 lr ; T + ; A 1 ;").unwrap(), &qd).unwrap();
        assert_eq!(p, w(3, 3, 1, 1).add(&w(3, 3, -1, -1)));
    }

    #[test]
    fn hbar_of_lambda() {
        let p = w(2, 0, 1, 0);
        let e = hbar_expand(&p, 2);
        let lam = LamPoly::lambda(4);
        assert_eq!(e[0], lam.one_like());
        assert_eq!(e[1], lam.scale(&q(1, 2)));
        assert_eq!(e[2], lam.mul(&lam).scale(&q(1, 8)));
    }
}
