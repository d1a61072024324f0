//! Exact scalar rings: rationals, cyclotomic fields, polynomials in the
//! weight symbol λ, and Laurent polynomials in ν₄ and q^{λ/2}.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        Some(Q::new(a, b))
    } else {
        Some(Q::from_integer(s.parse().ok()?))
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Minimal ring interface used by the matrix code.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Q) -> Self;
}

impl Ring for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Q) -> Self {
        self * c
    }
}

fn poly_divmod_int(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den monic; returns quotient, asserts zero remainder
    let mut r = num.to_vec();
    let dn = den.len() - 1;
    if r.len() <= dn {
        return vec![0];
    }
    let mut quo = vec![0i64; r.len() - dn];
    for k in (0..quo.len()).rev() {
        let c = r[k + dn];
        quo[k] = c;
        for (j, d) in den.iter().enumerate() {
            r[k + j] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    quo
}

/// Coefficients of the m-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_poly(m: u32) -> &'static [i64] {
    static CACHE: OnceLock<Mutex<HashMap<u32, &'static [i64]>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p;
    }
    assert!(m >= 1);
    let mut p = vec![0i64; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = poly_divmod_int(&p, cyclotomic_poly(d));
        }
    }
    let leaked: &'static [i64] = Box::leak(p.into_boxed_slice());
    cache.lock().unwrap().insert(m, leaked);
    leaked
}

/// Element of ℚ(ζ_m) in the power basis 1, ζ, …, ζ^{φ(m)−1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    pub m: u32,
    pub c: Vec<Q>,
}

impl Cyclo {
    pub fn degree(m: u32) -> usize {
        cyclotomic_poly(m).len() - 1
    }

    pub fn zero(m: u32) -> Cyclo {
        Cyclo { m, c: vec![Q::zero(); Self::degree(m)] }
    }

    pub fn from_q(m: u32, x: Q) -> Cyclo {
        let mut z = Self::zero(m);
        z.c[0] = x;
        z
    }

    pub fn one(m: u32) -> Cyclo {
        Self::from_q(m, Q::one())
    }

    /// ζ_m^k for any integer k.
    pub fn zeta_pow(m: u32, k: i64) -> Cyclo {
        let e = k.rem_euclid(m as i64) as usize;
        let mut v = vec![Q::zero(); e + 1];
        v[e] = Q::one();
        Self::reduce(m, v)
    }

    fn reduce(m: u32, mut v: Vec<Q>) -> Cyclo {
        let p = cyclotomic_poly(m);
        let d = p.len() - 1;
        while v.len() > d {
            let top = v.pop().unwrap();
            if !Zero::is_zero(&top) {
                let k = v.len() - d;
                for j in 0..d {
                    if p[j] != 0 {
                        v[k + j] -= &top * qi(p[j]);
                    }
                }
            }
        }
        v.resize(d, Q::zero());
        Cyclo { m, c: v }
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().skip(1).all(Zero::is_zero)
    }

    /// Galois conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Cyclo {
        let mut acc = Cyclo::zero(self.m);
        for (k, x) in self.c.iter().enumerate() {
            if !Zero::is_zero(x) {
                acc = acc.add(&Cyclo::zeta_pow(self.m, -(k as i64)).scale(x));
            }
        }
        acc
    }

    pub fn to_string_with(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (k, x) in self.c.iter().enumerate() {
            if Zero::is_zero(x) {
                continue;
            }
            let mon = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mon.is_empty() {
                parts.push(fmt_q(x));
            } else if x.is_one() {
                parts.push(mon);
            } else if (-x).is_one() {
                parts.push(format!("-{mon}"));
            } else {
                parts.push(format!("{}*{mon}", fmt_q(x)));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_string_with("z"))
    }
}

impl Ring for Cyclo {
    fn zero_like(&self) -> Self {
        Cyclo::zero(self.m)
    }
    fn one_like(&self) -> Self {
        Cyclo::one(self.m)
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
    fn add(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m, "cyclotomic order mismatch");
        Cyclo { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
    fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m, "cyclotomic order mismatch");
        Cyclo { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m, "cyclotomic order mismatch");
        let d = self.c.len();
        if d == 1 {
            return Cyclo { m: self.m, c: vec![&self.c[0] * &o.c[0]] };
        }
        let mut v = vec![Q::zero(); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !Zero::is_zero(b) {
                    v[i + j] += a * b;
                }
            }
        }
        Cyclo::reduce(self.m, v)
    }
    fn neg(&self) -> Self {
        Cyclo { m: self.m, c: self.c.iter().map(|a| -a).collect() }
    }
    fn scale(&self, s: &Q) -> Self {
        Cyclo { m: self.m, c: self.c.iter().map(|a| a * s).collect() }
    }
}

/// Polynomial in the formal weight λ with cyclotomic coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LamPoly {
    pub m: u32,
    pub c: Vec<Cyclo>,
}

impl LamPoly {
    pub fn zero(m: u32) -> Self {
        LamPoly { m, c: Vec::new() }
    }
    pub fn constant(x: Cyclo) -> Self {
        let m = x.m;
        LamPoly { m, c: vec![x] }.trim()
    }
    pub fn lambda(m: u32) -> Self {
        LamPoly { m, c: vec![Cyclo::zero(m), Cyclo::one(m)] }
    }
    fn trim(mut self) -> Self {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
        self
    }
    pub fn coeff(&self, k: usize) -> Cyclo {
        self.c.get(k).cloned().unwrap_or_else(|| Cyclo::zero(self.m))
    }

    /// `(c0) + (c1) * lam + (c2) * lam^2 …` with coefficients in z = ζ_m.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| match k {
                0 => format!("({})", x.to_string_with("z")),
                1 => format!("({}) * lam", x.to_string_with("z")),
                _ => format!("({}) * lam^{k}", x.to_string_with("z")),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for LamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| format!("{:?}*lam^{k}", x))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Ring for LamPoly {
    fn zero_like(&self) -> Self {
        LamPoly::zero(self.m)
    }
    fn one_like(&self) -> Self {
        LamPoly::constant(Cyclo::one(self.m))
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        LamPoly { m: self.m, c: (0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect() }.trim()
    }
    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        LamPoly { m: self.m, c: (0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect() }.trim()
    }
    fn mul(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return LamPoly::zero(self.m);
        }
        let mut c = vec![Cyclo::zero(self.m); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        LamPoly { m: self.m, c }.trim()
    }
    fn neg(&self) -> Self {
        LamPoly { m: self.m, c: self.c.iter().map(|x| x.neg()).collect() }
    }
    fn scale(&self, s: &Q) -> Self {
        LamPoly { m: self.m, c: self.c.iter().map(|x| x.scale(s)).collect() }.trim()
    }
}

/// Laurent polynomial in ν₄ (ν₄⁴ = q) and L = q^{λ/2}, coefficients in ℚ(ζ_m).
/// Keys are (exponent of ν₄, exponent of L).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloLaurent {
    pub m: u32,
    pub terms: BTreeMap<(i64, i64), Cyclo>,
}

impl CycloLaurent {
    pub fn zero(m: u32) -> Self {
        CycloLaurent { m, terms: BTreeMap::new() }
    }
    pub fn monomial(c: Cyclo, nu4: i64, lam: i64) -> Self {
        let m = c.m;
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert((nu4, lam), c);
        }
        CycloLaurent { m, terms: t }
    }
    pub fn constant(c: Cyclo) -> Self {
        Self::monomial(c, 0, 0)
    }
    /// q^e for e a multiple of 1/4, given as e = k/4.
    pub fn q_quarter(m: u32, k: i64) -> Self {
        Self::monomial(Cyclo::one(m), k, 0)
    }

    /// Substitute ν₄ ↦ ν₄^{-1}, L ↦ L^{-1}, ζ ↦ ζ^{-1}.
    pub fn mirror(&self) -> Self {
        let mut out = CycloLaurent::zero(self.m);
        for ((a, b), c) in &self.terms {
            out = out.add(&CycloLaurent::monomial(c.conj(), -a, -b));
        }
        out
    }

    /// True when every ν₄ exponent has the same residue mod 4, so the value is
    /// q^{r/4} times a Laurent polynomial in q^{±1} (and L, ζ).
    pub fn quarter_offset(&self) -> Option<i64> {
        let mut r = None;
        for (a, _) in self.terms.keys() {
            let x = a.rem_euclid(4);
            if r.is_some_and(|y| y != x) {
                return None;
            }
            r = Some(x);
        }
        Some(r.unwrap_or(0))
    }

    /// Canonical text: terms "coeff * nu^k * qlam^m", ν = q^{1/2}; a fractional
    /// ν exponent is printed as p/2.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for ((a, b), c) in &self.terms {
            let nu = if a % 2 == 0 { format!("{}", a / 2) } else { format!("{a}/2") };
            parts.push(format!("({}) * nu^{} * qlam^{}", c.to_string_with("z"), nu, b));
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for CycloLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl Ring for CycloLaurent {
    fn zero_like(&self) -> Self {
        CycloLaurent::zero(self.m)
    }
    fn one_like(&self) -> Self {
        CycloLaurent::constant(Cyclo::one(self.m))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        for (k, v) in &o.terms {
            let e = t.entry(*k).or_insert_with(|| Cyclo::zero(self.m));
            *e = e.add(v);
            if e.is_zero() {
                t.remove(k);
            }
        }
        CycloLaurent { m: self.m, terms: t }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut t: BTreeMap<(i64, i64), Cyclo> = BTreeMap::new();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                let k = (a1 + a2, b1 + b2);
                let e = t.entry(k).or_insert_with(|| Cyclo::zero(self.m));
                *e = e.add(&c1.mul(c2));
            }
        }
        t.retain(|_, v| !v.is_zero());
        CycloLaurent { m: self.m, terms: t }
    }
    fn neg(&self) -> Self {
        CycloLaurent { m: self.m, terms: self.terms.iter().map(|(k, v)| (*k, v.neg())).collect() }
    }
    fn scale(&self, s: &Q) -> Self {
        let mut t: BTreeMap<(i64, i64), Cyclo> =
            self.terms.iter().map(|(k, v)| (*k, v.scale(s))).collect();
        t.retain(|_, v| !v.is_zero());
        CycloLaurent { m: self.m, terms: t }
    }
}

/// Dense square-or-rectangular matrix over a ring.
#[derive(Clone, PartialEq)]
pub struct Matrix<R: Ring> {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<R>,
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", &self.a[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize, zero: &R) -> Self {
        Matrix { rows, cols, a: vec![zero.zero_like(); rows * cols] }
    }
    pub fn identity(n: usize, zero: &R) -> Self {
        let mut m = Self::zeros(n, n, zero);
        for i in 0..n {
            m.a[i * n + i] = zero.one_like();
        }
        m
    }
    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.a[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.a[i * self.cols + j] = v;
    }
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let z = self.a.first().or(o.a.first()).cloned();
        let mut out = Matrix { rows: self.rows, cols: o.cols, a: Vec::with_capacity(self.rows * o.cols) };
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc: Option<R> = None;
                for k in 0..self.cols {
                    let x = self.get(i, k);
                    if x.is_zero() {
                        continue;
                    }
                    let y = o.get(k, j);
                    if y.is_zero() {
                        continue;
                    }
                    let p = x.mul(y);
                    acc = Some(match acc {
                        None => p,
                        Some(s) => s.add(&p),
                    });
                }
                out.a.push(acc.unwrap_or_else(|| z.as_ref().expect("empty matrix").zero_like()));
            }
        }
        out
    }
    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, a: self.a.iter().zip(&o.a).map(|(x, y)| x.add(y)).collect() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, a: self.a.iter().zip(&o.a).map(|(x, y)| x.sub(y)).collect() }
    }
    pub fn scale(&self, s: &Q) -> Self {
        Matrix { rows: self.rows, cols: self.cols, a: self.a.iter().map(|x| x.scale(s)).collect() }
    }
    pub fn map_entries(&self, f: impl Fn(&R) -> R) -> Self {
        Matrix { rows: self.rows, cols: self.cols, a: self.a.iter().map(f).collect() }
    }
    pub fn kron(&self, o: &Self) -> Self {
        let rows = self.rows * o.rows;
        let cols = self.cols * o.cols;
        let z = self.a[0].zero_like();
        let mut out = Matrix::zeros(rows, cols, &z);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let y = o.get(k, l);
                        if !y.is_zero() {
                            out.set(i * o.rows + k, j * o.cols + l, x.mul(y));
                        }
                    }
                }
            }
        }
        out
    }
    pub fn transpose(&self) -> Self {
        let mut a = Vec::with_capacity(self.a.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                a.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, a }
    }
    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }
}

pub fn q_is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn q_abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), &[-1, 1]);
        assert_eq!(cyclotomic_poly(4), &[1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), &[1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), &[1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_order() {
        for m in [1u32, 2, 3, 4, 6, 8] {
            let z = Cyclo::zeta_pow(m, 1);
            let mut p = Cyclo::one(m);
            for _ in 0..m {
                p = p.mul(&z);
            }
            assert_eq!(p, Cyclo::one(m));
            assert_eq!(z.mul(&z.conj()), Cyclo::one(m));
        }
    }

    #[test]
    fn laurent_mul() {
        let a = CycloLaurent::monomial(Cyclo::one(6), 1, 2);
        let b = CycloLaurent::monomial(Cyclo::one(6), -1, -2);
        assert_eq!(a.mul(&b), CycloLaurent::constant(Cyclo::one(6)));
    }
}
