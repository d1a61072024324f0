//! Exact sparse elimination over ℚ.
//!
//! Pivots are always the largest column of a row, so the columns that never
//! become pivots are the smallest ones; they index the quotient basis.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::ring::Q;

pub type SparseVec = BTreeMap<usize, Q>;

pub fn axpy(v: &mut SparseVec, c: &Q, w: &SparseVec) {
    for (k, x) in w {
        let e = v.entry(*k).or_insert_with(Q::zero);
        *e += c * x;
        if e.is_zero() {
            v.remove(k);
        }
    }
}

/// Row echelon form with pivot = maximal column, pivot coefficient 1.
#[derive(Clone, Default)]
pub struct Echelon {
    pivots: FxHashMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Reduce a vector to a combination of non-pivot columns.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut work = v.clone();
        let mut out = SparseVec::new();
        while let Some((&col, _)) = work.iter().next_back() {
            let c = work.remove(&col).unwrap();
            match self.pivots.get(&col) {
                Some(row) => {
                    let neg = -c;
                    for (k, x) in row {
                        if *k == col {
                            continue;
                        }
                        let e = work.entry(*k).or_insert_with(Q::zero);
                        *e += &neg * x;
                        if e.is_zero() {
                            work.remove(k);
                        }
                    }
                }
                None => {
                    out.insert(col, c);
                }
            }
        }
        out
    }

    /// Add a relation; returns true if it increased the rank.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&col, lead)) = r.iter().next_back() else {
            return false;
        };
        let inv = Q::one() / lead;
        let row: SparseVec = r.iter().map(|(k, x)| (*k, x * &inv)).collect();
        self.pivots.insert(col, row);
        true
    }
}

/// Solve `A x = b` for dense rational `A` (rows of length `ncols`).
/// Free variables are set to zero. Returns `None` if inconsistent.
pub fn solve_dense(rows: &[Vec<Q>], rhs: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pr = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i][ncols].clone();
    }
    Some(x)
}

/// Rank of a dense rational matrix.
pub fn rank_dense(rows: &[Vec<Q>]) -> usize {
    let mut e = Echelon::new();
    let mut rank = 0;
    for r in rows {
        let v: SparseVec = r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        if e.insert(&v) {
            rank += 1;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::qi;

    fn sv(e: &[(usize, i64)]) -> SparseVec {
        e.iter().map(|&(k, x)| (k, qi(x))).collect()
    }

    #[test]
    fn reduce_onto_small_columns() {
        let mut e = Echelon::new();
        assert!(e.insert(&sv(&[(0, 1), (2, -1)])));
        assert!(e.insert(&sv(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&sv(&[(0, 1), (1, 1)])));
        assert_eq!(e.reduce(&sv(&[(2, 1)])), sv(&[(0, 1)]));
        assert_eq!(e.reduce(&sv(&[(1, 1)])), sv(&[(0, -1)]));
    }

    #[test]
    fn dense_solve() {
        let a = vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        let x = solve_dense(&a, &[qi(3), qi(6)], 2).unwrap();
        assert_eq!(x, vec![qi(3), qi(0)]);
        assert!(solve_dense(&a, &[qi(3), qi(5)], 2).is_none());
    }
}
