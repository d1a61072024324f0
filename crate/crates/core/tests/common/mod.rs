//! Independent oracles shared by the integration tests.

use std::collections::{BTreeMap, BTreeSet};

use cyclotangle::ring::{qi, Q};
use num_traits::Zero;

/// Chord diagram on an oriented circle: chord index at each of 2k points,
/// normalized under rotation and relabelling.
type Gauss = Vec<usize>;

fn normalize(g: &[usize]) -> Gauss {
    let n = g.len();
    (0..n.max(1))
        .map(|r| {
            let mut rel = BTreeMap::new();
            (0..n)
                .map(|i| {
                    let c = g[(i + r) % n];
                    let k = rel.len();
                    *rel.entry(c).or_insert(k)
                })
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

fn matchings(k: usize) -> BTreeSet<Gauss> {
    fn rec(g: &mut Vec<Option<usize>>, next: usize, out: &mut BTreeSet<Gauss>) {
        let Some(i) = g.iter().position(|x| x.is_none()) else {
            out.insert(normalize(&g.iter().map(|x| x.unwrap()).collect::<Vec<_>>()));
            return;
        };
        g[i] = Some(next);
        for j in i + 1..g.len() {
            if g[j].is_none() {
                g[j] = Some(next);
                rec(g, next + 1, out);
                g[j] = None;
            }
        }
        g[i] = None;
    }
    let mut out = BTreeSet::new();
    rec(&mut vec![None; 2 * k], 0, &mut out);
    out
}

/// Insert a point of chord `c` before index `at` of the cyclic sequence.
fn insert(g: &[usize], at: usize, c: usize) -> Vec<usize> {
    let mut v = g.to_vec();
    v.insert(at, c);
    v
}

fn rank(rows: &[BTreeMap<Gauss, Q>], cols: &BTreeMap<Gauss, usize>) -> usize {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![Q::zero(); cols.len()];
            for (g, c) in r {
                v[cols[g]] += c;
            }
            v
        })
        .collect();
    let mut rk = 0;
    for col in 0..cols.len() {
        let Some(p) = (rk..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rk, p);
        for i in 0..m.len() {
            if i != rk && !m[i][col].is_zero() {
                let f = m[i][col].clone() / m[rk][col].clone();
                for j in 0..cols.len() {
                    let x = m[rk][j].clone() * &f;
                    m[i][j] -= x;
                }
            }
        }
        rk += 1;
    }
    rk
}

/// Framed chord diagrams on a circle modulo 4T, by brute force.
pub fn framed_circle_dim(k: usize) -> usize {
    let diagrams = matchings(k);
    let cols: BTreeMap<Gauss, usize> = diagrams.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    let mut rows = Vec::new();
    if k >= 2 {
        for base in matchings(k - 1) {
            let len = base.len();
            let new = k - 1;
            // fixed end of the new chord in every gap, moving end around every chord c
            for fixed in 0..len {
                let with_fixed = insert(&base, fixed, new);
                for c in 0..k - 1 {
                    let mut row: BTreeMap<Gauss, Q> = BTreeMap::new();
                    for (e, _) in with_fixed.iter().enumerate().filter(|(_, &x)| x == c) {
                        for (pos, sign) in [(e + 1, 1), (e, -1)] {
                            let g = normalize(&insert(&with_fixed, pos, new));
                            *row.entry(g).or_insert_with(Q::zero) += qi(sign);
                        }
                    }
                    row.retain(|_, v| !v.is_zero());
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    diagrams.len() - rank(&rows, &cols)
}

/// Degree-two dimension of U(t_3): Sym² of the three generators plus the one
/// independent bracket.
pub fn a3_degree_two() -> usize {
    3 * 4 / 2 + 1
}
