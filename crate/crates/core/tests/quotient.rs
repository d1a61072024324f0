mod common;

use std::collections::{BTreeMap, BTreeSet};

use cyclotangle::checks::{named_skeleton, relations_vanish};
use cyclotangle::diagram::{canonical, DiagramSeries, Strands};
use cyclotangle::horizontal::Horizontal;
use cyclotangle::linalg::{Echelon, SparseVec};
use cyclotangle::quotient::{enumerate, relations, Quotient};
use cyclotangle::ring::Q;
use cyclotangle::skeleton::Sign;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn framed_circle_matches_brute_force() {
    let sk = named_skeleton("unknot").unwrap();
    let mut q = Quotient::new(sk, 1);
    let oracle: Vec<usize> = (0..=4).map(common::framed_circle_dim).collect();
    assert_eq!(oracle, vec![1, 1, 2, 3, 6]);
    for k in 0..=4 {
        assert_eq!(q.total_dim(k).unwrap(), oracle[k], "degree {k}");
    }
}

#[test]
fn horizontal_a3_degree_two() {
    assert_eq!(Horizontal::new(3, false, 1).dim(2), common::a3_degree_two());
}

#[test]
fn rank_is_independent_of_relation_order() {
    for (name, n, k) in [("*+", 2u8, 2usize), ("*++", 1, 2), ("knot", 3, 2)] {
        let sk = named_skeleton(name).unwrap();
        let cols = enumerate(&sk, n, k);
        let index: BTreeMap<_, _> = cols.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
        let mut rows: Vec<SparseVec> = relations(&sk, n, k)
            .into_iter()
            .map(|r| {
                let mut v = SparseVec::new();
                for (d, c) in r {
                    *v.entry(index[&canonical(&sk, n, &d)]).or_insert_with(Q::zero) += c;
                }
                v.retain(|_, c| !c.is_zero());
                v
            })
            .collect();
        let mut ranks = BTreeSet::new();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..3 {
            rows.shuffle(&mut rng);
            let mut e = Echelon::new();
            for r in rows.iter().filter(|r| !r.is_empty()) {
                e.insert(r);
            }
            ranks.insert(e.rank());
        }
        assert_eq!(ranks.len(), 1, "{name}");
        let mut q = Quotient::new(sk, n);
        assert_eq!(cols.len() - ranks.first().unwrap(), q.total_dim(k).unwrap(), "{name}");
    }
}

#[test]
fn relation_instances_vanish() {
    for (name, n, k) in [("*+", 2u8, 2usize), ("*+-", 2, 2), ("*++", 2, 2), ("knot", 2, 3), ("++", 1, 3)] {
        let sk = named_skeleton(name).unwrap();
        let (count, bad) = relations_vanish(&sk, n, k).unwrap();
        assert!(count > 0, "{name}");
        assert_eq!(bad, 0, "{name}");
    }
}

#[test]
fn pole_chord_reduces_to_a_unit_coordinate() {
    let st = Strands::new(true, &[Sign::Plus]);
    let s = DiagramSeries::single(st.skel.clone(), 2, 1, st.chord(0, 1, 0, 2), Q::one());
    let mut q = Quotient::new(st.skel.clone(), 2);
    let c = q.reduce(&s).unwrap();
    assert_eq!(c.len(), 1);
    let v = c.values().next().unwrap();
    assert_eq!(v.len(), 1);
    assert_eq!(*v.values().next().unwrap(), Q::one());
}
