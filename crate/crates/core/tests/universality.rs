use cyclotangle::associator::solve_pair;
use cyclotangle::checks::{named_skeleton, universality};
use cyclotangle::diagram::{canonical, DiagramSeries};
use cyclotangle::invariant::{compare, Structure};
use cyclotangle::quotient::{enumerate, Quotient};
use cyclotangle::ring::Q;
use cyclotangle::universal::{realize, symbol};
use num_traits::One;

#[test]
fn symbol_of_realization_is_the_diagram() {
    for name in ["*+", "*-", "*+-", "*++", "++", "knot", "unknot"] {
        let sk = named_skeleton(name).unwrap();
        for n in 1..=3u8 {
            for k in 0..=2 {
                for d in enumerate(&sk, n, k) {
                    let labelled = d.comps.iter().any(|c| c.labels.iter().any(|&l| l != 0));
                    if !sk.pole && labelled {
                        assert!(realize(&sk, n, &d).is_err());
                        continue;
                    }
                    let t = realize(&sk, n, &d).unwrap();
                    assert_eq!(t.skeleton(), *sk, "{name}");
                    let s = symbol(&t, n).unwrap();
                    assert_eq!(s.terms.len(), 1, "{name} {}", d.to_text());
                    assert_eq!(s.terms.get(&canonical(&sk, n, &d)), Some(&Q::one()), "{name} {}", d.to_text());
                }
            }
        }
    }
}

#[test]
fn leading_terms_up_to_degree_two() {
    for n in 1..=2u8 {
        let pair = solve_pair(n, 2).unwrap();
        for k in 0..=2 {
            let sd = Structure::new(pair.clone(), k).unwrap();
            for name in ["*+", "*++", "knot"] {
                let (count, bad) = universality(&sd, &named_skeleton(name).unwrap(), k).unwrap();
                assert!(count > 0);
                assert!(bad.is_empty(), "N={n} {name} degree {k}: {bad:?}");
            }
        }
    }
}

#[test]
fn leading_terms_for_n3() {
    let pair = solve_pair(3, 2).unwrap();
    for (name, top) in [("*+", 2), ("knot", 2), ("*++", 1), ("*-", 2)] {
        for k in 0..=top {
            let sd = Structure::new(pair.clone(), k).unwrap();
            let (_, bad) = universality(&sd, &named_skeleton(name).unwrap(), k).unwrap();
            assert!(bad.is_empty(), "{name} degree {k}: {bad:?}");
        }
    }
}

#[test]
fn leading_term_distinguishes_diagrams() {
    // G of the realization of one basis diagram differs from another basis diagram
    let sk = named_skeleton("*+").unwrap();
    let n = 2;
    let sd = Structure::new(solve_pair(n, 2).unwrap(), 2).unwrap();
    let mut q = Quotient::new(sk.clone(), n);
    let basis: Vec<_> = q.degree(2).unwrap().basis().into_iter().cloned().collect();
    let t = realize(&sk, n, &basis[0]).unwrap();
    let g = sd.evaluate_singular(&t).unwrap().degree_part(2);
    let same = DiagramSeries::single(sk.clone(), n, 2, basis[0].clone(), Q::one());
    let other = DiagramSeries::single(sk.clone(), n, 2, basis[1].clone(), Q::one());
    assert_eq!(compare(&mut q, &g, &same).unwrap().first_failure, None);
    assert_eq!(compare(&mut q, &g, &other).unwrap().first_failure, Some(2));
}
