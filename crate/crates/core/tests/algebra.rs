use cyclotangle::associator::project_free;
use cyclotangle::free::{group_like_failure, lyndon_bracket, lyndon_words, non_lie_degree, FreeSeries};
use cyclotangle::ring::{q, qi, Cyclo, CycloLaurent, Ring};
use proptest::prelude::*;

const CAP: usize = 4;

fn cyclo(m: u32, coeffs: &[i64]) -> Cyclo {
    let mut x = Cyclo::zero(m);
    for (k, &c) in coeffs.iter().enumerate() {
        x = x.add(&Cyclo::zeta_pow(m, k as i64).scale(&qi(c)));
    }
    x
}

fn lie_element(letters: u8, coeffs: &[i64]) -> FreeSeries {
    let mut x = FreeSeries::zero(letters, CAP);
    let basis: Vec<_> = (1..=CAP).flat_map(|k| lyndon_words(letters, k)).collect();
    for (w, &c) in basis.iter().zip(coeffs) {
        x = x.add(&lyndon_bracket(letters, CAP, w).scale(&q(c, 3)));
    }
    x
}

fn series(letters: u8, terms: &[(Vec<u8>, i64)], constant: i64) -> FreeSeries {
    let mut s = FreeSeries::one(letters, CAP).scale(&qi(constant));
    for (w, c) in terms {
        let w: Vec<u8> = w.iter().map(|l| l % letters).collect();
        s.add_term(w, qi(*c));
    }
    s
}

fn word_terms() -> impl Strategy<Value = Vec<(Vec<u8>, i64)>> {
    prop::collection::vec((prop::collection::vec(0u8..4, 1..=CAP), -3i64..=3), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclotomic_field_axioms(m in prop::sample::select(vec![1u32, 2, 3, 4, 6, 8]),
                               a in prop::collection::vec(-4i64..=4, 4),
                               b in prop::collection::vec(-4i64..=4, 4),
                               c in prop::collection::vec(-4i64..=4, 4)) {
        let (a, b, c) = (cyclo(m, &a), cyclo(m, &b), cyclo(m, &c));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn zeta_has_exact_order(m in 1u32..=12, k in -20i64..=20) {
        prop_assert_eq!(Cyclo::zeta_pow(m, k + m as i64), Cyclo::zeta_pow(m, k));
        prop_assert_eq!(Cyclo::zeta_pow(m, k).mul(&Cyclo::zeta_pow(m, -k)), Cyclo::one(m));
    }

    #[test]
    fn mirror_is_an_involutive_homomorphism(xs in prop::collection::vec((-6i64..=6, -2i64..=2, 0i64..6, -3i64..=3), 1..5),
                                            ys in prop::collection::vec((-6i64..=6, -2i64..=2, 0i64..6, -3i64..=3), 1..5)) {
        let build = |v: &[(i64, i64, i64, i64)]| {
            v.iter().fold(CycloLaurent::zero(6), |acc, &(a, b, z, c)| {
                acc.add(&CycloLaurent::monomial(Cyclo::zeta_pow(6, z).scale(&qi(c)), a, b))
            })
        };
        let (x, y) = (build(&xs), build(&ys));
        prop_assert_eq!(x.mirror().mirror(), x.clone());
        prop_assert_eq!(x.mul(&y).mirror(), x.mirror().mul(&y.mirror()));
    }

    #[test]
    fn exp_and_log_are_inverse_on_lie_series(coeffs in prop::collection::vec(-3i64..=3, 1..12)) {
        let x = lie_element(3, &coeffs);
        let g = x.exp().unwrap();
        prop_assert_eq!(g.log().unwrap(), x);
        prop_assert!(group_like_failure(&g).is_none());
    }

    #[test]
    fn products_of_group_likes_are_group_like(a in prop::collection::vec(-3i64..=3, 1..8),
                                              b in prop::collection::vec(-3i64..=3, 1..8)) {
        let g = lie_element(2, &a).exp().unwrap();
        let h = lie_element(2, &b).exp().unwrap();
        prop_assert!(group_like_failure(&g.mul(&h)).is_none());
        prop_assert!(group_like_failure(&g.inverse().unwrap()).is_none());
        prop_assert_eq!(g.mul(&g.inverse().unwrap()), FreeSeries::one(2, CAP));
    }

    #[test]
    fn non_lie_series_are_detected(w in prop::collection::vec(0u8..3, 2..=CAP)) {
        // a single word of length ≥ 2 is never a Lie element
        let x = series(3, &[(w.clone(), 1)], 0);
        prop_assert_eq!(non_lie_degree(&x), Some(w.len()));
    }

    #[test]
    fn substitution_is_multiplicative(f in word_terms(), g in word_terms(), imgs in prop::collection::vec(word_terms(), 4)) {
        let f = series(4, &f, 1);
        let g = series(4, &g, 2);
        let images: Vec<FreeSeries> = imgs.iter().map(|t| series(3, t, 0)).collect();
        let lhs = f.mul(&g).substitute_free(&images).unwrap();
        let rhs = f.substitute_free(&images).unwrap().mul(&g.substitute_free(&images).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn projections_compose(coeffs in prop::collection::vec(-3i64..=3, 1..12)) {
        // alphabet {a, b(0..3)} for N = 4
        let x = lie_element(5, &coeffs).exp().unwrap();
        let via2 = project_free(&project_free(&x, 4, 2).unwrap(), 2, 1).unwrap();
        prop_assert_eq!(via2, project_free(&x, 4, 1).unwrap());
    }

    #[test]
    fn free_series_text_round_trips(t in word_terms(), c in -3i64..=3) {
        let s = series(4, &t, c);
        prop_assert_eq!(FreeSeries::from_text(&s.to_text()).unwrap(), s);
    }
}

#[test]
fn exp_rejects_constant_term() {
    assert!(FreeSeries::one(2, 3).exp().is_err());
    assert!(FreeSeries::zero(2, 3).log().is_err());
}
