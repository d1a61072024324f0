use cyclotangle::associator::solve_pair;
use cyclotangle::checks::{move_trials, trial_summary, MOVE_SEEDS};
use cyclotangle::diagram::DiagramSeries;
use cyclotangle::invariant::{compare, Structure};
use cyclotangle::quantum::{eval_link, QuantumData};
use cyclotangle::quotient::Quotient;
use cyclotangle::skeleton::Sign;
use cyclotangle::tangle::{applicable_moves, apply_move, parse_tangle_word, resolve_singular, Orient, Slice, TangleWord};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXAMPLE_KNOT: &str = include_str!("../data/example_knot.bt");

fn sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Random valid word of `len` slices; singular slices only when `singular`.
fn random_word(seed: u64, pole: bool, source: Vec<Sign>, len: usize, singular: bool) -> TangleWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slices = Vec::new();
    let mut w = source.clone();
    while slices.len() < len {
        let s = match rng.gen_range(0..6) {
            0 | 1 if w.len() >= 2 => {
                let pos = rng.gen_range(1..w.len());
                if singular && rng.gen_bool(0.3) {
                    Slice::SingCross { pos }
                } else {
                    Slice::Cross { pos, sign: sign(&mut rng) }
                }
            }
            2 if w.len() < 5 => Slice::Cup { pos: rng.gen_range(1..=w.len() + 1), orient: if rng.gen_bool(0.5) { Orient::Lr } else { Orient::Rl } },
            3 => {
                let caps: Vec<usize> = (1..w.len()).filter(|&p| w[p - 1] != w[p]).collect();
                if caps.is_empty() {
                    continue;
                }
                Slice::Cap { pos: caps[rng.gen_range(0..caps.len())] }
            }
            4 | 5 if pole && !w.is_empty() => {
                if singular && rng.gen_bool(0.3) {
                    Slice::SingPole
                } else {
                    Slice::Pole { sign: sign(&mut rng) }
                }
            }
            _ => continue,
        };
        slices.push(s);
        w = TangleWord::new(pole, source.clone(), slices.clone()).expect("generated slices stack").target();
    }
    TangleWord::new(pole, source, slices).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialization_round_trips(seed in any::<u64>(), pole in any::<bool>(), len in 0usize..12) {
        let t = random_word(seed, pole, vec![Sign::Plus, Sign::Minus], len, true);
        let back = parse_tangle_word(&t.serialize()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn moves_preserve_skeleton_and_quantum_value(seed in any::<u64>()) {
        // closed words: the quantum value is an isotopy invariant, so it checks the moves independently of G
        let qd = QuantumData::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let closed: Vec<&str> = MOVE_SEEDS.iter().copied().filter(|w| parse_tangle_word(w).unwrap().is_closed()).collect();
        let mut t = parse_tangle_word(closed[rng.gen_range(0..closed.len())]).unwrap();
        for _ in 0..4 {
            let moves = applicable_moves(&t);
            let (mv, site) = moves[rng.gen_range(0..moves.len())];
            let t2 = apply_move(&t, &mv, site).unwrap();
            prop_assert_eq!(t.skeleton(), t2.skeleton());
            prop_assert_eq!(eval_link(&t, &qd).unwrap(), eval_link(&t2, &qd).unwrap(), "{} {:?}", t.serialize(), mv);
            t = t2;
        }
    }
}

#[test]
fn example_knot_transcription() {
    let t = parse_tangle_word(EXAMPLE_KNOT).unwrap();
    assert!(t.is_closed() && t.pole);
    // winding -1 around the pole; the blackboard writhe of this diagram is -3
    assert_eq!(t.winding_and_twist().unwrap(), vec![(-1, -3)]);
}

#[test]
fn singular_evaluation_matches_skein_sum() {
    let n = 2;
    let sd = Structure::new(solve_pair(n, 2).unwrap(), 2).unwrap();
    for seed in 0..12 {
        let t = random_word(seed, true, vec![Sign::Plus, Sign::Plus], 6, true);
        let comb = resolve_singular(&t, n as i64).unwrap();
        let mut sum = DiagramSeries::zero(std::sync::Arc::new(t.skeleton()), n, 2);
        for (w, c) in comb.iter() {
            sum = sum.add(&sd.evaluate(w).unwrap().scale(c));
        }
        assert_eq!(sd.evaluate_singular(&t).unwrap(), sum, "{}", t.serialize());
    }
}

#[test]
fn seeded_move_trials() {
    let sd = Structure::new(solve_pair(2, 2).unwrap(), 2).unwrap();
    let trials = move_trials(&sd, 120, 7, 12).unwrap();
    assert_eq!(trials.len(), 120);
    let bad: Vec<_> = trials.iter().filter(|t| t.first_failure.is_some()).collect();
    assert!(bad.is_empty(), "{bad:?}");
    let kinds = trial_summary(&trials);
    for k in ["R2Insert", "R3", "FarCommute", "ZigzagInsert", "PitchforkExpand", "PoleCancelInsert", "Reflection", "DualityInsert"] {
        assert!(kinds.contains_key(k), "{k} not exercised: {kinds:?}");
    }
    // same seed, same walk
    let again = move_trials(&sd, 120, 7, 12).unwrap();
    assert!(trials.iter().zip(&again).all(|(a, b)| a.word == b.word && a.mv == b.mv && a.site == b.site));
}

#[test]
fn crossing_change_is_detected() {
    let sd = Structure::new(solve_pair(1, 2).unwrap(), 2).unwrap();
    let a = sd.evaluate_text("obj ++ ; X 1 + ;").unwrap();
    let b = sd.evaluate_text("obj ++ ; X 1 - ;").unwrap();
    let mut q = Quotient::new(a.skel.clone(), 1);
    assert_eq!(compare(&mut q, &a, &b).unwrap().first_failure, Some(1));
}

#[test]
fn reflection_word_rewrites() {
    let t = parse_tangle_word("obj *++ ; T + ; X 1 + ; T + ; X 1 + ;").unwrap();
    let moves = applicable_moves(&t);
    assert!(moves.iter().any(|(m, _)| format!("{m:?}") == "Reflection"));
    // a non-alternating block of four slices is not a reflection site
    let u = parse_tangle_word("obj *++ ; T + ; T + ; T + ; X 1 + ;").unwrap();
    assert!(!applicable_moves(&u).iter().any(|(m, _)| format!("{m:?}") == "Reflection"));
}
