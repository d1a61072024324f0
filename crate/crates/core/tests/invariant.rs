use cyclotangle::associator::{project_pair, solve_pair, AssociatorPair};
use cyclotangle::checks::{oracle, projection_agrees, MOVE_SEEDS};
use cyclotangle::diagram::DiagramSeries;
use cyclotangle::free::FreeSeries;
use cyclotangle::invariant::Structure;
use cyclotangle::quantum::{eval_link, hbar_expand, QuantumData};
use cyclotangle::tangle::parse_tangle_word;
use cyclotangle::weights::{sl2_datum, WeightSystem};

const EXAMPLE_KNOT: &str = include_str!("../data/example_knot.bt");
const POLE_UNKNOT: &str = "obj * ; U 1 lr ; T + ; A 1 ;";
const UNKNOT: &str = "obj ; U 1 lr ; A 1 ;";

#[test]
fn weight_system_image_matches_quantum_expansion() {
    let n = 2;
    let sd = Structure::new(solve_pair(n, 2).unwrap(), 2).unwrap();
    let ws = WeightSystem::new(sl2_datum(n).unwrap()).unwrap();
    let qd = QuantumData::new(n as usize).unwrap();
    for w in [EXAMPLE_KNOT, POLE_UNKNOT, UNKNOT, "obj * ; U 1 rl ; T - ; A 1 ;"] {
        let t = parse_tangle_word(w).unwrap();
        assert!(oracle(&sd, &ws, &qd, &t).unwrap().is_empty(), "{w}");
    }
}

#[test]
fn winding_factor_is_needed() {
    let n = 3;
    let sd = Structure::new(solve_pair(n, 1).unwrap(), 1).unwrap();
    let ws = WeightSystem::new(sl2_datum(n).unwrap()).unwrap();
    let qd = QuantumData::new(n as usize).unwrap();
    let t = parse_tangle_word(EXAMPLE_KNOT).unwrap();
    let spec = ws.specialize(&sd.evaluate(&t).unwrap(), 1).unwrap();
    let qv = hbar_expand(&eval_link(&t, &qd).unwrap(), 1);
    assert_ne!(*spec[0].get(0, 0), qv[0]);
}

#[test]
fn projection_to_n1() {
    let pair = solve_pair(2, 2).unwrap();
    let hi = Structure::new(pair.clone(), 2).unwrap();
    let lo = Structure::new(project_pair(&pair, 1).unwrap(), 2).unwrap();
    for w in MOVE_SEEDS.iter().take(9).copied().chain([EXAMPLE_KNOT]) {
        assert!(projection_agrees(&hi, &lo, &parse_tangle_word(w).unwrap()).unwrap(), "{w}");
    }
}

#[test]
fn projection_without_rescaling_is_detected() {
    let pair = solve_pair(2, 3).unwrap();
    let hi = Structure::new(pair.clone(), 3).unwrap();
    // a ↦ a instead of a ↦ 2a
    let imgs: Vec<FreeSeries> = [0, 1, 1].iter().map(|&l| FreeSeries::letter(2, 3, l)).collect();
    let mut psi = pair.psi.substitute(&imgs).unwrap();
    psi.letters = 2;
    let wrong = AssociatorPair { n: 1, psi, ..pair };
    let lo = Structure::new(wrong, 3).unwrap();
    assert!(!projection_agrees(&hi, &lo, &parse_tangle_word(POLE_UNKNOT).unwrap()).unwrap());
}

#[test]
fn cap_above_the_associator_is_rejected() {
    assert!(Structure::new(solve_pair(1, 2).unwrap(), 3).is_err());
}

#[test]
fn series_text_round_trips() {
    let sd = Structure::new(solve_pair(2, 2).unwrap(), 2).unwrap();
    for w in [EXAMPLE_KNOT, "obj *+- ; T - ; X 1 - ;", "obj *+ ; U 2 lr ; X 1 + ;"] {
        let g = sd.evaluate_text(w).unwrap();
        assert_eq!(DiagramSeries::from_text(&g.to_text()).unwrap(), g, "{w}");
    }
}
