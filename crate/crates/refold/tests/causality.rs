//! Causality checks over fixtures, generated components and networks.

mod common;

use common::parse;
use refold::causality::{
    check_strong_causality, check_weak_causality, classification_table, classify_component,
};
use refold::semantics::{Budget, Machine};
use refold_oracle::{fixtures, gen};

const BUDGET: Budget = Budget {
    horizon_cap: 6,
    enumeration_cap: 1_000_000,
};

#[test]
fn lamp_is_strongly_causal() {
    let lamp = fixtures::lamp();
    let v = check_strong_causality(&Machine::Component(&lamp), 3, &BUDGET).unwrap();
    assert!(v.holds);
    assert!(v.witness.is_none());
}

#[test]
fn echo_breaks_strong_causality_at_the_first_tick() {
    let lamp_echo = fixtures::lamp_echo();
    let v = check_strong_causality(&Machine::Component(&lamp_echo), 3, &BUDGET).unwrap();
    assert!(!v.holds);
    let w = v.witness.unwrap();
    assert_eq!(w.tick, 0);
    // Least violating pair: press (first label) against idle.
    assert_eq!(w.left.dump(), "t=0 btn=press\n");
    assert_eq!(w.right.dump(), "t=0 btn=idle\n");
}

#[test]
fn cruise_throttle_is_input_dependent_while_holding() {
    let cruise = fixtures::cruise();
    let v = check_strong_causality(&Machine::Component(&cruise), 3, &BUDGET).unwrap();
    assert!(!v.holds, "throttle reads the fast flag through the boost local");
    assert!(v.witness.unwrap().tick >= 1, "boost only matters once holding");
}

#[test]
fn components_that_never_read_inputs_are_strongly_causal() {
    let c = parse(
        "component K\nin i : {u, v}\nout o : {a, b}\nstate s : {a, b} init a\n\ngar\nf: true ==> o = s\n",
    );
    let v = check_strong_causality(&Machine::Component(&c), 4, &BUDGET).unwrap();
    assert!(v.holds);
}

#[test]
fn moore_only_classification_implies_strong_causality_on_fixtures() {
    let mut premise_applied = 0;
    for comp in fixtures::corpus().into_iter().chain(fixtures::requirement_corpus()) {
        let Ok(report) = classify_component(&comp) else {
            continue;
        };
        if !report.mealy.is_empty() {
            continue;
        }
        premise_applied += 1;
        let v = check_strong_causality(&Machine::Component(&comp), 3, &BUDGET).unwrap();
        assert!(v.holds, "{}: Moore-only but not strongly causal", comp.name);
    }
    assert!(premise_applied >= 2, "the premise should apply somewhere");
}

#[test]
fn weak_causality_holds_on_the_fixture_corpus() {
    for comp in fixtures::corpus() {
        let v = check_weak_causality(&Machine::Component(&comp), 3, &BUDGET).unwrap();
        assert!(v.holds, "{}", comp.name);
    }
}

#[test]
fn weak_causality_holds_on_generated_components() {
    for seed in 200..240u64 {
        let comp = gen::component_from_seed(seed);
        match check_weak_causality(&Machine::Component(&comp), 2, &BUDGET) {
            Ok(v) => assert!(v.holds, "seed {seed}"),
            Err(e) => assert!(
                e.is_inconsistent() || e.is_budget(),
                "seed {seed}: unexpected error {e}"
            ),
        }
    }
}

#[test]
fn decomposed_networks_keep_weak_causality() {
    let lamp = fixtures::lamp();
    let split = refold::decompose::split_mealy_moore(&lamp).unwrap();
    let v = check_weak_causality(&Machine::Network(&split.network), 3, &BUDGET).unwrap();
    assert!(v.holds);
}

#[test]
fn lamp_classification_table_is_stable() {
    let table = classification_table(&fixtures::lamp()).unwrap();
    let expected = "\
label  class       reads     targets
m1     moore       mode      lamp
m2     moore       mode      lamp
t1     transition  btn,mode  mode'
t2     transition  btn,mode  mode'
t3     transition  btn,mode  mode'
";
    assert_eq!(table, expected);
}
