//! Engine semantics against the brute-force oracle and the frozen golden
//! values.

mod common;

use std::collections::BTreeSet;

use common::parse;
use refold::error::Error;
use refold::model::Value;
use refold::semantics::{
    behaviors, check_component_deterministic_total, compose, network_behaviors, step, Assignment,
    Budget, Trace, WitnessKind,
};
use refold_oracle::golden::{behavior_table, step_table};
use refold_oracle::{
    fixtures, gen, oracle_behaviors, oracle_input_frames, oracle_input_traces, oracle_step,
    OracleNetwork,
};

fn sym(ord: u16, label: &str) -> Value {
    Value::sym(ord, label)
}

fn lamp_inputs(seq: &[&str]) -> Trace {
    let frames = seq
        .iter()
        .map(|b| {
            Assignment::from_pairs([(
                "btn",
                if *b == "press" { sym(0, "press") } else { sym(1, "idle") },
            )])
        })
        .collect();
    Trace::from_frames(frames).unwrap()
}

// --- golden files -----------------------------------------------------------

#[test]
fn golden_step_tables_have_not_drifted() {
    let cases = [
        ("lamp_step.txt", fixtures::lamp()),
        ("lamp_echo_step.txt", fixtures::lamp_echo()),
        ("cruise_step.txt", fixtures::cruise()),
        ("adder_step.txt", fixtures::adder()),
    ];
    for (file, comp) in cases {
        let committed = std::fs::read_to_string(format!(
            "{}/tests/golden/{file}",
            env!("CARGO_MANIFEST_DIR")
        ))
        .unwrap();
        assert_eq!(step_table(&comp), committed, "{file} drifted; rerun the golden bin");
    }
}

#[test]
fn golden_behavior_tables_have_not_drifted() {
    let cases = [
        ("lamp_behaviors_h2.txt", fixtures::lamp(), 2),
        ("adder_behaviors_h3.txt", fixtures::adder(), 3),
        ("cruise_behaviors_h2.txt", fixtures::cruise(), 2),
    ];
    for (file, comp, h) in cases {
        let committed = std::fs::read_to_string(format!(
            "{}/tests/golden/{file}",
            env!("CARGO_MANIFEST_DIR")
        ))
        .unwrap();
        assert_eq!(behavior_table(&comp, h), committed, "{file} drifted");
    }
}

// --- step -------------------------------------------------------------------

#[test]
fn lamp_step_off_press_frozen() {
    let lamp = fixtures::lamp();
    let state = Assignment::from_pairs([("mode", sym(0, "Off"))]);
    let input = Assignment::from_pairs([("btn", sym(0, "press"))]);
    let outcomes = step(&lamp, &state, &input);
    assert_eq!(outcomes.len(), 1);
    let o = outcomes.first().unwrap();
    assert!(o.locals.is_empty());
    assert_eq!(o.outputs, Assignment::from_pairs([("lamp", sym(0, "off"))]));
    assert_eq!(o.next_state, Assignment::from_pairs([("mode", sym(1, "On"))]));
}

#[test]
fn lamp_step_on_idle_frozen() {
    let lamp = fixtures::lamp();
    let state = Assignment::from_pairs([("mode", sym(1, "On"))]);
    let input = Assignment::from_pairs([("btn", sym(1, "idle"))]);
    let outcomes = step(&lamp, &state, &input);
    assert_eq!(outcomes.len(), 1);
    let o = outcomes.first().unwrap();
    assert_eq!(o.outputs, Assignment::from_pairs([("lamp", sym(1, "on"))]));
    assert_eq!(o.next_state, Assignment::from_pairs([("mode", sym(1, "On"))]));
}

#[test]
fn contradictory_formulas_yield_empty_step() {
    let c = parse(
        "component Broken\nout x : int 0..1\n\ngar\nc1: true ==> x = 0\nc2: true ==> x = 1\n",
    );
    assert!(step(&c, &Assignment::new(), &Assignment::new()).is_empty());
}

#[test]
fn engine_step_agrees_with_oracle_on_all_fixture_configurations() {
    for comp in fixtures::corpus() {
        for state in refold_oracle::golden::state_product(&comp) {
            for input in oracle_input_frames(&comp) {
                let engine = step(&comp, &state, &input);
                let oracle = oracle_step(&comp, &state, &input);
                assert_eq!(engine, oracle, "{}: state {state} input {input}", comp.name);
            }
        }
    }
}

// --- behaviors --------------------------------------------------------------

#[test]
fn lamp_behaviors_press_idle_frozen() {
    let lamp = fixtures::lamp();
    let set = behaviors(&lamp, &lamp_inputs(&["press", "idle"]), &Budget::default()).unwrap();
    let expected: BTreeSet<Trace> = [Trace::from_frames(vec![
        Assignment::from_pairs([("lamp", sym(0, "off"))]),
        Assignment::from_pairs([("lamp", sym(1, "on"))]),
    ])
    .unwrap()]
    .into();
    assert_eq!(set, expected);
}

#[test]
fn lamp_behaviors_idle_idle_frozen() {
    let lamp = fixtures::lamp();
    let set = behaviors(&lamp, &lamp_inputs(&["idle", "idle"]), &Budget::default()).unwrap();
    let expected: BTreeSet<Trace> = [Trace::from_frames(vec![
        Assignment::from_pairs([("lamp", sym(0, "off"))]),
        Assignment::from_pairs([("lamp", sym(0, "off"))]),
    ])
    .unwrap()]
    .into();
    assert_eq!(set, expected);
}

#[test]
fn unconstrained_output_ranges_over_whole_domain() {
    let c = parse("component Free\nout o : {a, b}\n\ngar\n");
    let input = Trace::from_frames(vec![Assignment::new()]).unwrap();
    let set = behaviors(&c, &input, &Budget::default()).unwrap();
    assert_eq!(set.len(), 2);
    let dumps: Vec<String> = set.iter().map(Trace::dump).collect();
    assert_eq!(dumps, vec!["t=0 o=a\n", "t=0 o=b\n"]);
}

#[test]
fn inconsistent_spec_is_an_error_not_an_empty_set() {
    let c = parse(
        "component Broken\nout x : int 0..1\n\ngar\nc1: true ==> x = 0\nc2: true ==> x = 1\n",
    );
    let input = Trace::from_frames(vec![Assignment::new()]).unwrap();
    let err = behaviors(&c, &input, &Budget::default()).unwrap_err();
    assert!(matches!(err, Error::Inconsistent { .. }), "{err}");
}

#[test]
fn engine_behaviors_agree_with_oracle_on_random_components() {
    for seed in 0..60u64 {
        let comp = gen::component_from_seed(seed);
        for input in oracle_input_traces(&comp, 2) {
            let engine = behaviors(&comp, &input, &Budget::default());
            let oracle = oracle_behaviors(&comp, &input);
            match (engine, oracle) {
                (Ok(a), Ok(b)) => assert_eq!(a, b, "seed {seed}, input {}", input.dump()),
                (Err(Error::Inconsistent { .. }), Err(_)) => {}
                (e, o) => panic!(
                    "seed {seed}: engine {:?} disagrees with oracle {:?}",
                    e.map(|s| s.len()),
                    o.map(|s| s.len())
                ),
            }
        }
    }
}

#[test]
fn horizon_restriction_shrinks_behaviors() {
    // Behaviors at H restricted to the first H-1 ticks are a subset of
    // behaviors at H-1.
    let budget = Budget::default();
    for comp in fixtures::corpus() {
        for input in oracle_input_traces(&comp, 3) {
            let full = behaviors(&comp, &input, &budget).unwrap();
            let shorter = behaviors(&comp, &input.truncated(2), &budget).unwrap();
            for t in &full {
                assert!(
                    shorter.contains(&t.truncated(2)),
                    "{}: prefix of {} missing at H=2",
                    comp.name,
                    t.dump()
                );
            }
        }
    }
}

// --- composition ------------------------------------------------------------

#[test]
fn output_clash_is_rejected() {
    let a = parse("component A\nout x : {u, v}\n\ngar\nf: true ==> x = u\n");
    let b = parse("component B\nout x : {u, v}\n\ngar\nf: true ==> x = v\n");
    match compose(vec![a, b], BTreeSet::new()) {
        Err(Error::OutputClash(ch)) => assert_eq!(ch, "x"),
        other => panic!("expected output clash, got {other:?}"),
    }
}

#[test]
fn zero_delay_self_loop_is_rejected() {
    use refold::model::{ChannelDecl, Component, Direction, ValueDomain};
    // An output wired to the equally named input of the same part. Such a
    // part cannot even be written in the DSL, so build it by hand.
    let dom = ValueDomain::Enumeration(vec!["u".into(), "v".into()]);
    let looped = Component {
        name: "SelfLoop".into(),
        channels: vec![
            ChannelDecl {
                name: "a".into(),
                direction: Direction::Input,
                domain: dom.clone(),
            },
            ChannelDecl {
                name: "a".into(),
                direction: Direction::Output,
                domain: dom,
            },
        ],
        vars: vec![],
        formulas: vec![],
        pure_requirement: false,
    };
    match compose(vec![looped], BTreeSet::new()) {
        Err(Error::Cycle(ch)) => assert_eq!(ch, "a"),
        other => panic!("expected cycle, got {other:?}"),
    }
}

#[test]
fn two_part_feedback_loop_is_rejected() {
    let p = parse("component P\nin back : {u, v}\nout fwd : {u, v}\n\ngar\nf: true ==> fwd = back\n");
    let q = parse("component Q\nin fwd : {u, v}\nout back : {u, v}\n\ngar\nf: true ==> back = fwd\n");
    match compose(vec![p, q], BTreeSet::new()) {
        Err(Error::Cycle(_)) => {}
        other => panic!("expected cycle, got {other:?}"),
    }
}

#[test]
fn wire_domain_mismatch_is_rejected() {
    let a = parse("component A\nout m : {u, v}\n\ngar\nf: true ==> m = u\n");
    let b = parse("component B\nin m : {u, v, w}\nout o : {u, v}\n\ngar\nf: true ==> o = u\n");
    match compose(vec![a, b], BTreeSet::new()) {
        Err(Error::DomainMismatch(ch)) => assert_eq!(ch, "m"),
        other => panic!("expected domain mismatch, got {other:?}"),
    }
}

#[test]
fn single_part_network_equals_component_behaviors() {
    let budget = Budget::default();
    for comp in fixtures::corpus() {
        let net = compose(vec![comp.clone()], BTreeSet::new()).unwrap();
        for input in oracle_input_traces(&comp, 2) {
            assert_eq!(
                network_behaviors(&net, &input, &budget).unwrap(),
                behaviors(&comp, &input, &budget).unwrap(),
            );
        }
    }
}

#[test]
fn pipeline_network_hides_internal_channel() {
    let a = parse("component Src\nin i : {u, v}\nout m : {u, v}\n\ngar\nf: true ==> m = i\n");
    let b = parse("component Snk\nin m : {u, v}\nout o : {u, v}\n\ngar\nf: true ==> o = m\n");
    let net = compose(vec![a, b], ["m".to_string()].into()).unwrap();
    let iface = net.external_interface();
    assert_eq!(iface.inputs.keys().collect::<Vec<_>>(), vec!["i"]);
    assert_eq!(iface.outputs.keys().collect::<Vec<_>>(), vec!["o"]);

    let input = Trace::from_frames(vec![Assignment::from_pairs([("i", sym(1, "v"))])]).unwrap();
    let set = network_behaviors(&net, &input, &Budget::default()).unwrap();
    assert_eq!(set.len(), 1);
    assert_eq!(set.first().unwrap().dump(), "t=0 o=v\n");
}

#[test]
fn network_behaviors_agree_with_oracle_network() {
    let a = parse("component Split\nin i : int 0..2\nout l : int 0..2\nout r : int 0..2\n\ngar\nf: true ==> l = i && r = i\n");
    let b = parse("component Join\nin l : int 0..2\nin r : int 0..2\nout s : int 0..4\n\ngar\nf: true ==> s = l + r\n");
    let hidden: BTreeSet<String> = ["l".to_string(), "r".to_string()].into();
    let net = compose(vec![a.clone(), b.clone()], hidden.clone()).unwrap();
    let oracle_net = OracleNetwork {
        parts: vec![a, b],
        hidden,
    };
    for n in 0..3i64 {
        let input =
            Trace::from_frames(vec![Assignment::from_pairs([("i", Value::Int(n))])]).unwrap();
        assert_eq!(
            network_behaviors(&net, &input, &Budget::default()).unwrap(),
            refold_oracle::oracle_network_behaviors(&oracle_net, &input).unwrap(),
        );
    }
}

// --- determinism/totality ----------------------------------------------------

#[test]
fn lamp_is_deterministic_and_total() {
    let report =
        check_component_deterministic_total(&fixtures::lamp(), 3, &Budget::default()).unwrap();
    assert!(report.deterministic && report.total);
    assert!(report.witness.is_none());
}

#[test]
fn unconstrained_spec_is_total_but_not_deterministic() {
    let c = parse("component Free\nout o : {a, b}\n\ngar\n");
    let report = check_component_deterministic_total(&c, 2, &Budget::default()).unwrap();
    assert!(report.total);
    assert!(!report.deterministic);
    assert_eq!(report.witness.unwrap().kind, WitnessKind::MultipleSuccessors);
}

#[test]
fn contradictory_spec_is_not_total_with_witness() {
    let c = parse(
        "component Broken\nout x : int 0..1\n\ngar\nc1: true ==> x = 0\nc2: true ==> x = 1\n",
    );
    let report = check_component_deterministic_total(&c, 2, &Budget::default()).unwrap();
    assert!(!report.total);
    let w = report.witness.unwrap();
    assert_eq!(w.kind, WitnessKind::NoSuccessor);
}
