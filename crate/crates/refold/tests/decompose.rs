//! The three schemas against the exhaustive equivalence obligation and the
//! independent oracle network evaluation.

mod common;

use std::collections::BTreeSet;

use common::parse;
use refold::causality::{check_strong_causality, classify_component};
use refold::decompose::{
    extract_locals, extract_outputs, split_mealy_moore, verify_decomposition, DecompositionResult,
};
use refold::error::Error;
use refold::model::Component;
use refold::refinement::compose_with_aux_hidden;
use refold::semantics::{
    check_deterministic_total, network_behaviors, Budget, Machine,
};
use refold_oracle::{fixtures, oracle_input_traces, oracle_network_behaviors, OracleNetwork};

fn selection(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn assert_equivalent(original: &Component, result: &DecompositionResult, h: usize) {
    let verdict = verify_decomposition(original, result, h, &Budget::default()).unwrap();
    assert!(
        verdict.equivalent,
        "{}: schema result differs, counterexample {:?}",
        original.name, verdict.counterexample
    );
}

/// The oracle recomputes the network semantics with its own scheduler; both
/// must reproduce the original's behaviors.
fn assert_oracle_agrees(original: &Component, result: &DecompositionResult, h: usize) {
    let oracle_net = OracleNetwork {
        parts: result.parts.clone(),
        hidden: result.aux_channels.clone(),
    };
    for input in oracle_input_traces(original, h) {
        let via_oracle = oracle_network_behaviors(&oracle_net, &input).unwrap();
        let via_engine = network_behaviors(&result.network, &input, &Budget::default()).unwrap();
        assert_eq!(via_oracle, via_engine, "input {}", input.dump());
        let reference = refold_oracle::oracle_behaviors(original, &input).unwrap();
        assert_eq!(via_oracle, reference, "input {}", input.dump());
    }
}

fn provenance_is_total(original: &Component, result: &DecompositionResult) {
    let labels: BTreeSet<&String> = result.provenance.keys().collect();
    let expected: BTreeSet<&String> = original.formulas.iter().map(|f| &f.label).collect();
    assert_eq!(labels, expected);
    let part_names: BTreeSet<&String> = result.parts.iter().map(|p| &p.name).collect();
    for dest in result.provenance.values() {
        assert!(part_names.contains(dest));
    }
}

// --- Mealy/Moore split -------------------------------------------------------

#[test]
fn split_lamp_shape_and_equivalence() {
    let lamp = fixtures::lamp();
    let result = split_mealy_moore(&lamp).unwrap();

    let mealy = &result.parts[0];
    let moore = &result.parts[1];
    assert_eq!(mealy.name, "Lamp_mealy");
    assert_eq!(moore.name, "Lamp_moore");
    // Three transitions plus the state image emit.
    assert_eq!(mealy.formulas.len(), 4);
    // The Moore part holds m1/m2 rewritten over the state image.
    let moore_labels: Vec<&str> = moore.formulas.iter().map(|f| f.label.as_str()).collect();
    assert_eq!(moore_labels, vec!["m1", "m2"]);
    assert!(moore.vars.is_empty());
    assert!(moore.channels.iter().any(|c| c.name == "__st_mode"));
    assert_eq!(result.provenance["m1"], "Lamp_moore");
    assert_eq!(result.provenance["t1"], "Lamp_mealy");

    assert_eq!(result.network.external_interface(), lamp.interface());
    provenance_is_total(&lamp, &result);
    assert_equivalent(&lamp, &result, 4);
    assert_oracle_agrees(&lamp, &result, 3);
}

#[test]
fn split_lamp_echo_keeps_mealy_outputs_in_place() {
    let lamp_echo = fixtures::lamp_echo();
    let result = split_mealy_moore(&lamp_echo).unwrap();
    assert_eq!(result.provenance["e1"], "LampEcho_mealy");
    assert_eq!(result.provenance["e2"], "LampEcho_mealy");
    assert_eq!(result.provenance["m1"], "LampEcho_moore");
    assert_eq!(result.provenance["m2"], "LampEcho_moore");
    provenance_is_total(&lamp_echo, &result);
    assert_equivalent(&lamp_echo, &result, 4);
    assert_oracle_agrees(&lamp_echo, &result, 3);
}

#[test]
fn split_cruise_moves_only_the_clean_moore_output() {
    let cruise = fixtures::cruise();
    let result = split_mealy_moore(&cruise).unwrap();
    // throttle is targeted by both a Mealy (th1, via the boost local) and a
    // Moore formula (th2), so it stays; active moves.
    assert_eq!(result.provenance["a1"], "Cruise_moore");
    assert_eq!(result.provenance["a2"], "Cruise_moore");
    assert_eq!(result.provenance["th1"], "Cruise_mealy");
    assert_eq!(result.provenance["th2"], "Cruise_mealy");
    assert_equivalent(&cruise, &result, 4);
    assert_oracle_agrees(&cruise, &result, 2);
}

#[test]
fn split_rejects_all_mealy_components() {
    let echo = parse(
        "component Echo\nin btn : {press, idle}\nout echo : {yes, no}\n\ngar\ne1: btn = press ==> echo = yes\ne2: btn = idle ==> echo = no\n",
    );
    assert!(matches!(
        split_mealy_moore(&echo),
        Err(Error::NothingToSplit(_))
    ));
}

#[test]
fn split_rejects_adder_whose_output_is_transitively_mealy() {
    assert!(matches!(
        split_mealy_moore(&fixtures::adder()),
        Err(Error::NothingToSplit(_))
    ));
}

// --- local extraction --------------------------------------------------------

#[test]
fn extract_adder_local() {
    let adder = fixtures::adder();
    let result = extract_locals(&adder, &selection(&["d"])).unwrap();
    let loc = &result.parts[0];
    let core = &result.parts[1];
    assert_eq!(loc.name, "Adder_loc");
    assert!(loc.channels.iter().any(|c| c.name == "a"));
    assert!(loc.channels.iter().any(|c| c.name == "__loc_d"));
    assert_eq!(result.provenance["l1"], "Adder_loc");
    assert_eq!(result.provenance["o1"], "Adder_core");
    assert!(core.locals().next().is_none());

    provenance_is_total(&adder, &result);
    assert_equivalent(&adder, &result, 3);
    assert_oracle_agrees(&adder, &result, 3);
}

#[test]
fn extract_cruise_local() {
    let cruise = fixtures::cruise();
    let result = extract_locals(&cruise, &selection(&["boost"])).unwrap();
    assert_equivalent(&cruise, &result, 4);
    assert_oracle_agrees(&cruise, &result, 2);
}

#[test]
fn empty_selection_is_the_identity() {
    let adder = fixtures::adder();
    let result = extract_locals(&adder, &BTreeSet::new()).unwrap();
    assert_eq!(result.parts, vec![adder.clone()]);
    assert!(result.aux_channels.is_empty());
    assert_equivalent(&adder, &result, 3);
}

#[test]
fn state_reading_local_is_not_extractable() {
    let c = parse(
        "component M\nin i : int 0..1\nout o : int 0..2\nstate s : int 0..1 init 0\nlocal d : int 0..2\n\ngar\nl1: true ==> d = i + s\no1: true ==> o = d\nt1: true ==> s' = i\n",
    );
    match extract_locals(&c, &selection(&["d"])) {
        Err(Error::LocalStateDep { local, detail }) => {
            assert_eq!(local, "d");
            assert!(detail.contains("state variable s"), "{detail}");
        }
        other => panic!("expected E_LOCAL_STATE_DEP, got {other:?}"),
    }
}

#[test]
fn unselected_local_dependency_is_rejected() {
    let c = parse(
        "component M\nin i : int 0..1\nout o : int 0..2\nlocal d : int 0..2\nlocal e : int 0..2\n\ngar\nl1: true ==> e = i\nl2: true ==> d = e\no1: true ==> o = d\n",
    );
    match extract_locals(&c, &selection(&["d"])) {
        Err(Error::LocalStateDep { detail, .. }) => {
            assert!(detail.contains("unselected local e"), "{detail}");
        }
        other => panic!("expected E_LOCAL_STATE_DEP, got {other:?}"),
    }
    // Selecting both locals makes the extraction legal.
    let both = extract_locals(&c, &selection(&["d", "e"])).unwrap();
    assert_equivalent(&c, &both, 3);
}

#[test]
fn unknown_local_is_rejected() {
    match extract_locals(&fixtures::adder(), &selection(&["nope"])) {
        Err(Error::UnknownLocal(n)) => assert_eq!(n, "nope"),
        other => panic!("expected E_UNKNOWN_LOCAL, got {other:?}"),
    }
}

// --- output extraction -------------------------------------------------------

#[test]
fn extract_lamp_output() {
    let lamp = fixtures::lamp();
    let result = extract_outputs(&lamp, &selection(&["lamp"])).unwrap();
    let core = &result.parts[0];
    let out = &result.parts[1];
    assert_eq!(core.name, "Lamp_core");
    assert_eq!(out.name, "Lamp_out");
    let out_labels: Vec<&str> = out.formulas.iter().map(|f| f.label.as_str()).collect();
    assert_eq!(out_labels, vec!["m1", "m2"]);
    assert!(out.channels.iter().any(|c| c.name == "__st_mode"));
    assert!(core.formulas.iter().any(|f| f.label.starts_with("__emit")));

    provenance_is_total(&lamp, &result);
    assert_equivalent(&lamp, &result, 4);
    assert_oracle_agrees(&lamp, &result, 3);
}

#[test]
fn extract_echo_output_passes_the_input_through() {
    let lamp_echo = fixtures::lamp_echo();
    let result = extract_outputs(&lamp_echo, &selection(&["echo"])).unwrap();
    let out = &result.parts[1];
    assert!(
        out.channels
            .iter()
            .any(|c| c.name == "btn" && c.direction == refold::model::Direction::Input),
        "COut reads the original input under its own name"
    );
    assert_equivalent(&lamp_echo, &result, 4);
    assert_oracle_agrees(&lamp_echo, &result, 3);
}

#[test]
fn extract_both_cruise_outputs() {
    let cruise = fixtures::cruise();
    let result = extract_outputs(&cruise, &selection(&["active", "throttle"])).unwrap();
    assert_equivalent(&cruise, &result, 4);
}

#[test]
fn output_whose_formula_writes_state_is_rejected() {
    let c = parse(
        "component M\nin i : {u, v}\nout o : {u, v}\nstate s : {u, v} init u\n\ngar\nf: true ==> o = s\nt: true ==> s' = i\n",
    );
    let mut bad = c.clone();
    // Rewrite f to co-target the state: o and s' in one formula.
    bad.formulas[0] = parse(
        "component M\nin i : {u, v}\nout o : {u, v}\nstate s : {u, v} init u\n\ngar\nf: true ==> o = s && s' = i\nt: true ==> s' = i\n",
    )
    .formulas[0]
        .clone();
    match extract_outputs(&bad, &selection(&["o"])) {
        Err(Error::OutTargetsState { offender, .. }) => assert_eq!(offender, "s'"),
        other => panic!("expected E_OUT_TARGETS_STATE, got {other:?}"),
    }
}

#[test]
fn unknown_output_is_rejected() {
    match extract_outputs(&fixtures::lamp(), &selection(&["nope"])) {
        Err(Error::UnknownOutput(n)) => assert_eq!(n, "nope"),
        other => panic!("expected E_UNKNOWN_OUTPUT, got {other:?}"),
    }
}

// --- verification ------------------------------------------------------------

#[test]
fn original_as_single_part_network_is_equivalent_to_itself() {
    for comp in fixtures::corpus() {
        let result = extract_locals(&comp, &BTreeSet::new()).unwrap();
        assert_equivalent(&comp, &result, 3);
    }
}

#[test]
fn deleting_a_moore_formula_is_always_detected() {
    let lamp = fixtures::lamp();
    let result = split_mealy_moore(&lamp).unwrap();
    for (pi, part) in result.parts.iter().enumerate() {
        for (fi, f) in part.formulas.iter().enumerate() {
            // Only output-constraining formulas loosen the network.
            if !f.consequent.iter().any(|a| !a.target.next) {
                continue;
            }
            let mut mutated = result.clone();
            mutated.parts[pi].formulas.remove(fi);
            mutated.network = compose_with_aux_hidden(mutated.parts.clone()).unwrap();
            let verdict = verify_decomposition(&lamp, &mutated, 4, &Budget::default()).unwrap();
            assert!(
                !verdict.equivalent,
                "deleting {} from {} went unnoticed",
                f.label, part.name
            );
            assert!(verdict.counterexample.is_some());
        }
    }
}

// --- schema pipeline ---------------------------------------------------------

#[test]
fn chained_schemas_stay_equivalent() {
    // locals out of the cruise controller, then the clean Moore output out
    // of the core, then the Mealy/Moore split of what remains: four parts.
    let cruise = fixtures::cruise();
    let step1 = extract_locals(&cruise, &selection(&["boost"])).unwrap();
    let core1 = step1.parts[1].clone();
    let step2 = extract_outputs(&core1, &selection(&["active"])).unwrap();
    let core2 = step2.parts[0].clone();
    let step3 = split_mealy_moore(&core2).unwrap();

    let mut parts = vec![step1.parts[0].clone(), step2.parts[1].clone()];
    parts.extend(step3.parts.clone());
    assert_eq!(parts.len(), 4);

    let network = compose_with_aux_hidden(parts.clone()).unwrap();
    assert_eq!(network.external_interface(), cruise.interface());
    let budget = Budget::default();
    for input in oracle_input_traces(&cruise, 3) {
        let reference = refold_oracle::oracle_behaviors(&cruise, &input).unwrap();
        let recomposed = network_behaviors(&network, &input, &budget).unwrap();
        assert_eq!(reference, recomposed, "input {}", input.dump());
    }
}

#[test]
fn split_network_of_deterministic_parts_stays_deterministic() {
    let result = split_mealy_moore(&fixtures::lamp()).unwrap();
    let report =
        check_deterministic_total(&Machine::Network(&result.network), 3, &Budget::default())
            .unwrap();
    assert!(report.deterministic && report.total);
}

#[test]
fn strong_causality_is_preserved_by_the_fixture_schemas() {
    // Empirical report: the composed network preserves the original's
    // strong-causality verdict on every fixture/schema pair that applies.
    let budget = Budget::default();
    let mut checked = 0;
    for comp in fixtures::corpus() {
        let mut results: Vec<DecompositionResult> = Vec::new();
        if let Ok(r) = split_mealy_moore(&comp) {
            results.push(r);
        }
        let locals: BTreeSet<String> = comp.locals().map(|v| v.name.clone()).collect();
        if let Ok(r) = extract_locals(&comp, &locals) {
            results.push(r);
        }
        let outs: BTreeSet<String> = comp.outputs().map(|c| c.name.clone()).collect();
        if let Ok(r) = extract_outputs(&comp, &outs) {
            results.push(r);
        }
        for result in results {
            let original =
                check_strong_causality(&Machine::Component(&comp), 3, &budget).unwrap();
            let network =
                check_strong_causality(&Machine::Network(&result.network), 3, &budget).unwrap();
            assert_eq!(original.holds, network.holds, "{}", comp.name);
            checked += 1;
        }
    }
    assert!(checked >= 6, "expected several applicable schema instances");
}

#[test]
fn classification_counts_partition_the_fixtures() {
    let lamp = classify_component(&fixtures::lamp()).unwrap();
    assert_eq!(
        (lamp.moore.len(), lamp.mealy.len(), lamp.transition.len(), lamp.localdef.len()),
        (2, 0, 3, 0)
    );
    let echo = classify_component(&fixtures::lamp_echo()).unwrap();
    assert_eq!(
        (echo.moore.len(), echo.mealy.len(), echo.transition.len(), echo.localdef.len()),
        (2, 2, 3, 0)
    );
    let stateless = classify_component(&parse(
        "requirement R\nout x : int 0..3\n\ngar\nr1: true ==> x in {0, 1}\n",
    ))
    .unwrap();
    assert_eq!(stateless.transition.len(), 0);
    assert_eq!(stateless.moore.len(), 1);
}
