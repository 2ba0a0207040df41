//! Renderers for the committed golden files. The binary writes them; the
//! test suite recomputes them and fails on drift.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use refold::model::Component;
use refold::semantics::{Assignment, Trace};

use crate::semantics::{
    oracle_behaviors, oracle_input_frames, oracle_input_traces, oracle_step, trace_compact,
};

/// Every (state, input) pair with its oracle step outcomes. States cover the
/// full product of state-variable domains, not just the reachable ones.
pub fn step_table(comp: &Component) -> String {
    let mut out = format!("# oracle step table for {}\n", comp.name);
    let states = state_product(comp);
    let inputs = oracle_input_frames(comp);
    for state in &states {
        for input in &inputs {
            let _ = writeln!(out, "state {} | input {}", dash(state), dash(input));
            let outcomes = oracle_step(comp, state, input);
            if outcomes.is_empty() {
                let _ = writeln!(out, "  -> inconsistent");
            }
            for o in outcomes {
                let _ = writeln!(
                    out,
                    "  -> locals {} | out {} | next {}",
                    dash(&o.locals),
                    dash(&o.outputs),
                    dash(&o.next_state),
                );
            }
        }
    }
    out
}

/// Oracle behavior sets for every input trace at the given horizon.
pub fn behavior_table(comp: &Component, h: usize) -> String {
    let mut out = format!("# oracle behaviors for {} at H={h}\n", comp.name);
    for input in oracle_input_traces(comp, h) {
        let _ = writeln!(out, "input {}", trace_compact(&input));
        let traces: BTreeSet<Trace> =
            oracle_behaviors(comp, &input).expect("fixture components are consistent");
        for t in traces {
            let _ = writeln!(out, "  -> {}", trace_compact(&t));
        }
    }
    out
}

/// Full product of the state variable domains, in domain order.
pub fn state_product(comp: &Component) -> Vec<Assignment> {
    let mut states = vec![Assignment::new()];
    for v in comp.state_vars() {
        let mut grown = Vec::new();
        for s in &states {
            for value in v.domain.values() {
                let mut s2 = s.clone();
                s2.set(v.name.clone(), value);
                grown.push(s2);
            }
        }
        states = grown;
    }
    states
}

fn dash(a: &Assignment) -> String {
    if a.is_empty() {
        "-".into()
    } else {
        a.to_string()
    }
}
