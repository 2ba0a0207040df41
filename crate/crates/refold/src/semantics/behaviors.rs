//! Bounded behavior sets: every output trace a machine can produce for a
//! given input trace.

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::model::Component;
use crate::semantics::budget::{Budget, CostMeter};
use crate::semantics::machine::{Machine, MachineState};
use crate::semantics::network::Network;
use crate::semantics::{Assignment, Trace};

/// Output traces of a single component. Deterministic components yield at
/// most one trace per input trace.
pub fn behaviors(comp: &Component, input_trace: &Trace, budget: &Budget) -> Result<BTreeSet<Trace>> {
    machine_behaviors(&Machine::Component(comp), input_trace, budget)
}

/// Output traces of a network, projected to its unhidden interface.
pub fn network_behaviors(
    net: &Network,
    input_trace: &Trace,
    budget: &Budget,
) -> Result<BTreeSet<Trace>> {
    machine_behaviors(&Machine::Network(net), input_trace, budget)
}

/// Shared exploration: chain [`Machine::step_frames`] from the initial state
/// along the input trace, memoizing suffix sets per `(tick, state)`.
pub fn machine_behaviors(
    machine: &Machine,
    input_trace: &Trace,
    budget: &Budget,
) -> Result<BTreeSet<Trace>> {
    let horizon = input_trace.horizon();
    budget.check_horizon(horizon)?;

    let iface = machine.interface();
    let expected: Vec<String> = iface.inputs.keys().cloned().collect();
    let mut got = input_trace.symbols();
    got.sort();
    if got != expected {
        return Err(Error::IfaceMismatch(format!(
            "input trace covers [{}], the machine expects [{}]",
            got.join(", "),
            expected.join(", ")
        )));
    }

    let mut meter = budget.meter();
    let mut memo: BTreeMap<(usize, MachineState), Rc<BTreeSet<Vec<Assignment>>>> = BTreeMap::new();
    let suffixes = explore(
        machine,
        input_trace,
        0,
        &machine.initial_state(),
        &mut memo,
        &mut meter,
    )?;

    let mut traces = BTreeSet::new();
    for frames in suffixes.iter() {
        traces.insert(Trace::from_frames(frames.clone()).expect("frames share the output symbols"));
    }
    Ok(traces)
}

fn explore(
    machine: &Machine,
    input_trace: &Trace,
    tick: usize,
    state: &MachineState,
    memo: &mut BTreeMap<(usize, MachineState), Rc<BTreeSet<Vec<Assignment>>>>,
    meter: &mut CostMeter,
) -> Result<Rc<BTreeSet<Vec<Assignment>>>> {
    if tick == input_trace.horizon() {
        return Ok(Rc::new([Vec::new()].into()));
    }
    if let Some(hit) = memo.get(&(tick, state.clone())) {
        return Ok(Rc::clone(hit));
    }

    let outcomes = machine.step_frames(state, input_trace.frame(tick), meter)?;
    if outcomes.is_empty() {
        return Err(Error::Inconsistent {
            detail: format!(
                "{} admits no reaction at tick {tick} (state {})",
                machine.name(),
                describe_state(state)
            ),
            trace: Some(input_trace.clone()),
        });
    }

    let mut suffixes = BTreeSet::new();
    for (frame, next) in outcomes {
        let rest = explore(machine, input_trace, tick + 1, &next, memo, meter)?;
        for tail in rest.iter() {
            meter.charge(1)?;
            let mut run = Vec::with_capacity(1 + tail.len());
            run.push(frame.clone());
            run.extend(tail.iter().cloned());
            suffixes.insert(run);
        }
    }
    let rc = Rc::new(suffixes);
    memo.insert((tick, state.clone()), Rc::clone(&rc));
    Ok(rc)
}

fn describe_state(state: &MachineState) -> String {
    let parts: Vec<String> = state
        .iter()
        .map(|a| if a.is_empty() { "-".into() } else { a.to_string() })
        .collect();
    parts.join(" | ")
}
