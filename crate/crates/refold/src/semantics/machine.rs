//! A uniform stepping view over single components and composed networks.
//!
//! Refinement, causality and determinism checks all run against this
//! abstraction so a decomposed network can stand wherever a component can.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::model::{Component, Interface, Value};
use crate::semantics::budget::{Budget, CostMeter};
use crate::semantics::network::Network;
use crate::semantics::step::step;
use crate::semantics::Assignment;

/// Either one component or a composed network.
#[derive(Debug, Clone, Copy)]
pub enum Machine<'a> {
    Component(&'a Component),
    Network(&'a Network),
}

/// Per-part state snapshots; a single component uses one slot.
pub type MachineState = Vec<Assignment>;

impl<'a> Machine<'a> {
    pub fn name(&self) -> String {
        match self {
            Machine::Component(c) => c.name.clone(),
            Machine::Network(n) => n
                .parts()
                .iter()
                .map(|p| p.name.as_str())
                .collect::<Vec<_>>()
                .join("+"),
        }
    }

    pub fn interface(&self) -> Interface {
        match self {
            Machine::Component(c) => c.interface(),
            Machine::Network(n) => n.external_interface(),
        }
    }

    pub fn initial_state(&self) -> MachineState {
        match self {
            Machine::Component(c) => vec![Assignment::from_pairs(c.initial_state())],
            Machine::Network(n) => n
                .parts()
                .iter()
                .map(|p| Assignment::from_pairs(p.initial_state()))
                .collect(),
        }
    }

    /// Distinct `(external output frame, next state)` pairs reachable in one
    /// tick. Internal nondeterminism that is invisible externally collapses
    /// here; use [`Machine::step_detailed`] when it must be counted.
    pub fn step_frames(
        &self,
        state: &MachineState,
        input: &Assignment,
        meter: &mut CostMeter,
    ) -> Result<BTreeSet<(Assignment, MachineState)>> {
        let detailed = self.step_detailed(state, input, meter)?;
        let external: BTreeSet<String> = self.interface().outputs.into_keys().collect();
        Ok(detailed
            .into_iter()
            .map(|o| {
                (
                    o.produced.projected(external.iter().map(String::as_str)),
                    o.next,
                )
            })
            .collect())
    }

    /// Every admissible reaction including per-part locals and hidden
    /// channels, so nondeterminism is counted exactly.
    pub fn step_detailed(
        &self,
        state: &MachineState,
        input: &Assignment,
        meter: &mut CostMeter,
    ) -> Result<BTreeSet<DetailedOutcome>> {
        match self {
            Machine::Component(c) => {
                let mut out = BTreeSet::new();
                for o in step(c, &state[0], input) {
                    meter.charge(1)?;
                    out.insert(DetailedOutcome {
                        locals: vec![o.locals],
                        produced: o.outputs,
                        next: vec![o.next_state],
                    });
                }
                Ok(out)
            }
            Machine::Network(n) => {
                let mut out = BTreeSet::new();
                let order = n.topo_order().to_vec();
                self.net_step(
                    n,
                    &order,
                    0,
                    state,
                    input,
                    &Assignment::new(),
                    &mut BTreeMap::new(),
                    &mut Vec::new(),
                    meter,
                    &mut out,
                )?;
                Ok(out)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn net_step(
        &self,
        net: &Network,
        order: &[usize],
        depth: usize,
        state: &MachineState,
        input: &Assignment,
        produced: &Assignment,
        next: &mut BTreeMap<usize, Assignment>,
        locals: &mut Vec<(usize, Assignment)>,
        meter: &mut CostMeter,
        out: &mut BTreeSet<DetailedOutcome>,
    ) -> Result<()> {
        if depth == order.len() {
            let mut locals_sorted = locals.clone();
            locals_sorted.sort_by_key(|(i, _)| *i);
            out.insert(DetailedOutcome {
                locals: locals_sorted.into_iter().map(|(_, a)| a).collect(),
                produced: produced.clone(),
                next: (0..net.parts().len())
                    .map(|i| next.get(&i).cloned().unwrap_or_default())
                    .collect(),
            });
            return Ok(());
        }
        let part_idx = order[depth];
        let part = &net.parts()[part_idx];
        let mut part_input = Assignment::new();
        for c in part.inputs() {
            let value = produced
                .get(&c.name)
                .or_else(|| input.get(&c.name))
                .unwrap_or_else(|| panic!("unbound network channel {}", c.name))
                .clone();
            part_input.set(c.name.clone(), value);
        }
        for o in step(part, &state[part_idx], &part_input) {
            meter.charge(1)?;
            let new_produced = produced.merged(&o.outputs);
            next.insert(part_idx, o.next_state);
            locals.push((part_idx, o.locals));
            self.net_step(
                net,
                order,
                depth + 1,
                state,
                input,
                &new_produced,
                next,
                locals,
                meter,
                out,
            )?;
            locals.pop();
            next.remove(&part_idx);
        }
        Ok(())
    }
}

/// One joint reaction of a machine; `produced` holds every emitted channel,
/// hidden ones included.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DetailedOutcome {
    pub locals: Vec<Assignment>,
    pub produced: Assignment,
    pub next: MachineState,
}

/// All input frames of an interface in enumeration order (channel names
/// alphabetical, values in domain order).
pub fn input_frames(iface: &Interface) -> Vec<Assignment> {
    let slots: Vec<(String, Vec<Value>)> = iface
        .inputs
        .iter()
        .map(|(name, domain)| (name.clone(), domain.values()))
        .collect();
    let mut frames = vec![Assignment::new()];
    for (name, values) in &slots {
        let mut grown = Vec::with_capacity(frames.len() * values.len());
        for frame in &frames {
            for v in values {
                let mut f = frame.clone();
                f.set(name.clone(), v.clone());
                grown.push(f);
            }
        }
        frames = grown;
    }
    frames
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    NoSuccessor,
    MultipleSuccessors,
}

#[derive(Debug, Clone)]
pub struct DetWitness {
    pub state: MachineState,
    pub input: Assignment,
    pub kind: WitnessKind,
}

#[derive(Debug, Clone)]
pub struct DeterminismReport {
    pub deterministic: bool,
    pub total: bool,
    pub witness: Option<DetWitness>,
}

/// Scan every configuration reachable within `horizon` ticks: the machine is
/// total when no reachable `(state, input)` has an empty step set and
/// deterministic when every reachable step set is a singleton.
pub fn check_deterministic_total(
    machine: &Machine,
    horizon: usize,
    budget: &Budget,
) -> Result<DeterminismReport> {
    budget.check_horizon(horizon)?;
    let mut meter = budget.meter();
    let frames = input_frames(&machine.interface());

    let mut report = DeterminismReport {
        deterministic: true,
        total: true,
        witness: None,
    };
    let mut seen: BTreeSet<MachineState> = BTreeSet::new();
    let mut frontier: BTreeSet<MachineState> = [machine.initial_state()].into();
    for _ in 0..horizon {
        let mut next_frontier = BTreeSet::new();
        for state in &frontier {
            if !seen.insert(state.clone()) {
                continue;
            }
            for input in &frames {
                meter.charge(1)?;
                let outcomes = machine.step_detailed(state, input, &mut meter)?;
                if outcomes.is_empty() && report.total {
                    report.total = false;
                    report.witness.get_or_insert(DetWitness {
                        state: state.clone(),
                        input: input.clone(),
                        kind: WitnessKind::NoSuccessor,
                    });
                }
                if outcomes.len() > 1 && report.deterministic {
                    report.deterministic = false;
                    report.witness.get_or_insert(DetWitness {
                        state: state.clone(),
                        input: input.clone(),
                        kind: WitnessKind::MultipleSuccessors,
                    });
                }
                for o in outcomes {
                    next_frontier.insert(o.next);
                }
            }
        }
        frontier = next_frontier;
    }
    Ok(report)
}

/// Component wrapper for [`check_deterministic_total`].
pub fn check_component_deterministic_total(
    comp: &Component,
    horizon: usize,
    budget: &Budget,
) -> Result<DeterminismReport> {
    check_deterministic_total(&Machine::Component(comp), horizon, budget)
}
