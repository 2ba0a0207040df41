//! Brute-force stepping, behaviors and network evaluation.

use std::collections::{BTreeMap, BTreeSet};

use refold::model::{AtomConstraint, Component, Value, ValueDomain};
use refold::semantics::{Assignment, StepOutcome, Trace};

use crate::eval::{oracle_eval, ovalue_matches, OValue};

/// Exhaustive candidate enumeration per tick: every total assignment over
/// locals × outputs × next-state that satisfies all formulas.
pub fn oracle_step(
    comp: &Component,
    state: &Assignment,
    input: &Assignment,
) -> BTreeSet<StepOutcome> {
    // Candidate slots: (name, is_next, domain values).
    let mut slots: Vec<(String, bool, Vec<Value>)> = Vec::new();
    for v in comp.locals() {
        slots.push((v.name.clone(), false, v.domain.values()));
    }
    for c in comp.outputs() {
        slots.push((c.name.clone(), false, c.domain.values()));
    }
    for v in comp.state_vars() {
        slots.push((v.name.clone(), true, v.domain.values()));
    }

    let mut outcomes = BTreeSet::new();
    let mut choice: Vec<usize> = vec![0; slots.len()];
    loop {
        // Assemble the candidate.
        let mut current: BTreeMap<String, Value> = BTreeMap::new();
        for (k, v) in state.iter() {
            current.insert(k.clone(), v.clone());
        }
        for (k, v) in input.iter() {
            current.insert(k.clone(), v.clone());
        }
        let mut next: BTreeMap<String, Value> = BTreeMap::new();
        for (i, (name, is_next, values)) in slots.iter().enumerate() {
            let v = values[choice[i]].clone();
            if *is_next {
                next.insert(name.clone(), v);
            } else {
                current.insert(name.clone(), v);
            }
        }

        if candidate_ok(comp, &current, &next) {
            let local_names: BTreeSet<&str> = comp.locals().map(|v| v.name.as_str()).collect();
            let output_names: BTreeSet<&str> = comp.outputs().map(|c| c.name.as_str()).collect();
            let mut locals = Assignment::new();
            let mut outputs = Assignment::new();
            for (k, v) in &current {
                if local_names.contains(k.as_str()) {
                    locals.set(k.clone(), v.clone());
                } else if output_names.contains(k.as_str()) {
                    outputs.set(k.clone(), v.clone());
                }
            }
            let mut next_state = Assignment::new();
            for (k, v) in &next {
                next_state.set(k.clone(), v.clone());
            }
            outcomes.insert(StepOutcome {
                locals,
                outputs,
                next_state,
            });
        }

        // Advance.
        let mut i = slots.len();
        loop {
            if i == 0 {
                return outcomes;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < slots[i].2.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Re-check every formula against a fully assembled candidate.
fn candidate_ok(
    comp: &Component,
    current: &BTreeMap<String, Value>,
    next: &BTreeMap<String, Value>,
) -> bool {
    for f in &comp.formulas {
        if oracle_eval(&f.guard, current) != OValue::Bool(true) {
            continue;
        }
        for atom in &f.consequent {
            let assigned = if atom.target.next {
                next.get(&atom.target.name)
            } else {
                current.get(&atom.target.name)
            };
            let Some(assigned) = assigned else {
                panic!("oracle: unassigned target {}", atom.target);
            };
            let ok = match &atom.constraint {
                AtomConstraint::Equals(rhs) => {
                    ovalue_matches(&oracle_eval(rhs, current), assigned)
                }
                AtomConstraint::In(values) => values.contains(assigned),
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Chain [`oracle_step`] along an input trace. Errors when any reachable
/// prefix admits no successor.
pub fn oracle_behaviors(comp: &Component, input: &Trace) -> Result<BTreeSet<Trace>, String> {
    let initial = Assignment::from_pairs(comp.initial_state());
    let mut traces = BTreeSet::new();
    let mut stack: Vec<Assignment> = Vec::new();
    go(comp, input, 0, &initial, &mut stack, &mut traces)?;
    return Ok(traces);

    fn go(
        comp: &Component,
        input: &Trace,
        tick: usize,
        state: &Assignment,
        acc: &mut Vec<Assignment>,
        out: &mut BTreeSet<Trace>,
    ) -> Result<(), String> {
        if tick == input.horizon() {
            out.insert(Trace::from_frames(acc.clone()).expect("uniform frames"));
            return Ok(());
        }
        let outcomes = oracle_step(comp, state, input.frame(tick));
        if outcomes.is_empty() {
            return Err(format!(
                "inconsistent at tick {tick}: state {state} admits no successor"
            ));
        }
        for o in outcomes {
            acc.push(o.outputs.clone());
            go(comp, input, tick + 1, &o.next_state, acc, out)?;
            acc.pop();
        }
        Ok(())
    }
}

/// A network the oracle's way: no precomputed wiring, just name matching
/// resolved by availability scheduling at every tick.
pub struct OracleNetwork {
    pub parts: Vec<Component>,
    pub hidden: BTreeSet<String>,
}

pub fn oracle_network_behaviors(
    net: &OracleNetwork,
    input: &Trace,
) -> Result<BTreeSet<Trace>, String> {
    let produced_names: BTreeSet<String> = net
        .parts
        .iter()
        .flat_map(|p| p.outputs())
        .map(|c| c.name.clone())
        .collect();
    let external_outputs: BTreeSet<String> = produced_names
        .iter()
        .filter(|n| !net.hidden.contains(*n))
        .cloned()
        .collect();

    let initial: Vec<Assignment> = net
        .parts
        .iter()
        .map(|p| Assignment::from_pairs(p.initial_state()))
        .collect();

    let mut traces = BTreeSet::new();
    let mut acc: Vec<Assignment> = Vec::new();
    go(
        net,
        &produced_names,
        &external_outputs,
        input,
        0,
        &initial,
        &mut acc,
        &mut traces,
    )?;
    return Ok(traces);

    #[allow(clippy::too_many_arguments)]
    fn go(
        net: &OracleNetwork,
        produced_names: &BTreeSet<String>,
        external_outputs: &BTreeSet<String>,
        input: &Trace,
        tick: usize,
        states: &[Assignment],
        acc: &mut Vec<Assignment>,
        out: &mut BTreeSet<Trace>,
    ) -> Result<(), String> {
        if tick == input.horizon() {
            out.insert(Trace::from_frames(acc.clone()).expect("uniform frames"));
            return Ok(());
        }
        // Joint tick evaluation by availability: run any part whose inputs
        // are all known, branch on its outcomes, repeat.
        let mut branches: Vec<(Vec<Option<Assignment>>, Assignment)> =
            vec![(vec![None; net.parts.len()], Assignment::new())];
        let mut done = vec![false; net.parts.len()];
        for _ in 0..net.parts.len() {
            let ready = (0..net.parts.len()).find(|&i| {
                !done[i]
                    && net.parts[i].inputs().all(|c| {
                        !produced_names.contains(&c.name)
                            || branches
                                .first()
                                .map(|(_, env)| env.get(&c.name).is_some())
                                .unwrap_or(false)
                    })
            });
            let Some(i) = ready else {
                return Err("oracle: network has a zero-delay cycle".into());
            };
            done[i] = true;
            let mut grown = Vec::new();
            for (nexts, env) in &branches {
                let mut part_input = Assignment::new();
                for c in net.parts[i].inputs() {
                    let v = env
                        .get(&c.name)
                        .or_else(|| input.frame(tick).get(&c.name))
                        .unwrap_or_else(|| panic!("oracle: unbound channel {}", c.name))
                        .clone();
                    part_input.set(c.name.clone(), v);
                }
                let outcomes = oracle_step(&net.parts[i], &states[i], &part_input);
                for o in outcomes {
                    let mut env2 = env.clone();
                    for (k, v) in o.outputs.iter() {
                        env2.set(k.clone(), v.clone());
                    }
                    let mut nexts2 = nexts.clone();
                    nexts2[i] = Some(o.next_state.clone());
                    grown.push((nexts2, env2));
                }
            }
            branches = grown;
            if branches.is_empty() {
                return Err(format!("inconsistent network at tick {tick}"));
            }
        }

        for (nexts, env) in branches {
            let frame = env.projected(external_outputs.iter().map(String::as_str));
            let next_states: Vec<Assignment> =
                nexts.into_iter().map(|n| n.expect("part stepped")).collect();
            acc.push(frame);
            go(
                net,
                produced_names,
                external_outputs,
                input,
                tick + 1,
                &next_states,
                acc,
                out,
            )?;
            acc.pop();
        }
        Ok(())
    }
}

/// One-line rendering of a trace for golden files: per-tick assignments
/// joined by `|`, an empty frame shown as `-`.
pub fn trace_compact(t: &Trace) -> String {
    let frames: Vec<String> = t
        .frames()
        .iter()
        .map(|f| {
            if f.is_empty() {
                "-".to_string()
            } else {
                f.to_string()
            }
        })
        .collect();
    frames.join(" | ")
}

/// All input frames of a component in alphabetical channel order, values in
/// domain order; the oracle's own little enumerator.
pub fn oracle_input_frames(comp: &Component) -> Vec<Assignment> {
    let inputs: BTreeMap<String, ValueDomain> = comp
        .inputs()
        .map(|c| (c.name.clone(), c.domain.clone()))
        .collect();
    let mut frames = vec![Assignment::new()];
    for (name, domain) in inputs {
        let mut grown = Vec::new();
        for f in &frames {
            for v in domain.values() {
                let mut f2 = f.clone();
                f2.set(name.clone(), v);
                grown.push(f2);
            }
        }
        frames = grown;
    }
    frames
}

/// Every input trace of length `h`, oracle flavored: depth-first extension
/// of shorter traces.
pub fn oracle_input_traces(comp: &Component, h: usize) -> Vec<Trace> {
    let frames = oracle_input_frames(comp);
    let mut traces: Vec<Vec<Assignment>> = vec![vec![]];
    for _ in 0..h {
        let mut grown = Vec::new();
        for t in &traces {
            for f in &frames {
                let mut t2 = t.clone();
                t2.push(f.clone());
                grown.push(t2);
            }
        }
        traces = grown;
    }
    traces
        .into_iter()
        .map(|fs| Trace::from_frames(fs).expect("uniform"))
        .collect()
}
