//! Single-tick stepping of one component.
//!
//! A step outcome is any assignment of locals, outputs and next-tick state
//! for which every formula's `guard ⟹ consequent` holds. Targets no fired
//! formula constrains range over their whole domain, which is where
//! nondeterminism comes from. The engine enumerates only the local variables
//! and derives output and next-state candidates from the fired constraints;
//! the brute-force route over the full candidate product lives in the test
//! oracle, not here.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::model::{AtomConstraint, Component, Target, Value};
use crate::semantics::eval::{eval_bool, eval_value};
use crate::semantics::Assignment;

/// One admissible reaction of a component at a tick.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StepOutcome {
    pub locals: Assignment,
    pub outputs: Assignment,
    pub next_state: Assignment,
}

/// All admissible `(locals, outputs, next_state)` triples from `state`
/// under `input`. An empty set means the specification is inconsistent at
/// this configuration.
pub fn step(comp: &Component, state: &Assignment, input: &Assignment) -> BTreeSet<StepOutcome> {
    let locals: Vec<(&str, Vec<Value>)> = comp
        .locals()
        .map(|v| (v.name.as_str(), v.domain.values()))
        .collect();

    let mut outcomes = BTreeSet::new();
    let base_env = state.merged(input);
    for_each_product(&locals, &mut |local_choice| {
        let mut env = base_env.clone();
        let mut local_assignment = Assignment::new();
        for (name, value) in local_choice {
            env.set(*name, (*value).clone());
            local_assignment.set(*name, (*value).clone());
        }
        extend_outcomes(comp, &env, local_assignment, &mut outcomes);
    });
    outcomes
}

/// With locals fixed by `env`, intersect the constraints of every fired
/// formula and emit the cross product of the remaining target choices.
fn extend_outcomes(
    comp: &Component,
    env: &Assignment,
    locals: Assignment,
    outcomes: &mut BTreeSet<StepOutcome>,
) {
    // None = unconstrained; Some(set) = admissible values so far.
    let mut constraints: BTreeMap<Target, Option<BTreeSet<Value>>> = BTreeMap::new();
    for c in comp.outputs() {
        constraints.insert(Target::current(&c.name), None);
    }
    for v in comp.state_vars() {
        constraints.insert(Target::next_state(&v.name), None);
    }

    for f in &comp.formulas {
        if !eval_bool(&f.guard, env) {
            continue;
        }
        for atom in &f.consequent {
            let admissible: BTreeSet<Value> = match &atom.constraint {
                AtomConstraint::Equals(rhs) => std::iter::once(eval_value(rhs, env)).collect(),
                AtomConstraint::In(values) => values.iter().cloned().collect(),
            };
            if is_local(comp, &atom.target) {
                // Locals are already fixed by the enumeration; the candidate
                // survives only if it satisfies the constraint.
                let chosen = env.get(&atom.target.name).expect("local bound");
                if !admissible.contains(chosen) {
                    return;
                }
            } else {
                let entry = constraints.entry(atom.target.clone()).or_insert(None);
                *entry = Some(match entry.take() {
                    None => admissible,
                    Some(prev) => prev.intersection(&admissible).cloned().collect(),
                });
            }
        }
    }

    // Replace unconstrained targets by their whole domain and drop the
    // candidate when any constraint emptied out.
    let mut choices: Vec<(Target, Vec<Value>)> = Vec::new();
    for (target, constraint) in constraints {
        let domain = comp
            .domain_of(&target.name)
            .expect("constrained target is declared");
        let values: Vec<Value> = match constraint {
            None => domain.values(),
            Some(set) => {
                if set.is_empty() {
                    return;
                }
                set.into_iter().collect()
            }
        };
        choices.push((target, values));
    }

    let indexed: Vec<(&Target, &[Value])> = choices
        .iter()
        .map(|(t, vs)| (t, vs.as_slice()))
        .collect();
    let mut pick = vec![0usize; indexed.len()];
    loop {
        let mut outputs = Assignment::new();
        let mut next_state = Assignment::new();
        for (i, (target, values)) in indexed.iter().enumerate() {
            let value = values[pick[i]].clone();
            if target.next {
                next_state.set(target.name.clone(), value);
            } else {
                outputs.set(target.name.clone(), value);
            }
        }
        outcomes.insert(StepOutcome {
            locals: locals.clone(),
            outputs,
            next_state,
        });
        // Odometer over the choice vector.
        let mut i = indexed.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < indexed[i].1.len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

fn is_local(comp: &Component, target: &Target) -> bool {
    !target.next
        && comp
            .locals()
            .any(|v| v.name == target.name)
}

/// Call `f` with every combination of one value per slot, in domain order.
fn for_each_product<'a>(
    slots: &'a [(&'a str, Vec<Value>)],
    f: &mut impl FnMut(&[(&'a str, &'a Value)]),
) {
    fn go<'a>(
        slots: &'a [(&'a str, Vec<Value>)],
        acc: &mut Vec<(&'a str, &'a Value)>,
        f: &mut impl FnMut(&[(&'a str, &'a Value)]),
    ) {
        match slots.split_first() {
            None => f(acc),
            Some(((name, values), rest)) => {
                for v in values {
                    acc.push((name, v));
                    go(rest, acc, f);
                    acc.pop();
                }
            }
        }
    }
    go(slots, &mut Vec::new(), f);
}
