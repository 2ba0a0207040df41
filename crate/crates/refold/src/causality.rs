//! Mealy/Moore formula classification and causality checks.
//!
//! A formula constraining an output is Moore when its value cannot depend
//! on the tick's input — neither through a direct read nor through a local
//! whose definition reads an input. Classification therefore resolves local
//! reads transitively; the footprint itself stays syntactic.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{symbol_footprint, Component, Formula};
use crate::semantics::{enumerate_input_traces, input_frames, Assignment, Budget, Machine, MachineState, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaClass {
    /// Constrains outputs; independent of the current input.
    MooreOutput,
    /// Constrains outputs; reads the current input, directly or through a
    /// local.
    MealyOutput,
    /// Constrains next-tick state and no outputs.
    Transition,
    /// Constrains locals only.
    LocalDef,
}

impl FormulaClass {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaClass::MooreOutput => "moore",
            FormulaClass::MealyOutput => "mealy",
            FormulaClass::Transition => "transition",
            FormulaClass::LocalDef => "localdef",
        }
    }
}

/// Inputs a formula depends on at the current tick: direct input reads plus
/// inputs reachable through the definitions of the locals it reads.
pub fn effective_input_reads(comp: &Component, f: &Formula) -> BTreeSet<String> {
    let fp = symbol_footprint(f, comp);
    let mut inputs = fp.reads_inputs.clone();
    let mut pending: Vec<String> = fp.reads_locals.iter().cloned().collect();
    let mut visited: BTreeSet<String> = BTreeSet::new();
    while let Some(local) = pending.pop() {
        if !visited.insert(local.clone()) {
            continue;
        }
        for g in &comp.formulas {
            if !g.target_names().any(|t| !t.next && t.name == local) {
                continue;
            }
            let gfp = symbol_footprint(g, comp);
            inputs.extend(gfp.reads_inputs.iter().cloned());
            pending.extend(gfp.reads_locals.iter().cloned());
        }
    }
    inputs
}

/// Classify one formula of a valid component.
pub fn classify_formula(comp: &Component, f: &Formula) -> Result<FormulaClass> {
    let fp = symbol_footprint(f, comp);
    if !fp.targets_outputs.is_empty() && !fp.targets_state.is_empty() {
        return Err(Error::MixedTarget {
            label: f.label.clone(),
        });
    }
    if !fp.targets_outputs.is_empty() {
        return Ok(if effective_input_reads(comp, f).is_empty() {
            FormulaClass::MooreOutput
        } else {
            FormulaClass::MealyOutput
        });
    }
    if !fp.targets_state.is_empty() {
        return Ok(FormulaClass::Transition);
    }
    Ok(FormulaClass::LocalDef)
}

/// Per-class partition of a component's formula labels. Disjoint and
/// exhaustive: the four lists together hold every label exactly once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassificationReport {
    pub moore: Vec<String>,
    pub mealy: Vec<String>,
    pub transition: Vec<String>,
    pub localdef: Vec<String>,
}

impl ClassificationReport {
    pub fn total(&self) -> usize {
        self.moore.len() + self.mealy.len() + self.transition.len() + self.localdef.len()
    }
}

pub fn classify_component(comp: &Component) -> Result<ClassificationReport> {
    let mut report = ClassificationReport::default();
    for f in &comp.formulas {
        match classify_formula(comp, f)? {
            FormulaClass::MooreOutput => report.moore.push(f.label.clone()),
            FormulaClass::MealyOutput => report.mealy.push(f.label.clone()),
            FormulaClass::Transition => report.transition.push(f.label.clone()),
            FormulaClass::LocalDef => report.localdef.push(f.label.clone()),
        }
    }
    Ok(report)
}

/// `label class reads targets` rows, one formula per row.
pub fn classification_table(comp: &Component) -> Result<String> {
    let mut rows = vec![(
        "label".to_string(),
        "class".to_string(),
        "reads".to_string(),
        "targets".to_string(),
    )];
    for f in &comp.formulas {
        let class = classify_formula(comp, f)?;
        let fp = symbol_footprint(f, comp);
        let reads: Vec<String> = fp
            .reads_inputs
            .iter()
            .chain(fp.reads_state.iter())
            .chain(fp.reads_locals.iter())
            .cloned()
            .collect();
        let targets: Vec<String> = f.target_names().map(|t| t.to_string()).collect();
        rows.push((
            f.label.clone(),
            class.as_str().to_string(),
            if reads.is_empty() { "-".into() } else { reads.join(",") },
            if targets.is_empty() { "-".into() } else { targets.join(",") },
        ));
    }
    let width = |pick: fn(&(String, String, String, String)) -> &String| {
        rows.iter().map(|r| pick(r).len()).max().unwrap_or(0)
    };
    let (w0, w1, w2) = (width(|r| &r.0), width(|r| &r.1), width(|r| &r.2));
    let mut out = String::new();
    for (a, b, c, d) in &rows {
        let _ = writeln!(out, "{a:<w0$}  {b:<w1$}  {c:<w2$}  {d}");
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalityKind {
    Weak,
    Strong,
}

/// Two input runs agreeing up to the divergence point but producing
/// different output frame sets at `tick`.
#[derive(Debug, Clone)]
pub struct CausalityWitness {
    pub left: Trace,
    pub right: Trace,
    pub tick: usize,
}

#[derive(Debug, Clone)]
pub struct CausalityVerdict {
    pub kind: CausalityKind,
    pub holds: bool,
    pub horizon: usize,
    pub witness: Option<CausalityWitness>,
}

/// Strong causality: the output frame set at tick t is independent of the
/// input at tick t. Checked exhaustively over every input prefix up to the
/// horizon; the witness is the least violating pair (earliest tick first,
/// then lexicographic).
pub fn check_strong_causality(
    machine: &Machine,
    horizon: usize,
    budget: &Budget,
) -> Result<CausalityVerdict> {
    budget.check_horizon(horizon)?;
    let mut meter = budget.meter();
    let frames = input_frames(&machine.interface());
    let initial: BTreeSet<MachineState> = [machine.initial_state()].into();

    let witness = strong_walk(machine, &initial, 0, horizon, &mut Vec::new(), &frames, &mut meter)?;
    Ok(CausalityVerdict {
        kind: CausalityKind::Strong,
        holds: witness.is_none(),
        horizon,
        witness,
    })
}

fn strong_walk(
    machine: &Machine,
    states: &BTreeSet<MachineState>,
    tick: usize,
    horizon: usize,
    prefix: &mut Vec<Assignment>,
    frames: &[Assignment],
    meter: &mut crate::semantics::CostMeter,
) -> Result<Option<CausalityWitness>> {
    if tick == horizon {
        return Ok(None);
    }
    // Output frame set and successor states per candidate input.
    let mut per_input = Vec::with_capacity(frames.len());
    for input in frames {
        let mut outs: BTreeSet<Assignment> = BTreeSet::new();
        let mut nexts: BTreeSet<MachineState> = BTreeSet::new();
        for state in states {
            meter.charge(1)?;
            for (frame, next) in machine.step_frames(state, input, meter)? {
                outs.insert(frame);
                nexts.insert(next);
            }
        }
        per_input.push((input, outs, nexts));
    }
    for i in 0..per_input.len() {
        for j in (i + 1)..per_input.len() {
            if per_input[i].1 != per_input[j].1 {
                let mk = |input: &Assignment| {
                    let mut fs = prefix.clone();
                    fs.push(input.clone());
                    Trace::from_frames(fs).expect("uniform input frames")
                };
                return Ok(Some(CausalityWitness {
                    left: mk(per_input[i].0),
                    right: mk(per_input[j].0),
                    tick,
                }));
            }
        }
    }
    for (input, _, nexts) in per_input {
        prefix.push(input.clone());
        let found = strong_walk(machine, &nexts, tick + 1, horizon, prefix, frames, meter)?;
        prefix.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Weak causality: output frames at tick t are determined by inputs at
/// ticks ≤ t. The guarded-formula language admits no reads of future
/// inputs, so this must always hold; the check is a semantic audit that
/// recomputes behaviors per full input trace and compares prefix sets
/// across traces sharing a prefix.
pub fn check_weak_causality(
    machine: &Machine,
    horizon: usize,
    budget: &Budget,
) -> Result<CausalityVerdict> {
    budget.check_horizon(horizon)?;
    let iface = machine.interface();
    let traces: Vec<Trace> = enumerate_input_traces(&iface, horizon, budget)?.collect();

    let mut outputs: Vec<BTreeSet<Trace>> = Vec::with_capacity(traces.len());
    for w in &traces {
        outputs.push(crate::semantics::machine_behaviors(machine, w, budget)?);
    }

    for t in 0..horizon {
        // Group input traces by their prefix up to and including tick t;
        // all traces in a group must show identical output prefixes.
        let mut groups: std::collections::BTreeMap<Vec<Assignment>, (usize, BTreeSet<Trace>)> =
            std::collections::BTreeMap::new();
        for (idx, w) in traces.iter().enumerate() {
            let key: Vec<Assignment> = w.frames()[..=t].to_vec();
            let prefix_set: BTreeSet<Trace> =
                outputs[idx].iter().map(|o| o.truncated(t + 1)).collect();
            match groups.get(&key) {
                None => {
                    groups.insert(key, (idx, prefix_set));
                }
                Some((rep_idx, rep_set)) => {
                    if rep_set != &prefix_set {
                        return Ok(CausalityVerdict {
                            kind: CausalityKind::Weak,
                            holds: false,
                            horizon,
                            witness: Some(CausalityWitness {
                                left: traces[*rep_idx].clone(),
                                right: w.clone(),
                                tick: t,
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(CausalityVerdict {
        kind: CausalityKind::Weak,
        holds: true,
        horizon,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_component;

    fn lamp() -> Component {
        parse_component(
            "component Lamp\nin btn : {press, idle}\nout lamp : {off, on}\nstate mode : {Off, On} init Off\n\ngar\nm1: mode = On ==> lamp = on\nm2: mode = Off ==> lamp = off\nt1: mode = Off && btn = press ==> mode' = On\nt2: mode = On && btn = press ==> mode' = Off\nt3: btn = idle ==> mode' = mode\n",
            "inline",
        )
        .unwrap()
    }

    #[test]
    fn lamp_partition() {
        let report = classify_component(&lamp()).unwrap();
        assert_eq!(report.moore, vec!["m1", "m2"]);
        assert!(report.mealy.is_empty());
        assert_eq!(report.transition, vec!["t1", "t2", "t3"]);
        assert!(report.localdef.is_empty());
    }

    #[test]
    fn input_guard_makes_an_output_mealy() {
        let c = parse_component(
            "component Echo\nin btn : {press, idle}\nout echo : {yes, no}\n\ngar\ne1: btn = press ==> echo = yes\n",
            "inline",
        )
        .unwrap();
        assert_eq!(
            classify_formula(&c, &c.formulas[0]).unwrap(),
            FormulaClass::MealyOutput
        );
    }

    #[test]
    fn local_indirection_counts_as_an_input_read() {
        let c = parse_component(
            "component Adder\nin a : int 0..2\nout o : int 0..4\nlocal d : int 0..4\n\ngar\nl1: true ==> d = a + a\no1: true ==> o = d\n",
            "inline",
        )
        .unwrap();
        assert_eq!(
            classify_formula(&c, &c.formulas[0]).unwrap(),
            FormulaClass::LocalDef
        );
        assert_eq!(
            classify_formula(&c, &c.formulas[1]).unwrap(),
            FormulaClass::MealyOutput
        );
    }

    #[test]
    fn mixed_target_is_rejected() {
        let c = parse_component(
            "component Mixed\nin i : {u, v}\nout o : {u, v}\nstate s : {u, v} init u\n\ngar\nf: true ==> o = u && s' = v\n",
            "inline",
        )
        .unwrap();
        match classify_formula(&c, &c.formulas[0]) {
            Err(Error::MixedTarget { label }) => assert_eq!(label, "f"),
            other => panic!("expected mixed target, got {other:?}"),
        }
    }

    #[test]
    fn table_lists_one_row_per_formula() {
        let table = classification_table(&lamp()).unwrap();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].starts_with("label"));
        assert!(lines[1].contains("moore"));
        assert!(lines[3].contains("transition"));
    }
}
