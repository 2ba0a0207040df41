//! Extraction of input-driven locals into a dedicated computation part.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{formula_reads, ChannelDecl, Component, Direction, Formula, SymbolRole, Target};
use crate::semantics::compose;

use super::{emit_formula, ensure_valid, identity_result, rewrite_formula, DecompositionResult, NamePool};

/// Move the selected locals, together with the formulas defining them, into
/// `<name>_loc`; `<name>_core` reads their values over auxiliary channels.
///
/// A local is eligible when its defining formulas read only input channels
/// and other selected locals, without cycles among the selected ones.
pub fn extract_locals(
    comp: &Component,
    selection: &BTreeSet<String>,
) -> Result<DecompositionResult> {
    ensure_valid(comp)?;
    if selection.is_empty() {
        return identity_result(comp);
    }
    for name in selection {
        if !comp.locals().any(|v| &v.name == name) {
            return Err(Error::UnknownLocal(name.clone()));
        }
    }

    // Defining formulas and eligibility.
    let defines_selected = |f: &Formula| {
        f.target_names()
            .any(|t| !t.next && selection.contains(&t.name))
    };
    let moved: Vec<&Formula> = comp.formulas.iter().filter(|f| defines_selected(f)).collect();
    for f in &moved {
        for t in f.target_names() {
            if t.next || !selection.contains(&t.name) {
                return Err(Error::LocalCoTarget {
                    label: f.label.clone(),
                    name: t.to_string(),
                });
            }
        }
        for read in formula_reads(f) {
            match comp.role_of(&read) {
                Some(SymbolRole::Input) => {}
                Some(SymbolRole::Local) if selection.contains(&read) => {}
                Some(SymbolRole::State) => {
                    return Err(Error::LocalStateDep {
                        local: first_selected_target(f, selection),
                        detail: format!("formula {} reads state variable {read}", f.label),
                    });
                }
                Some(SymbolRole::Local) => {
                    return Err(Error::LocalStateDep {
                        local: first_selected_target(f, selection),
                        detail: format!("formula {} reads unselected local {read}", f.label),
                    });
                }
                _ => unreachable!("validated component"),
            }
        }
    }

    // Dependency cycles among the selected locals.
    let mut deps: BTreeMap<&str, BTreeSet<String>> = BTreeMap::new();
    for v in selection {
        let mut reads = BTreeSet::new();
        for f in &moved {
            if f.targets(&Target::current(v)) {
                reads.extend(
                    formula_reads(f)
                        .into_iter()
                        .filter(|r| selection.contains(r)),
                );
            }
        }
        deps.insert(v.as_str(), reads);
    }
    check_acyclic(&deps)?;

    // The computation part: pass-through copies of the inputs it needs, the
    // moved definitions, and one emit per selected local.
    let needed_inputs: BTreeSet<String> = moved
        .iter()
        .flat_map(|f| formula_reads(f))
        .filter(|r| comp.role_of(r) == Some(SymbolRole::Input))
        .collect();

    let mut pool = NamePool::for_component(comp);
    let mut rename: BTreeMap<String, String> = BTreeMap::new();
    let mut aux_channels = BTreeSet::new();
    let mut emits = Vec::new();
    let mut loc_outputs = Vec::new();
    for v in comp.locals().filter(|v| selection.contains(&v.name)) {
        let aux = pool.fresh(format!("__loc_{}", v.name));
        let label = pool.fresh(format!("__emit{aux}"));
        emits.push(emit_formula(label, &aux, &v.name));
        loc_outputs.push(ChannelDecl {
            name: aux.clone(),
            direction: Direction::Output,
            domain: v.domain.clone(),
        });
        aux_channels.insert(aux.clone());
        rename.insert(v.name.clone(), aux);
    }

    let loc_part = Component {
        name: format!("{}_loc", comp.name),
        channels: comp
            .inputs()
            .filter(|c| needed_inputs.contains(&c.name))
            .cloned()
            .chain(loc_outputs)
            .collect(),
        vars: comp
            .vars
            .iter()
            .filter(|v| selection.contains(&v.name))
            .cloned()
            .collect(),
        formulas: moved
            .iter()
            .map(|f| (*f).clone())
            .chain(emits.iter().cloned())
            .collect(),
        pure_requirement: false,
    };

    // The core loses the selected locals and reads the aux channels instead,
    // but only declares those it actually uses.
    let staying: Vec<Formula> = comp
        .formulas
        .iter()
        .filter(|f| !defines_selected(f))
        .map(|f| rewrite_formula(f, &rename))
        .collect();
    let used_aux: BTreeSet<String> = staying
        .iter()
        .flat_map(formula_reads)
        .filter(|r| aux_channels.contains(r))
        .collect();

    let core = Component {
        name: format!("{}_core", comp.name),
        channels: comp
            .inputs()
            .cloned()
            .chain(used_aux.iter().map(|aux| {
                let original = rename
                    .iter()
                    .find(|(_, a)| *a == aux)
                    .map(|(v, _)| v.as_str())
                    .expect("aux name maps back");
                ChannelDecl {
                    name: aux.clone(),
                    direction: Direction::Input,
                    domain: comp.domain_of(original).expect("declared local").clone(),
                }
            }))
            .chain(comp.outputs().cloned())
            .collect(),
        vars: comp
            .vars
            .iter()
            .filter(|v| !selection.contains(&v.name))
            .cloned()
            .collect(),
        formulas: staying,
        pure_requirement: comp.pure_requirement,
    };

    let provenance: BTreeMap<String, String> = comp
        .formulas
        .iter()
        .map(|f| {
            let part = if defines_selected(f) {
                &loc_part.name
            } else {
                &core.name
            };
            (f.label.clone(), part.clone())
        })
        .collect();

    let network = compose(vec![loc_part.clone(), core.clone()], aux_channels.clone())?;
    debug_assert_eq!(network.external_interface(), comp.interface());
    Ok(DecompositionResult {
        parts: vec![loc_part, core],
        network,
        aux_channels,
        provenance,
    })
}

fn first_selected_target(f: &Formula, selection: &BTreeSet<String>) -> String {
    f.target_names()
        .find(|t| selection.contains(&t.name))
        .map(|t| t.name.clone())
        .unwrap_or_default()
}

fn check_acyclic(deps: &BTreeMap<&str, BTreeSet<String>>) -> Result<()> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Visiting,
        Done,
    }
    fn visit(
        node: &str,
        deps: &BTreeMap<&str, BTreeSet<String>>,
        marks: &mut BTreeMap<String, Mark>,
    ) -> Result<()> {
        match marks.get(node) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Visiting) => return Err(Error::LocalCycle(node.to_string())),
            None => {}
        }
        marks.insert(node.to_string(), Mark::Visiting);
        if let Some(reads) = deps.get(node) {
            for dep in reads {
                visit(dep, deps, marks)?;
            }
        }
        marks.insert(node.to_string(), Mark::Done);
        Ok(())
    }
    let mut marks = BTreeMap::new();
    for node in deps.keys() {
        visit(node, deps, &mut marks)?;
    }
    Ok(())
}
