//! Extraction of pure output definitions into a stateless part.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{symbol_footprint, ChannelDecl, Component, Direction, Formula};
use crate::semantics::compose;

use super::{emit_formula, ensure_valid, identity_result, rewrite_formula, DecompositionResult, NamePool};

/// Move the selected outputs' formulas into a stateless `<name>_out` part
/// reading state and local images over auxiliary channels; `<name>_core`
/// keeps everything else and emits the images. Inputs the moved formulas
/// read pass through to the new part under their own names.
pub fn extract_outputs(
    comp: &Component,
    selection: &BTreeSet<String>,
) -> Result<DecompositionResult> {
    ensure_valid(comp)?;
    if selection.is_empty() {
        return identity_result(comp);
    }
    for name in selection {
        if !comp.outputs().any(|c| &c.name == name) {
            return Err(Error::UnknownOutput(name.clone()));
        }
    }

    let moves = |f: &Formula| {
        f.target_names()
            .any(|t| !t.next && selection.contains(&t.name))
    };
    let moved: Vec<&Formula> = comp.formulas.iter().filter(|f| moves(f)).collect();
    for f in &moved {
        for t in f.target_names() {
            if t.next {
                return Err(Error::OutTargetsState {
                    output: first_selected_target(f, selection),
                    label: f.label.clone(),
                    offender: t.to_string(),
                });
            }
            if comp.locals().any(|v| v.name == t.name) {
                return Err(Error::OutTargetsState {
                    output: first_selected_target(f, selection),
                    label: f.label.clone(),
                    offender: t.name.clone(),
                });
            }
            if !selection.contains(&t.name) {
                return Err(Error::OutCoTarget {
                    label: f.label.clone(),
                    name: t.name.clone(),
                });
            }
        }
    }

    let staying: Vec<&Formula> = comp.formulas.iter().filter(|f| !moves(f)).collect();
    if staying.is_empty() && comp.outputs().count() == selection.len() && comp.vars.is_empty() {
        return Err(Error::NothingToSplit(format!(
            "every formula of {} would move; nothing remains as a core",
            comp.name
        )));
    }

    // State and locals the moved formulas read become aux images the core
    // emits; pass-through inputs keep their names.
    let mut read_state = BTreeSet::new();
    let mut read_locals = BTreeSet::new();
    let mut pass_inputs = BTreeSet::new();
    for f in &moved {
        let fp = symbol_footprint(f, comp);
        read_state.extend(fp.reads_state);
        read_locals.extend(fp.reads_locals);
        pass_inputs.extend(fp.reads_inputs);
    }

    let mut pool = NamePool::for_component(comp);
    let mut rename: BTreeMap<String, String> = BTreeMap::new();
    let mut aux_channels = BTreeSet::new();
    let mut emits = Vec::new();
    let mut aux_ports = Vec::new();
    for v in comp.vars.iter() {
        let (prefix, wanted) = if v.is_state() {
            ("__st_", read_state.contains(&v.name))
        } else {
            ("__loc_", read_locals.contains(&v.name))
        };
        if !wanted {
            continue;
        }
        let aux = pool.fresh(format!("{prefix}{}", v.name));
        let label = pool.fresh(format!("__emit{aux}"));
        emits.push(emit_formula(label, &aux, &v.name));
        aux_ports.push(ChannelDecl {
            name: aux.clone(),
            direction: Direction::Output,
            domain: v.domain.clone(),
        });
        aux_channels.insert(aux.clone());
        rename.insert(v.name.clone(), aux);
    }

    let out_part = Component {
        name: format!("{}_out", comp.name),
        channels: comp
            .inputs()
            .filter(|c| pass_inputs.contains(&c.name))
            .cloned()
            .chain(aux_ports.iter().map(|c| ChannelDecl {
                name: c.name.clone(),
                direction: Direction::Input,
                domain: c.domain.clone(),
            }))
            .chain(comp.outputs().filter(|o| selection.contains(&o.name)).cloned())
            .collect(),
        vars: vec![],
        formulas: moved.iter().map(|f| rewrite_formula(f, &rename)).collect(),
        pure_requirement: false,
    };

    let core = Component {
        name: format!("{}_core", comp.name),
        channels: comp
            .inputs()
            .cloned()
            .chain(comp.outputs().filter(|o| !selection.contains(&o.name)).cloned())
            .chain(aux_ports.iter().cloned())
            .collect(),
        vars: comp.vars.clone(),
        formulas: staying
            .iter()
            .map(|f| (*f).clone())
            .chain(emits.iter().cloned())
            .collect(),
        pure_requirement: false,
    };
    if core.outputs().next().is_none() {
        return Err(Error::NothingToSplit(format!(
            "the core of {} would expose no channel",
            comp.name
        )));
    }

    let provenance: BTreeMap<String, String> = comp
        .formulas
        .iter()
        .map(|f| {
            let part = if moves(f) { &out_part.name } else { &core.name };
            (f.label.clone(), part.clone())
        })
        .collect();

    let network = compose(vec![core.clone(), out_part.clone()], aux_channels.clone())?;
    debug_assert_eq!(network.external_interface(), comp.interface());
    Ok(DecompositionResult {
        parts: vec![core, out_part],
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
