//! The Mealy/Moore split: state, transitions and input-dependent outputs
//! stay in one part; input-independent output logic moves to a stateless
//! part reading state images over auxiliary channels.

use std::collections::{BTreeMap, BTreeSet};

use crate::causality::{classify_formula, FormulaClass};
use crate::error::{Error, Result};
use crate::model::{symbol_footprint, ChannelDecl, Component, Direction};
use crate::semantics::compose;

use super::{emit_formula, ensure_valid, rewrite_formula, DecompositionResult, NamePool};

/// Split `comp` into `<name>_mealy` (transitions, locals, Mealy outputs,
/// state images) and `<name>_moore` (stateless Moore output logic), wired
/// as a zero-delay pipeline.
pub fn split_mealy_moore(comp: &Component) -> Result<DecompositionResult> {
    ensure_valid(comp)?;
    let classes: BTreeMap<&str, FormulaClass> = comp
        .formulas
        .iter()
        .map(|f| classify_formula(comp, f).map(|c| (f.label.as_str(), c)))
        .collect::<Result<_>>()?;

    // An output moves when every formula constraining it is Moore and none
    // of those formulas also constrains something that stays. Closed under
    // co-targeting: a formula moves in one piece or not at all.
    let mut movable: BTreeSet<String> = comp
        .outputs()
        .filter(|o| {
            let targeting: Vec<&crate::model::Formula> = comp
                .formulas
                .iter()
                .filter(|f| f.targets(&crate::model::Target::current(&o.name)))
                .collect();
            !targeting.is_empty()
                && targeting
                    .iter()
                    .all(|f| classes[f.label.as_str()] == FormulaClass::MooreOutput)
        })
        .map(|o| o.name.clone())
        .collect();
    loop {
        let mut changed = false;
        for f in &comp.formulas {
            if classes[f.label.as_str()] != FormulaClass::MooreOutput {
                continue;
            }
            let out_targets: Vec<&str> = f
                .target_names()
                .filter(|t| !t.next && movable.contains(&t.name))
                .map(|t| t.name.as_str())
                .collect();
            if out_targets.is_empty() {
                continue;
            }
            // Pinned if the formula also targets a local or an unmovable
            // output.
            let pinned = f.target_names().any(|t| {
                !t.next
                    && (comp.locals().any(|v| v.name == t.name)
                        || (comp.outputs().any(|o| o.name == t.name) && !movable.contains(&t.name)))
            });
            if pinned {
                for name in out_targets {
                    movable.remove(name);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let moves = |f: &crate::model::Formula| {
        classes[f.label.as_str()] == FormulaClass::MooreOutput
            && f.target_names().all(|t| movable.contains(&t.name))
    };
    let moved: Vec<&crate::model::Formula> = comp.formulas.iter().filter(|f| moves(f)).collect();
    let staying: Vec<&crate::model::Formula> =
        comp.formulas.iter().filter(|f| !moves(f)).collect();
    if moved.is_empty() {
        return Err(Error::NothingToSplit(format!(
            "{} has no separable Moore output formula",
            comp.name
        )));
    }
    if staying.is_empty() {
        return Err(Error::NothingToSplit(format!(
            "{} is entirely Moore output logic; there is no state machine to split it from",
            comp.name
        )));
    }

    // State vars the Moore part reads come over __st_*; locals it reads come
    // over __loc_*. Every state variable is exposed either way.
    let mut read_locals: BTreeSet<String> = BTreeSet::new();
    let mut read_state: BTreeSet<String> = BTreeSet::new();
    for f in &moved {
        let fp = symbol_footprint(f, comp);
        read_locals.extend(fp.reads_locals);
        read_state.extend(fp.reads_state);
    }

    let mut pool = NamePool::for_component(comp);
    let mut rename: BTreeMap<String, String> = BTreeMap::new();
    let mut aux_channels: BTreeSet<String> = BTreeSet::new();
    let mut mealy_aux_ports: Vec<ChannelDecl> = Vec::new();
    let mut emits = Vec::new();
    for v in comp.state_vars() {
        let aux = pool.fresh(format!("__st_{}", v.name));
        let label = pool.fresh(format!("__emit{aux}"));
        emits.push(emit_formula(label, &aux, &v.name));
        mealy_aux_ports.push(ChannelDecl {
            name: aux.clone(),
            direction: Direction::Output,
            domain: v.domain.clone(),
        });
        aux_channels.insert(aux.clone());
        rename.insert(v.name.clone(), aux);
    }
    for v in comp.locals() {
        if !read_locals.contains(&v.name) {
            continue;
        }
        let aux = pool.fresh(format!("__loc_{}", v.name));
        let label = pool.fresh(format!("__emit{aux}"));
        emits.push(emit_formula(label, &aux, &v.name));
        mealy_aux_ports.push(ChannelDecl {
            name: aux.clone(),
            direction: Direction::Output,
            domain: v.domain.clone(),
        });
        aux_channels.insert(aux.clone());
        rename.insert(v.name.clone(), aux);
    }

    let mealy = Component {
        name: format!("{}_mealy", comp.name),
        channels: comp
            .inputs()
            .cloned()
            .chain(
                comp.outputs()
                    .filter(|o| !movable.contains(&o.name))
                    .cloned(),
            )
            .chain(mealy_aux_ports.iter().cloned())
            .collect(),
        vars: comp.vars.clone(),
        formulas: staying
            .iter()
            .map(|f| (*f).clone())
            .chain(emits.iter().cloned())
            .collect(),
        pure_requirement: false,
    };
    if mealy.outputs().next().is_none() {
        return Err(Error::NothingToSplit(format!(
            "the remainder of {} would expose no channel",
            comp.name
        )));
    }

    let moore = Component {
        name: format!("{}_moore", comp.name),
        channels: read_state
            .iter()
            .chain(read_locals.iter())
            .map(|v| ChannelDecl {
                name: rename[v].clone(),
                direction: Direction::Input,
                domain: comp.domain_of(v).expect("declared variable").clone(),
            })
            .chain(
                comp.outputs()
                    .filter(|o| movable.contains(&o.name))
                    .cloned(),
            )
            .collect(),
        vars: vec![],
        formulas: moved.iter().map(|f| rewrite_formula(f, &rename)).collect(),
        pure_requirement: false,
    };

    let provenance: BTreeMap<String, String> = comp
        .formulas
        .iter()
        .map(|f| {
            let part = if moves(f) { &moore.name } else { &mealy.name };
            (f.label.clone(), part.clone())
        })
        .collect();

    let network = compose(vec![mealy.clone(), moore.clone()], aux_channels.clone())?;
    debug_assert_eq!(network.external_interface(), comp.interface());
    Ok(DecompositionResult {
        parts: vec![mealy, moore],
        network,
        aux_channels,
        provenance,
    })
}
