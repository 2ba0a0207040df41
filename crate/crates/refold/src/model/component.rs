//! Components: named specifications with typed channels, variables and
//! guarded formulas.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::domain::{Value, ValueDomain};
use super::expr::Epoch;
use super::formula::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChannelDecl {
    pub name: String,
    pub direction: Direction,
    pub domain: ValueDomain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum VarKind {
    /// Persists across ticks; carries the automaton's initial value.
    State { init: Value },
    /// Recomputed every tick; never carries a value across ticks.
    Local,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VarDecl {
    pub name: String,
    pub kind: VarKind,
    pub domain: ValueDomain,
}

impl VarDecl {
    pub fn is_state(&self) -> bool {
        matches!(self.kind, VarKind::State { .. })
    }
}

/// The role a name plays inside a component, resolved by declaration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolRole {
    Input,
    Output,
    State,
    Local,
}

/// A named specification. `pure_requirement` marks requirement specs, which
/// are allowed to declare no output channels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub name: String,
    pub channels: Vec<ChannelDecl>,
    pub vars: Vec<VarDecl>,
    pub formulas: Vec<Formula>,
    pub pure_requirement: bool,
}

impl Component {
    pub fn inputs(&self) -> impl Iterator<Item = &ChannelDecl> {
        self.channels
            .iter()
            .filter(|c| c.direction == Direction::Input)
    }

    pub fn outputs(&self) -> impl Iterator<Item = &ChannelDecl> {
        self.channels
            .iter()
            .filter(|c| c.direction == Direction::Output)
    }

    pub fn state_vars(&self) -> impl Iterator<Item = &VarDecl> {
        self.vars.iter().filter(|v| v.is_state())
    }

    pub fn locals(&self) -> impl Iterator<Item = &VarDecl> {
        self.vars.iter().filter(|v| !v.is_state())
    }

    pub fn role_of(&self, name: &str) -> Option<SymbolRole> {
        for c in &self.channels {
            if c.name == name {
                return Some(match c.direction {
                    Direction::Input => SymbolRole::Input,
                    Direction::Output => SymbolRole::Output,
                });
            }
        }
        for v in &self.vars {
            if v.name == name {
                return Some(if v.is_state() {
                    SymbolRole::State
                } else {
                    SymbolRole::Local
                });
            }
        }
        None
    }

    pub fn domain_of(&self, name: &str) -> Option<&ValueDomain> {
        self.channels
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.domain)
            .or_else(|| self.vars.iter().find(|v| v.name == name).map(|v| &v.domain))
    }

    pub fn formula(&self, label: &str) -> Option<&Formula> {
        self.formulas.iter().find(|f| f.label == label)
    }

    /// The declared initial state: one value per state variable.
    pub fn initial_state(&self) -> BTreeMap<String, Value> {
        self.vars
            .iter()
            .filter_map(|v| match &v.kind {
                VarKind::State { init } => Some((v.name.clone(), init.clone())),
                VarKind::Local => None,
            })
            .collect()
    }

    pub fn interface(&self) -> Interface {
        Interface {
            inputs: self
                .inputs()
                .map(|c| (c.name.clone(), c.domain.clone()))
                .collect(),
            outputs: self
                .outputs()
                .map(|c| (c.name.clone(), c.domain.clone()))
                .collect(),
        }
    }
}

/// The externally visible ports of a component or network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interface {
    pub inputs: BTreeMap<String, ValueDomain>,
    pub outputs: BTreeMap<String, ValueDomain>,
}

impl Interface {
    pub fn describe(&self) -> String {
        let list = |m: &BTreeMap<String, ValueDomain>| {
            m.iter()
                .map(|(n, d)| format!("{n}: {d}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!("in [{}] out [{}]", list(&self.inputs), list(&self.outputs))
    }
}

/// The interface of a valid component: inputs and outputs by declaration.
pub fn interface_of(comp: &Component) -> Interface {
    comp.interface()
}

/// Which symbols a formula reads and constrains, split by role. Purely
/// syntactic: independent of every other formula in the component.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SymbolFootprint {
    pub reads_inputs: BTreeSet<String>,
    pub reads_state: BTreeSet<String>,
    pub reads_locals: BTreeSet<String>,
    pub targets_outputs: BTreeSet<String>,
    pub targets_state: BTreeSet<String>,
    pub targets_locals: BTreeSet<String>,
}

/// Scan guard and consequent of `f`, resolving each symbol against `comp`'s
/// declarations. Unresolvable names are ignored here; validation reports them.
pub fn symbol_footprint(f: &Formula, comp: &Component) -> SymbolFootprint {
    let mut fp = SymbolFootprint::default();
    let mut note_read = |name: &str| match comp.role_of(name) {
        Some(SymbolRole::Input) => {
            fp.reads_inputs.insert(name.to_string());
        }
        Some(SymbolRole::State) => {
            fp.reads_state.insert(name.to_string());
        }
        Some(SymbolRole::Local) => {
            fp.reads_locals.insert(name.to_string());
        }
        _ => {}
    };
    for (name, epoch) in f.guard.reads() {
        if epoch == Epoch::Current {
            note_read(name);
        }
    }
    for atom in &f.consequent {
        if let super::formula::AtomConstraint::Equals(rhs) = &atom.constraint {
            for (name, epoch) in rhs.reads() {
                if epoch == Epoch::Current {
                    note_read(name);
                }
            }
        }
    }
    for atom in &f.consequent {
        let t = &atom.target;
        match comp.role_of(&t.name) {
            Some(SymbolRole::Output) if !t.next => {
                fp.targets_outputs.insert(t.name.clone());
            }
            Some(SymbolRole::State) if t.next => {
                fp.targets_state.insert(t.name.clone());
            }
            Some(SymbolRole::Local) if !t.next => {
                fp.targets_locals.insert(t.name.clone());
            }
            _ => {}
        }
    }
    fp
}

/// Expression helper: all symbols a formula reads at the current epoch,
/// regardless of role.
pub fn formula_reads(f: &Formula) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = f
        .guard
        .reads()
        .into_iter()
        .filter(|(_, e)| *e == Epoch::Current)
        .map(|(n, _)| n.to_string())
        .collect();
    for atom in &f.consequent {
        if let super::formula::AtomConstraint::Equals(rhs) = &atom.constraint {
            out.extend(
                rhs.reads()
                    .into_iter()
                    .filter(|(_, e)| *e == Epoch::Current)
                    .map(|(n, _)| n.to_string()),
            );
        }
    }
    out
}
