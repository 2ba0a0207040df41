//! Mechanical decomposition schemas. Each schema splits a component into
//! parts wired back together by auxiliary channels so that the composition
//! is behavior-equivalent to the original — an obligation
//! [`verify_decomposition`] discharges by exhaustive bounded comparison.

mod locals;
mod mealy_moore;
mod outputs;
mod verify;

pub use locals::extract_locals;
pub use mealy_moore::split_mealy_moore;
pub use outputs::extract_outputs;
pub use verify::{verify_decomposition, DecompositionCounterexample, DecompositionVerdict};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{
    validate_component, AtomConstraint, Component, Expression, Formula, Literal, Target,
};
use crate::semantics::Network;

/// Parts plus the network that recomposes them. `provenance` maps every
/// original formula label to the part that received it; generated emit
/// formulas are not listed.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub parts: Vec<Component>,
    pub network: Network,
    pub aux_channels: BTreeSet<String>,
    pub provenance: BTreeMap<String, String>,
}

/// The three schemas, in the order they are meant to be chained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    MealyMoore,
    Locals,
    Outputs,
}

impl Schema {
    pub fn as_str(self) -> &'static str {
        match self {
            Schema::MealyMoore => "mealy-moore",
            Schema::Locals => "locals",
            Schema::Outputs => "outputs",
        }
    }
}

pub(crate) fn ensure_valid(comp: &Component) -> Result<()> {
    let diags = validate_component(comp);
    match diags.first() {
        None => Ok(()),
        Some(first) => Err(Error::InvalidComponent {
            name: comp.name.clone(),
            first: first.to_string(),
        }),
    }
}

/// Name generation for auxiliary channels and emit formulas. Keeps every
/// generated name distinct from the component's own names and from earlier
/// generated ones, so re-decomposing an already decomposed part stays safe.
pub(crate) struct NamePool {
    taken: BTreeSet<String>,
}

impl NamePool {
    pub fn for_component(comp: &Component) -> Self {
        let mut taken: BTreeSet<String> = comp.channels.iter().map(|c| c.name.clone()).collect();
        taken.extend(comp.vars.iter().map(|v| v.name.clone()));
        taken.extend(comp.formulas.iter().map(|f| f.label.clone()));
        NamePool { taken }
    }

    pub fn fresh(&mut self, base: String) -> String {
        let mut candidate = base.clone();
        let mut n = 1;
        while !self.taken.insert(candidate.clone()) {
            n += 1;
            candidate = format!("{base}_{n}");
        }
        candidate
    }
}

/// `true ==> aux = var` — the emit formula that exposes a variable on an
/// auxiliary channel.
pub(crate) fn emit_formula(label: String, aux: &str, var: &str) -> Formula {
    Formula {
        label,
        guard: Expression::Literal(Literal::Bool(true)),
        consequent: vec![crate::model::Atom {
            target: Target::current(aux),
            constraint: AtomConstraint::Equals(Expression::read(var)),
        }],
    }
}

/// Rewrite every current-epoch read according to `map`, in the guard and in
/// every equality right-hand side.
pub(crate) fn rewrite_formula(f: &Formula, map: &BTreeMap<String, String>) -> Formula {
    Formula {
        label: f.label.clone(),
        guard: f.guard.rename_reads(map),
        consequent: f
            .consequent
            .iter()
            .map(|a| crate::model::Atom {
                target: a.target.clone(),
                constraint: match &a.constraint {
                    AtomConstraint::Equals(rhs) => AtomConstraint::Equals(rhs.rename_reads(map)),
                    AtomConstraint::In(vs) => AtomConstraint::In(vs.clone()),
                },
            })
            .collect(),
    }
}

/// Identity decomposition: the component itself as a one-part network.
pub(crate) fn identity_result(comp: &Component) -> Result<DecompositionResult> {
    let network = crate::semantics::compose(vec![comp.clone()], BTreeSet::new())?;
    Ok(DecompositionResult {
        parts: vec![comp.clone()],
        network,
        aux_channels: BTreeSet::new(),
        provenance: comp
            .formulas
            .iter()
            .map(|f| (f.label.clone(), comp.name.clone()))
            .collect(),
    })
}
