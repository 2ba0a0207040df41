//! Guarded formulas: the unit of classification and decomposition.

use serde::Serialize;

use super::domain::Value;
use super::expr::Expression;

/// What a consequent atom constrains: an output channel, a local variable,
/// or a state variable at the next tick (`next = true`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Target {
    pub name: String,
    pub next: bool,
}

impl Target {
    pub fn current(name: impl Into<String>) -> Self {
        Target {
            name: name.into(),
            next: false,
        }
    }

    pub fn next_state(name: impl Into<String>) -> Self {
        Target {
            name: name.into(),
            next: true,
        }
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.name, if self.next { "'" } else { "" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AtomConstraint {
    /// `target = expr` — the target must equal the expression's value.
    Equals(Expression),
    /// `target in {v1, …}` — the target must be one of the listed values.
    In(Vec<Value>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Atom {
    pub target: Target,
    pub constraint: AtomConstraint,
}

/// One guarded constraint: at every tick, `guard ⟹ consequent`.
///
/// The guard ranges over current-tick inputs, state and locals; the
/// consequent is a conjunction of atoms constraining outputs, locals and
/// next-tick state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Formula {
    pub label: String,
    pub guard: Expression,
    pub consequent: Vec<Atom>,
}

impl Formula {
    /// True when the formula constrains the named target.
    pub fn targets(&self, target: &Target) -> bool {
        self.consequent.iter().any(|a| &a.target == target)
    }

    pub fn target_names(&self) -> impl Iterator<Item = &Target> {
        self.consequent.iter().map(|a| &a.target)
    }
}
