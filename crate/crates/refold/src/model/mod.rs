//! Core data model: domains, expressions, formulas and components.

mod component;
mod domain;
mod expr;
mod formula;
mod validate;

pub use component::{
    formula_reads, interface_of, symbol_footprint, ChannelDecl, Component, Direction, Interface,
    SymbolFootprint, SymbolRole, VarDecl, VarKind,
};
pub use domain::{SymValue, Value, ValueDomain, MAX_DOMAIN_SIZE};
pub use expr::{BinaryOp, Epoch, Expression, Literal, UnaryOp};
pub use formula::{Atom, AtomConstraint, Formula, Target};
pub use validate::{interval, validate_component, ExprType};
