//! Well-formedness validation: name resolution, static typing, target role
//! checks and interval analysis for integer expressions.

use std::collections::BTreeSet;

use super::component::{Component, SymbolRole};
use super::domain::{Value, ValueDomain, MAX_DOMAIN_SIZE};
use super::expr::{BinaryOp, Epoch, Expression, Literal, UnaryOp};
use super::formula::{Atom, AtomConstraint, Formula};
use crate::diag::{DiagCode, Diagnostic};

/// Static type of an expression. Integer ranges all share `Int`; ranges are
/// handled separately by interval analysis. Enumerations compare by their
/// label list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprType {
    Bool,
    Int,
    Enum(Vec<String>),
}

impl ExprType {
    pub fn of_domain(domain: &ValueDomain) -> ExprType {
        match domain {
            ValueDomain::Enumeration(labels) => ExprType::Enum(labels.clone()),
            ValueDomain::BoundedInt { .. } => ExprType::Int,
        }
    }

    fn describe(&self) -> String {
        match self {
            ExprType::Bool => "bool".into(),
            ExprType::Int => "int".into(),
            ExprType::Enum(labels) => format!("{{{}}}", labels.join(", ")),
        }
    }
}

/// Check every invariant of the component model and report all violations.
/// An empty result means the component is valid.
pub fn validate_component(comp: &Component) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    check_domains(comp, &mut diags);
    check_names(comp, &mut diags);
    check_inits(comp, &mut diags);

    if comp.outputs().next().is_none() && !comp.pure_requirement {
        diags.push(Diagnostic::new(
            DiagCode::ENoOutput,
            format!("component {} declares no output channel", comp.name),
        ));
    }

    let mut seen_labels = BTreeSet::new();
    for f in &comp.formulas {
        if !seen_labels.insert(f.label.clone()) {
            diags.push(
                Diagnostic::new(
                    DiagCode::EDupLabel,
                    format!("duplicate formula label {}", f.label),
                )
                .with_label(&f.label),
            );
        }
        check_formula(comp, f, &mut diags);
    }

    diags
}

fn check_domains(comp: &Component, diags: &mut Vec<Diagnostic>) {
    let mut check = |name: &str, domain: &ValueDomain| match domain {
        ValueDomain::Enumeration(labels) => {
            if labels.is_empty() {
                diags.push(Diagnostic::new(
                    DiagCode::EBadDomain,
                    format!("{name}: enumeration must have at least one label"),
                ));
            }
            let mut seen = BTreeSet::new();
            for l in labels {
                if !seen.insert(l) {
                    diags.push(Diagnostic::new(
                        DiagCode::EBadDomain,
                        format!("{name}: duplicate enumeration label {l}"),
                    ));
                }
            }
            if labels.len() as i128 > MAX_DOMAIN_SIZE {
                diags.push(Diagnostic::new(
                    DiagCode::EBadDomain,
                    format!("{name}: domain exceeds {MAX_DOMAIN_SIZE} values"),
                ));
            }
        }
        ValueDomain::BoundedInt { lo, hi } => {
            if lo > hi {
                diags.push(Diagnostic::new(
                    DiagCode::EBadDomain,
                    format!("{name}: empty integer range {lo}..{hi}"),
                ));
            } else if *hi as i128 - *lo as i128 + 1 > MAX_DOMAIN_SIZE {
                diags.push(Diagnostic::new(
                    DiagCode::EBadDomain,
                    format!("{name}: integer range wider than {MAX_DOMAIN_SIZE} values"),
                ));
            }
        }
    };
    for c in &comp.channels {
        check(&c.name, &c.domain);
    }
    for v in &comp.vars {
        check(&v.name, &v.domain);
    }
}

fn check_names(comp: &Component, diags: &mut Vec<Diagnostic>) {
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let names = comp
        .channels
        .iter()
        .map(|c| c.name.as_str())
        .chain(comp.vars.iter().map(|v| v.name.as_str()));
    for name in names {
        if !seen.insert(name) {
            diags.push(Diagnostic::new(
                DiagCode::EDupName,
                format!("duplicate declaration of {name}"),
            ));
        }
    }
    // Enumeration labels may not shadow declared symbols; a shadowed label
    // would be unreadable in the textual form.
    let domains = comp
        .channels
        .iter()
        .map(|c| (&c.name, &c.domain))
        .chain(comp.vars.iter().map(|v| (&v.name, &v.domain)));
    for (owner, domain) in domains {
        if let ValueDomain::Enumeration(labels) = domain {
            for l in labels {
                if seen.contains(l.as_str()) {
                    diags.push(Diagnostic::new(
                        DiagCode::EDupName,
                        format!("label {l} of {owner} shadows a declared symbol"),
                    ));
                }
            }
        }
    }
}

fn check_inits(comp: &Component, diags: &mut Vec<Diagnostic>) {
    for v in comp.state_vars() {
        if let super::component::VarKind::State { init } = &v.kind {
            if !v.domain.contains(init) {
                diags.push(Diagnostic::new(
                    DiagCode::EBadInit,
                    format!("initial value {init} of {} outside its domain {}", v.name, v.domain),
                ));
            }
        }
    }
}

fn check_formula(comp: &Component, f: &Formula, diags: &mut Vec<Diagnostic>) {
    let mut ctx = ExprCtx {
        comp,
        label: &f.label,
        in_guard: true,
        diags,
    };
    ctx.check(&f.guard, Some(&ExprType::Bool));

    if f.consequent.is_empty() {
        diags.push(
            Diagnostic::new(DiagCode::EType, "consequent must contain at least one atom")
                .with_label(&f.label),
        );
        return;
    }

    let mut seen_targets: BTreeSet<&super::formula::Target> = BTreeSet::new();
    for atom in &f.consequent {
        if !seen_targets.insert(&atom.target) {
            diags.push(
                Diagnostic::new(
                    DiagCode::EDupTarget,
                    format!("target {} constrained twice", atom.target),
                )
                .with_label(&f.label),
            );
        }
        check_atom(comp, f, atom, diags);
    }
}

fn check_atom(comp: &Component, f: &Formula, atom: &Atom, diags: &mut Vec<Diagnostic>) {
    let target = &atom.target;
    let role = comp.role_of(&target.name);
    match role {
        None => {
            diags.push(
                Diagnostic::new(
                    DiagCode::EUnknownSymbol,
                    format!("unknown target {}", target.name),
                )
                .with_label(&f.label),
            );
            return;
        }
        Some(SymbolRole::Input) => {
            diags.push(
                Diagnostic::new(
                    DiagCode::ETargetInput,
                    format!("input channel {} cannot be a target", target.name),
                )
                .with_label(&f.label),
            );
            return;
        }
        Some(SymbolRole::State) if !target.next => {
            diags.push(
                Diagnostic::new(
                    DiagCode::ETargetStateCurrent,
                    format!("state variable {} may only be targeted at the next tick ({}')",
                        target.name, target.name),
                )
                .with_label(&f.label),
            );
            return;
        }
        Some(SymbolRole::Output) | Some(SymbolRole::Local) if target.next => {
            diags.push(
                Diagnostic::new(
                    DiagCode::EType,
                    format!("next-tick marker is only legal on state variables, not {}", target.name),
                )
                .with_label(&f.label),
            );
            return;
        }
        _ => {}
    }

    let domain = comp.domain_of(&target.name).expect("role implies domain");
    match &atom.constraint {
        AtomConstraint::Equals(rhs) => {
            let mut ctx = ExprCtx {
                comp,
                label: &f.label,
                in_guard: false,
                diags,
            };
            let expected = ExprType::of_domain(domain);
            ctx.check(rhs, Some(&expected));
            if let ValueDomain::BoundedInt { lo, hi } = domain {
                if let Some((ilo, ihi)) = interval(rhs, comp) {
                    if ilo < *lo as i128 || ihi > *hi as i128 {
                        diags.push(
                            Diagnostic::new(
                                DiagCode::ERange,
                                format!(
                                    "value of {} ranges over [{ilo},{ihi}], outside its domain [{lo},{hi}]",
                                    target.name
                                ),
                            )
                            .with_label(&f.label),
                        );
                    }
                }
            }
        }
        AtomConstraint::In(values) => {
            if values.is_empty() {
                diags.push(
                    Diagnostic::new(DiagCode::EType, "membership constraint with no values")
                        .with_label(&f.label),
                );
            }
            for v in values {
                if !domain.contains(v) {
                    diags.push(
                        Diagnostic::new(
                            DiagCode::ERange,
                            format!("value {v} outside the domain {} of {}", domain, target.name),
                        )
                        .with_label(&f.label),
                    );
                }
            }
        }
    }
}

struct ExprCtx<'a> {
    comp: &'a Component,
    label: &'a str,
    in_guard: bool,
    diags: &'a mut Vec<Diagnostic>,
}

impl ExprCtx<'_> {
    fn push(&mut self, code: DiagCode, message: String) {
        self.diags
            .push(Diagnostic::new(code, message).with_label(self.label));
    }

    /// Bidirectional type check. Returns the expression's type, or `None`
    /// after reporting a diagnostic (errors do not cascade).
    fn check(&mut self, expr: &Expression, expected: Option<&ExprType>) -> Option<ExprType> {
        let ty = self.infer(expr, expected)?;
        if let Some(want) = expected {
            if &ty != want {
                self.push(
                    DiagCode::EType,
                    format!("expected {}, found {}", want.describe(), ty.describe()),
                );
                return None;
            }
        }
        Some(ty)
    }

    fn infer(&mut self, expr: &Expression, expected: Option<&ExprType>) -> Option<ExprType> {
        match expr {
            Expression::Literal(Literal::Bool(_)) => Some(ExprType::Bool),
            Expression::Literal(Literal::Value(Value::Int(_))) => Some(ExprType::Int),
            Expression::Literal(Literal::Value(Value::Sym(sym))) => match expected {
                Some(ExprType::Enum(labels)) => {
                    if labels.get(sym.ord as usize).map(String::as_str) == Some(sym.label.as_str())
                    {
                        Some(ExprType::Enum(labels.clone()))
                    } else {
                        self.push(
                            DiagCode::EType,
                            format!("label {} does not belong to {{{}}}", sym.label, labels.join(", ")),
                        );
                        None
                    }
                }
                Some(other) => {
                    self.push(
                        DiagCode::EType,
                        format!("expected {}, found label {}", other.describe(), sym.label),
                    );
                    None
                }
                None => {
                    self.push(
                        DiagCode::EType,
                        format!("cannot determine the domain of label {}", sym.label),
                    );
                    None
                }
            },
            Expression::Read { name, epoch } => {
                if *epoch == Epoch::Next {
                    let code = if self.in_guard {
                        DiagCode::ENextInGuard
                    } else {
                        DiagCode::EType
                    };
                    self.push(code, format!("next-tick read of {name} is not an expression"));
                    return None;
                }
                match self.comp.role_of(name) {
                    None => {
                        self.push(DiagCode::EUnknownSymbol, format!("unknown symbol {name}"));
                        None
                    }
                    Some(SymbolRole::Output) => {
                        self.push(
                            DiagCode::EReadOutput,
                            format!("output channel {name} cannot be read"),
                        );
                        None
                    }
                    Some(_) => Some(ExprType::of_domain(self.comp.domain_of(name).unwrap())),
                }
            }
            Expression::Unary { op, expr } => match op {
                UnaryOp::Not => {
                    self.check(expr, Some(&ExprType::Bool))?;
                    Some(ExprType::Bool)
                }
                UnaryOp::Negate => {
                    self.check(expr, Some(&ExprType::Int))?;
                    Some(ExprType::Int)
                }
            },
            Expression::Binary { op, lhs, rhs } => match op {
                BinaryOp::And | BinaryOp::Or => {
                    let a = self.check(lhs, Some(&ExprType::Bool));
                    let b = self.check(rhs, Some(&ExprType::Bool));
                    a.and(b)?;
                    Some(ExprType::Bool)
                }
                BinaryOp::Eq | BinaryOp::Neq => {
                    // Try the side that can be inferred without context first;
                    // if neither side infers, report the left one.
                    let t = match self.try_infer_silently(lhs) {
                        Some(t) => {
                            self.check(rhs, Some(&t))?;
                            t
                        }
                        None => match self.try_infer_silently(rhs) {
                            Some(t) => {
                                self.check(lhs, Some(&t))?;
                                t
                            }
                            None => {
                                self.infer(lhs, None)?;
                                return None;
                            }
                        },
                    };
                    if t == ExprType::Bool {
                        self.push(
                            DiagCode::EType,
                            "equality compares domain values, not booleans".into(),
                        );
                        return None;
                    }
                    Some(ExprType::Bool)
                }
                BinaryOp::Lt | BinaryOp::Le => {
                    let a = self.check(lhs, Some(&ExprType::Int));
                    let b = self.check(rhs, Some(&ExprType::Int));
                    a.and(b)?;
                    Some(ExprType::Bool)
                }
                BinaryOp::Add | BinaryOp::Sub => {
                    let a = self.check(lhs, Some(&ExprType::Int));
                    let b = self.check(rhs, Some(&ExprType::Int));
                    a.and(b)?;
                    Some(ExprType::Int)
                }
            },
            Expression::Conditional {
                cond,
                then_branch,
                else_branch,
            } => {
                self.check(cond, Some(&ExprType::Bool));
                match expected {
                    Some(want) => {
                        let a = self.check(then_branch, Some(want));
                        let b = self.check(else_branch, Some(want));
                        a.and(b)?;
                        Some(want.clone())
                    }
                    None => {
                        let t = self.check(then_branch, None)?;
                        self.check(else_branch, Some(&t))?;
                        Some(t)
                    }
                }
            }
        }
    }

    /// Infer without emitting diagnostics; used to pick an inference
    /// direction for equality.
    fn try_infer_silently(&mut self, expr: &Expression) -> Option<ExprType> {
        let mut scratch = Vec::new();
        let mut probe = ExprCtx {
            comp: self.comp,
            label: self.label,
            in_guard: self.in_guard,
            diags: &mut scratch,
        };
        let ty = probe.infer(expr, None);
        if scratch.is_empty() {
            ty
        } else {
            None
        }
    }
}

/// Interval of an integer-typed expression, with saturating i128 bounds.
/// Returns `None` for non-integer or unresolvable subtrees.
pub fn interval(expr: &Expression, comp: &Component) -> Option<(i128, i128)> {
    match expr {
        Expression::Literal(Literal::Value(Value::Int(n))) => Some((*n as i128, *n as i128)),
        Expression::Literal(_) => None,
        Expression::Read { name, epoch } => {
            if *epoch == Epoch::Next {
                return None;
            }
            match comp.domain_of(name)? {
                ValueDomain::BoundedInt { lo, hi } => Some((*lo as i128, *hi as i128)),
                ValueDomain::Enumeration(_) => None,
            }
        }
        Expression::Unary {
            op: UnaryOp::Negate,
            expr,
        } => {
            let (lo, hi) = interval(expr, comp)?;
            Some((hi.saturating_neg(), lo.saturating_neg()))
        }
        Expression::Unary { .. } => None,
        Expression::Binary { op, lhs, rhs } => {
            let (alo, ahi) = interval(lhs, comp)?;
            let (blo, bhi) = interval(rhs, comp)?;
            match op {
                BinaryOp::Add => Some((alo.saturating_add(blo), ahi.saturating_add(bhi))),
                BinaryOp::Sub => Some((alo.saturating_sub(bhi), ahi.saturating_sub(blo))),
                _ => None,
            }
        }
        Expression::Conditional {
            then_branch,
            else_branch,
            ..
        } => {
            let (alo, ahi) = interval(then_branch, comp)?;
            let (blo, bhi) = interval(else_branch, comp)?;
            Some((alo.min(blo), ahi.max(bhi)))
        }
    }
}
