//! Canonical text rendering. Byte-stable for a given component, and an
//! inverse of parsing: `parse(render(c))` equals `c` structurally.

use std::fmt::Write;

use crate::model::{
    AtomConstraint, BinaryOp, Component, Direction, Expression, Formula, Literal, UnaryOp,
    VarKind,
};

/// Render a component in canonical form, one formula per line.
pub fn render_component(comp: &Component) -> String {
    let mut out = String::new();
    let header = if comp.pure_requirement {
        "requirement"
    } else {
        "component"
    };
    let _ = writeln!(out, "{header} {}", comp.name);
    for c in &comp.channels {
        let kw = match c.direction {
            Direction::Input => "in",
            Direction::Output => "out",
        };
        let _ = writeln!(out, "{kw} {} : {}", c.name, c.domain);
    }
    for v in &comp.vars {
        match &v.kind {
            VarKind::State { init } => {
                let _ = writeln!(out, "state {} : {} init {init}", v.name, v.domain);
            }
            VarKind::Local => {
                let _ = writeln!(out, "local {} : {}", v.name, v.domain);
            }
        }
    }
    out.push('\n');
    out.push_str("gar\n");
    for f in &comp.formulas {
        let _ = writeln!(out, "{}", render_formula(f));
    }
    out
}

pub fn render_formula(f: &Formula) -> String {
    let atoms: Vec<String> = f
        .consequent
        .iter()
        .map(|a| match &a.constraint {
            AtomConstraint::Equals(rhs) => {
                format!("{} = {}", a.target, render_expr(rhs, PREC_CMP + 1))
            }
            AtomConstraint::In(values) => {
                let vs: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                format!("{} in {{{}}}", a.target, vs.join(", "))
            }
        })
        .collect();
    format!(
        "{}: {} ==> {}",
        f.label,
        render_expr(&f.guard, 0),
        atoms.join(" && ")
    )
}

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_CMP: u8 = 3;
const PREC_ADD: u8 = 4;
const PREC_UNARY: u8 = 5;

fn prec_of(op: BinaryOp) -> u8 {
    match op {
        BinaryOp::Or => PREC_OR,
        BinaryOp::And => PREC_AND,
        BinaryOp::Eq | BinaryOp::Neq | BinaryOp::Lt | BinaryOp::Le => PREC_CMP,
        BinaryOp::Add | BinaryOp::Sub => PREC_ADD,
    }
}

/// Minimal parentheses by precedence; conditionals are always wrapped.
pub fn render_expr(expr: &Expression, min_prec: u8) -> String {
    match expr {
        Expression::Literal(Literal::Bool(b)) => b.to_string(),
        Expression::Literal(Literal::Value(v)) => v.to_string(),
        Expression::Read { name, .. } => name.clone(),
        Expression::Unary { op, expr } => {
            let symbol = match op {
                UnaryOp::Not => "!",
                UnaryOp::Negate => "-",
            };
            format!("{symbol}{}", render_expr(expr, PREC_UNARY))
        }
        Expression::Binary { op, lhs, rhs } => {
            let prec = prec_of(*op);
            let text = format!(
                "{} {} {}",
                render_expr(lhs, prec),
                op.symbol(),
                render_expr(rhs, prec + 1)
            );
            if prec < min_prec {
                format!("({text})")
            } else {
                text
            }
        }
        Expression::Conditional {
            cond,
            then_branch,
            else_branch,
        } => format!(
            "(if {} then {} else {})",
            render_expr(cond, 0),
            render_expr(then_branch, 0),
            render_expr(else_branch, 0)
        ),
    }
}
