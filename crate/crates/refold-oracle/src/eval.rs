//! A second, independent expression evaluator. Integer arithmetic runs in
//! i128 so the oracle cannot silently wrap even on inputs the engine's
//! interval analysis would reject.

use std::collections::BTreeMap;

use refold::model::{BinaryOp, Expression, Literal, UnaryOp, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OValue {
    Bool(bool),
    Int(i128),
    Sym(u16, String),
}

impl OValue {
    fn of(value: &Value) -> OValue {
        match value {
            Value::Int(n) => OValue::Int(*n as i128),
            Value::Sym(s) => OValue::Sym(s.ord, s.label.clone()),
        }
    }

    fn truth(&self) -> bool {
        match self {
            OValue::Bool(b) => *b,
            _ => panic!("oracle: boolean expected"),
        }
    }

    fn int(&self) -> i128 {
        match self {
            OValue::Int(n) => *n,
            _ => panic!("oracle: integer expected"),
        }
    }
}

pub fn oracle_eval(expr: &Expression, env: &BTreeMap<String, Value>) -> OValue {
    match expr {
        Expression::Literal(Literal::Bool(b)) => OValue::Bool(*b),
        Expression::Literal(Literal::Value(v)) => OValue::of(v),
        Expression::Read { name, .. } => OValue::of(
            env.get(name)
                .unwrap_or_else(|| panic!("oracle: unbound symbol {name}")),
        ),
        Expression::Unary { op, expr } => {
            let v = oracle_eval(expr, env);
            match op {
                UnaryOp::Not => OValue::Bool(!v.truth()),
                UnaryOp::Negate => OValue::Int(-v.int()),
            }
        }
        Expression::Binary { op, lhs, rhs } => {
            let a = oracle_eval(lhs, env);
            let b = oracle_eval(rhs, env);
            match op {
                BinaryOp::And => OValue::Bool(a.truth() && b.truth()),
                BinaryOp::Or => OValue::Bool(a.truth() || b.truth()),
                BinaryOp::Eq => OValue::Bool(a == b),
                BinaryOp::Neq => OValue::Bool(a != b),
                BinaryOp::Lt => OValue::Bool(a.int() < b.int()),
                BinaryOp::Le => OValue::Bool(a.int() <= b.int()),
                BinaryOp::Add => OValue::Int(a.int() + b.int()),
                BinaryOp::Sub => OValue::Int(a.int() - b.int()),
            }
        }
        Expression::Conditional {
            cond,
            then_branch,
            else_branch,
        } => {
            if oracle_eval(cond, env).truth() {
                oracle_eval(then_branch, env)
            } else {
                oracle_eval(else_branch, env)
            }
        }
    }
}

/// Equality between an oracle value and a concrete domain value.
pub fn ovalue_matches(a: &OValue, b: &Value) -> bool {
    a == &OValue::of(b)
}
