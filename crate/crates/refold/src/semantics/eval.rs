//! Expression evaluation over a current-tick environment.
//!
//! Evaluation is total on validated components: typing rules out mixed
//! operands and interval analysis rules out integer overflow.

use crate::model::{BinaryOp, Expression, Literal, UnaryOp, Value};
use crate::semantics::Assignment;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluated {
    Bool(bool),
    Val(Value),
}

pub fn eval(expr: &Expression, env: &Assignment) -> Evaluated {
    match expr {
        Expression::Literal(Literal::Bool(b)) => Evaluated::Bool(*b),
        Expression::Literal(Literal::Value(v)) => Evaluated::Val(v.clone()),
        Expression::Read { name, .. } => Evaluated::Val(
            env.get(name)
                .unwrap_or_else(|| panic!("unbound symbol {name} in evaluation environment"))
                .clone(),
        ),
        Expression::Unary { op, expr } => match (op, eval(expr, env)) {
            (UnaryOp::Not, Evaluated::Bool(b)) => Evaluated::Bool(!b),
            (UnaryOp::Negate, Evaluated::Val(Value::Int(n))) => Evaluated::Val(Value::Int(-n)),
            _ => unreachable!("ill-typed unary expression survived validation"),
        },
        Expression::Binary { op, lhs, rhs } => {
            // && and || short-circuit; everything else is strict.
            match op {
                BinaryOp::And => {
                    return Evaluated::Bool(as_bool(eval(lhs, env)) && as_bool(eval(rhs, env)));
                }
                BinaryOp::Or => {
                    return Evaluated::Bool(as_bool(eval(lhs, env)) || as_bool(eval(rhs, env)));
                }
                _ => {}
            }
            let a = eval(lhs, env);
            let b = eval(rhs, env);
            match op {
                BinaryOp::Eq => Evaluated::Bool(as_val(a) == as_val(b)),
                BinaryOp::Neq => Evaluated::Bool(as_val(a) != as_val(b)),
                BinaryOp::Lt => Evaluated::Bool(as_int(a) < as_int(b)),
                BinaryOp::Le => Evaluated::Bool(as_int(a) <= as_int(b)),
                BinaryOp::Add => Evaluated::Val(Value::Int(as_int(a) + as_int(b))),
                BinaryOp::Sub => Evaluated::Val(Value::Int(as_int(a) - as_int(b))),
                BinaryOp::And | BinaryOp::Or => unreachable!(),
            }
        }
        Expression::Conditional {
            cond,
            then_branch,
            else_branch,
        } => {
            if as_bool(eval(cond, env)) {
                eval(then_branch, env)
            } else {
                eval(else_branch, env)
            }
        }
    }
}

pub fn eval_bool(expr: &Expression, env: &Assignment) -> bool {
    as_bool(eval(expr, env))
}

pub fn eval_value(expr: &Expression, env: &Assignment) -> Value {
    as_val(eval(expr, env))
}

fn as_bool(e: Evaluated) -> bool {
    match e {
        Evaluated::Bool(b) => b,
        Evaluated::Val(v) => unreachable!("expected bool, evaluated to {v}"),
    }
}

fn as_val(e: Evaluated) -> Value {
    match e {
        Evaluated::Val(v) => v,
        Evaluated::Bool(_) => unreachable!("expected a domain value, evaluated to bool"),
    }
}

fn as_int(e: Evaluated) -> i64 {
    match as_val(e) {
        Value::Int(n) => n,
        v => unreachable!("expected an integer, evaluated to {v}"),
    }
}
