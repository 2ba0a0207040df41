//! Expression trees for guards and atom right-hand sides.

use serde::Serialize;

use super::domain::Value;

/// Which tick a symbol read refers to. `Next` is only legal on state
/// variables appearing as equality targets in a consequent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Epoch {
    Current,
    Next,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UnaryOp {
    Not,
    Negate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BinaryOp {
    And,
    Or,
    Eq,
    Neq,
    Lt,
    Le,
    Add,
    Sub,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
            BinaryOp::Eq => "=",
            BinaryOp::Neq => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
        }
    }
}

/// Literal values occurring in expressions. Booleans exist only inside
/// expressions; channels and variables never carry a boolean domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Literal {
    Bool(bool),
    Value(Value),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Expression {
    Literal(Literal),
    Read { name: String, epoch: Epoch },
    Unary { op: UnaryOp, expr: Box<Expression> },
    Binary { op: BinaryOp, lhs: Box<Expression>, rhs: Box<Expression> },
    Conditional { cond: Box<Expression>, then_branch: Box<Expression>, else_branch: Box<Expression> },
}

impl Expression {
    pub fn lit_true() -> Self {
        Expression::Literal(Literal::Bool(true))
    }

    pub fn read(name: impl Into<String>) -> Self {
        Expression::Read {
            name: name.into(),
            epoch: Epoch::Current,
        }
    }

    pub fn value(v: Value) -> Self {
        Expression::Literal(Literal::Value(v))
    }

    pub fn binary(op: BinaryOp, lhs: Expression, rhs: Expression) -> Self {
        Expression::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    /// Every symbol read in the tree with its epoch; pre-order, duplicates kept.
    pub fn reads(&self) -> Vec<(&str, Epoch)> {
        let mut out = Vec::new();
        self.collect_reads(&mut out);
        out
    }

    fn collect_reads<'a>(&'a self, out: &mut Vec<(&'a str, Epoch)>) {
        match self {
            Expression::Literal(_) => {}
            Expression::Read { name, epoch } => out.push((name, *epoch)),
            Expression::Unary { expr, .. } => expr.collect_reads(out),
            Expression::Binary { lhs, rhs, .. } => {
                lhs.collect_reads(out);
                rhs.collect_reads(out);
            }
            Expression::Conditional {
                cond,
                then_branch,
                else_branch,
            } => {
                cond.collect_reads(out);
                then_branch.collect_reads(out);
                else_branch.collect_reads(out);
            }
        }
    }

    /// Tree size, used by the extraction advisory heuristic.
    pub fn node_count(&self) -> usize {
        match self {
            Expression::Literal(_) | Expression::Read { .. } => 1,
            Expression::Unary { expr, .. } => 1 + expr.node_count(),
            Expression::Binary { lhs, rhs, .. } => 1 + lhs.node_count() + rhs.node_count(),
            Expression::Conditional {
                cond,
                then_branch,
                else_branch,
            } => 1 + cond.node_count() + then_branch.node_count() + else_branch.node_count(),
        }
    }

    /// Rewrite every current-epoch read of a name in `map` to read the mapped
    /// name instead. Used by the decomposition schemas when a variable turns
    /// into an auxiliary channel.
    pub fn rename_reads(&self, map: &std::collections::BTreeMap<String, String>) -> Expression {
        match self {
            Expression::Literal(_) => self.clone(),
            Expression::Read { name, epoch } => {
                if *epoch == Epoch::Current {
                    if let Some(new) = map.get(name) {
                        return Expression::Read {
                            name: new.clone(),
                            epoch: Epoch::Current,
                        };
                    }
                }
                self.clone()
            }
            Expression::Unary { op, expr } => Expression::Unary {
                op: *op,
                expr: Box::new(expr.rename_reads(map)),
            },
            Expression::Binary { op, lhs, rhs } => Expression::Binary {
                op: *op,
                lhs: Box::new(lhs.rename_reads(map)),
                rhs: Box::new(rhs.rename_reads(map)),
            },
            Expression::Conditional {
                cond,
                then_branch,
                else_branch,
            } => Expression::Conditional {
                cond: Box::new(cond.rename_reads(map)),
                then_branch: Box::new(then_branch.rename_reads(map)),
                else_branch: Box::new(else_branch.rename_reads(map)),
            },
        }
    }
}
