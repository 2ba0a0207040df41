//! Value domains and runtime values.
//!
//! Every channel and variable carries a finite domain: either a named
//! enumeration or a bounded integer range. Finiteness is what makes the
//! bounded checks in [`crate::semantics`] exhaustive.

use std::fmt;

use serde::Serialize;

/// Largest number of values a single domain may hold. Keeps per-tick
/// candidate enumeration cheap enough for exhaustive checking.
pub const MAX_DOMAIN_SIZE: i128 = 64;

/// The finite set of values a channel or variable ranges over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ValueDomain {
    /// Ordered, distinct labels. The declaration order is the domain order
    /// used for enumeration and for lexicographic comparisons.
    Enumeration(Vec<String>),
    /// Inclusive integer range.
    BoundedInt { lo: i64, hi: i64 },
}

impl ValueDomain {
    pub fn size(&self) -> usize {
        match self {
            ValueDomain::Enumeration(labels) => labels.len(),
            ValueDomain::BoundedInt { lo, hi } => (*hi as i128 - *lo as i128 + 1) as usize,
        }
    }

    pub fn contains(&self, value: &Value) -> bool {
        match (self, value) {
            (ValueDomain::Enumeration(labels), Value::Sym(sym)) => {
                labels.get(sym.ord as usize).map(String::as_str) == Some(sym.label.as_str())
            }
            (ValueDomain::BoundedInt { lo, hi }, Value::Int(n)) => lo <= n && n <= hi,
            _ => false,
        }
    }

    /// All values of the domain in domain order.
    pub fn values(&self) -> Vec<Value> {
        match self {
            ValueDomain::Enumeration(labels) => labels
                .iter()
                .enumerate()
                .map(|(ord, label)| {
                    Value::Sym(SymValue {
                        ord: ord as u16,
                        label: label.clone(),
                    })
                })
                .collect(),
            ValueDomain::BoundedInt { lo, hi } => (*lo..=*hi).map(Value::Int).collect(),
        }
    }

    /// Resolve a label or integer literal against this domain.
    pub fn resolve(&self, text: &str) -> Option<Value> {
        match self {
            ValueDomain::Enumeration(labels) => {
                labels.iter().position(|l| l == text).map(|ord| {
                    Value::Sym(SymValue {
                        ord: ord as u16,
                        label: text.to_string(),
                    })
                })
            }
            ValueDomain::BoundedInt { lo, hi } => {
                let n: i64 = text.parse().ok()?;
                (*lo <= n && n <= *hi).then_some(Value::Int(n))
            }
        }
    }
}

impl fmt::Display for ValueDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueDomain::Enumeration(labels) => write!(f, "{{{}}}", labels.join(", ")),
            ValueDomain::BoundedInt { lo, hi } => write!(f, "int {lo}..{hi}"),
        }
    }
}

/// An enumeration value. `ord` is the label's position in its declaring
/// domain, so deriving `Ord` yields domain order rather than string order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SymValue {
    pub ord: u16,
    pub label: String,
}

/// A runtime value. Ordering follows domain order: numeric for integers,
/// declaration order for enumeration labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Value {
    Int(i64),
    Sym(SymValue),
}

impl Value {
    pub fn sym(ord: u16, label: impl Into<String>) -> Self {
        Value::Sym(SymValue {
            ord,
            label: label.into(),
        })
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Sym(sym) => f.write_str(&sym.label),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enum_values_keep_declaration_order() {
        let d = ValueDomain::Enumeration(vec!["press".into(), "idle".into()]);
        let vs = d.values();
        assert_eq!(vs.len(), 2);
        assert!(vs[0] < vs[1]);
        assert_eq!(vs[0].to_string(), "press");
    }

    #[test]
    fn int_domain_contains_bounds() {
        let d = ValueDomain::BoundedInt { lo: 0, hi: 3 };
        assert!(d.contains(&Value::Int(0)));
        assert!(d.contains(&Value::Int(3)));
        assert!(!d.contains(&Value::Int(4)));
        assert_eq!(d.size(), 4);
    }

    #[test]
    fn resolve_label_and_int() {
        let e = ValueDomain::Enumeration(vec!["off".into(), "on".into()]);
        assert_eq!(e.resolve("on"), Some(Value::sym(1, "on")));
        assert_eq!(e.resolve("dim"), None);
        let i = ValueDomain::BoundedInt { lo: 0, hi: 2 };
        assert_eq!(i.resolve("2"), Some(Value::Int(2)));
        assert_eq!(i.resolve("5"), None);
    }
}
