//! Seeded generation of random valid components.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use refold::model::{
    Atom, AtomConstraint, BinaryOp, ChannelDecl, Component, Direction, Expression, Formula,
    Target, Value, ValueDomain, VarDecl, VarKind,
};

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub max_inputs: usize,
    pub max_outputs: usize,
    pub max_state: usize,
    pub max_locals: usize,
    pub max_formulas: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_inputs: 2,
            max_outputs: 2,
            max_state: 1,
            max_locals: 1,
            max_formulas: 5,
        }
    }
}

/// Deterministic component for a seed; the workhorse behind both the
/// property tests and the randomized acceptance checks.
pub fn component_from_seed(seed: u64) -> Component {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_component(&mut rng, &GenConfig::default())
}

pub fn random_component(rng: &mut impl Rng, cfg: &GenConfig) -> Component {
    let n_inputs = rng.gen_range(0..=cfg.max_inputs);
    let n_outputs = rng.gen_range(1..=cfg.max_outputs.max(1));
    let n_state = rng.gen_range(0..=cfg.max_state);
    let n_locals = rng.gen_range(0..=cfg.max_locals);

    let mut channels = Vec::new();
    for i in 0..n_inputs {
        channels.push(ChannelDecl {
            name: format!("in{i}"),
            direction: Direction::Input,
            domain: random_domain(rng),
        });
    }
    for i in 0..n_outputs {
        channels.push(ChannelDecl {
            name: format!("out{i}"),
            direction: Direction::Output,
            domain: random_domain(rng),
        });
    }
    let mut vars = Vec::new();
    for i in 0..n_state {
        let domain = random_domain(rng);
        let init = pick_value(rng, &domain);
        vars.push(VarDecl {
            name: format!("st{i}"),
            kind: VarKind::State { init },
            domain,
        });
    }
    for i in 0..n_locals {
        vars.push(VarDecl {
            name: format!("lc{i}"),
            kind: VarKind::Local,
            domain: random_domain(rng),
        });
    }

    let comp = Component {
        name: format!("Gen{}", rng.gen_range(0..10_000)),
        channels,
        vars,
        formulas: Vec::new(),
        pure_requirement: false,
    };

    let n_formulas = rng.gen_range(0..=cfg.max_formulas);
    let mut formulas = Vec::new();
    for i in 0..n_formulas {
        formulas.push(random_formula(rng, &comp, i));
    }
    Component { formulas, ..comp }
}

fn random_domain(rng: &mut impl Rng) -> ValueDomain {
    if rng.gen_bool(0.5) {
        let n = rng.gen_range(2..=3);
        let base = rng.gen_range(0..4);
        ValueDomain::Enumeration((0..n).map(|i| format!("v{base}_{i}")).collect())
    } else {
        let lo = rng.gen_range(-1..=1i64);
        let width = rng.gen_range(1..=3i64);
        ValueDomain::BoundedInt { lo, hi: lo + width }
    }
}

fn pick_value(rng: &mut impl Rng, domain: &ValueDomain) -> Value {
    let values = domain.values();
    values[rng.gen_range(0..values.len())].clone()
}

/// Symbols a formula may read: inputs, state, locals.
fn readables(comp: &Component) -> Vec<(String, ValueDomain)> {
    comp.inputs()
        .map(|c| (c.name.clone(), c.domain.clone()))
        .chain(comp.vars.iter().map(|v| (v.name.clone(), v.domain.clone())))
        .collect()
}

fn random_guard(rng: &mut impl Rng, comp: &Component) -> Expression {
    let reads = readables(comp);
    if reads.is_empty() || rng.gen_bool(0.3) {
        return Expression::lit_true();
    }
    let first = random_comparison(rng, &reads);
    match rng.gen_range(0..3) {
        0 => first,
        1 => Expression::binary(BinaryOp::And, first, random_comparison(rng, &reads)),
        _ => Expression::binary(BinaryOp::Or, first, random_comparison(rng, &reads)),
    }
}

fn random_comparison(rng: &mut impl Rng, reads: &[(String, ValueDomain)]) -> Expression {
    let (name, domain) = reads[rng.gen_range(0..reads.len())].clone();
    let value = pick_value(rng, &domain);
    let op = match (&domain, rng.gen_range(0..3)) {
        (ValueDomain::BoundedInt { .. }, 0) => BinaryOp::Le,
        (_, 1) => BinaryOp::Neq,
        _ => BinaryOp::Eq,
    };
    Expression::binary(op, Expression::read(name), Expression::value(value))
}

fn random_formula(rng: &mut impl Rng, comp: &Component, index: usize) -> Formula {
    let guard = random_guard(rng, comp);

    // Candidate targets: outputs, next-tick state, locals.
    let mut targets: Vec<(Target, ValueDomain)> = Vec::new();
    for c in comp.outputs() {
        targets.push((Target::current(&c.name), c.domain.clone()));
    }
    for v in comp.vars.iter() {
        match v.kind {
            VarKind::State { .. } => targets.push((Target::next_state(&v.name), v.domain.clone())),
            VarKind::Local => targets.push((Target::current(&v.name), v.domain.clone())),
        }
    }
    targets.shuffle(rng);
    let n_atoms = rng.gen_range(1..=2.min(targets.len()));

    let consequent = targets
        .into_iter()
        .take(n_atoms)
        .map(|(target, domain)| Atom {
            constraint: random_constraint(rng, comp, &domain),
            target,
        })
        .collect();

    Formula {
        label: format!("f{index}"),
        guard,
        consequent,
    }
}

fn random_constraint(
    rng: &mut impl Rng,
    comp: &Component,
    domain: &ValueDomain,
) -> AtomConstraint {
    // Matching-domain symbol reads keep the formula interval-safe.
    let same_domain: Vec<String> = readables(comp)
        .into_iter()
        .filter(|(_, d)| compatible(d, domain))
        .map(|(n, _)| n)
        .collect();

    match rng.gen_range(0..4) {
        0 if !same_domain.is_empty() => {
            let name = same_domain[rng.gen_range(0..same_domain.len())].clone();
            AtomConstraint::Equals(Expression::read(name))
        }
        1 => {
            let mut values = domain.values();
            values.shuffle(rng);
            values.truncate(rng.gen_range(1..=values.len().min(3)));
            values.sort();
            AtomConstraint::In(values)
        }
        2 => {
            let cond = random_guard(rng, comp);
            let a = pick_value(rng, domain);
            let b = pick_value(rng, domain);
            AtomConstraint::Equals(Expression::Conditional {
                cond: Box::new(cond),
                then_branch: Box::new(Expression::value(a)),
                else_branch: Box::new(Expression::value(b)),
            })
        }
        _ => AtomConstraint::Equals(Expression::value(pick_value(rng, domain))),
    }
}

/// A read of `from` may define a value of `to` without range escapes.
fn compatible(from: &ValueDomain, to: &ValueDomain) -> bool {
    match (from, to) {
        (ValueDomain::Enumeration(a), ValueDomain::Enumeration(b)) => a == b,
        (
            ValueDomain::BoundedInt { lo: alo, hi: ahi },
            ValueDomain::BoundedInt { lo: blo, hi: bhi },
        ) => blo <= alo && ahi <= bhi,
        _ => false,
    }
}
