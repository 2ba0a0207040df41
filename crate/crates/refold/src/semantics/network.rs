//! Acyclic zero-delay composition of components.
//!
//! Wires are formed by channel name: an output of one part feeds every
//! equally named input of the other parts within the same tick. Feedback
//! loops are rejected rather than solved by fixpoints.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{validate_component, Component, Interface, ValueDomain};

/// A zero-delay wire, channel matched by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Wire {
    pub from_part: usize,
    pub to_part: usize,
    pub channel: String,
}

/// A network of components with name-matched wiring and a set of hidden
/// channel names that are dropped from the external interface.
#[derive(Debug, Clone)]
pub struct Network {
    parts: Vec<Component>,
    wires: BTreeSet<Wire>,
    hidden: BTreeSet<String>,
    /// Part indices in evaluation order.
    topo: Vec<usize>,
}

/// Wire the parts together by channel name and verify the result is
/// acyclic at the tick level.
pub fn compose(parts: Vec<Component>, hidden: BTreeSet<String>) -> Result<Network> {
    // Producers must be pairwise disjoint and agree with consumers on domains.
    let mut producer: BTreeMap<&str, (usize, &ValueDomain)> = BTreeMap::new();
    for (i, part) in parts.iter().enumerate() {
        for out in part.outputs() {
            if producer.insert(&out.name, (i, &out.domain)).is_some() {
                return Err(Error::OutputClash(out.name.clone()));
            }
        }
    }
    // External inputs shared by several parts must agree on the domain too.
    let mut input_domain: BTreeMap<&str, &ValueDomain> = BTreeMap::new();
    for part in &parts {
        for inp in part.inputs() {
            match input_domain.get(inp.name.as_str()) {
                Some(d) if **d != inp.domain => {
                    return Err(Error::DomainMismatch(inp.name.clone()));
                }
                _ => {
                    input_domain.insert(&inp.name, &inp.domain);
                }
            }
        }
    }

    let mut wires = BTreeSet::new();
    for (j, part) in parts.iter().enumerate() {
        for inp in part.inputs() {
            if let Some((i, domain)) = producer.get(inp.name.as_str()) {
                if **domain != inp.domain {
                    return Err(Error::DomainMismatch(inp.name.clone()));
                }
                wires.insert(Wire {
                    from_part: *i,
                    to_part: j,
                    channel: inp.name.clone(),
                });
            }
        }
    }

    for name in &hidden {
        if !producer.contains_key(name.as_str()) {
            return Err(Error::UnknownOutput(format!(
                "{name} (hidden, but no part produces it)"
            )));
        }
    }

    let topo = topological_order(parts.len(), &wires)?;

    // Structural wiring problems (clashes, cycles, domain mismatches) are
    // reported above even when a part is itself ill-formed.
    for part in &parts {
        let diags = validate_component(part);
        if let Some(first) = diags.first() {
            return Err(Error::InvalidComponent {
                name: part.name.clone(),
                first: first.to_string(),
            });
        }
    }

    Ok(Network {
        parts,
        wires,
        hidden,
        topo,
    })
}

/// Kahn's algorithm over the part-level dependency graph; smallest part
/// index first so the order is stable.
fn topological_order(n: usize, wires: &BTreeSet<Wire>) -> Result<Vec<usize>> {
    let mut indegree = vec![0usize; n];
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for w in wires {
        if w.from_part == w.to_part {
            return Err(Error::Cycle(w.channel.clone()));
        }
        if edges.insert((w.from_part, w.to_part)) {
            indegree[w.to_part] += 1;
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&next) = ready.iter().next() {
        ready.remove(&next);
        order.push(next);
        for &(from, to) in &edges {
            if from == next {
                indegree[to] -= 1;
                if indegree[to] == 0 {
                    ready.insert(to);
                }
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|i| !order.contains(i)).unwrap();
        let channel = wires
            .iter()
            .find(|w| w.to_part == stuck)
            .map(|w| w.channel.clone())
            .unwrap_or_else(|| "?".into());
        return Err(Error::Cycle(channel));
    }
    Ok(order)
}

impl Network {
    pub fn parts(&self) -> &[Component] {
        &self.parts
    }

    pub fn wires(&self) -> &BTreeSet<Wire> {
        &self.wires
    }

    pub fn hidden(&self) -> &BTreeSet<String> {
        &self.hidden
    }

    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    /// Channel names produced by some part and consumed through a wire.
    pub fn wired_channels(&self) -> BTreeSet<String> {
        self.wires.iter().map(|w| w.channel.clone()).collect()
    }

    /// Unwired inputs plus unhidden outputs.
    pub fn external_interface(&self) -> Interface {
        let produced: BTreeMap<&str, &ValueDomain> = self
            .parts
            .iter()
            .flat_map(|p| p.outputs())
            .map(|c| (c.name.as_str(), &c.domain))
            .collect();
        let mut inputs = BTreeMap::new();
        for part in &self.parts {
            for inp in part.inputs() {
                if !produced.contains_key(inp.name.as_str()) {
                    inputs.insert(inp.name.clone(), inp.domain.clone());
                }
            }
        }
        let mut outputs = BTreeMap::new();
        for part in &self.parts {
            for out in part.outputs() {
                if !self.hidden.contains(&out.name) {
                    outputs.insert(out.name.clone(), out.domain.clone());
                }
            }
        }
        Interface { inputs, outputs }
    }
}
