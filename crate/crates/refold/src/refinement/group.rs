//! Specification groups: a root spec plus refinement layers, each layer a
//! composition of sub-specs that must refine the layer above it.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::diag::{DiagCode, Diagnostic};
use crate::error::{Error, Result};
use crate::model::{validate_component, Component, Formula};
use crate::refinement::{refines, RefinementVerdict};
use crate::semantics::{compose, Budget, Machine, Network};

/// Reserved prefix for generated channels; layer composition hides every
/// channel that carries it.
pub const AUX_PREFIX: &str = "__";

/// A root specification with refinement layers indexed 1..=m. Layer `j` is
/// a composition of sub-specs refining the composition of layer `j - 1`
/// (layer 0 being the root itself).
#[derive(Debug, Clone)]
pub struct SpecificationGroup {
    pub name: String,
    pub root: Component,
    pub layers: Vec<Vec<Component>>,
}

impl SpecificationGroup {
    /// Number of refinement layers (the `m` of the size law).
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// Total number of specifications including the root (the `N`).
    pub fn spec_count(&self) -> usize {
        1 + self.layers.iter().map(Vec::len).sum::<usize>()
    }

    /// Compose the parts of layer `j` (1-based), hiding generated channels.
    pub fn compose_layer(&self, j: usize) -> Result<Network> {
        let parts = self
            .layers
            .get(j.wrapping_sub(1))
            .ok_or_else(|| Error::BadTarget(format!("layer {j} does not exist")))?;
        compose_with_aux_hidden(parts.clone())
    }
}

/// Compose parts, hiding every produced channel with the reserved prefix.
pub fn compose_with_aux_hidden(parts: Vec<Component>) -> Result<Network> {
    let hidden: BTreeSet<String> = parts
        .iter()
        .flat_map(|p| p.outputs())
        .filter(|c| c.name.starts_with(AUX_PREFIX))
        .map(|c| c.name.clone())
        .collect();
    compose(parts, hidden)
}

/// Structural checks: size law, layer-1 singleton, and interface
/// compatibility of every layer composition with the root.
pub fn validate_group_shape(group: &SpecificationGroup) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let m = group.layer_count();
    let n = group.spec_count();
    if n < m {
        diags.push(Diagnostic::new(
            DiagCode::ESize,
            format!("group holds {n} specs but claims {m} layers"),
        ));
    }
    for (idx, layer) in group.layers.iter().enumerate() {
        if layer.is_empty() {
            diags.push(Diagnostic::new(
                DiagCode::ESize,
                format!("layer {} is empty", idx + 1),
            ));
        }
    }
    if let Some(first) = group.layers.first() {
        if first.len() != 1 {
            // Shape advice, not a blocker: the first layer conventionally
            // holds a single refinement spec of the root, but a decomposed
            // network bound directly under the root is still checkable.
            diags.push(Diagnostic::warning(
                DiagCode::ELayer1,
                format!(
                    "layer 1 conventionally holds exactly one refinement spec of the root, found {}",
                    first.len()
                ),
            ));
        }
    }
    let root_iface = group.root.interface();
    for j in 1..=m {
        match group.compose_layer(j) {
            Ok(net) => {
                let iface = net.external_interface();
                if iface != root_iface {
                    diags.push(Diagnostic::new(
                        DiagCode::EIface,
                        format!(
                            "layer {j} exposes {} but the root exposes {}",
                            iface.describe(),
                            root_iface.describe()
                        ),
                    ));
                }
            }
            Err(e) => {
                diags.push(Diagnostic::new(
                    DiagCode::EIface,
                    format!("layer {j} does not compose: {e}"),
                ));
            }
        }
    }
    diags
}

#[derive(Debug, Clone)]
pub struct LayerVerdict {
    /// 1-based layer index; the edge checked is layer j against layer j-1.
    pub layer: usize,
    pub verdict: RefinementVerdict,
}

#[derive(Debug, Clone)]
pub struct GroupVerdict {
    pub layers: Vec<LayerVerdict>,
    pub holds: bool,
}

/// Check every refinement edge of the group: layer j must refine layer
/// j−1, with layer 0 the root. By transitivity a fully green report
/// certifies that the deepest layer refines the root.
pub fn verify_group(
    group: &SpecificationGroup,
    horizon: usize,
    budget: &Budget,
) -> Result<GroupVerdict> {
    let mut layers = Vec::new();
    let mut holds = true;
    for j in 1..=group.layer_count() {
        let concrete = group.compose_layer(j)?;
        let verdict = if j == 1 {
            refines(
                Machine::Network(&concrete),
                Machine::Component(&group.root),
                horizon,
                budget,
            )?
        } else {
            let abstract_net = group.compose_layer(j - 1)?;
            refines(
                Machine::Network(&concrete),
                Machine::Network(&abstract_net),
                horizon,
                budget,
            )?
        };
        holds &= verdict.holds;
        layers.push(LayerVerdict { layer: j, verdict });
    }
    Ok(GroupVerdict { layers, holds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendMode {
    /// Append the delta to the target spec itself; layers stay untouched.
    InPlace,
    /// Leave the target untouched and insert an extended copy as a new
    /// layer directly below it.
    NewLayer,
}

#[derive(Debug)]
pub struct ExtendOutcome {
    pub group: SpecificationGroup,
    /// Verdicts for the refinement edges the extension touched.
    pub rechecked: Vec<LayerVerdict>,
}

/// Extend the spec at (`layer`, `index`) — layer 0 addresses the root —
/// with the delta formulas, either in place or as a new refinement layer.
pub fn extend_spec(
    group: &SpecificationGroup,
    layer: usize,
    index: usize,
    delta: Vec<Formula>,
    mode: ExtendMode,
    horizon: usize,
    budget: &Budget,
) -> Result<ExtendOutcome> {
    let target = locate(group, layer, index)?;

    let mut extended = target.clone();
    extended.formulas.extend(delta.iter().cloned());
    let diags = validate_component(&extended);
    if !diags.is_empty() {
        let msgs: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        return Err(Error::BadTarget(format!(
            "delta does not validate against {}: {}",
            target.name,
            msgs.join("; ")
        )));
    }

    let mut new_group = group.clone();
    let touched: Vec<usize>;
    match mode {
        ExtendMode::InPlace => {
            if layer == 0 {
                new_group.root = extended;
            } else {
                new_group.layers[layer - 1][index] = extended;
            }
            // The edge above the target and the edge below it both change
            // meaning.
            let mut edges = vec![];
            if layer >= 1 {
                edges.push(layer);
            }
            if layer < new_group.layer_count() {
                edges.push(layer + 1);
            }
            touched = edges;
        }
        ExtendMode::NewLayer => {
            let mut new_layer: Vec<Component> = if layer == 0 {
                vec![new_group.root.clone()]
            } else {
                new_group.layers[layer - 1].clone()
            };
            let slot = if layer == 0 { 0 } else { index };
            new_layer[slot] = extended;
            new_layer[slot].name = unique_name(&new_layer[slot].name, group);
            new_group.layers.insert(layer, new_layer);
            touched = vec![layer + 1, layer + 2]
                .into_iter()
                .filter(|&j| j <= new_group.layer_count())
                .collect();
        }
    }

    let mut rechecked = Vec::new();
    for j in touched {
        let concrete = new_group.compose_layer(j)?;
        let verdict = if j == 1 {
            refines(
                Machine::Network(&concrete),
                Machine::Component(&new_group.root),
                horizon,
                budget,
            )?
        } else {
            let abstract_net = new_group.compose_layer(j - 1)?;
            refines(
                Machine::Network(&concrete),
                Machine::Network(&abstract_net),
                horizon,
                budget,
            )?
        };
        rechecked.push(LayerVerdict { layer: j, verdict });
    }
    Ok(ExtendOutcome {
        group: new_group,
        rechecked,
    })
}

fn locate(group: &SpecificationGroup, layer: usize, index: usize) -> Result<&Component> {
    if layer == 0 {
        if index != 0 {
            return Err(Error::BadTarget("the root layer has a single spec".into()));
        }
        return Ok(&group.root);
    }
    group
        .layers
        .get(layer - 1)
        .and_then(|l| l.get(index))
        .ok_or_else(|| {
            Error::BadTarget(format!("no spec at layer {layer}, index {index}"))
        })
}

fn unique_name(base: &str, group: &SpecificationGroup) -> String {
    let taken: BTreeSet<&str> = std::iter::once(group.root.name.as_str())
        .chain(group.layers.iter().flatten().map(|c| c.name.as_str()))
        .collect();
    let mut candidate = format!("{base}_ext");
    let mut n = 1;
    while taken.contains(candidate.as_str()) {
        n += 1;
        candidate = format!("{base}_ext{n}");
    }
    candidate
}

/// DOT rendering of the group DAG: the root on top, one cluster per layer,
/// refinement edges between consecutive layers.
pub fn group_dot(group: &SpecificationGroup) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", sanitize(&group.name));
    let _ = writeln!(out, "    compound=true;");
    let _ = writeln!(out, "    rankdir=BT;");
    let _ = writeln!(out, "    node [shape=box];");
    let _ = writeln!(out, "    root [label=\"{}\"];", group.root.name);
    for (idx, layer) in group.layers.iter().enumerate() {
        let j = idx + 1;
        let _ = writeln!(out, "    subgraph cluster_layer{j} {{");
        let _ = writeln!(out, "        label=\"layer {j}\";");
        for (i, part) in layer.iter().enumerate() {
            let _ = writeln!(out, "        s{j}_{i} [label=\"{}\"];", part.name);
        }
        let _ = writeln!(out, "    }}");
    }
    for j in 1..=group.layers.len() {
        let (head, lhead) = if j == 1 {
            ("root".to_string(), String::new())
        } else {
            (format!("s{}_0", j - 1), format!(", lhead=cluster_layer{}", j - 1))
        };
        let _ = writeln!(
            out,
            "    s{j}_0 -> {head} [label=\"refines\", ltail=cluster_layer{j}{lhead}];"
        );
    }
    out.push_str("}\n");
    out
}

fn sanitize(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if cleaned.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        format!("g_{cleaned}")
    } else {
        cleaned
    }
}
