//! Behavioral refinement: bounded output-trace-set inclusion per input
//! trace. Decomposition checks, requirement implication and group
//! validation are all phrased through [`refines`].

mod group;

pub use group::{
    compose_with_aux_hidden, extend_spec, group_dot, validate_group_shape, verify_group,
    ExtendMode, ExtendOutcome, GroupVerdict, LayerVerdict, SpecificationGroup, AUX_PREFIX,
};

use crate::error::{Error, Result};
use crate::model::Component;
use crate::semantics::{
    enumerate_input_traces, machine_behaviors, Budget, Machine, Trace,
};

/// Outcome of a bounded refinement check. `holds` is a claim up to the
/// stated horizon, never an unconditional one.
#[derive(Debug, Clone)]
pub struct RefinementVerdict {
    pub holds: bool,
    pub horizon: usize,
    /// Input traces examined before the verdict was reached.
    pub traces_checked: u64,
    /// Present exactly when `holds` is false; lexicographically least.
    pub counterexample: Option<Counterexample>,
}

/// The least input trace under which the concrete side produced an output
/// trace the abstract side does not admit.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub input: Trace,
    pub concrete_output: Trace,
}

/// Does every behavior of `concrete` stay inside the behaviors of
/// `abstract_side`, for all input traces up to `horizon`?
pub fn refines(
    concrete: Machine,
    abstract_side: Machine,
    horizon: usize,
    budget: &Budget,
) -> Result<RefinementVerdict> {
    let ci = concrete.interface();
    let ai = abstract_side.interface();
    if ci != ai {
        return Err(Error::IfaceMismatch(format!(
            "concrete {} vs abstract {}",
            ci.describe(),
            ai.describe()
        )));
    }

    let traces = enumerate_input_traces(&ci, horizon, budget)?;
    let mut checked = 0u64;
    for input in traces {
        checked += 1;
        let concrete_set =
            machine_behaviors(&concrete, &input, budget).map_err(|e| tag_side(e, "concrete"))?;
        let abstract_set = machine_behaviors(&abstract_side, &input, budget)
            .map_err(|e| tag_side(e, "abstract"))?;
        if let Some(offending) = concrete_set.difference(&abstract_set).next() {
            return Ok(RefinementVerdict {
                holds: false,
                horizon,
                traces_checked: checked,
                counterexample: Some(Counterexample {
                    input,
                    concrete_output: offending.clone(),
                }),
            });
        }
    }
    Ok(RefinementVerdict {
        holds: true,
        horizon,
        traces_checked: checked,
        counterexample: None,
    })
}

/// Component convenience wrapper for [`refines`].
pub fn refines_components(
    concrete: &Component,
    abstract_side: &Component,
    horizon: usize,
    budget: &Budget,
) -> Result<RefinementVerdict> {
    refines(
        Machine::Component(concrete),
        Machine::Component(abstract_side),
        horizon,
        budget,
    )
}

fn tag_side(e: Error, side: &str) -> Error {
    match e {
        Error::Inconsistent { detail, trace } => Error::Inconsistent {
            detail: format!("{side} side: {detail}"),
            trace,
        },
        other => other,
    }
}

/// Mutual refinement.
#[derive(Debug, Clone)]
pub struct EquivalenceVerdict {
    pub holds: bool,
    pub forward: RefinementVerdict,
    /// Only evaluated when the forward direction holds.
    pub backward: Option<RefinementVerdict>,
}

pub fn equivalent(
    a: Machine,
    b: Machine,
    horizon: usize,
    budget: &Budget,
) -> Result<EquivalenceVerdict> {
    let forward = refines(a, b, horizon, budget)?;
    if !forward.holds {
        return Ok(EquivalenceVerdict {
            holds: false,
            forward,
            backward: None,
        });
    }
    let backward = refines(b, a, horizon, budget)?;
    Ok(EquivalenceVerdict {
        holds: backward.holds,
        forward,
        backward: Some(backward),
    })
}
