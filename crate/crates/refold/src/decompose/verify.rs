//! The schema correctness obligation: the recomposed network must show
//! exactly the original's behaviors on every input trace up to the horizon.

use crate::error::Result;
use crate::model::Component;
use crate::semantics::{
    behaviors, enumerate_input_traces, network_behaviors, Budget, Trace,
};

use super::DecompositionResult;

/// The least input trace on which the behavior sets differ, with one output
/// trace present on exactly one side.
#[derive(Debug, Clone)]
pub struct DecompositionCounterexample {
    pub input: Trace,
    pub output: Trace,
    /// True when the network shows the output and the original does not;
    /// false when the network lost a behavior the original has.
    pub network_only: bool,
}

#[derive(Debug, Clone)]
pub struct DecompositionVerdict {
    pub equivalent: bool,
    pub horizon: usize,
    pub traces_checked: u64,
    pub counterexample: Option<DecompositionCounterexample>,
}

/// Exhaustively compare `behaviors(original)` against the recomposed
/// network for every input trace up to `horizon`.
pub fn verify_decomposition(
    original: &Component,
    result: &DecompositionResult,
    horizon: usize,
    budget: &Budget,
) -> Result<DecompositionVerdict> {
    let traces = enumerate_input_traces(&original.interface(), horizon, budget)?;
    let mut checked = 0u64;
    for input in traces {
        checked += 1;
        let reference = behaviors(original, &input, budget)?;
        let recomposed = network_behaviors(&result.network, &input, budget)?;
        if reference != recomposed {
            let extra = recomposed.difference(&reference).next().cloned();
            let (output, network_only) = match extra {
                Some(t) => (t, true),
                None => (
                    reference
                        .difference(&recomposed)
                        .next()
                        .cloned()
                        .expect("sets differ"),
                    false,
                ),
            };
            return Ok(DecompositionVerdict {
                equivalent: false,
                horizon,
                traces_checked: checked,
                counterexample: Some(DecompositionCounterexample {
                    input,
                    output,
                    network_only,
                }),
            });
        }
    }
    Ok(DecompositionVerdict {
        equivalent: true,
        horizon,
        traces_checked: checked,
        counterexample: None,
    })
}
