//! Errors raised by the analysis and transformation engines.
//!
//! Validation and parsing report [`crate::diag::Diagnostic`] lists instead;
//! this type covers operations that run on already-valid components.

use thiserror::Error;

use crate::semantics::Trace;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The configured enumeration budget or horizon cap was exceeded.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A reachable configuration admits no successor.
    #[error("inconsistent specification: {detail}")]
    Inconsistent { detail: String, trace: Option<Trace> },

    /// The two sides of a refinement check expose different interfaces.
    #[error("interface mismatch: {0}")]
    IfaceMismatch(String),

    /// Zero-delay dependency cycle in a network.
    #[error("zero-delay cycle through {0}")]
    Cycle(String),

    /// Wire endpoints disagree on their value domain.
    #[error("domain mismatch on channel {0}")]
    DomainMismatch(String),

    /// Two parts emit the same channel.
    #[error("output channel {0} emitted by more than one part")]
    OutputClash(String),

    /// A formula constrains both an output and next-tick state.
    #[error("formula {label} targets both an output and next-tick state; split it into one formula per kind")]
    MixedTarget { label: String },

    /// The Mealy/Moore split has no separable Moore output.
    #[error("nothing to split: {0}")]
    NothingToSplit(String),

    /// A selected local reads state or an unselected local.
    #[error("local {local} not extractable: {detail}")]
    LocalStateDep { local: String, detail: String },

    /// Selected locals depend on each other cyclically.
    #[error("selected locals form a dependency cycle through {0}")]
    LocalCycle(String),

    #[error("unknown local {0}")]
    UnknownLocal(String),

    /// A moved formula also targets an unselected local.
    #[error("formula {label} co-targets unselected local {name}")]
    LocalCoTarget { label: String, name: String },

    /// A selected output's formula targets next-tick state or a local.
    #[error("output {output} not extractable: formula {label} targets {offender}")]
    OutTargetsState {
        output: String,
        label: String,
        offender: String,
    },

    #[error("unknown output {0}")]
    UnknownOutput(String),

    /// A moved formula also targets an unselected output.
    #[error("formula {label} co-targets unselected output {name}")]
    OutCoTarget { label: String, name: String },

    /// A group operation addressed a layer or spec that does not exist,
    /// or a delta referenced unknown symbols.
    #[error("bad target: {0}")]
    BadTarget(String),

    /// The operation requires a valid component.
    #[error("component {name} is not valid: {first}")]
    InvalidComponent { name: String, first: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit-code category used by the command line front end.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_))
    }

    pub fn is_inconsistent(&self) -> bool {
        matches!(self, Error::Inconsistent { .. })
    }
}
