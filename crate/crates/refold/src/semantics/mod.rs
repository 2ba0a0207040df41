//! Bounded-trace semantics: stepping, behavior sets, enumeration and
//! acyclic network composition. Every check in the toolkit bottoms out here.

mod behaviors;
mod budget;
mod enumerate;
mod eval;
mod machine;
mod network;
mod step;
mod trace;

pub use behaviors::{behaviors, machine_behaviors, network_behaviors};
pub use budget::{Budget, CostMeter, DEFAULT_ENUMERATION_CAP, DEFAULT_HORIZON_CAP};
pub use enumerate::{enumerate_input_traces, InputTraces};
pub use machine::{
    check_component_deterministic_total, check_deterministic_total, input_frames, DetWitness,
    DetailedOutcome, DeterminismReport, Machine, MachineState, WitnessKind,
};
pub use network::{compose, Network, Wire};
pub use step::{step, StepOutcome};
pub use trace::{Assignment, Trace};
