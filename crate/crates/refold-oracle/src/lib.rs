//! Brute-force reference semantics for testing refold.
//!
//! Everything here is deliberately dumb: per tick the oracle enumerates the
//! full candidate product over locals, outputs and next state and filters by
//! re-checking every formula with its own evaluator. It shares refold's data
//! model but none of its evaluation or exploration code, so agreement
//! between the two is evidence rather than tautology.

mod eval;
pub mod golden;
pub mod fixtures;
pub mod gen;
mod semantics;

pub use eval::{oracle_eval, OValue};
pub use semantics::{
    oracle_behaviors, oracle_input_frames, oracle_input_traces, oracle_network_behaviors,
    oracle_step, trace_compact, OracleNetwork,
};
