//! refold — a toolkit for authoring, decomposing and verifying component
//! specifications.
//!
//! Components are written in a small guarded-formula language over typed,
//! finite channels. On top of that the crate provides:
//!
//! - [`model`] / [`parser`]: the data model, a textual front end and a
//!   byte-stable renderer;
//! - [`semantics`]: bounded trace semantics, exhaustive input enumeration
//!   and zero-delay network composition;
//! - [`causality`]: Mealy/Moore formula classification and strong/weak
//!   causality checks;
//! - [`decompose`]: the three mechanical decomposition schemas with an
//!   exhaustive equivalence verdict;
//! - [`refinement`]: bounded behavioral refinement and specification-group
//!   management;
//! - [`requirements`]: requirement ledgers over abstraction levels.
//!
//! All verdicts are bounded claims: they hold up to an explicit horizon,
//! never unconditionally.

pub mod causality;
pub mod decompose;
pub mod diag;
pub mod error;
pub mod model;
pub mod parser;
pub mod refinement;
pub mod requirements;
pub mod semantics;

pub mod guide;

pub use error::{Error, Result};
