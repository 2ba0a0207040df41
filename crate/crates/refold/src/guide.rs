//! The narrative guide, mirrored from `book/`.
//!
//! Each chapter is included verbatim, so its code blocks run as doc-tests
//! and `cargo test --doc` keeps the book honest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/components.md")]
pub mod components {}

#[doc = include_str!("../../../book/src/traces.md")]
pub mod traces {}

#[doc = include_str!("../../../book/src/mealy-moore.md")]
pub mod mealy_moore {}

#[doc = include_str!("../../../book/src/decomposition.md")]
pub mod decomposition {}

#[doc = include_str!("../../../book/src/refinement.md")]
pub mod refinement {}

#[doc = include_str!("../../../book/src/requirements.md")]
pub mod requirements {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
