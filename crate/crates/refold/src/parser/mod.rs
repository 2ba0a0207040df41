//! Textual front end: the `.fspec` component DSL and `.fgroup` manifests.
//!
//! Parsing is total: any input yields either a value or at least one
//! diagnostic with a source span, never a panic. The renderer is the
//! parser's inverse on the canonical form.

mod grammar;
mod lexer;
mod manifest;
mod render;

pub use grammar::{parse_component, parse_delta_formulas};
pub use manifest::{
    load_group, parse_group_manifest, render_group_manifest, GroupManifest,
};
pub use render::{render_component, render_expr, render_formula};

use std::path::Path;

use crate::diag::{DiagCode, Diagnostic};
use crate::model::Component;

/// Read and parse one `.fspec` file.
pub fn load_component(path: &Path) -> Result<Component, Vec<Diagnostic>> {
    let text = match std::fs::read(path) {
        Ok(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
        Err(e) => {
            return Err(vec![Diagnostic::new(
                DiagCode::EMissingFile,
                format!("{}: {e}", path.display()),
            )]);
        }
    };
    parse_component(&text, &path.display().to_string())
}
