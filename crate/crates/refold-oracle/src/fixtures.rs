//! Access to the bundled fixture corpus.

use std::path::PathBuf;

use refold::model::Component;
use refold::parser::parse_component;

/// Workspace-level `fixtures/` directory.
pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .canonicalize()
        .expect("fixtures directory exists")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixtures_dir().join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name))
        .unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// Parse a fixture, panicking with its diagnostics if it fails: the corpus
/// is required to be well-formed.
pub fn load(name: &str) -> Component {
    match parse_component(&fixture_text(name), name) {
        Ok(c) => c,
        Err(diags) => {
            let msgs: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
            panic!("fixture {name} does not parse: {}", msgs.join("; "))
        }
    }
}

pub fn lamp() -> Component {
    load("lamp.fspec")
}

pub fn lamp_echo() -> Component {
    load("lamp_echo.fspec")
}

pub fn adder() -> Component {
    load("adder.fspec")
}

pub fn cruise() -> Component {
    load("cruise.fspec")
}

/// The four primary behavioral fixtures.
pub fn corpus() -> Vec<Component> {
    vec![lamp(), lamp_echo(), adder(), cruise()]
}

/// The requirement specs over the x/y interface.
pub fn requirement_corpus() -> Vec<Component> {
    vec![
        load("req_x_le1.fspec"),
        load("req_x_le2.fspec"),
        load("req_x_eq0.fspec"),
        load("req_y_le1.fspec"),
    ]
}

pub fn systems() -> Vec<Component> {
    vec![load("sys_xy_zero.fspec"), load("sys_xy_loose.fspec")]
}
