//! Helpers shared by the integration test targets.

use refold::model::Component;
use refold::parser::parse_component;

/// Parse an inline spec, panicking with diagnostics on failure.
pub fn parse(text: &str) -> Component {
    match parse_component(text, "inline") {
        Ok(c) => c,
        Err(diags) => {
            let msgs: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
            panic!("inline spec does not parse: {}", msgs.join("; "));
        }
    }
}

/// Expect a parse failure and return the diagnostics.
#[allow(dead_code)]
pub fn parse_err(text: &str) -> Vec<refold::diag::Diagnostic> {
    match parse_component(text, "inline") {
        Ok(c) => panic!("spec unexpectedly parsed: {}", c.name),
        Err(diags) => diags,
    }
}
