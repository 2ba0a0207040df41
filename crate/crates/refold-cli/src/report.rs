//! One report per invocation, rendered as text or as a single JSON
//! document. Both carry the same verdict fields and both are byte-stable
//! for identical invocations.

use serde::Serialize;
use serde_json::json;

use refold::diag::Diagnostic;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub horizon: usize,
    pub budget: u64,
    #[serde(flatten)]
    pub body: Body,
}

impl Report {
    pub fn print(&self, format: Format) {
        match format {
            Format::Text => {
                println!("refold {} — horizon={} budget={}", self.command, self.horizon, self.budget);
                print!("{}", self.body.text());
            }
            Format::Json => {
                println!("{}", serde_json::to_string_pretty(self).expect("report serializes"));
            }
        }
    }
}

/// A failed invocation, still reported through the same channel.
#[allow(clippy::too_many_arguments)]
pub fn print_failure(
    command: &str,
    horizon: usize,
    budget: u64,
    format: Format,
    code: &str,
    message: &str,
    diagnostics: &[Diagnostic],
    exit: i32,
) -> i32 {
    match format {
        Format::Text => {
            println!("refold {command} — horizon={horizon} budget={budget}");
            if !message.is_empty() {
                println!("{code}: {message}");
            }
            for d in diagnostics {
                println!("{d}");
            }
        }
        Format::Json => {
            let doc = json!({
                "command": command,
                "horizon": horizon,
                "budget": budget,
                "error": { "code": code, "message": message },
                "diagnostics": diagnostics,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
        }
    }
    exit
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Body {
    Check {
        valid: bool,
        summary: String,
        diagnostics: Vec<Diagnostic>,
    },
    Classify {
        table: String,
        moore: usize,
        mealy: usize,
        transition: usize,
        localdef: usize,
    },
    Causality {
        kind: String,
        verdict: String,
        witness: Option<WitnessJson>,
    },
    Decompose {
        schema: String,
        advisory: Vec<String>,
        written: Vec<String>,
        verified: Option<VerdictJson>,
    },
    Refines {
        verdict: String,
        traces_checked: u64,
        counterexample: Option<CounterexampleJson>,
    },
    Simulate {
        behaviors: usize,
        traces: Vec<String>,
    },
    GroupVerify {
        warnings: Vec<String>,
        layers: Vec<LayerJson>,
        verdict: String,
    },
    GroupExtend {
        mode: String,
        layers_before: usize,
        layers_after: usize,
        specs_before: usize,
        specs_after: usize,
        written: Vec<String>,
        rechecked: Vec<LayerJson>,
    },
    GroupDot {
        dot: String,
    },
    ReqAdd {
        outcome: String,
        detail: String,
        touched: Vec<String>,
        notes: Vec<String>,
        level_soundness: Vec<String>,
    },
    ReqCheck {
        verdict: String,
        requirements: Vec<ReqVerdictJson>,
        note: Option<String>,
    },
}

#[derive(Debug, Serialize)]
pub struct WitnessJson {
    pub tick: usize,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Serialize)]
pub struct VerdictJson {
    pub verdict: String,
    pub traces_checked: u64,
    pub counterexample: Option<CounterexampleJson>,
}

#[derive(Debug, Serialize)]
pub struct CounterexampleJson {
    pub input: String,
    pub output: String,
}

#[derive(Debug, Serialize)]
pub struct LayerJson {
    pub layer: usize,
    pub verdict: String,
    pub traces_checked: u64,
    pub horizon: usize,
    pub counterexample: Option<CounterexampleJson>,
}

#[derive(Debug, Serialize)]
pub struct ReqVerdictJson {
    pub id: String,
    pub verdict: String,
    pub counterexample: Option<CounterexampleJson>,
}

pub fn holds(b: bool) -> String {
    if b { "HOLDS".into() } else { "FAILS".into() }
}

impl Body {
    fn text(&self) -> String {
        let mut out = String::new();
        match self {
            Body::Check {
                valid,
                summary,
                diagnostics,
            } => {
                if *valid {
                    out.push_str(&format!("OK ({summary})\n"));
                } else {
                    for d in diagnostics {
                        out.push_str(&format!("{d}\n"));
                    }
                }
            }
            Body::Classify {
                table,
                moore,
                mealy,
                transition,
                localdef,
            } => {
                out.push_str(table);
                out.push_str(&format!(
                    "counts: moore={moore} mealy={mealy} transition={transition} localdef={localdef}\n"
                ));
            }
            Body::Causality {
                kind,
                verdict,
                witness,
            } => {
                out.push_str(&format!("{kind} causality: {verdict}\n"));
                if let Some(w) = witness {
                    out.push_str(&format!("outputs diverge at tick {}\n", w.tick));
                    out.push_str(&format!("left input:\n{}", indent(&w.left)));
                    out.push_str(&format!("right input:\n{}", indent(&w.right)));
                }
            }
            Body::Decompose {
                schema,
                advisory,
                written,
                verified,
            } => {
                out.push_str(&format!("schema: {schema}\n"));
                for line in advisory {
                    out.push_str(&format!("advisory: {line}\n"));
                }
                for path in written {
                    out.push_str(&format!("wrote {path}\n"));
                }
                if let Some(v) = verified {
                    out.push_str(&format!(
                        "equivalence: {} ({} input traces)\n",
                        v.verdict, v.traces_checked
                    ));
                    if let Some(cx) = &v.counterexample {
                        out.push_str(&format!("counterexample input:\n{}", indent(&cx.input)));
                        out.push_str(&format!("differing output:\n{}", indent(&cx.output)));
                    }
                }
            }
            Body::Refines {
                verdict,
                traces_checked,
                counterexample,
            } => {
                out.push_str(&format!("{verdict} ({traces_checked} input traces)\n"));
                if let Some(cx) = counterexample {
                    out.push_str(&format!("counterexample input:\n{}", indent(&cx.input)));
                    out.push_str(&format!(
                        "concrete output not admitted by the abstract spec:\n{}",
                        indent(&cx.output)
                    ));
                }
            }
            Body::Simulate { behaviors, traces } => {
                out.push_str(&format!("behaviors: {behaviors}\n"));
                for (i, t) in traces.iter().enumerate() {
                    out.push_str(&format!("behavior {}:\n{}", i + 1, indent(t)));
                }
            }
            Body::GroupVerify {
                warnings,
                layers,
                verdict,
            } => {
                for w in warnings {
                    out.push_str(&format!("{w}\n"));
                }
                for l in layers {
                    out.push_str(&format!(
                        "layer {}: {} (traces checked: {}, H={})\n",
                        l.layer, l.verdict, l.traces_checked, l.horizon
                    ));
                    if let Some(cx) = &l.counterexample {
                        out.push_str(&format!("  counterexample input:\n{}", indent2(&cx.input)));
                        out.push_str(&format!("  violating output:\n{}", indent2(&cx.output)));
                    }
                }
                out.push_str(&format!("group: {verdict}\n"));
            }
            Body::GroupExtend {
                mode,
                layers_before,
                layers_after,
                specs_before,
                specs_after,
                written,
                rechecked,
            } => {
                out.push_str(&format!(
                    "mode: {mode}; layers {layers_before} -> {layers_after}; specs {specs_before} -> {specs_after}\n"
                ));
                for path in written {
                    out.push_str(&format!("wrote {path}\n"));
                }
                for l in rechecked {
                    out.push_str(&format!(
                        "layer {}: {} (traces checked: {})\n",
                        l.layer, l.verdict, l.traces_checked
                    ));
                }
            }
            Body::GroupDot { dot } => out.push_str(dot),
            Body::ReqAdd {
                outcome,
                detail,
                touched,
                notes,
                level_soundness,
            } => {
                out.push_str(&format!("outcome: {outcome}{detail}\n"));
                for path in touched {
                    out.push_str(&format!("wrote {path}\n"));
                }
                for n in notes {
                    out.push_str(&format!("note: {n}\n"));
                }
                for l in level_soundness {
                    out.push_str(&format!("level soundness: {l}\n"));
                }
            }
            Body::ReqCheck {
                verdict,
                requirements,
                note,
            } => {
                if let Some(n) = note {
                    out.push_str(&format!("{n}\n"));
                }
                for r in requirements {
                    out.push_str(&format!("{}: {}\n", r.id, r.verdict));
                    if let Some(cx) = &r.counterexample {
                        out.push_str(&format!("  counterexample input:\n{}", indent2(&cx.input)));
                        out.push_str(&format!("  violating output:\n{}", indent2(&cx.output)));
                    }
                }
                out.push_str(&format!("system: {verdict}\n"));
            }
        }
        out
    }
}

fn indent(block: &str) -> String {
    block
        .lines()
        .map(|l| format!("  {l}\n"))
        .collect()
}

fn indent2(block: &str) -> String {
    block
        .lines()
        .map(|l| format!("    {l}\n"))
        .collect()
}
