//! refold — author, decompose and verify component specifications.

mod report;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use refold::causality::{
    check_strong_causality, check_weak_causality, classification_table, classify_component,
};
use refold::decompose::{
    extract_locals, extract_outputs, split_mealy_moore, verify_decomposition, DecompositionResult,
};
use refold::diag::Diagnostic;
use refold::error::Error;
use refold::model::{AtomConstraint, Component};
use refold::parser::{
    load_component, load_group, parse_delta_formulas, render_component, render_group_manifest,
};
use refold::refinement::{
    extend_spec, group_dot, refines, validate_group_shape, verify_group, Counterexample,
    ExtendMode, RefinementVerdict, SpecificationGroup,
};
use refold::requirements::{
    add_requirement, check_level_soundness, check_system, deeper_relations, load_ledger,
    save_ledger, InsertionOutcome, Requirement,
};
use refold::semantics::{behaviors, Budget, Machine, Network, Trace};

use report::{
    holds, print_failure, Body, CounterexampleJson, Format, LayerJson, Report, ReqVerdictJson,
    VerdictJson, WitnessJson, EXIT_BUDGET, EXIT_CHECK_FAILED, EXIT_INCONSISTENT, EXIT_OK,
    EXIT_USAGE,
};

const DEFAULT_HORIZON: usize = 4;

#[derive(Parser)]
#[command(
    name = "refold",
    version,
    about = "Author, decompose and verify component specifications"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Enumeration budget; overrides the REFOLD_BUDGET environment variable.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Accepted for interface stability; every check is deterministic.
    #[arg(long, global = true, hide_short_help = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a component file.
    Check { file: PathBuf },
    /// Classify formulas by Mealy/Moore character.
    Classify { file: PathBuf },
    /// Check strong or weak causality up to a horizon.
    Causality {
        file: PathBuf,
        #[arg(long, conflicts_with = "weak")]
        strong: bool,
        #[arg(long)]
        weak: bool,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Apply a decomposition schema and write the parts plus a group manifest.
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum)]
        schema: SchemaArg,
        /// Locals or outputs to extract, comma separated.
        #[arg(long, value_delimiter = ',')]
        select: Vec<String>,
        /// Output directory for the generated files.
        #[arg(long)]
        out: PathBuf,
        /// Verify behavior equivalence of the recomposition.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Does the concrete spec refine the abstract one? `.fgroup` arguments
    /// stand for their deepest layer's composition.
    Refines {
        concrete: PathBuf,
        #[arg(value_name = "ABSTRACT")]
        abstract_spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Run a component on an input trace file and print every behavior.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        inputs: PathBuf,
    },
    /// Specification group operations.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Requirement ledger operations.
    #[command(subcommand)]
    Req(ReqCommand),
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Check every refinement layer of a group.
    Verify {
        manifest: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Extend a spec of the group in place or as a new refinement layer.
    Extend {
        manifest: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// File with the formulas to append.
        #[arg(long)]
        delta: PathBuf,
        /// Target layer (0 = root).
        #[arg(long, default_value_t = 0)]
        layer: usize,
        /// Target spec index within the layer.
        #[arg(long, default_value_t = 0)]
        spec: usize,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Print the group DAG in DOT form.
    Dot { manifest: PathBuf },
}

#[derive(Subcommand)]
enum ReqCommand {
    /// Insert a requirement into a ledger directory.
    Add {
        ledgerdir: PathBuf,
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Check a system spec against the ledger's frontier.
    Check {
        ledgerdir: PathBuf,
        system: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemaArg {
    MealyMoore,
    Locals,
    Outputs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    InPlace,
    NewLayer,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget_cap = cli
        .budget
        .or_else(|| {
            std::env::var("REFOLD_BUDGET")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(refold::semantics::DEFAULT_ENUMERATION_CAP);
    let budget = Budget::with_cap(budget_cap);
    let ctx = Ctx {
        format: cli.format,
        budget,
    };
    ExitCode::from(run(cli.command, &ctx) as u8)
}

struct Ctx {
    format: Format,
    budget: Budget,
}

impl Ctx {
    fn report(&self, command: &str, horizon: usize, body: Body) {
        Report {
            command: command.into(),
            horizon,
            budget: self.budget.enumeration_cap,
            body,
        }
        .print(self.format);
    }

    fn fail_diags(&self, command: &str, horizon: usize, diags: &[Diagnostic]) -> i32 {
        print_failure(
            command,
            horizon,
            self.budget.enumeration_cap,
            self.format,
            "E_PARSE",
            "",
            diags,
            EXIT_USAGE,
        )
    }

    fn fail_error(&self, command: &str, horizon: usize, err: &Error) -> i32 {
        let exit = if err.is_budget() {
            EXIT_BUDGET
        } else if err.is_inconsistent() {
            EXIT_INCONSISTENT
        } else {
            EXIT_USAGE
        };
        print_failure(
            command,
            horizon,
            self.budget.enumeration_cap,
            self.format,
            error_code(err),
            &err.to_string(),
            &[],
            exit,
        )
    }
}

fn error_code(err: &Error) -> &'static str {
    match err {
        Error::Budget(_) => "E_BUDGET",
        Error::Inconsistent { .. } => "E_INCONSISTENT",
        Error::IfaceMismatch(_) => "E_IFACE_MISMATCH",
        Error::Cycle(_) => "E_CYCLE",
        Error::DomainMismatch(_) => "E_DOMAIN_MISMATCH",
        Error::OutputClash(_) => "E_OUTPUT_CLASH",
        Error::MixedTarget { .. } => "E_MIXED_TARGET",
        Error::NothingToSplit(_) => "E_NOTHING_TO_SPLIT",
        Error::LocalStateDep { .. } => "E_LOCAL_STATE_DEP",
        Error::LocalCycle(_) => "E_LOCAL_CYCLE",
        Error::UnknownLocal(_) => "E_UNKNOWN_LOCAL",
        Error::LocalCoTarget { .. } => "E_LOCAL_CO_TARGET",
        Error::OutTargetsState { .. } => "E_OUT_TARGETS_STATE",
        Error::UnknownOutput(_) => "E_UNKNOWN_OUTPUT",
        Error::OutCoTarget { .. } => "E_OUT_CO_TARGET",
        Error::BadTarget(_) => "E_BAD_TARGET",
        Error::InvalidComponent { .. } => "E_INVALID",
    }
}

fn run(command: Command, ctx: &Ctx) -> i32 {
    match command {
        Command::Check { file } => cmd_check(ctx, &file),
        Command::Classify { file } => cmd_classify(ctx, &file),
        Command::Causality {
            file,
            strong,
            weak,
            horizon,
        } => cmd_causality(ctx, &file, strong, weak, horizon),
        Command::Decompose {
            file,
            schema,
            select,
            out,
            verify,
            horizon,
        } => cmd_decompose(ctx, &file, schema, &select, &out, verify, horizon),
        Command::Refines {
            concrete,
            abstract_spec,
            horizon,
        } => cmd_refines(ctx, &concrete, &abstract_spec, horizon),
        Command::Simulate { file, inputs } => cmd_simulate(ctx, &file, &inputs),
        Command::Group(group) => match group {
            GroupCommand::Verify { manifest, horizon } => cmd_group_verify(ctx, &manifest, horizon),
            GroupCommand::Extend {
                manifest,
                mode,
                delta,
                layer,
                spec,
                horizon,
            } => cmd_group_extend(ctx, &manifest, mode, &delta, layer, spec, horizon),
            GroupCommand::Dot { manifest } => cmd_group_dot(ctx, &manifest),
        },
        Command::Req(req) => match req {
            ReqCommand::Add {
                ledgerdir,
                file,
                horizon,
            } => cmd_req_add(ctx, &ledgerdir, &file, horizon),
            ReqCommand::Check {
                ledgerdir,
                system,
                horizon,
            } => cmd_req_check(ctx, &ledgerdir, &system, horizon),
        },
    }
}

/// Either a plain component or the deepest layer of a group manifest.
enum Side {
    Component(Component),
    Network(Network),
}

impl Side {
    fn machine(&self) -> Machine<'_> {
        match self {
            Side::Component(c) => Machine::Component(c),
            Side::Network(n) => Machine::Network(n),
        }
    }
}

fn load_side(path: &Path) -> Result<Side, Result<Vec<Diagnostic>, Error>> {
    if path.extension().is_some_and(|e| e == "fgroup") {
        let group = load_group(path).map_err(Ok)?;
        if group.layer_count() == 0 {
            return Ok(Side::Component(group.root));
        }
        let net = group.compose_layer(group.layer_count()).map_err(Err)?;
        Ok(Side::Network(net))
    } else {
        let comp = load_component(path).map_err(Ok)?;
        Ok(Side::Component(comp))
    }
}

fn cx_json(cx: &Counterexample) -> CounterexampleJson {
    CounterexampleJson {
        input: cx.input.dump(),
        output: cx.concrete_output.dump(),
    }
}

fn layer_json(l: &refold::refinement::LayerVerdict) -> LayerJson {
    LayerJson {
        layer: l.layer,
        verdict: holds(l.verdict.holds),
        traces_checked: l.verdict.traces_checked,
        horizon: l.verdict.horizon,
        counterexample: l.verdict.counterexample.as_ref().map(cx_json),
    }
}

// ---------------------------------------------------------------------------

fn cmd_check(ctx: &Ctx, file: &Path) -> i32 {
    match load_component(file) {
        Ok(comp) => {
            let summary = format!(
                "component {}: {} inputs, {} outputs, {} state vars, {} locals, {} formulas",
                comp.name,
                comp.inputs().count(),
                comp.outputs().count(),
                comp.state_vars().count(),
                comp.locals().count(),
                comp.formulas.len()
            );
            ctx.report(
                "check",
                DEFAULT_HORIZON,
                Body::Check {
                    valid: true,
                    summary,
                    diagnostics: vec![],
                },
            );
            EXIT_OK
        }
        Err(diags) => ctx.fail_diags("check", DEFAULT_HORIZON, &diags),
    }
}

fn cmd_classify(ctx: &Ctx, file: &Path) -> i32 {
    let comp = match load_component(file) {
        Ok(c) => c,
        Err(diags) => return ctx.fail_diags("classify", DEFAULT_HORIZON, &diags),
    };
    let report = match classify_component(&comp) {
        Ok(r) => r,
        Err(e) => return ctx.fail_error("classify", DEFAULT_HORIZON, &e),
    };
    let table = classification_table(&comp).expect("classification succeeded");
    ctx.report(
        "classify",
        DEFAULT_HORIZON,
        Body::Classify {
            table,
            moore: report.moore.len(),
            mealy: report.mealy.len(),
            transition: report.transition.len(),
            localdef: report.localdef.len(),
        },
    );
    EXIT_OK
}

fn cmd_causality(ctx: &Ctx, file: &Path, strong: bool, weak: bool, horizon: usize) -> i32 {
    if strong == weak {
        return print_failure(
            "causality",
            horizon,
            ctx.budget.enumeration_cap,
            ctx.format,
            "E_USAGE",
            "pass exactly one of --strong / --weak",
            &[],
            EXIT_USAGE,
        );
    }
    let comp = match load_component(file) {
        Ok(c) => c,
        Err(diags) => return ctx.fail_diags("causality", horizon, &diags),
    };
    let machine = Machine::Component(&comp);
    let verdict = if strong {
        check_strong_causality(&machine, horizon, &ctx.budget)
    } else {
        check_weak_causality(&machine, horizon, &ctx.budget)
    };
    match verdict {
        Ok(v) => {
            let kind = if strong { "strong" } else { "weak" };
            let exit = if v.holds { EXIT_OK } else { EXIT_CHECK_FAILED };
            ctx.report(
                "causality",
                horizon,
                Body::Causality {
                    kind: kind.into(),
                    verdict: holds(v.holds),
                    witness: v.witness.map(|w| WitnessJson {
                        tick: w.tick,
                        left: w.left.dump(),
                        right: w.right.dump(),
                    }),
                },
            );
            exit
        }
        Err(e) => ctx.fail_error("causality", horizon, &e),
    }
}

/// Definition size of each local: guard plus defining right-hand sides.
/// Size seven or more is the printed extraction hint.
fn locals_advisory(comp: &Component) -> Vec<String> {
    let mut lines = Vec::new();
    for v in comp.locals() {
        let mut nodes = 0usize;
        for f in &comp.formulas {
            let defines = f
                .consequent
                .iter()
                .any(|a| !a.target.next && a.target.name == v.name);
            if !defines {
                continue;
            }
            nodes += f.guard.node_count();
            for a in &f.consequent {
                if a.target.name == v.name {
                    if let AtomConstraint::Equals(rhs) = &a.constraint {
                        nodes += rhs.node_count();
                    }
                }
            }
        }
        let hint = if nodes >= 7 {
            " (candidate for extraction)"
        } else {
            ""
        };
        lines.push(format!("local {}: definition size {nodes}{hint}", v.name));
    }
    lines
}

fn cmd_decompose(
    ctx: &Ctx,
    file: &Path,
    schema: SchemaArg,
    select: &[String],
    out_dir: &Path,
    verify: bool,
    horizon: usize,
) -> i32 {
    let comp = match load_component(file) {
        Ok(c) => c,
        Err(diags) => return ctx.fail_diags("decompose", horizon, &diags),
    };

    let selection: BTreeSet<String> = select.iter().cloned().collect();
    let advisory = match schema {
        SchemaArg::Locals => locals_advisory(&comp),
        _ => Vec::new(),
    };
    if matches!(schema, SchemaArg::Locals | SchemaArg::Outputs) && selection.is_empty() {
        for line in &advisory {
            eprintln!("advisory: {line}");
        }
        return print_failure(
            "decompose",
            horizon,
            ctx.budget.enumeration_cap,
            ctx.format,
            "E_USAGE",
            "this schema needs --select with at least one name",
            &[],
            EXIT_USAGE,
        );
    }

    let (schema_name, result) = match schema {
        SchemaArg::MealyMoore => ("mealy-moore", split_mealy_moore(&comp)),
        SchemaArg::Locals => ("locals", extract_locals(&comp, &selection)),
        SchemaArg::Outputs => ("outputs", extract_outputs(&comp, &selection)),
    };
    let result: DecompositionResult = match result {
        Ok(r) => r,
        Err(e) => return ctx.fail_error("decompose", horizon, &e),
    };

    if let Err(e) = std::fs::create_dir_all(out_dir) {
        return print_failure(
            "decompose",
            horizon,
            ctx.budget.enumeration_cap,
            ctx.format,
            "E_IO",
            &format!("{}: {e}", out_dir.display()),
            &[],
            EXIT_USAGE,
        );
    }
    let write = |name: &str, content: String| -> std::io::Result<String> {
        let path = out_dir.join(name);
        std::fs::write(&path, content)?;
        Ok(path.display().to_string())
    };
    let slug = schema_name.replace('-', "_");
    let io = || -> std::io::Result<Vec<String>> {
        let mut files = Vec::new();
        files.push(write(
            &format!("{}.fspec", comp.name),
            render_component(&comp),
        )?);
        let mut layer_files = Vec::new();
        for part in &result.parts {
            let file = format!("{}.fspec", part.name);
            files.push(write(&file, render_component(part))?);
            layer_files.push(file);
        }
        files.push(write(
            &format!("{}_{slug}.fgroup", comp.name),
            render_group_manifest(
                &format!("{}_{slug}", comp.name),
                &format!("{}.fspec", comp.name),
                &[layer_files],
            ),
        )?);
        Ok(files)
    };
    let written = match io() {
        Ok(files) => files,
        Err(e) => {
            return print_failure(
                "decompose",
                horizon,
                ctx.budget.enumeration_cap,
                ctx.format,
                "E_IO",
                &e.to_string(),
                &[],
                EXIT_USAGE,
            );
        }
    };

    let mut exit = EXIT_OK;
    let verified = if verify {
        match verify_decomposition(&comp, &result, horizon, &ctx.budget) {
            Ok(v) => {
                if !v.equivalent {
                    exit = EXIT_CHECK_FAILED;
                }
                Some(VerdictJson {
                    verdict: if v.equivalent {
                        "equivalent".into()
                    } else {
                        "NOT equivalent".into()
                    },
                    traces_checked: v.traces_checked,
                    counterexample: v.counterexample.map(|cx| CounterexampleJson {
                        input: cx.input.dump(),
                        output: cx.output.dump(),
                    }),
                })
            }
            Err(e) => return ctx.fail_error("decompose", horizon, &e),
        }
    } else {
        None
    };

    ctx.report(
        "decompose",
        horizon,
        Body::Decompose {
            schema: schema_name.into(),
            advisory,
            written,
            verified,
        },
    );
    exit
}

fn cmd_refines(ctx: &Ctx, concrete: &Path, abstract_spec: &Path, horizon: usize) -> i32 {
    let load = |path: &Path| -> Result<Side, i32> {
        load_side(path).map_err(|e| match e {
            Ok(diags) => ctx.fail_diags("refines", horizon, &diags),
            Err(err) => ctx.fail_error("refines", horizon, &err),
        })
    };
    let concrete = match load(concrete) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let abstract_side = match load(abstract_spec) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match refines(
        concrete.machine(),
        abstract_side.machine(),
        horizon,
        &ctx.budget,
    ) {
        Ok(v) => {
            let exit = if v.holds { EXIT_OK } else { EXIT_CHECK_FAILED };
            ctx.report("refines", horizon, refines_body(&v));
            exit
        }
        Err(e) => ctx.fail_error("refines", horizon, &e),
    }
}

fn refines_body(v: &RefinementVerdict) -> Body {
    Body::Refines {
        verdict: holds(v.holds),
        traces_checked: v.traces_checked,
        counterexample: v.counterexample.as_ref().map(cx_json),
    }
}

fn cmd_simulate(ctx: &Ctx, file: &Path, inputs: &Path) -> i32 {
    let comp = match load_component(file) {
        Ok(c) => c,
        Err(diags) => return ctx.fail_diags("simulate", DEFAULT_HORIZON, &diags),
    };
    let text = match std::fs::read_to_string(inputs) {
        Ok(t) => t,
        Err(e) => {
            return print_failure(
                "simulate",
                DEFAULT_HORIZON,
                ctx.budget.enumeration_cap,
                ctx.format,
                "E_MISSING_FILE",
                &format!("{}: {e}", inputs.display()),
                &[],
                EXIT_USAGE,
            );
        }
    };
    let domains = comp
        .inputs()
        .map(|c| (c.name.clone(), c.domain.clone()))
        .collect();
    let trace = match Trace::parse(&text, &domains) {
        Ok(t) => t,
        Err(msg) => {
            return print_failure(
                "simulate",
                DEFAULT_HORIZON,
                ctx.budget.enumeration_cap,
                ctx.format,
                "E_SYNTAX",
                &format!("{}: {msg}", inputs.display()),
                &[],
                EXIT_USAGE,
            );
        }
    };
    let horizon = trace.horizon();
    match behaviors(&comp, &trace, &ctx.budget) {
        Ok(set) => {
            let traces: Vec<String> = set.iter().map(Trace::dump).collect();
            ctx.report(
                "simulate",
                horizon,
                Body::Simulate {
                    behaviors: traces.len(),
                    traces,
                },
            );
            EXIT_OK
        }
        Err(e) => ctx.fail_error("simulate", horizon, &e),
    }
}

fn cmd_group_verify(ctx: &Ctx, manifest: &Path, horizon: usize) -> i32 {
    let group = match load_group(manifest) {
        Ok(g) => g,
        Err(diags) => return ctx.fail_diags("group verify", horizon, &diags),
    };
    let warnings: Vec<String> = validate_group_shape(&group)
        .iter()
        .filter(|d| !d.is_error())
        .map(|d| d.to_string())
        .collect();
    match verify_group(&group, horizon, &ctx.budget) {
        Ok(v) => {
            let exit = if v.holds { EXIT_OK } else { EXIT_CHECK_FAILED };
            ctx.report(
                "group verify",
                horizon,
                Body::GroupVerify {
                    warnings,
                    layers: v.layers.iter().map(layer_json).collect(),
                    verdict: holds(v.holds),
                },
            );
            exit
        }
        Err(e) => ctx.fail_error("group verify", horizon, &e),
    }
}

fn cmd_group_extend(
    ctx: &Ctx,
    manifest_path: &Path,
    mode: ModeArg,
    delta_path: &Path,
    layer: usize,
    spec: usize,
    horizon: usize,
) -> i32 {
    let group = match load_group(manifest_path) {
        Ok(g) => g,
        Err(diags) => return ctx.fail_diags("group extend", horizon, &diags),
    };
    let manifest_text = std::fs::read_to_string(manifest_path).unwrap_or_default();
    let manifest = match refold::parser::parse_group_manifest(
        &manifest_text,
        &manifest_path.display().to_string(),
    ) {
        Ok(m) => m,
        Err(diags) => return ctx.fail_diags("group extend", horizon, &diags),
    };

    // The delta parses against the target's symbols.
    let target = if layer == 0 {
        &group.root
    } else {
        match group.layers.get(layer - 1).and_then(|l| l.get(spec)) {
            Some(c) => c,
            None => {
                return ctx.fail_error(
                    "group extend",
                    horizon,
                    &Error::BadTarget(format!("no spec at layer {layer}, index {spec}")),
                );
            }
        }
    };
    let delta_text = match std::fs::read_to_string(delta_path) {
        Ok(t) => t,
        Err(e) => {
            return print_failure(
                "group extend",
                horizon,
                ctx.budget.enumeration_cap,
                ctx.format,
                "E_MISSING_FILE",
                &format!("{}: {e}", delta_path.display()),
                &[],
                EXIT_USAGE,
            );
        }
    };
    let delta = match parse_delta_formulas(&delta_text, target, &delta_path.display().to_string())
    {
        Ok(d) => d,
        Err(diags) => {
            // Unknown symbols in a delta are a bad-target condition.
            let diags: Vec<Diagnostic> = diags
                .into_iter()
                .map(|mut d| {
                    if d.code == refold::diag::DiagCode::EUnknownSymbol {
                        d.code = refold::diag::DiagCode::EBadTarget;
                    }
                    d
                })
                .collect();
            return ctx.fail_diags("group extend", horizon, &diags);
        }
    };

    let lib_mode = match mode {
        ModeArg::InPlace => ExtendMode::InPlace,
        ModeArg::NewLayer => ExtendMode::NewLayer,
    };
    let outcome = match extend_spec(&group, layer, spec, delta, lib_mode, horizon, &ctx.budget) {
        Ok(o) => o,
        Err(e) => return ctx.fail_error("group extend", horizon, &e),
    };

    // Persist: rewrite changed spec files and, for a new layer, the manifest.
    let dir = manifest_path.parent().map(PathBuf::from).unwrap_or_default();
    let mut written = Vec::new();
    let mut io = || -> std::io::Result<()> {
        match lib_mode {
            ExtendMode::InPlace => {
                let path = if layer == 0 {
                    dir.join(&manifest.root)
                } else {
                    dir.join(&manifest.layers[layer - 1][spec])
                };
                let extended = if layer == 0 {
                    &outcome.group.root
                } else {
                    &outcome.group.layers[layer - 1][spec]
                };
                std::fs::write(&path, render_component(extended))?;
                written.push(path.display().to_string());
            }
            ExtendMode::NewLayer => {
                // The inserted layer copies the target layer's files, with
                // the extended copy written under its new name.
                let new_layer = &outcome.group.layers[layer];
                let mut files = Vec::new();
                for part in new_layer {
                    let known = part_file(&manifest, &group, part);
                    match known {
                        Some(f) => files.push(f),
                        None => {
                            let f = format!("{}.fspec", part.name);
                            std::fs::write(dir.join(&f), render_component(part))?;
                            written.push(dir.join(&f).display().to_string());
                            files.push(f);
                        }
                    }
                }
                let mut layers = manifest.layers.clone();
                layers.insert(layer, files);
                let text = render_group_manifest(&manifest.name, &manifest.root, &layers);
                std::fs::write(manifest_path, text)?;
                written.push(manifest_path.display().to_string());
            }
        }
        Ok(())
    };
    if let Err(e) = io() {
        return print_failure(
            "group extend",
            horizon,
            ctx.budget.enumeration_cap,
            ctx.format,
            "E_IO",
            &e.to_string(),
            &[],
            EXIT_USAGE,
        );
    }

    let all_hold = outcome.rechecked.iter().all(|l| l.verdict.holds);
    ctx.report(
        "group extend",
        horizon,
        Body::GroupExtend {
            mode: match mode {
                ModeArg::InPlace => "in-place".into(),
                ModeArg::NewLayer => "new-layer".into(),
            },
            layers_before: group.layer_count(),
            layers_after: outcome.group.layer_count(),
            specs_before: group.spec_count(),
            specs_after: outcome.group.spec_count(),
            written,
            rechecked: outcome.rechecked.iter().map(layer_json).collect(),
        },
    );
    if all_hold {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

/// The manifest file that already holds this part, when it is unchanged
/// from the loaded group.
fn part_file(
    manifest: &refold::parser::GroupManifest,
    group: &SpecificationGroup,
    part: &Component,
) -> Option<String> {
    if group.root == *part {
        return Some(manifest.root.clone());
    }
    for (li, layer) in group.layers.iter().enumerate() {
        for (si, spec) in layer.iter().enumerate() {
            if spec == part {
                return Some(manifest.layers[li][si].clone());
            }
        }
    }
    None
}

fn cmd_group_dot(ctx: &Ctx, manifest: &Path) -> i32 {
    match load_group(manifest) {
        Ok(group) => {
            ctx.report(
                "group dot",
                DEFAULT_HORIZON,
                Body::GroupDot {
                    dot: group_dot(&group),
                },
            );
            EXIT_OK
        }
        Err(diags) => ctx.fail_diags("group dot", DEFAULT_HORIZON, &diags),
    }
}

fn cmd_req_add(ctx: &Ctx, ledgerdir: &Path, file: &Path, horizon: usize) -> i32 {
    let ledger = match load_ledger(ledgerdir) {
        Ok(l) => l,
        Err(diags) => return ctx.fail_diags("req add", horizon, &diags),
    };
    let spec = match load_component(file) {
        Ok(c) => c,
        Err(diags) => return ctx.fail_diags("req add", horizon, &diags),
    };
    let id = file
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let requirement = Requirement { id, spec };

    let notes = match deeper_relations(&ledger, &requirement, horizon, &ctx.budget) {
        Ok(rels) => rels
            .into_iter()
            .map(|(level, id, rel)| format!("relates to {id} at level {level} ({})", rel.as_str()))
            .collect(),
        Err(e) => return ctx.fail_error("req add", horizon, &e),
    };

    let (next, outcome) = match add_requirement(&ledger, requirement, horizon, &ctx.budget) {
        Ok(pair) => pair,
        Err(e) => return ctx.fail_error("req add", horizon, &e),
    };

    let mut touched = Vec::new();
    if !matches!(outcome, InsertionOutcome::Duplicate { .. }) {
        match save_ledger(ledgerdir, &next) {
            Ok(paths) => {
                touched = paths.iter().map(|p| p.display().to_string()).collect();
            }
            Err(e) => {
                return print_failure(
                    "req add",
                    horizon,
                    ctx.budget.enumeration_cap,
                    ctx.format,
                    "E_IO",
                    &e.to_string(),
                    &[],
                    EXIT_USAGE,
                );
            }
        }
    }

    let soundness = match check_level_soundness(&next, horizon, &ctx.budget) {
        Ok(list) => list
            .iter()
            .map(|(k, v)| format!("level {k} implies level {}: {}", k + 1, holds(v.holds)))
            .collect(),
        Err(e) => return ctx.fail_error("req add", horizon, &e),
    };

    let detail = match &outcome {
        InsertionOutcome::PromotedToAbstract { level, witness } => {
            format!(" (level {level}, witness {witness})")
        }
        InsertionOutcome::Replaced { displaced } => {
            format!(" (displaced: {})", displaced.join(", "))
        }
        InsertionOutcome::NewDimension => String::new(),
        InsertionOutcome::Duplicate { of } => format!(" (of {of})"),
    };
    ctx.report(
        "req add",
        horizon,
        Body::ReqAdd {
            outcome: outcome.as_str().into(),
            detail,
            touched,
            notes,
            level_soundness: soundness,
        },
    );
    EXIT_OK
}

fn cmd_req_check(ctx: &Ctx, ledgerdir: &Path, system: &Path, horizon: usize) -> i32 {
    let ledger = match load_ledger(ledgerdir) {
        Ok(l) => l,
        Err(diags) => return ctx.fail_diags("req check", horizon, &diags),
    };
    let system = match load_component(system) {
        Ok(c) => c,
        Err(diags) => return ctx.fail_diags("req check", horizon, &diags),
    };
    match check_system(&system, &ledger, horizon, &ctx.budget) {
        Ok(check) => {
            let exit = if check.holds { EXIT_OK } else { EXIT_CHECK_FAILED };
            ctx.report(
                "req check",
                horizon,
                Body::ReqCheck {
                    verdict: holds(check.holds),
                    note: check
                        .vacuous
                        .then(|| "0 requirements at level 0; vacuously satisfied".to_string()),
                    requirements: check
                        .verdicts
                        .iter()
                        .map(|(id, v)| ReqVerdictJson {
                            id: id.clone(),
                            verdict: holds(v.holds),
                            counterexample: v.counterexample.as_ref().map(cx_json),
                        })
                        .collect(),
                },
            );
            exit
        }
        Err(e) => ctx.fail_error("req check", horizon, &e),
    }
}
