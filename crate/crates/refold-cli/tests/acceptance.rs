//! Acceptance gate. One test per criterion; each prints a PASS line when it
//! went through (run with `-- --nocapture` to see them).

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use refold::causality::{
    check_strong_causality, check_weak_causality, classify_component, classify_formula,
    FormulaClass,
};
use refold::decompose::{
    extract_locals, extract_outputs, split_mealy_moore, verify_decomposition, DecompositionResult,
};
use refold::error::Error;
use refold::model::{Component, ValueDomain};
use refold::refinement::{compose_with_aux_hidden, refines_components};
use refold::requirements::{
    add_requirement, check_level_soundness, InsertionOutcome, Requirement, RequirementLedger,
};
use refold::semantics::{Budget, Machine};
use refold_oracle::fixtures::{self, fixture_path};
use refold_oracle::gen;
use refold_oracle::golden::{behavior_table, step_table};

const BUDGET: Budget = Budget {
    horizon_cap: 6,
    enumeration_cap: 1_000_000,
};

fn refold_cmd(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_refold"))
        .args(args)
        .env_remove("REFOLD_BUDGET")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn fx(name: &str) -> String {
    fixture_path(name).display().to_string()
}

fn fixture_horizon(name: &str) -> usize {
    if name == "Adder" { 3 } else { 4 }
}

/// Every applicable (schema name, CLI args, library result) per fixture.
fn applicable_schemas(comp: &Component) -> Vec<(String, Vec<String>, DecompositionResult)> {
    let mut out = Vec::new();
    if let Ok(r) = split_mealy_moore(comp) {
        out.push(("mealy-moore".to_string(), vec![], r));
    }
    let locals: BTreeSet<String> = comp.locals().map(|v| v.name.clone()).collect();
    if !locals.is_empty() {
        if let Ok(r) = extract_locals(comp, &locals) {
            let select = locals.iter().cloned().collect::<Vec<_>>().join(",");
            out.push(("locals".to_string(), vec!["--select".into(), select], r));
        }
    }
    let outputs: BTreeSet<String> = comp.outputs().map(|c| c.name.clone()).collect();
    if let Ok(r) = extract_outputs(comp, &outputs) {
        let select = outputs.iter().cloned().collect::<Vec<_>>().join(",");
        out.push(("outputs".to_string(), vec!["--select".into(), select], r));
    }
    out
}

// --- criterion 1: fixture corpus + oracle golden files ------------------------

#[test]
fn acceptance_fixture_corpus_and_golden_files() {
    let lamp = fixtures::lamp();
    assert_eq!(lamp.inputs().count(), 1);
    assert!(matches!(
        &lamp.inputs().next().unwrap().domain,
        ValueDomain::Enumeration(l) if l.len() == 2
    ));
    assert_eq!(lamp.state_vars().count(), 1);
    assert_eq!(lamp.formulas.len(), 5);

    let lamp_echo = fixtures::lamp_echo();
    let classes = classify_component(&lamp_echo).unwrap();
    assert!(!classes.mealy.is_empty(), "LampEcho adds a Mealy output");

    let adder = fixtures::adder();
    assert_eq!(adder.locals().count(), 1);

    let cruise = fixtures::cruise();
    assert_eq!(cruise.inputs().count(), 2);
    assert_eq!(cruise.outputs().count(), 2);
    assert_eq!(cruise.state_vars().count(), 1);
    assert_eq!(cruise.locals().count(), 1);
    assert!(cruise.formulas.len() >= 8);

    let reqs = fixtures::requirement_corpus();
    assert!(reqs.len() >= 3);
    for r in &reqs {
        assert!(r.spec_has_x_0_3(), "requirement fixtures range over x: int 0..3");
    }

    // Golden files were produced by the brute-force oracle; recompute and
    // compare byte for byte.
    let golden_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../refold/tests/golden");
    let read = |name: &str| std::fs::read_to_string(golden_dir.join(name)).unwrap();
    assert_eq!(step_table(&lamp), read("lamp_step.txt"));
    assert_eq!(step_table(&lamp_echo), read("lamp_echo_step.txt"));
    assert_eq!(step_table(&adder), read("adder_step.txt"));
    assert_eq!(step_table(&cruise), read("cruise_step.txt"));
    assert_eq!(behavior_table(&lamp, 2), read("lamp_behaviors_h2.txt"));
    assert_eq!(behavior_table(&adder, 3), read("adder_behaviors_h3.txt"));
    assert_eq!(behavior_table(&cruise, 2), read("cruise_behaviors_h2.txt"));

    println!("acceptance: fixture corpus + golden oracle files: PASS");
}

trait ReqFixture {
    fn spec_has_x_0_3(&self) -> bool;
}

impl ReqFixture for Component {
    fn spec_has_x_0_3(&self) -> bool {
        self.outputs()
            .any(|c| c.name == "x" && c.domain == ValueDomain::BoundedInt { lo: 0, hi: 3 })
    }
}

// --- criterion 2: decomposition soundness --------------------------------------

#[test]
fn acceptance_decomposition_soundness() {
    let started = Instant::now();
    let expected_traces = |name: &str| -> u64 {
        match name {
            "Lamp" | "LampEcho" => 16,
            "Adder" => 27,
            "Cruise" => 256,
            other => panic!("unexpected fixture {other}"),
        }
    };

    let mut instances = 0;
    for (file, comp) in [
        ("lamp.fspec", fixtures::lamp()),
        ("lamp_echo.fspec", fixtures::lamp_echo()),
        ("adder.fspec", fixtures::adder()),
        ("cruise.fspec", fixtures::cruise()),
    ] {
        let horizon = fixture_horizon(&comp.name);
        for (schema, select_args, _) in applicable_schemas(&comp) {
            let dir = tempfile::tempdir().unwrap();
            let mut args: Vec<String> = vec![
                "decompose".into(),
                fx(file),
                "--schema".into(),
                schema.clone(),
                "--out".into(),
                dir.path().display().to_string(),
                "--verify".into(),
                "--horizon".into(),
                horizon.to_string(),
            ];
            args.extend(select_args);
            let argv: Vec<&str> = args.iter().map(String::as_str).collect();
            let (code, out) = refold_cmd(&argv);
            assert_eq!(code, 0, "{}/{schema}: {out}", comp.name);
            assert!(
                out.contains(&format!(
                    "equivalence: equivalent ({} input traces)",
                    expected_traces(&comp.name)
                )),
                "{}/{schema}: {out}",
                comp.name
            );
            instances += 1;
        }
    }
    assert!(instances >= 8, "only {instances} schema instances ran");
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "decomposition soundness took {elapsed:?}, budget is 10 s"
    );
    println!(
        "acceptance: decomposition soundness ({instances} instances in {elapsed:?}): PASS"
    );
}

// --- criterion 3: mutation detection --------------------------------------------

#[test]
fn acceptance_mutation_detection() {
    let mut mutations = 0;
    for comp in fixtures::corpus() {
        let horizon = fixture_horizon(&comp.name);
        for (schema, _, result) in applicable_schemas(&comp) {
            for (pi, part) in result.parts.iter().enumerate() {
                for (fi, f) in part.formulas.iter().enumerate() {
                    if !matches!(classify_formula(part, f), Ok(FormulaClass::MooreOutput)) {
                        continue;
                    }
                    let mut mutated = result.clone();
                    mutated.parts[pi].formulas.remove(fi);
                    mutated.network = compose_with_aux_hidden(mutated.parts.clone()).unwrap();
                    let verdict =
                        verify_decomposition(&comp, &mutated, horizon, &BUDGET).unwrap();
                    assert!(
                        !verdict.equivalent,
                        "{}/{schema}: deleting {} from {} went unnoticed",
                        comp.name, f.label, part.name
                    );
                    assert!(verdict.counterexample.is_some());
                    mutations += 1;
                }
            }
        }
    }
    assert!(mutations >= 10, "only {mutations} Moore-output mutations exercised");
    println!("acceptance: mutation detection ({mutations}/{mutations} detected): PASS");
}

// --- criterion 4: refinement laws ------------------------------------------------

#[test]
fn acceptance_refinement_laws() {
    let mut corpus = fixtures::requirement_corpus();
    corpus.extend(fixtures::systems());

    // Reflexivity, every fixture with itself.
    for c in corpus.iter().chain(fixtures::corpus().iter()) {
        assert!(
            refines_components(c, c, 3, &BUDGET).unwrap().holds,
            "{} must refine itself",
            c.name
        );
    }

    // Transitivity over all ordered triples with matching interfaces.
    let n = corpus.len();
    let mut holds = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            holds[i][j] = refines_components(&corpus[i], &corpus[j], 3, &BUDGET)
                .unwrap()
                .holds;
        }
    }
    let mut triples = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if holds[i][j] && holds[j][k] {
                    triples += 1;
                    assert!(
                        holds[i][k],
                        "transitivity violated: {} -> {} -> {}",
                        corpus[i].name, corpus[j].name, corpus[k].name
                    );
                }
            }
        }
    }
    assert!(triples > 0);

    // Counterexample persistence: failures at H=3 persist at H=4.
    let mut persisted = 0;
    for i in 0..n {
        for j in 0..n {
            if !holds[i][j] {
                let again = refines_components(&corpus[i], &corpus[j], 4, &BUDGET).unwrap();
                assert!(
                    !again.holds,
                    "{} vs {} fails at H=3 but holds at H=4",
                    corpus[i].name, corpus[j].name
                );
                persisted += 1;
            }
        }
    }
    assert!(persisted > 0);

    println!(
        "acceptance: refinement laws (reflexivity, {triples} transitive chains, {persisted} persistent failures): PASS"
    );
}

// --- criterion 5: requirement insertion cases ------------------------------------

#[test]
fn acceptance_requirement_cases() {
    let load = |file: &str, id: &str| Requirement {
        id: id.into(),
        spec: fixtures::load(file),
    };
    let base = || {
        add_requirement(
            &RequirementLedger::default(),
            load("req_x_le1.fspec", "req_x_le1"),
            3,
            &BUDGET,
        )
        .unwrap()
        .0
    };
    let sound = |ledger: &RequirementLedger| {
        check_level_soundness(ledger, 3, &BUDGET)
            .unwrap()
            .iter()
            .all(|(_, v)| v.holds)
    };

    // Case 1: x ≤ 2 after x ≤ 1.
    let (l1, o1) = add_requirement(&base(), load("req_x_le2.fspec", "req_x_le2"), 3, &BUDGET)
        .unwrap();
    assert_eq!(
        o1,
        InsertionOutcome::PromotedToAbstract {
            level: 1,
            witness: "req_x_le1".into()
        }
    );
    assert!(sound(&l1));

    // Case 2: x = 0 after x ≤ 1, displacing it.
    let (l2, o2) = add_requirement(&base(), load("req_x_eq0.fspec", "req_x_eq0"), 3, &BUDGET)
        .unwrap();
    assert_eq!(
        o2,
        InsertionOutcome::Replaced {
            displaced: vec!["req_x_le1".into()]
        }
    );
    assert_eq!(l2.levels[0][0].id, "req_x_eq0");
    assert_eq!(l2.levels[1][0].id, "req_x_le1");
    assert!(sound(&l2));

    // Case 3: a y constraint opens a new dimension.
    let (l3, o3) = add_requirement(&base(), load("req_y_le1.fspec", "req_y_le1"), 3, &BUDGET)
        .unwrap();
    assert_eq!(o3, InsertionOutcome::NewDimension);
    assert_eq!(l3.levels[0].len(), 2);
    assert!(sound(&l3));

    // Duplicate guard: re-adding each newcomer leaves the ledger unchanged.
    for (ledger, file, of) in [
        (&l1, "req_x_le2.fspec", "req_x_le2"),
        (&l2, "req_x_eq0.fspec", "req_x_eq0"),
        (&l3, "req_y_le1.fspec", "req_y_le1"),
    ] {
        let (after, outcome) =
            add_requirement(ledger, load(file, "again"), 3, &BUDGET).unwrap();
        assert_eq!(outcome, InsertionOutcome::Duplicate { of: of.into() });
        assert_eq!(after.insertion_order, ledger.insertion_order);
        assert!(sound(&after));
    }

    println!("acceptance: requirement insertion cases (1/2/3 + duplicate + level soundness): PASS");
}

// --- criterion 6: group verification ----------------------------------------------

#[test]
fn acceptance_group_verification() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let (code, _) = refold_cmd(&[
        "decompose",
        &fx("lamp.fspec"),
        "--schema",
        "mealy-moore",
        "--out",
        &out,
    ]);
    assert_eq!(code, 0);
    let manifest = dir.path().join("Lamp_mealy_moore.fgroup");
    let manifest_arg = manifest.display().to_string();

    let (code, text) = refold_cmd(&["group", "verify", &manifest_arg, "--horizon", "4"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("layer 1: HOLDS (traces checked: 16, H=4)"), "{text}");
    assert!(text.contains("group: HOLDS"));

    // Size law on the loaded group.
    let group = refold::parser::load_group(&manifest).unwrap();
    assert!(group.spec_count() >= group.layer_count());

    // Extend in place: m and N stay put.
    let delta = dir.path().join("delta.txt");
    std::fs::write(&delta, "extra: mode = Off ==> lamp = off\n").unwrap();
    let (code, text) = refold_cmd(&[
        "group", "extend", &manifest_arg, "--mode", "in-place", "--delta",
        &delta.display().to_string(), "--horizon", "4",
    ]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("layers 1 -> 1; specs 3 -> 3"), "{text}");
    let group = refold::parser::load_group(&manifest).unwrap();
    assert_eq!((group.layer_count(), group.spec_count()), (1, 3));
    assert!(group.spec_count() >= group.layer_count());

    // Extend with a new layer: m and N grow by exactly one. The in-place
    // step already used the `extra` label, so the new delta gets its own.
    let delta2 = dir.path().join("delta2.txt");
    std::fs::write(&delta2, "extra2: mode = On ==> lamp = on\n").unwrap();
    let (code, text) = refold_cmd(&[
        "group", "extend", &manifest_arg, "--mode", "new-layer", "--delta",
        &delta2.display().to_string(), "--horizon", "4",
    ]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("layers 1 -> 2; specs 3 -> 4"), "{text}");
    let group = refold::parser::load_group(&manifest).unwrap();
    assert_eq!((group.layer_count(), group.spec_count()), (2, 4));
    assert!(group.spec_count() >= group.layer_count());

    let (code, text) = refold_cmd(&["group", "verify", &manifest_arg, "--horizon", "4"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("group: HOLDS"));

    println!("acceptance: group verification (HOLDS at H=4; size law; extend arithmetic): PASS");
}

// --- criterion 7: causality --------------------------------------------------------

#[test]
fn acceptance_causality() {
    // Weak causality must hold on 200 randomly generated valid components.
    // Components that admit no behavior at all are skipped (there is nothing
    // to audit); generation continues until 200 verdicts came back.
    let mut checked = 0;
    let mut seed = 10_000u64;
    while checked < 200 {
        let comp = gen::component_from_seed(seed);
        seed += 1;
        match check_weak_causality(&Machine::Component(&comp), 2, &BUDGET) {
            Ok(v) => {
                assert!(v.holds, "seed {}: weak causality failed", seed - 1);
                checked += 1;
            }
            Err(Error::Inconsistent { .. }) => continue,
            Err(e) => panic!("seed {}: {e}", seed - 1),
        }
    }

    // Syntactic implies semantic: no Mealy formulas means strong causality,
    // on every fixture where the premise applies.
    let mut premise_applied = 0;
    for comp in fixtures::corpus()
        .into_iter()
        .chain(fixtures::requirement_corpus())
        .chain(fixtures::systems())
    {
        let Ok(report) = classify_component(&comp) else {
            continue;
        };
        if !report.mealy.is_empty() {
            continue;
        }
        premise_applied += 1;
        let v = check_strong_causality(&Machine::Component(&comp), 3, &BUDGET).unwrap();
        assert!(v.holds, "{}: mealy=∅ but strong causality fails", comp.name);
    }
    assert!(premise_applied >= 3, "premise applied to {premise_applied} fixtures only");

    println!(
        "acceptance: causality (weak holds on 200 generated components; mealy=∅ ⇒ strong on {premise_applied} fixtures): PASS"
    );
}

// --- criterion 8: CLI determinism ----------------------------------------------------

#[test]
fn acceptance_cli_determinism() {
    // Every invocation runs twice against an identically named, freshly
    // rebuilt working directory; reports must be byte-identical.
    let dir = tempfile::tempdir().unwrap();
    let work = dir.path().join("work");

    type Setup = Box<dyn Fn(&Path)>;
    let nothing: fn() -> Setup = || Box::new(|_| {});
    let with_lamp_group: fn() -> Setup = || {
        Box::new(|work: &Path| {
            let (code, _) = refold_cmd(&[
                "decompose",
                &fx("lamp.fspec"),
                "--schema",
                "mealy-moore",
                "--out",
                &work.display().to_string(),
            ]);
            assert_eq!(code, 0);
            std::fs::write(work.join("delta.txt"), "extra: mode = Off ==> lamp = off\n")
                .unwrap();
        })
    };
    let with_ledger: fn() -> Setup = || {
        Box::new(|work: &Path| {
            let ld = work.join("ledger").display().to_string();
            for f in ["req_x_le1.fspec", "req_x_le2.fspec"] {
                let (code, _) = refold_cmd(&["req", "add", &ld, &fx(f), "--horizon", "3"]);
                assert_eq!(code, 0);
            }
        })
    };

    let manifest = |work: &Path| work.join("Lamp_mealy_moore.fgroup").display().to_string();
    type ArgsOf = Box<dyn Fn(&Path) -> Vec<String>>;
    let cases: Vec<(Setup, ArgsOf)> = vec![
        (nothing(), Box::new(|_| vec!["check".into(), fx("lamp.fspec")])),
        (nothing(), Box::new(|_| vec!["classify".into(), fx("cruise.fspec")])),
        (
            nothing(),
            Box::new(|_| vec!["classify".into(), fx("lamp.fspec"), "--format".into(), "json".into()]),
        ),
        (
            nothing(),
            Box::new(|_| {
                vec!["causality".into(), fx("lamp_echo.fspec"), "--strong".into(), "--horizon".into(), "3".into()]
            }),
        ),
        (
            nothing(),
            Box::new(|_| {
                vec!["causality".into(), fx("cruise.fspec"), "--weak".into(), "--horizon".into(), "2".into()]
            }),
        ),
        (
            nothing(),
            Box::new(|work| {
                vec![
                    "decompose".into(), fx("cruise.fspec"), "--schema".into(), "mealy-moore".into(),
                    "--out".into(), work.join("d").display().to_string(), "--verify".into(),
                ]
            }),
        ),
        (
            nothing(),
            Box::new(|work| {
                vec![
                    "decompose".into(), fx("adder.fspec"), "--schema".into(), "locals".into(),
                    "--select".into(), "d".into(),
                    "--out".into(), work.join("d").display().to_string(), "--verify".into(),
                    "--horizon".into(), "3".into(),
                ]
            }),
        ),
        (
            nothing(),
            Box::new(|work| {
                vec![
                    "decompose".into(), fx("lamp_echo.fspec"), "--schema".into(), "outputs".into(),
                    "--select".into(), "echo,lamp".into(),
                    "--out".into(), work.join("d").display().to_string(), "--verify".into(),
                ]
            }),
        ),
        (
            with_lamp_group(),
            Box::new(move |work| {
                vec!["refines".into(), manifest(work), fx("lamp.fspec"), "--horizon".into(), "4".into()]
            }),
        ),
        (
            nothing(),
            Box::new(|_| {
                vec![
                    "refines".into(), fx("sys_xy_loose.fspec"), fx("req_x_le1.fspec"),
                    "--horizon".into(), "2".into(), "--format".into(), "json".into(),
                ]
            }),
        ),
        (
            nothing(),
            Box::new(|_| {
                vec!["simulate".into(), fx("lamp.fspec"), "--inputs".into(), fx("traces/lamp_press_idle.trace")]
            }),
        ),
        (
            with_lamp_group(),
            Box::new(move |work| {
                vec!["group".into(), "verify".into(), manifest(work), "--horizon".into(), "4".into()]
            }),
        ),
        (
            with_lamp_group(),
            Box::new(move |work| {
                vec!["group".into(), "verify".into(), manifest(work), "--format".into(), "json".into()]
            }),
        ),
        (
            with_lamp_group(),
            Box::new(move |work| {
                vec![
                    "group".into(), "extend".into(), manifest(work),
                    "--mode".into(), "in-place".into(),
                    "--delta".into(), work.join("delta.txt").display().to_string(),
                ]
            }),
        ),
        (
            with_lamp_group(),
            Box::new(move |work| {
                vec![
                    "group".into(), "extend".into(), manifest(work),
                    "--mode".into(), "new-layer".into(),
                    "--delta".into(), work.join("delta.txt").display().to_string(),
                ]
            }),
        ),
        (
            with_lamp_group(),
            Box::new(move |work| vec!["group".into(), "dot".into(), manifest(work)]),
        ),
        (
            with_ledger(),
            Box::new(|work| {
                vec![
                    "req".into(), "add".into(), work.join("ledger").display().to_string(),
                    fx("req_x_eq0.fspec"), "--horizon".into(), "3".into(),
                ]
            }),
        ),
        (
            with_ledger(),
            Box::new(|work| {
                vec![
                    "req".into(), "check".into(), work.join("ledger").display().to_string(),
                    fx("sys_xy_loose.fspec"), "--horizon".into(), "3".into(),
                ]
            }),
        ),
        (
            with_ledger(),
            Box::new(|work| {
                vec![
                    "req".into(), "check".into(), work.join("ledger").display().to_string(),
                    fx("sys_xy_zero.fspec"), "--format".into(), "json".into(),
                ]
            }),
        ),
    ];

    for (idx, (setup, args_of)) in cases.iter().enumerate() {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            if work.exists() {
                std::fs::remove_dir_all(&work).unwrap();
            }
            std::fs::create_dir_all(&work).unwrap();
            setup(&work);
            let args = args_of(&work);
            let argv: Vec<&str> = args.iter().map(String::as_str).collect();
            outputs.push(refold_cmd(&argv));
        }
        assert_eq!(
            outputs[0], outputs[1],
            "case {idx} ({:?}) is not byte-identical across runs",
            args_of(&work)
        );
    }

    println!(
        "acceptance: CLI determinism ({} invocations, byte-identical reports): PASS",
        cases.len()
    );
}
