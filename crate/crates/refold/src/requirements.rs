//! Requirement ledgers: ordered abstraction levels of requirement specs,
//! maintained by three insertion cases, plus the system-satisfies-ledger
//! check.
//!
//! Level 0 is the strongest frontier. A new requirement that strengthens an
//! existing one replaces it (the displaced one moves up); one that weakens
//! an existing one is filed at the next level of abstraction; one related
//! to nothing opens a new dimension of the frontier.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::diag::{DiagCode, Diagnostic};
use crate::error::{Error, Result};
use crate::model::{
    validate_component, Atom, AtomConstraint, Component, Formula, Interface, VarDecl,
};
use crate::refinement::{refines_components, RefinementVerdict};
use crate::semantics::Budget;

#[derive(Debug, Clone)]
pub struct Requirement {
    pub id: String,
    pub spec: Component,
}

/// Levels of requirements, level 0 the most concrete, plus the insertion
/// order used for the persisted index.
#[derive(Debug, Clone, Default)]
pub struct RequirementLedger {
    pub levels: Vec<Vec<Requirement>>,
    pub insertion_order: Vec<String>,
}

impl RequirementLedger {
    pub fn all(&self) -> impl Iterator<Item = (usize, &Requirement)> {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(k, level)| level.iter().map(move |r| (k, r)))
    }

    pub fn interface(&self) -> Option<Interface> {
        self.all().next().map(|(_, r)| r.spec.interface())
    }

    pub fn find(&self, id: &str) -> Option<(usize, &Requirement)> {
        self.all().find(|(_, r)| r.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbstractionRelation {
    /// `a` implies `b`: a is the more concrete of the two.
    LessAbstract,
    /// `b` implies `a`.
    MoreAbstract,
    Equivalent,
    Incomparable,
}

impl AbstractionRelation {
    pub fn as_str(self) -> &'static str {
        match self {
            AbstractionRelation::LessAbstract => "less-abstract",
            AbstractionRelation::MoreAbstract => "more-abstract",
            AbstractionRelation::Equivalent => "equivalent",
            AbstractionRelation::Incomparable => "incomparable",
        }
    }
}

/// Where does `a` sit relative to `b` on the abstraction order? Less
/// abstract means `a` implies `b`, checked as behavioral refinement.
pub fn abstraction_relation(
    a: &Requirement,
    b: &Requirement,
    horizon: usize,
    budget: &Budget,
) -> Result<AbstractionRelation> {
    let ab = refines_components(&a.spec, &b.spec, horizon, budget)?.holds;
    let ba = refines_components(&b.spec, &a.spec, horizon, budget)?.holds;
    Ok(match (ab, ba) {
        (true, true) => AbstractionRelation::Equivalent,
        (true, false) => AbstractionRelation::LessAbstract,
        (false, true) => AbstractionRelation::MoreAbstract,
        (false, false) => AbstractionRelation::Incomparable,
    })
}

/// The three insertion cases plus the duplicate guard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InsertionOutcome {
    /// Case 1: something at level 0 already implies the newcomer, which is
    /// therefore filed at the next level of abstraction.
    PromotedToAbstract { level: usize, witness: String },
    /// Case 2: the newcomer strengthens existing frontier entries; they move
    /// up one level and the newcomer takes their place.
    Replaced { displaced: Vec<String> },
    /// Case 3: unrelated to the whole frontier.
    NewDimension,
    /// Semantically equal to a ledgered requirement; the ledger is unchanged.
    Duplicate { of: String },
}

impl InsertionOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            InsertionOutcome::PromotedToAbstract { .. } => "promoted-to-abstract",
            InsertionOutcome::Replaced { .. } => "replaced",
            InsertionOutcome::NewDimension => "new-dimension",
            InsertionOutcome::Duplicate { .. } => "duplicate",
        }
    }
}

/// Insert a requirement, strengthening cases taking precedence: first the
/// duplicate guard over the whole ledger, then replacement (case 2), then
/// promotion (case 1), then a new dimension (case 3). Cases are evaluated
/// against level 0 only.
pub fn add_requirement(
    ledger: &RequirementLedger,
    r: Requirement,
    horizon: usize,
    budget: &Budget,
) -> Result<(RequirementLedger, InsertionOutcome)> {
    if let Some(diag) = validate_component(&r.spec).first() {
        return Err(Error::InvalidComponent {
            name: r.spec.name.clone(),
            first: diag.to_string(),
        });
    }
    if let Some(iface) = ledger.interface() {
        if iface != r.spec.interface() {
            return Err(Error::IfaceMismatch(format!(
                "requirement {} exposes {}, the ledger holds {}",
                r.id,
                r.spec.interface().describe(),
                iface.describe()
            )));
        }
    }
    if ledger.find(&r.id).is_some() {
        return Err(Error::BadTarget(format!(
            "requirement id {} is already ledgered",
            r.id
        )));
    }

    for (_, existing) in ledger.all() {
        if abstraction_relation(&r, existing, horizon, budget)? == AbstractionRelation::Equivalent
        {
            return Ok((
                ledger.clone(),
                InsertionOutcome::Duplicate {
                    of: existing.id.clone(),
                },
            ));
        }
    }

    let mut next = ledger.clone();
    if next.levels.is_empty() {
        next.levels.push(Vec::new());
    }
    next.insertion_order.push(r.id.clone());

    // Case 2: R strengthens part of the frontier.
    let mut displaced_ids = Vec::new();
    for existing in &next.levels[0] {
        if refines_components(&r.spec, &existing.spec, horizon, budget)?.holds {
            displaced_ids.push(existing.id.clone());
        }
    }
    if !displaced_ids.is_empty() {
        let (moved, kept): (Vec<Requirement>, Vec<Requirement>) = next.levels[0]
            .drain(..)
            .partition(|e| displaced_ids.contains(&e.id));
        next.levels[0] = kept;
        next.levels[0].push(r);
        if next.levels.len() < 2 {
            next.levels.push(Vec::new());
        }
        next.levels[1].extend(moved);
        return Ok((
            next,
            InsertionOutcome::Replaced {
                displaced: displaced_ids,
            },
        ));
    }

    // Case 1: the frontier already implies R.
    let witness = {
        let mut found = None;
        for existing in &next.levels[0] {
            if refines_components(&existing.spec, &r.spec, horizon, budget)?.holds {
                found = Some(existing.id.clone());
                break;
            }
        }
        found
    };
    if let Some(witness) = witness {
        if next.levels.len() < 2 {
            next.levels.push(Vec::new());
        }
        next.levels[1].push(r);
        return Ok((
            next,
            InsertionOutcome::PromotedToAbstract { level: 1, witness },
        ));
    }

    // Case 3: a new dimension of the frontier.
    next.levels[0].push(r);
    Ok((next, InsertionOutcome::NewDimension))
}

/// Relations of a requirement to entries beyond level 0; the insertion cases
/// ignore those, so they are surfaced as informational notes.
pub fn deeper_relations(
    ledger: &RequirementLedger,
    r: &Requirement,
    horizon: usize,
    budget: &Budget,
) -> Result<Vec<(usize, String, AbstractionRelation)>> {
    let mut notes = Vec::new();
    for (level, existing) in ledger.all() {
        if level == 0 {
            continue;
        }
        let rel = abstraction_relation(r, existing, horizon, budget)?;
        if rel != AbstractionRelation::Incomparable {
            notes.push((level, existing.id.clone(), rel));
        }
    }
    Ok(notes)
}

#[derive(Debug, Clone)]
pub struct SystemCheck {
    pub verdicts: Vec<(String, RefinementVerdict)>,
    pub holds: bool,
    /// Level 0 was empty; the check holds vacuously.
    pub vacuous: bool,
}

/// Does the system refine every level-0 requirement? Conjunction semantics:
/// the overall verdict holds iff every per-requirement verdict does. A
/// failing requirement is reported with its counterexample; the system is
/// never touched.
pub fn check_system(
    system: &Component,
    ledger: &RequirementLedger,
    horizon: usize,
    budget: &Budget,
) -> Result<SystemCheck> {
    let frontier = ledger.levels.first().map(Vec::as_slice).unwrap_or(&[]);
    let mut verdicts = Vec::new();
    let mut holds = true;
    for req in frontier {
        let v = refines_components(system, &req.spec, horizon, budget)?;
        holds &= v.holds;
        verdicts.push((req.id.clone(), v));
    }
    Ok(SystemCheck {
        vacuous: verdicts.is_empty(),
        holds,
        verdicts,
    })
}

/// Merge requirement specs into a single conjunction spec over the shared
/// interface. State and local variables get a per-requirement prefix so the
/// merged automaton runs them side by side.
pub fn merge_as_conjunction(
    specs: &[&Component],
    template: &Component,
    name: &str,
) -> Component {
    let mut vars: Vec<VarDecl> = Vec::new();
    let mut formulas: Vec<Formula> = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let rename: BTreeMap<String, String> = spec
            .vars
            .iter()
            .map(|v| (v.name.clone(), format!("__r{i}_{}", v.name)))
            .collect();
        for v in &spec.vars {
            vars.push(VarDecl {
                name: rename[&v.name].clone(),
                kind: v.kind.clone(),
                domain: v.domain.clone(),
            });
        }
        for f in &spec.formulas {
            formulas.push(Formula {
                label: format!("__r{i}_{}", f.label),
                guard: f.guard.rename_reads(&rename),
                consequent: f
                    .consequent
                    .iter()
                    .map(|a| Atom {
                        target: match rename.get(&a.target.name) {
                            Some(new) => crate::model::Target {
                                name: new.clone(),
                                next: a.target.next,
                            },
                            None => a.target.clone(),
                        },
                        constraint: match &a.constraint {
                            AtomConstraint::Equals(rhs) => {
                                AtomConstraint::Equals(rhs.rename_reads(&rename))
                            }
                            AtomConstraint::In(vs) => AtomConstraint::In(vs.clone()),
                        },
                    })
                    .collect(),
            });
        }
    }
    Component {
        name: name.to_string(),
        channels: template.channels.clone(),
        vars,
        formulas,
        pure_requirement: true,
    }
}

/// Check ⟦level k⟧ ⇒ ⟦level k+1⟧ for every pair of consecutive levels.
pub fn check_level_soundness(
    ledger: &RequirementLedger,
    horizon: usize,
    budget: &Budget,
) -> Result<Vec<(usize, RefinementVerdict)>> {
    let Some(template) = ledger.all().next().map(|(_, r)| r.spec.clone()) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for k in 0..ledger.levels.len().saturating_sub(1) {
        let lower: Vec<&Component> = ledger.levels[k].iter().map(|r| &r.spec).collect();
        let upper: Vec<&Component> = ledger.levels[k + 1].iter().map(|r| &r.spec).collect();
        let conj_lower = merge_as_conjunction(&lower, &template, "__conj_lower");
        let conj_upper = merge_as_conjunction(&upper, &template, "__conj_upper");
        let verdict = refines_components(&conj_lower, &conj_upper, horizon, budget)?;
        out.push((k, verdict));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Persistence: LEDGERDIR/level0, level1, … of .fspec files plus index.txt
// listing requirement ids in insertion order.
// ---------------------------------------------------------------------------

/// Load a ledger directory. A missing directory is an empty ledger.
pub fn load_ledger(dir: &Path) -> std::result::Result<RequirementLedger, Vec<Diagnostic>> {
    let mut ledger = RequirementLedger::default();
    if !dir.exists() {
        return Ok(ledger);
    }
    let index_path = dir.join("index.txt");
    let order: Vec<String> = match std::fs::read_to_string(&index_path) {
        Ok(text) => text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect(),
        Err(_) => Vec::new(),
    };

    let mut diags = Vec::new();
    let mut by_level: BTreeMap<usize, BTreeMap<String, Requirement>> = BTreeMap::new();
    for k in 0.. {
        let level_dir = dir.join(format!("level{k}"));
        if !level_dir.is_dir() {
            break;
        }
        let mut entries: Vec<PathBuf> = std::fs::read_dir(&level_dir)
            .map(|rd| {
                rd.filter_map(|e| e.ok())
                    .map(|e| e.path())
                    .filter(|p| p.extension().is_some_and(|x| x == "fspec"))
                    .collect()
            })
            .unwrap_or_default();
        entries.sort();
        for path in entries {
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            match crate::parser::load_component(&path) {
                Ok(spec) => {
                    by_level
                        .entry(k)
                        .or_default()
                        .insert(id.clone(), Requirement { id, spec });
                }
                Err(mut ds) => diags.append(&mut ds),
            }
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let max_level = by_level.keys().max().copied();
    if let Some(max) = max_level {
        ledger.levels = vec![Vec::new(); max + 1];
        // Within a level, requirements keep insertion order; ids missing from
        // the index sort after the indexed ones.
        for (k, mut reqs) in by_level {
            for id in &order {
                if let Some(r) = reqs.remove(id) {
                    ledger.levels[k].push(r);
                }
            }
            for (_, r) in reqs {
                ledger.levels[k].push(r);
            }
        }
    }
    // Interface consistency across the whole ledger.
    if let Some(iface) = ledger.interface() {
        for (_, r) in ledger.all() {
            if r.spec.interface() != iface {
                return Err(vec![Diagnostic::new(
                    DiagCode::EIface,
                    format!("requirement {} has a different interface", r.id),
                )]);
            }
        }
    }
    ledger.insertion_order = order;
    let unindexed: Vec<String> = ledger
        .all()
        .map(|(_, r)| r.id.clone())
        .filter(|id| !ledger.insertion_order.contains(id))
        .collect();
    ledger.insertion_order.extend(unindexed);
    Ok(ledger)
}

/// Write the ledger back: one directory per level, canonical rendering, and
/// the refreshed index. Returns the paths written.
pub fn save_ledger(dir: &Path, ledger: &RequirementLedger) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    // Remove stale level directories before rewriting.
    for k in 0.. {
        let level_dir = dir.join(format!("level{k}"));
        if !level_dir.is_dir() {
            break;
        }
        std::fs::remove_dir_all(&level_dir)?;
    }
    for (k, level) in ledger.levels.iter().enumerate() {
        let level_dir = dir.join(format!("level{k}"));
        std::fs::create_dir_all(&level_dir)?;
        for r in level {
            let path = level_dir.join(format!("{}.fspec", r.id));
            std::fs::write(&path, crate::parser::render_component(&r.spec))?;
            written.push(path);
        }
    }
    let index_path = dir.join("index.txt");
    std::fs::write(&index_path, ledger.insertion_order.join("\n") + "\n")?;
    written.push(index_path);
    Ok(written)
}
