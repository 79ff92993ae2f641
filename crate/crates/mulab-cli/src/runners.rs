//! One function per subcommand. Runners parse already-loaded file contents,
//! call the core, and produce a JSON report plus a human summary; input
//! problems surface as `Err` (exit 2), verdict mismatches as exit 1 inside
//! the output.

use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use serde_json::{json, Map, Value};

use mulab_core::conditions::{self, ConditionId};
use mulab_core::construction::{build_cum_example, build_fact_instance, verify_cum_example};
use mulab_core::logic::{ConsequenceOp, PropLanguage, RuleId, MAX_VARS};
use mulab_core::plausibility::{saturate, soundness_check, SoundnessOutcome};
use mulab_core::preferential::PreferentialStructure;
use mulab_core::search::{
    self, merge_outcomes, row_spec, ImplicationOutcome, ImplicationVerdict, InstanceSpec,
    MatrixRow,
};
use mulab_core::sets::{
    close_under_intersections, is_closed_under, ChoiceFunction, ClosureOp, SetFamily,
};

use crate::catalog::CatalogRow;
use crate::config::Guards;
use crate::formats::{
    self, bundled_family, choice_from_file, family_from_file, parse_axioms, parse_query,
    pl_structure_from_file, sequent_to_text, structure_from_file, structure_to_file, FamilyFile,
    PlStructureFile, StructureFile,
};
use crate::parallel::indexed_map;
use crate::report::{
    choice_json, closure_witness_json, condition_report_json, family_json,
    matrix_row_json, rule_report_json, subset_json, verdict_str,
    verify_report_json,
};

pub struct RunOutput {
    pub json: Value,
    pub summary: String,
    pub exit: i32,
}

fn top(fields: Vec<(&str, Value)>) -> Value {
    let mut obj = Map::new();
    obj.insert("format".into(), json!(formats::FORMAT_VERSION));
    for (k, v) in fields {
        obj.insert(k.into(), v);
    }
    Value::Object(obj)
}

pub fn construct(kappa: u32, guards: &Guards) -> Result<RunOutput> {
    let instance = build_cum_example(kappa, guards.kappa_max).map_err(|e| anyhow!("{e}"))?;
    let mut file: StructureFile = structure_to_file(&instance.structure);
    file.family = Some(formats::family_to_map(&instance.closed_family));
    file.choice = Some(formats::choice_to_map(&instance.choice));
    let json = serde_json::to_value(&file)?;
    let summary = format!(
        "built the kappa={kappa} chain instance: ground {}, {} generators, closed family of {}\n",
        instance.closed_family.ground().len(),
        instance.generators.len(),
        instance.closed_family.len(),
    );
    Ok(RunOutput { json, summary, exit: 0 })
}

pub fn verify(kappa: u32, guards: &Guards) -> Result<RunOutput> {
    let instance = build_cum_example(kappa, guards.kappa_max).map_err(|e| anyhow!("{e}"))?;
    let ground = instance.closed_family.ground().clone();
    let (report, exit) = match verify_cum_example(&instance) {
        Ok(r) => (r, 0),
        Err(v) => (v.report, 1),
    };
    let mut summary = String::new();
    for c in &report.claims {
        let _ = writeln!(
            summary,
            "claim ({}) {}: {}",
            c.id,
            if c.confirmed { "confirmed" } else { "VIOLATED" },
            c.description
        );
    }
    if let Some(fail) = &report.cum_failure {
        if let Some(w) = &fail.witness {
            let _ = writeln!(summary, "refutation: {}", conditions::describe_witness(w, &ground));
        }
    }
    Ok(RunOutput { json: verify_report_json(&ground, &report), summary, exit })
}

/// The three-element transitive-chain separation, fixed contents.
pub fn fact_instance(alpha: u32) -> Result<RunOutput> {
    let (structure, family) = build_fact_instance(alpha).map_err(|e| anyhow!("{e}"))?;
    let ground = family.ground().clone();
    let choice = structure.induced_choice(&family).map_err(|e| anyhow!("{e}"))?;
    let smooth = structure.is_smooth(&family).map_err(|e| anyhow!("{e}"))?;
    let cumt = conditions::check_cum(&choice, alpha, true);
    let json = top(vec![
        ("command", json!("fact-instance")),
        ("alpha", json!(alpha)),
        ("smooth", json!(smooth.is_smooth())),
        ("cumt", condition_report_json(&ground, &cumt)),
        ("family", family_json(&family)),
        ("choice", choice_json(&choice)),
    ]);
    let summary = format!(
        "three-element instance: smooth={}, mu-cumt({alpha}) {}\n",
        smooth.is_smooth(),
        verdict_str(cumt.verdict)
    );
    Ok(RunOutput { json, summary, exit: 0 })
}

pub fn mu(file: &StructureFile, set_csv: Option<&str>, family: Option<&FamilyFile>) -> Result<RunOutput> {
    let structure = structure_from_file(file)?;
    let ground = structure.ground().clone();
    let mut fields: Vec<(&str, Value)> = vec![("command", json!("mu"))];
    let mut summary = String::new();
    match (set_csv, family) {
        (Some(csv), None) => {
            let labels: Vec<&str> =
                csv.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let x = ground.mask_of(labels).map_err(|e| anyhow!("{e}"))?;
            let m = structure.mu(x);
            fields.push(("set", subset_json(&ground, x)));
            fields.push(("mu", subset_json(&ground, m)));
            let _ = writeln!(summary, "mu = {{{}}}", ground.labels_of(m).join(","));
        }
        (None, Some(f)) => {
            let fam = family_from_file(f)?;
            let choice = structure.induced_choice(&fam).map_err(|e| anyhow!("{e}"))?;
            fields.push(("choice", choice_json(&choice)));
            let _ = writeln!(summary, "tabulated mu on {} members", fam.len());
        }
        _ => bail!("pass exactly one of --set or --family"),
    }
    Ok(RunOutput { json: top(fields), summary, exit: 0 })
}

/// Load the choice function a `check` invocation talks about.
pub fn load_choice(
    input: Option<&FamilyFile>,
    structure: Option<&StructureFile>,
    family: Option<&FamilyFile>,
) -> Result<ChoiceFunction> {
    match (input, structure) {
        (Some(file), None) => choice_from_file(file),
        (None, Some(sfile)) => {
            let s = structure_from_file(sfile)?;
            let fam: SetFamily = match (bundled_family(sfile)?, family) {
                (Some(f), None) => f,
                (None, Some(f)) => family_from_file(f)?,
                (Some(_), Some(f)) => family_from_file(f)?,
                (None, None) => bail!("no family: pass --family or bundle one in the structure"),
            };
            s.induced_choice(&fam).map_err(|e| anyhow!("{e}"))
        }
        _ => bail!("pass exactly one of --input or --structure"),
    }
}

pub fn check(
    choice: &ChoiceFunction,
    condition: Option<&str>,
    alpha: Option<u32>,
    all: bool,
    alpha_max: u32,
    guards: &Guards,
) -> Result<RunOutput> {
    if alpha_max > guards.alpha_max || alpha.unwrap_or(0) > guards.alpha_max {
        bail!("alpha beyond the guard of {}", guards.alpha_max);
    }
    let ground = choice.family().ground().clone();
    let mut summary = String::new();
    let json = if all {
        let reports = conditions::check_all(choice, alpha_max);
        for r in &reports {
            let _ = writeln!(summary, "{}: {}", r.condition, verdict_str(r.verdict));
        }
        top(vec![
            ("command", json!("check")),
            (
                "reports",
                Value::Array(reports.iter().map(|r| condition_report_json(&ground, r)).collect()),
            ),
        ])
    } else {
        let tag = condition.ok_or_else(|| anyhow!("pass --condition or --all"))?;
        let cond = match (crate::catalog::parse_condition(tag), alpha) {
            (Ok(c), None) => c,
            (Ok(_), Some(_)) => bail!("--alpha conflicts with a parameterized condition name"),
            (Err(_), Some(a)) => ConditionId::parse(tag, Some(a))
                .ok_or_else(|| anyhow!("unknown condition {tag:?}"))?,
            (Err(e), None) => return Err(e),
        };
        let r = conditions::check(choice, cond);
        let _ = writeln!(summary, "{}: {}", r.condition, verdict_str(r.verdict));
        if let Some(w) = &r.witness {
            let _ = writeln!(summary, "witness: {}", conditions::describe_witness(w, &ground));
        }
        top(vec![("command", json!("check")), ("report", condition_report_json(&ground, &r))])
    };
    Ok(RunOutput { json, summary, exit: 0 })
}

pub fn closure(file: &FamilyFile) -> Result<RunOutput> {
    let family = family_from_file(file)?;
    let ground = family.ground().clone();
    let closed = close_under_intersections(&family);
    let ops = [
        ClosureOp::FiniteIntersection,
        ClosureOp::FiniteUnion,
        ClosureOp::SetDifference,
        ClosureOp::Complement,
    ];
    let mut checks = Vec::new();
    let mut summary = String::new();
    for op in ops {
        let witness = is_closed_under(&family, op);
        let _ = writeln!(
            summary,
            "{}: {}",
            op.tag(),
            if witness.is_none() { "closed" } else { "not closed" }
        );
        let mut obj = Map::new();
        obj.insert("op".into(), json!(op.tag()));
        obj.insert("closed".into(), json!(witness.is_none()));
        if let Some(w) = witness {
            obj.insert("witness".into(), closure_witness_json(&ground, &w));
        }
        checks.push(Value::Object(obj));
    }
    let _ = writeln!(summary, "intersection closure has {} members", closed.len());
    let json = top(vec![
        ("command", json!("closure")),
        ("ground", json!(ground.labels())),
        ("checks", Value::Array(checks)),
        ("closed-family", family_json(&closed)),
    ]);
    Ok(RunOutput { json, summary, exit: 0 })
}

pub fn logic_check(file: &StructureFile, vars: usize, rule_tag: &str) -> Result<RunOutput> {
    if vars == 0 || vars > MAX_VARS {
        bail!("--vars must be between 1 and {MAX_VARS}");
    }
    let rule = RuleId::parse(rule_tag).ok_or_else(|| anyhow!("unknown rule {rule_tag:?}"))?;
    let lang = PropLanguage::with_var_count(vars).map_err(|e| anyhow!("{e}"))?;
    let structure: PreferentialStructure = structure_from_file(file)?;
    if structure.ground() != &lang.model_ground() {
        bail!(
            "structure ground must list the {} model literals of a {vars}-variable language",
            lang.model_count()
        );
    }
    let op = ConsequenceOp::from_structure(lang, &structure).map_err(|e| anyhow!("{e}"))?;
    let report = mulab_core::logic::check_rule(&op, rule);
    let ground = op.choice().family().ground().clone();
    let summary = format!("{}: {}\n", rule.tag(), verdict_str(report.verdict));
    let json = top(vec![
        ("command", json!("logic-check")),
        ("vars", json!(vars)),
        ("report", rule_report_json(&ground, &report)),
    ]);
    Ok(RunOutput { json, summary, exit: 0 })
}

pub fn plausi_close(
    axioms_text: &str,
    atoms: Option<&[String]>,
    query: Option<&str>,
) -> Result<RunOutput> {
    let (lang, axioms) = parse_axioms(axioms_text, atoms)?;
    let table = saturate(&lang, &axioms).map_err(|e| anyhow!("{e}"))?;
    let mut fields: Vec<(&str, Value)> = vec![
        ("command", json!("plausi-close")),
        ("atoms", json!(lang.atoms())),
        ("axioms", json!(axioms.len())),
        ("derivable", json!(table.count())),
    ];
    let mut summary = format!(
        "saturated {} axioms over {} atoms: {} derivable sequents\n",
        axioms.len(),
        lang.len(),
        table.count()
    );
    if let Some(q) = query {
        let s = parse_query(&lang, q)?;
        let derivable = table.derivable(s);
        fields.push((
            "query",
            json!({ "sequent": sequent_to_text(&lang, s), "derivable": derivable }),
        ));
        let _ = writeln!(
            summary,
            "{}: {}",
            sequent_to_text(&lang, s),
            if derivable { "derivable" } else { "not derivable" }
        );
    }
    Ok(RunOutput { json: top(fields), summary, exit: 0 })
}

pub fn plausi_model_check(file: &PlStructureFile, axioms_text: &str) -> Result<RunOutput> {
    let structure = pl_structure_from_file(file)?;
    let (lang, axioms) = parse_axioms(axioms_text, Some(&file.atoms))?;
    let table = saturate(&lang, &axioms).map_err(|e| anyhow!("{e}"))?;
    let outcome = soundness_check(&structure, &axioms, &table);
    let (verdict, detail, exit) = match outcome {
        SoundnessOutcome::Sound => ("sound", None, 0),
        SoundnessOutcome::AxiomViolated(s) => {
            ("axiom-violated", Some(sequent_to_text(&lang, s)), 1)
        }
        SoundnessOutcome::Unsound(s) => ("unsound", Some(sequent_to_text(&lang, s)), 1),
    };
    let mut fields: Vec<(&str, Value)> = vec![
        ("command", json!("plausi-model-check")),
        ("verdict", json!(verdict)),
    ];
    let mut summary = format!("soundness: {verdict}\n");
    if let Some(d) = detail {
        let _ = writeln!(summary, "sequent: {d}");
        fields.push(("sequent", json!(d)));
    }
    Ok(RunOutput { json: top(fields), summary, exit })
}

/// Run one catalog row at a given ground size, with entry-level work spread
/// over `threads` workers; the merged result is thread-count independent.
pub fn run_row(
    row: &CatalogRow,
    ground_size: u32,
    threads: usize,
    guards: &Guards,
) -> Result<(MatrixRow, Option<u64>)> {
    let started = Instant::now();
    if row.query.expected == search::Expectation::NotTestable {
        return Ok((
            MatrixRow {
                id: row.query.id.clone(),
                expected: row.query.expected,
                outcome: ImplicationOutcome {
                    verdict: ImplicationVerdict::NotTestable,
                    raw: 0,
                    satisfying: 0,
                },
            },
            Some(started.elapsed().as_millis() as u64),
        ));
    }
    let mut base = InstanceSpec::new(ground_size);
    base.origin = row.origin;
    base.max_instances = guards.max_instances;
    let spec = row_spec(&row.query, &base);
    let plan = search::plan(&spec).map_err(|e| anyhow!("{e}"))?;
    let outcomes = indexed_map(threads, plan.entries.len(), |i| {
        search::run_entry(&spec, &plan.entries[i], &spec.required, row.query.conclusion)
    });
    let outcome = merge_outcomes(outcomes);
    Ok((
        MatrixRow { id: row.query.id.clone(), expected: row.query.expected, outcome },
        Some(started.elapsed().as_millis() as u64),
    ))
}

/// `search implication`: one row by id, or the whole catalog.
pub fn search_implication(
    rows: &[CatalogRow],
    row_id: &str,
    ground_size: u32,
    threads: usize,
    guards: &Guards,
    timing: bool,
) -> Result<RunOutput> {
    if ground_size == 0 || ground_size > guards.ground_max {
        bail!("--size must be between 1 and {}", guards.ground_max);
    }
    let selected: Vec<&CatalogRow> = if row_id == "all" {
        rows.iter().collect()
    } else {
        let row = rows
            .iter()
            .find(|r| r.query.id == row_id)
            .ok_or_else(|| anyhow!("unknown catalog row {row_id:?}"))?;
        vec![row]
    };
    let mut results = Vec::new();
    let mut summary = String::new();
    let mut exit = 0;
    for row in selected {
        let (result, wall) = run_row(row, ground_size, threads, guards)?;
        let verdict = match &result.outcome.verdict {
            ImplicationVerdict::ConfirmedAtScale => "confirmed-at-scale",
            ImplicationVerdict::Refuted(_) => "refuted",
            ImplicationVerdict::NotTestable => "not-testable",
        };
        // An expected implication with a counterexample is a red flag.
        if result.expected == search::Expectation::Implies
            && matches!(result.outcome.verdict, ImplicationVerdict::Refuted(_))
        {
            exit = 1;
        }
        let _ = writeln!(
            summary,
            "{}: {} ({} raw, {} satisfying)",
            result.id, verdict, result.outcome.raw, result.outcome.satisfying
        );
        results.push(matrix_row_json(&result, if timing { wall } else { None }));
    }
    let json = top(vec![
        ("command", json!("search-implication")),
        ("ground-size", json!(ground_size)),
        ("rows", Value::Array(results)),
    ]);
    Ok(RunOutput { json, summary, exit })
}
