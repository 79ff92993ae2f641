//! JSON rendering of core reports. Every top-level object carries
//! `"format": 1`; sets print as label arrays in ground order, so rendering
//! the same report twice is byte-identical.

use serde_json::{json, Map, Value};

use mulab_core::conditions::{Binding, ConditionReport, Verdict, Witness};
use mulab_core::construction::CumExampleReport;
use mulab_core::logic::RuleReport;
use mulab_core::search::{ImplicationOutcome, ImplicationVerdict, MatrixRow};
use mulab_core::sets::{ChoiceFunction, ClosureWitness, GroundSet, Mask, SetFamily};

use crate::formats::{choice_to_map, family_to_map};

pub const NON_PROOF_NOTE: &str =
    "confirmed-at-scale: no counterexample within the enumerated space; not a proof";

pub fn format_field() -> (String, Value) {
    ("format".to_string(), json!(crate::formats::FORMAT_VERSION))
}

pub fn subset_json(ground: &GroundSet, m: Mask) -> Value {
    Value::Array(ground.labels_of(m).into_iter().map(|l| json!(l)).collect())
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
    }
}

pub fn witness_json(ground: &GroundSet, w: &Witness) -> Value {
    let mut obj = Map::new();
    for (name, binding) in &w.bindings {
        let v = match binding {
            Binding::Set(m) => subset_json(ground, *m),
            Binding::Seq(seq) => {
                Value::Array(seq.iter().map(|&m| subset_json(ground, m)).collect())
            }
            Binding::Element(e) => json!(ground.label(*e)),
        };
        obj.insert((*name).to_string(), v);
    }
    if let Some(e) = w.offending {
        obj.insert("element".to_string(), json!(ground.label(e)));
    }
    Value::Object(obj)
}

fn report_body(
    ground: &GroundSet,
    kind: &str,
    tag: &str,
    alpha: Option<u32>,
    verdict: Verdict,
    witness: &Option<Witness>,
    tuples: u64,
    skipped: u64,
) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert(kind.to_string(), json!(tag));
    if let Some(a) = alpha {
        obj.insert("alpha".to_string(), json!(a));
    }
    obj.insert("verdict".to_string(), json!(verdict_str(verdict)));
    if let Some(w) = witness {
        obj.insert("witness".to_string(), witness_json(ground, w));
    }
    obj.insert("tuples".to_string(), json!(tuples));
    obj.insert("skipped".to_string(), json!(skipped));
    obj
}

pub fn condition_report_json(ground: &GroundSet, r: &ConditionReport) -> Value {
    Value::Object(report_body(
        ground,
        "condition",
        r.condition.tag(),
        r.condition.alpha(),
        r.verdict,
        &r.witness,
        r.tuples,
        r.skipped,
    ))
}

pub fn rule_report_json(ground: &GroundSet, r: &RuleReport) -> Value {
    Value::Object(report_body(
        ground,
        "rule",
        r.rule.tag(),
        None,
        r.verdict,
        &r.witness,
        r.tuples,
        r.skipped,
    ))
}

pub fn closure_witness_json(ground: &GroundSet, w: &ClosureWitness) -> Value {
    json!({
        "left": subset_json(ground, w.left),
        "right": subset_json(ground, w.right),
        "missing": subset_json(ground, w.missing),
    })
}

pub fn family_json(family: &SetFamily) -> Value {
    serde_json::to_value(family_to_map(family)).expect("maps serialize")
}

pub fn choice_json(choice: &ChoiceFunction) -> Value {
    serde_json::to_value(choice_to_map(choice)).expect("maps serialize")
}

pub fn verify_report_json(ground: &GroundSet, r: &CumExampleReport) -> Value {
    let mut obj = Map::new();
    obj.insert("format".to_string(), json!(crate::formats::FORMAT_VERSION));
    obj.insert("command".to_string(), json!("verify"));
    obj.insert("kappa".to_string(), json!(r.kappa));
    obj.insert(
        "claims".to_string(),
        Value::Array(
            r.claims
                .iter()
                .map(|c| {
                    json!({
                        "claim": c.id,
                        "description": c.description,
                        "confirmed": c.confirmed,
                    })
                })
                .collect(),
        ),
    );
    if let Some(fail) = &r.cum_failure {
        obj.insert("cum-failure".to_string(), condition_report_json(ground, fail));
    }
    obj.insert("all-confirmed".to_string(), json!(r.all_confirmed()));
    Value::Object(obj)
}

pub fn implication_outcome_json(outcome: &ImplicationOutcome, timing_ms: Option<u64>) -> Value {
    let mut obj = Map::new();
    match &outcome.verdict {
        ImplicationVerdict::ConfirmedAtScale => {
            obj.insert("verdict".to_string(), json!("confirmed-at-scale"));
            obj.insert("note".to_string(), json!(NON_PROOF_NOTE));
        }
        ImplicationVerdict::NotTestable => {
            obj.insert("verdict".to_string(), json!("not-testable"));
        }
        ImplicationVerdict::Refuted(r) => {
            obj.insert("verdict".to_string(), json!("refuted"));
            let ground = r.choice.family().ground();
            obj.insert(
                "witness".to_string(),
                json!({
                    "index": r.index,
                    "family": family_json(r.choice.family()),
                    "choice": choice_json(&r.choice),
                    "conclusion": condition_report_json(ground, &r.report),
                }),
            );
        }
    }
    obj.insert("instances".to_string(), json!(outcome.raw));
    obj.insert("satisfying".to_string(), json!(outcome.satisfying));
    if let Some(ms) = timing_ms {
        obj.insert("wall-ms".to_string(), json!(ms));
    }
    Value::Object(obj)
}

pub fn matrix_row_json(row: &MatrixRow, timing_ms: Option<u64>) -> Value {
    let mut obj = Map::new();
    obj.insert("row".to_string(), json!(row.id));
    obj.insert("expected".to_string(), json!(row.expected.tag()));
    obj.insert("outcome".to_string(), implication_outcome_json(&row.outcome, timing_ms));
    Value::Object(obj)
}
