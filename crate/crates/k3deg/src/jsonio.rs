//! JSON wire formats.
//!
//! Rationals render as decimal-free fraction strings. Classes use the
//! sparse form `{"a0": "p/q", "a": {"5": "3", "13": "-4"}}` with 1-based
//! indices; specialized classes mirror it with `m0`/`m`. All emitters are
//! deterministic, so identical inputs produce byte-identical documents.

use crate::central_fibre::SpecializedClass;
use crate::hodge::RationalClass;
use crate::linalg::QMat;
use crate::nodal::{NodalFamily, ScreenReport};
use crate::pipeline::{DegenerationRun, FamilyOutcome};
use crate::rat::{parse_rat, Rat};
use crate::sample::{KHistogram, SamplerConfig, RNG_ALGORITHM};
use num_traits::Zero;
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JsonError {
    #[error("expected a JSON object")]
    NotAnObject,
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("invalid fraction string {0:?}")]
    BadFraction(String),
    #[error("invalid coefficient index {0:?} for basis size {1}")]
    BadIndex(String, usize),
    #[error("invalid points document: expected an array of 4-element arrays")]
    BadPoints,
}

pub fn rat_value(r: &Rat) -> Value {
    Value::String(r.to_string())
}

pub fn rat_vec_value(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_value).collect())
}

pub fn mat_value(m: &QMat) -> Value {
    Value::Array((0..m.rows()).map(|r| rat_vec_value(m.row(r))).collect())
}

fn sparse_map(entries: impl Iterator<Item = (usize, Rat)>) -> Value {
    let mut map = Map::new();
    for (j, c) in entries {
        if !c.is_zero() {
            map.insert(j.to_string(), rat_value(&c));
        }
    }
    Value::Object(map)
}

/// `{"a0": ..., "a": {...}}` with zero coefficients omitted.
pub fn class_to_json(class: &RationalClass) -> Value {
    json!({
        "a0": rat_value(class.a0()),
        "a": sparse_map(class.a().iter().enumerate().map(|(i, c)| (i + 1, c.clone()))),
    })
}

/// Parses the sparse class format against a basis of size `s`.
pub fn class_from_json(v: &Value, s: usize) -> Result<RationalClass, JsonError> {
    let obj = v.as_object().ok_or(JsonError::NotAnObject)?;
    let a0s = obj
        .get("a0")
        .and_then(Value::as_str)
        .ok_or(JsonError::MissingField("a0"))?;
    let a0 = parse_rat(a0s).map_err(|_| JsonError::BadFraction(a0s.to_string()))?;
    let mut entries = Vec::new();
    if let Some(am) = obj.get("a") {
        let am = am.as_object().ok_or(JsonError::NotAnObject)?;
        for (k, cv) in am {
            let j: usize = k
                .parse()
                .map_err(|_| JsonError::BadIndex(k.clone(), s))?;
            if j == 0 || j > s {
                return Err(JsonError::BadIndex(k.clone(), s));
            }
            let cs = cv
                .as_str()
                .ok_or_else(|| JsonError::BadFraction(cv.to_string()))?;
            let c = parse_rat(cs).map_err(|_| JsonError::BadFraction(cs.to_string()))?;
            entries.push((j, c));
        }
    }
    RationalClass::from_sparse(a0, &entries, s)
        .map_err(|_| JsonError::BadIndex("out of range".to_string(), s))
}

/// `{"m0": ..., "m": {...}}` mirroring the class format with labels
/// `h, E1..Ek`.
pub fn specialized_to_json(a0: &SpecializedClass) -> Value {
    json!({
        "m0": rat_value(a0.m0()),
        "m": sparse_map(a0.m().iter().enumerate().map(|(i, c)| (i + 1, c.clone()))),
    })
}

/// Monodromy operator as exact rational matrices.
pub fn operator_to_json(op: &crate::monodromy::MonodromyOperator) -> Value {
    json!({
        "t": mat_value(op.t()),
        "n": mat_value(op.n()),
    })
}

pub fn screen_to_json(r: &ScreenReport) -> Value {
    json!({
        "lines": r.lines,
        "passed": r.passed,
        "failed": r.failed,
        "note": "probabilistic screen, not a smoothness certificate",
    })
}

pub fn family_to_json(f: &NodalFamily, screen: Option<&ScreenReport>) -> Value {
    let witnesses: Vec<Value> = f
        .witnesses()
        .iter()
        .enumerate()
        .map(|(i, w)| {
            json!({
                "point": i + 1,
                "f_gradient": rat_vec_value(&w.f_gradient),
                "hessian_rank": w.hessian_rank,
                "g_value": rat_value(&w.g_value),
                "g_gradient": rat_vec_value(&w.g_gradient),
                "passes": w.passes(),
            })
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("k".into(), json!(f.k()));
    obj.insert("f0".into(), f.f0().to_json());
    obj.insert(
        "points".into(),
        Value::Array(f.points().iter().map(|p| p.to_json()).collect()),
    );
    obj.insert(
        "g".into(),
        Value::Array(f.perturbations().iter().map(|g| g.to_json()).collect()),
    );
    obj.insert("lambda".into(), rat_vec_value(f.lambda()));
    obj.insert("witnesses".into(), Value::Array(witnesses));
    if let Some(s) = screen {
        obj.insert("screen".into(), screen_to_json(s));
    }
    Value::Object(obj)
}

fn family_outcome_json(outcome: &FamilyOutcome) -> Value {
    match outcome {
        FamilyOutcome::Built(f) => json!({ "status": "built", "family": family_to_json(f, None) }),
        FamilyOutcome::Infeasible { conditions, rank } => json!({
            "status": "infeasible",
            "conditions": conditions,
            "rank": rank,
            "solution_dim": 0,
        }),
        FamilyOutcome::DegenerateOnly {
            conditions,
            rank,
            solution_dim,
            point,
        } => json!({
            "status": "degenerate_only",
            "conditions": conditions,
            "rank": rank,
            "solution_dim": solution_dim,
            "singular_hessian_at_point": point,
        }),
        FamilyOutcome::NoWitness { tries } => json!({
            "status": "no_witness",
            "tries": tries,
        }),
    }
}

/// Full degeneration-run document.
pub fn run_to_json(run: &DegenerationRun) -> Value {
    let cycles: Vec<Value> = run
        .config
        .gammas()
        .iter()
        .map(|g| rat_vec_value(g.vector().coords()))
        .collect();
    let checks: Vec<Value> = run
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
        .collect();
    let mut obj = Map::new();
    obj.insert("input".into(), class_to_json(&run.input));
    obj.insert("s".into(), json!(run.s));
    obj.insert("k".into(), json!(run.k));
    obj.insert(
        "config".into(),
        json!({
            "cycles": cycles,
            "support": run.config.support(),
            "pairing_matrix": mat_value(run.config.pairing_matrix()),
        }),
    );
    obj.insert("pairings".into(), rat_vec_value(&run.pairings));
    obj.insert("multiplicities".into(), rat_vec_value(&run.multiplicities));
    obj.insert("alpha0".into(), specialized_to_json(&run.alpha0));
    obj.insert("lifted".into(), class_to_json(&run.lifted));
    obj.insert("checks".into(), Value::Array(checks));
    obj.insert("passed".into(), json!(run.passed));
    obj.insert("first_failed".into(), json!(run.first_failed));
    obj.insert(
        "options".into(),
        json!({
            "seed": run.options.seed,
            "with_geometry": run.options.with_geometry,
            "random_config": run.options.random_config,
            "rng": RNG_ALGORITHM,
        }),
    );
    if let Some(outcome) = &run.family {
        obj.insert("family".into(), family_outcome_json(outcome));
    }
    obj.insert(
        "note".into(),
        Value::String(
            "output realizes the class as coefficients over <h, E_1..E_k> and lifts it back; \
             no divisor on an actual surface is produced"
                .to_string(),
        ),
    );
    Value::Object(obj)
}

/// Histogram document with the sampler configuration embedded.
pub fn histogram_to_json(h: &KHistogram, cfg: &SamplerConfig) -> Value {
    let mut buckets = Map::new();
    for (k, &c) in h.buckets.iter().enumerate() {
        buckets.insert(k.to_string(), json!(c));
    }
    json!({
        "buckets": Value::Object(buckets),
        "overflow": h.overflow,
        "total": h.total,
        "mean_k": rat_value(&h.mean_k),
        "seed": cfg.seed,
        "config": {
            "coeff_bound": cfg.coeff_bound,
            "max_nonzero": cfg.max_nonzero,
            "count": cfg.count,
            "s": cfg.s,
            "rng": RNG_ALGORITHM,
        },
    })
}

/// Parses a points document: an array of 4-element fraction-string arrays.
pub fn points_from_json(v: &Value) -> Result<Vec<crate::poly::ProjPoint>, JsonError> {
    let arr = v.as_array().ok_or(JsonError::BadPoints)?;
    arr.iter()
        .map(|p| crate::poly::ProjPoint::from_json(p).map_err(|_| JsonError::BadPoints))
        .collect()
}

/// Pretty-prints a document with a trailing newline (byte-stable).
pub fn to_pretty_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};

    #[test]
    fn class_round_trip_is_bit_exact() {
        let c = RationalClass::from_sparse(
            rat(1, 3),
            &[(5, rat_i(3)), (13, rat(-4, 7))],
            19,
        )
        .unwrap();
        let v = class_to_json(&c);
        let back = class_from_json(&v, 19).unwrap();
        assert_eq!(back, c);
        assert_eq!(class_to_json(&back), v);
    }

    #[test]
    fn class_json_shape() {
        let c = RationalClass::from_sparse(rat_i(1), &[(1, rat_i(2)), (2, rat_i(-5))], 19)
            .unwrap();
        let v = class_to_json(&c);
        assert_eq!(v["a0"], "1");
        assert_eq!(v["a"]["1"], "2");
        assert_eq!(v["a"]["2"], "-5");
        assert!(v["a"].get("3").is_none());
    }

    #[test]
    fn class_rejects_bad_indices() {
        let doc: Value = serde_json::from_str(r#"{"a0":"1","a":{"25":"1"}}"#).unwrap();
        assert!(class_from_json(&doc, 19).is_err());
        let doc: Value = serde_json::from_str(r#"{"a0":"1","a":{"0":"1"}}"#).unwrap();
        assert!(class_from_json(&doc, 19).is_err());
    }

    #[test]
    fn class_rejects_decimals() {
        let doc: Value = serde_json::from_str(r#"{"a0":"1.5","a":{}}"#).unwrap();
        assert!(class_from_json(&doc, 19).is_err());
    }

    #[test]
    fn points_document() {
        let doc: Value =
            serde_json::from_str(r#"[["1","0","0","0"],["1","2","3","1"]]"#).unwrap();
        let pts = points_from_json(&doc).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].coords()[0], rat_i(1));
    }

    #[test]
    fn operator_serializes_as_fraction_matrices() {
        let basis = crate::hodge::WorkingBasis::new(2).unwrap();
        let gamma = crate::monodromy::VanishingCycle::new(basis.v(1), 1).unwrap();
        let op = crate::monodromy::pl_reflect(&gamma);
        let doc = operator_to_json(&op);
        assert_eq!(doc["t"][1][1], "-1");
        assert_eq!(doc["t"][0][0], "1");
        assert_eq!(doc["n"][1][1], "-2");
    }

    #[test]
    fn pretty_output_is_stable() {
        let c = RationalClass::from_sparse(rat_i(2), &[(3, rat_i(1))], 19).unwrap();
        let a = to_pretty_string(&class_to_json(&c));
        let b = to_pretty_string(&class_to_json(&c));
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
    }
}
