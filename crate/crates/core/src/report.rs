//! Experiment reports: measured sides of an inequality, margin, verdict and input digest.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geom::{ConvexDomain, DomainKind};
use crate::linalg::{CMat, MatrixFile};

pub const SCHEMA_VERSION: u32 = 1;

/// Outcome label beyond the pass flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// The inequality was checked and holds.
    Pass,
    /// The inequality was checked and fails.
    Fail,
    /// The claim's hypothesis does not hold; nothing to check.
    Vacuous,
    /// A hypothesis verified on a finite grid failed at some grid point.
    HypothesisViolated,
    /// The contrapositive form was checked (hypothesis fails as predicted).
    Contrapositive,
}

/// One experiment verdict.
///
/// `margin = rhs − lhs` and `pass ⇔ margin ≥ −tolerance`.  Vacuous outcomes carry
/// `lhs = rhs = 0`; their measured quantities live in `details`.  The wall-clock time is
/// kept out of the serialized body so reruns produce identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub experiment: String,
    pub seed: u64,
    pub inputs: Value,
    pub inputs_digest: String,
    pub bound: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub outcome: Outcome,
    pub tolerances: BTreeMap<String, f64>,
    pub details: Value,
    #[serde(skip)]
    pub runtime_ms: f64,
}

/// Hex SHA-256 of the compact JSON encoding of `inputs`.
pub fn digest(inputs: &Value) -> String {
    let bytes = serde_json::to_vec(inputs).expect("JSON values always serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// JSON form of a matrix for report inputs.
pub fn matrix_value(m: &CMat<f64>) -> Value {
    serde_json::to_value(MatrixFile::from_matrix(m)).expect("matrix files serialize")
}

/// Compact description of a domain for report inputs.
pub fn domain_value(d: &ConvexDomain<f64>) -> Value {
    let c = [d.center.re, d.center.im];
    match &d.kind {
        DomainKind::Disk { radius } => json!({"kind": "disk", "center": c, "radius": radius}),
        DomainKind::Ellipse { a, b, rot } => {
            json!({"kind": "ellipse", "center": c, "a": a, "b": b, "rot": rot})
        }
        DomainKind::SmoothedRange(r) => json!({
            "kind": "range", "center": c, "margin": r.margin, "width": r.width, "offset": r.offset
        }),
    }
}

impl ExperimentReport {
    /// A checked inequality `lhs ≤ rhs` (up to `tolerance`).
    pub fn checked(
        experiment: &str,
        seed: u64,
        inputs: Value,
        bound: &str,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
    ) -> Self {
        let margin = rhs - lhs;
        let pass = margin >= -tolerance;
        let mut r = Self::base(experiment, seed, inputs, bound);
        r.lhs = lhs;
        r.rhs = rhs;
        r.margin = margin;
        r.tolerance = tolerance;
        r.pass = pass;
        r.outcome = if pass { Outcome::Pass } else { Outcome::Fail };
        r
    }

    /// A passing report whose claim did not apply (`lhs = rhs = margin = 0`).
    pub fn vacuous(experiment: &str, seed: u64, inputs: Value, bound: &str, outcome: Outcome) -> Self {
        let mut r = Self::base(experiment, seed, inputs, bound);
        r.pass = true;
        r.outcome = outcome;
        r
    }

    fn base(experiment: &str, seed: u64, inputs: Value, bound: &str) -> Self {
        ExperimentReport {
            schema: SCHEMA_VERSION,
            experiment: experiment.to_string(),
            seed,
            inputs_digest: digest(&inputs),
            inputs,
            bound: bound.to_string(),
            lhs: 0.0,
            rhs: 0.0,
            margin: 0.0,
            tolerance: 0.0,
            pass: true,
            outcome: Outcome::Pass,
            tolerances: BTreeMap::new(),
            details: Value::Object(Default::default()),
            runtime_ms: 0.0,
        }
    }

    /// Relabels a checked report (keeps lhs/rhs/pass).
    pub fn with_outcome(mut self, outcome: Outcome) -> Self {
        self.outcome = outcome;
        self
    }

    pub fn with_tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    pub fn with_detail(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        if let Value::Object(map) = &mut self.details {
            map.insert(key.to_string(), v);
        }
        self
    }

    /// Pretty JSON body (no runtime).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// Parses a report, rejecting other schema versions.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        match v.get("schema").and_then(Value::as_u64) {
            Some(s) if s == u64::from(SCHEMA_VERSION) => Ok(serde_json::from_value(v)?),
            Some(s) => Err(Error::Input(format!("unsupported report schema {s}"))),
            None => Err(Error::Input("report has no schema field".into())),
        }
    }
}
