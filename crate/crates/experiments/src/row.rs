//! Result rows and the frozen per-experiment schemas.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::error::ExperimentError;

pub const SCHEMA_VERSION: u32 = 1;

/// How a row's `pass` flag counts toward the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    /// Must pass.
    Assertion,
    /// A measured quantity; `pass` is informational.
    Report,
    /// A literal claim checked and recorded; a failure is an observation, not an error.
    Finding,
}

impl RowKind {
    fn as_str(self) -> &'static str {
        match self {
            RowKind::Assertion => "assertion",
            RowKind::Report => "report",
            RowKind::Finding => "finding",
        }
    }
}

/// Parameter and metric columns of one experiment id, in output order.
pub struct Schema {
    pub id: &'static str,
    pub params: &'static [&'static str],
    pub metrics: &'static [&'static str],
}

pub const SCHEMAS: &[Schema] = &[
    Schema { id: "enumerate", params: &["n"], metrics: &["states", "catalan_recurrence", "catalan_closed"] },
    Schema {
        id: "gap",
        params: &["n"],
        metrics: &["states", "gap", "relaxation_time", "n2_gap", "n32_gap", "reference", "variational_trials", "min_variational_ratio"],
    },
    Schema { id: "gap_fit", params: &["n_lo", "n_hi"], metrics: &["slope", "intercept", "window_lo", "window_hi", "relaxation_increasing"] },
    Schema { id: "lemma", params: &["lemma", "n"], metrics: &["cases_checked", "violations", "witness"] },
    Schema {
        id: "flow_pair",
        params: &["n", "i", "j"],
        metrics: &[
            "rho_max",
            "delta",
            "rho_bar",
            "rho_bar_s",
            "rho_bar_t",
            "identity_exact",
            "transport_exact",
            "augmentations",
            "one_directional",
            "trials",
            "transport_violations",
            "boundary_violations",
            "constant_f_ok",
        ],
    },
    Schema {
        id: "flow_complement",
        params: &["n", "s_blocks"],
        metrics: &["rho_max", "rho_bar_s", "rho_bar_t", "trials", "boundary_violations", "mean_form_violations"],
    },
    Schema { id: "flow_trend", params: &["n"], metrics: &["max_ratio", "argmax_block", "mean_ratio"] },
    Schema {
        id: "depth_sample",
        params: &["n", "samples"],
        metrics: &["mean_node_depth", "depth_over_sqrt_n", "window_lo", "window_hi", "tail_at_zero", "mean_height"],
    },
    Schema { id: "depth_boundlu", params: &["n"], metrics: &["max_ratio", "argmax_i", "argmax_j", "constant"] },
    Schema { id: "depth_numeta", params: &["n"], metrics: &["max_ratio", "constant"] },
    Schema { id: "depth_containment", params: &["n"], metrics: &["pairs_checked", "mismatches"] },
    Schema {
        id: "mixing",
        params: &["n", "eps"],
        metrics: &["states", "tau", "gap", "pi_star", "spectral_bound", "tau_eps_one", "ls_estimate", "ls_implied_constant"],
    },
];

pub fn schema(id: &str) -> Result<&'static Schema, ExperimentError> {
    SCHEMAS.iter().find(|s| s.id == id).ok_or_else(|| ExperimentError::UnknownExperiment(id.to_string()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    pub metrics: BTreeMap<String, Value>,
    pub kind: RowKind,
    pub pass: bool,
    /// Not serialized: outputs must be identical across reruns.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl ResultRow {
    pub fn new(experiment: &str, kind: RowKind) -> Self {
        ResultRow {
            experiment: experiment.to_string(),
            params: BTreeMap::new(),
            metrics: BTreeMap::new(),
            kind,
            pass: true,
            wall_time: Duration::ZERO,
        }
    }

    pub fn param(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.params.insert(k.to_string(), v.into());
        self
    }

    pub fn metric(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.metrics.insert(k.to_string(), v.into());
        self
    }

    pub fn pass(mut self, ok: bool) -> Self {
        self.pass = ok;
        self
    }

    pub fn timed(mut self, d: Duration) -> Self {
        self.wall_time = d;
        self
    }

    /// An assertion row that failed.
    pub fn is_failure(&self) -> bool {
        self.kind == RowKind::Assertion && !self.pass
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let s = schema(&self.experiment)?;
        for m in s.params.iter().map(|p| (p, &self.params)).chain(s.metrics.iter().map(|m| (m, &self.metrics))) {
            if !m.1.contains_key(*m.0) {
                return Err(ExperimentError::MissingMetric { experiment: self.experiment.clone(), metric: m.0.to_string() });
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.metrics.get(key).or_else(|| self.params.get(key))
    }

    pub fn f64(&self, key: &str) -> f64 {
        self.get(key).and_then(Value::as_f64).unwrap_or(f64::NAN)
    }

    pub fn u64(&self, key: &str) -> u64 {
        self.get(key).and_then(Value::as_u64).unwrap_or(u64::MAX)
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// CSV text for rows of one experiment id, columns in schema order.
pub fn to_csv(id: &str, rows: &[&ResultRow]) -> Result<String, ExperimentError> {
    let s = schema(id)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["experiment", "schema_version"];
    header.extend_from_slice(s.params);
    header.extend_from_slice(s.metrics);
    header.extend_from_slice(&["kind", "pass"]);
    w.write_record(&header)?;
    for r in rows {
        r.validate()?;
        let mut rec = vec![r.experiment.clone(), SCHEMA_VERSION.to_string()];
        rec.extend(s.params.iter().map(|p| cell(&r.params[*p])));
        rec.extend(s.metrics.iter().map(|m| cell(&r.metrics[*m])));
        rec.push(r.kind.as_str().to_string());
        rec.push(r.pass.to_string());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// JSON mirror of [`to_csv`].
pub fn to_json(id: &str, rows: &[&ResultRow]) -> Result<String, ExperimentError> {
    for r in rows {
        r.validate()?;
    }
    let doc = serde_json::json!({ "experiment": id, "schema_version": SCHEMA_VERSION, "rows": rows });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_metric_rejected() {
        let r = ResultRow::new("enumerate", RowKind::Assertion).param("n", 3).metric("states", 5);
        assert!(matches!(r.validate(), Err(ExperimentError::MissingMetric { .. })));
        assert!(to_csv("enumerate", &[&r]).is_err());
    }

    #[test]
    fn csv_columns_follow_schema() {
        let r = ResultRow::new("enumerate", RowKind::Assertion)
            .param("n", 3)
            .metric("catalan_closed", "5")
            .metric("states", 5)
            .metric("catalan_recurrence", "5");
        let text = to_csv("enumerate", &[&r]).unwrap();
        assert_eq!(
            text,
            "experiment,schema_version,n,states,catalan_recurrence,catalan_closed,kind,pass\nenumerate,1,3,5,5,5,assertion,true\n"
        );
        assert!(to_json("enumerate", &[&r]).unwrap().contains("\"schema_version\": 1"));
    }

    #[test]
    fn only_failed_assertions_count() {
        let a = ResultRow::new("lemma", RowKind::Finding).pass(false);
        let b = ResultRow::new("lemma", RowKind::Assertion).pass(false);
        assert!(!a.is_failure());
        assert!(b.is_failure());
    }

    #[test]
    fn schema_ids_unique() {
        let mut ids: Vec<&str> = SCHEMAS.iter().map(|s| s.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), SCHEMAS.len());
        assert!(schema("nope").is_err());
    }
}
