//! Machine-readable verification reports.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Hypotheses not met; counts as pass with a skip marker.
    Skip,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Outcome of one theorem/corollary verification on one instance.
/// Deterministic given the instance and seed: all maps iterate in sorted order.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub instance: String,
    pub checks: Vec<CheckResult>,
    /// named tables: degree -> invariant factors
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tables: BTreeMap<String, BTreeMap<i64, Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
}

impl VerificationReport {
    pub fn new(instance: impl Into<String>) -> Self {
        VerificationReport {
            instance: instance.into(),
            ..Default::default()
        }
    }

    pub fn check(&mut self, name: &str, degree: Option<i64>, ok: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            degree,
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            detail: detail.into(),
        });
    }

    pub fn skip(&mut self, name: &str, degree: Option<i64>, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            degree,
            status: CheckStatus::Skip,
            detail: detail.into(),
        });
    }

    pub fn add_table(&mut self, name: &str, rows: impl IntoIterator<Item = (i64, Vec<BigInt>)>) {
        let table = rows
            .into_iter()
            .map(|(n, fs)| {
                (
                    n,
                    fs.into_iter()
                        .map(|d| u64::try_from(d).expect("invariant factor exceeds u64"))
                        .collect(),
                )
            })
            .collect();
        self.tables.insert(name.to_string(), table);
    }

    pub fn set_counterexample(&mut self, value: serde_json::Value) {
        if self.counterexample.is_none() {
            self.counterexample = Some(value);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        for (k, v) in other.tables {
            self.tables.entry(k).or_insert(v);
        }
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("instance: {}\n", self.instance));
        for c in &self.checks {
            let deg = c.degree.map(|d| format!(" [r={d}]")).unwrap_or_default();
            let status = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skip => "SKIP",
            };
            if c.detail.is_empty() {
                out.push_str(&format!("  {status} {}{deg}\n", c.name));
            } else {
                out.push_str(&format!("  {status} {}{deg}: {}\n", c.name, c.detail));
            }
        }
        for (name, table) in &self.tables {
            out.push_str(&format!("  table {name}:\n"));
            for (deg, fs) in table {
                out.push_str(&format!("    {deg}: {fs:?}\n"));
            }
        }
        out
    }
}
