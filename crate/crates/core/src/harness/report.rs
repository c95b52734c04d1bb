use serde::{Serialize, Serializer};

use super::fit::GrowthReport;
use super::ExperimentKind;
use crate::error::Result;
use crate::opnorm::NormMethod;

/// Serializes a float rounded to 12 significant digits.
pub fn sig12<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig12(*v))
}

fn sig12_opt<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&round_sig12(*v)),
        None => s.serialize_none(),
    }
}

pub fn round_sig12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

/// One trial (or one sweep point).
#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub form: String,
    pub n: usize,
    /// Left-hand side (for inclusion runs: the target quotient).
    #[serde(serialize_with = "sig12")]
    pub lhs: f64,
    /// Denominator norm (for inclusion runs: the base quotient).
    #[serde(serialize_with = "sig12")]
    pub norm: f64,
    pub norm_method: NormMethod,
    /// Extra dimension factor multiplying the norm in the bound, if any.
    #[serde(serialize_with = "sig12_opt")]
    pub factor: Option<f64>,
    #[serde(serialize_with = "sig12")]
    pub ratio: f64,
    #[serde(serialize_with = "sig12")]
    pub limit: f64,
    #[serde(serialize_with = "sig12")]
    pub slack: f64,
    pub violation: bool,
}

impl TrialRecord {
    pub fn violates(ratio: f64, limit: f64, slack: f64) -> bool {
        ratio > limit * (1.0 + slack)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub trials: usize,
    #[serde(serialize_with = "sig12")]
    pub max_ratio: f64,
    #[serde(serialize_with = "sig12")]
    pub mean_ratio: f64,
    pub violations: usize,
}

impl Summary {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let ratios: Vec<f64> = records.iter().map(|r| r.ratio).collect();
        Summary {
            trials: records.len(),
            max_ratio: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean_ratio: compensated_sum(&ratios) / ratios.len().max(1) as f64,
            violations: records.iter().filter(|r| r.violation).count(),
        }
    }
}

/// Neumaier summation.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Outcome of one harness run.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentKind,
    pub config: serde_json::Value,
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthReport>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.summary.violations == 0
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One CSV row per trial.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
