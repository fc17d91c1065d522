use serde::{Deserialize, Serialize};

use crate::corefn::GrowthFit;
use crate::error::{Error, Result};
use crate::experiments::{Check, ExperimentConfig, RatioReport};

/// JSON Schema of [`ReportJson`], shipped with the crate.
pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");

/// Everything needed to reproduce a run, echoed into every JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: Option<ExperimentConfig>,
    pub seed: u64,
    pub output_dir: String,
    pub tool_version: String,
    pub wall_clock_seconds: f64,
}

/// JSON summary written next to each CSV report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportJson {
    pub config: Option<ExperimentConfig>,
    #[serde(rename = "certified_C")]
    pub certified_c: Option<f64>,
    pub fit: Option<GrowthFit>,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub rows: Vec<RatioReport>,
    pub manifest: RunManifest,
}

/// Strict parse: unknown or missing fields and ill-typed values are errors.
pub fn parse_report_json(text: &str) -> Result<ReportJson> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let obj = value.as_object().ok_or_else(|| Error::Parse("report must be a JSON object".into()))?;
    for key in ["config", "certified_C", "fit", "pass", "checks", "rows", "manifest"] {
        if !obj.contains_key(key) {
            return Err(Error::Parse(format!("missing field {key:?}")));
        }
    }
    let report: ReportJson = serde_json::from_value(value)?;
    if report.rows.iter().any(|r| !(r.numerator.is_finite() && r.denominator.is_finite() && r.ratio.is_finite())) {
        return Err(Error::Parse("non-finite ratio row".into()));
    }
    Ok(report)
}
