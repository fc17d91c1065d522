use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corefn::io::fmt;
use crate::corefn::{fit_power_law, GrowthFit};
use crate::error::Result;

/// One measured ratio `numerator / denominator` at parameter `param`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub param: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
    pub seconds: f64,
}

impl RatioReport {
    pub fn new(param: f64, numerator: f64, denominator: f64, seconds: f64) -> Self {
        Self { param, numerator, denominator, ratio: numerator / denominator, seconds }
    }
}

/// A named pass/fail condition with a human-readable explanation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub rows: Vec<RatioReport>,
    pub fit: Option<GrowthFit>,
    pub certified_c: Option<f64>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn new(experiment: &str, rows: Vec<RatioReport>) -> Self {
        Self { experiment: experiment.to_string(), rows, fit: None, certified_c: None, checks: Vec::new(), pass: true }
    }

    pub fn check(&mut self, check: Check) {
        self.pass &= check.passed;
        self.checks.push(check);
    }

    pub fn params(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.param).collect()
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.ratio).collect()
    }

    /// Log-log fit of ratio against param.
    pub fn fit_rows(&self) -> Result<GrowthFit> {
        fit_power_law(&self.params(), &self.ratios())
    }

    /// Sets every timing to zero so that repeated runs are byte-identical.
    pub fn clear_timing(&mut self) {
        for r in &mut self.rows {
            r.seconds = 0.0;
        }
    }

    /// CSV with header `param,numerator,denominator,ratio,seconds`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["param", "numerator", "denominator", "ratio", "seconds"])?;
        for r in &self.rows {
            w.write_record([fmt(r.param), fmt(r.numerator), fmt(r.denominator), fmt(r.ratio), fmt(r.seconds)])?;
        }
        w.flush()?;
        Ok(())
    }
}
