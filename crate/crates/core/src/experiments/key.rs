use serde::{Deserialize, Serialize};

use super::report::{Check, ExperimentReport, RatioReport};
use crate::error::{Error, Result};
use crate::witnesses::{key_estimate_table, KEY_THRESHOLD};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyEstimateOutcome {
    pub a: f64,
    pub k_min: i32,
    pub j0: i32,
    pub j_max: i32,
    /// `D_j` for `j = 0..=j_max`.
    pub table: Vec<f64>,
    /// `min_{j0 ≤ j ≤ j_max} D_j`.
    pub certified_c: f64,
    /// `max_{j ≥ 20} |D_j - D_{j+2}|` (period-2 stabilization), 0 if `j_max < 22`.
    pub period_two_drift: f64,
    pub pass: bool,
}

impl KeyEstimateOutcome {
    pub fn to_report(&self) -> ExperimentReport {
        let rows = self.table.iter().enumerate().map(|(j, d)| RatioReport::new(j as f64, *d, 1.0, 0.0)).collect();
        let mut rep = ExperimentReport::new("key-estimate", rows);
        rep.certified_c = Some(self.certified_c);
        rep.check(Check::new(
            "certified_c",
            self.pass,
            format!("C = {:.6} against threshold {KEY_THRESHOLD:e}", self.certified_c),
        ));
        rep
    }
}

/// First scale at which the table is expected to repeat with period 2.
pub const STABILIZATION_FROM: usize = 20;

/// Tabulates `D_j` and certifies `C = min_{j ≥ j0} D_j`.
pub fn exp_key_estimate(a: f64, k_min: i32, j0: i32, j_max: i32) -> Result<KeyEstimateOutcome> {
    if j0 < 0 || j0 > j_max {
        return Err(Error::BadRange { j0, j1: j_max });
    }
    let table = key_estimate_table(a, k_min, j_max)?;
    let window = &table[j0 as usize..];
    let certified_c = window.iter().cloned().fold(f64::INFINITY, f64::min);
    let period_two_drift = table
        .iter()
        .skip(STABILIZATION_FROM)
        .zip(table.iter().skip(STABILIZATION_FROM + 2))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(KeyEstimateOutcome {
        a,
        k_min,
        j0,
        j_max,
        table,
        certified_c,
        period_two_drift,
        pass: certified_c >= KEY_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witnesses::admissible_k_min;

    #[test]
    fn base_four_certifies() {
        let k = admissible_k_min(4.0, 31).unwrap();
        let out = exp_key_estimate(4.0, k, 2, 30).unwrap();
        assert!(out.pass);
        assert!((out.certified_c - 0.17388).abs() < 5e-5, "{}", out.certified_c);
        assert!(out.period_two_drift < 1e-6, "{}", out.period_two_drift);
        assert_eq!(out.table.len(), 31);
        let rep = out.to_report();
        assert!(rep.pass);
        assert_eq!(rep.rows.len(), 31);
    }

    #[test]
    fn shallow_truncation_is_rejected() {
        assert!(matches!(exp_key_estimate(4.0, -5, 2, 30), Err(Error::TruncationTooShallow { .. })));
        assert!(matches!(exp_key_estimate(4.0, -60, 5, 3), Err(Error::BadRange { .. })));
    }

    #[test]
    fn near_one_base_fails_the_threshold() {
        let k = admissible_k_min(1.05, 31).unwrap();
        let out = exp_key_estimate(1.05, k, 2, 30).unwrap();
        assert!(!out.pass, "C = {}", out.certified_c);
    }
}
