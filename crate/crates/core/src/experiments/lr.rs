use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::report::{Check, ExperimentReport, RatioReport};
use super::ExperimentConfig;
use crate::corefn::{bochner_norm, sliding_power_sum, PiecewiseConstantFn, SampleGrid, ScalarProfile, VectorField};
use crate::error::{Error, Result};
use crate::operators::OperatorFamily;
use crate::variation::variation_profile;
use crate::witnesses::geometric_radius_set;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrOutcome {
    /// Rows indexed by `param = r`.
    pub report: ExperimentReport,
    /// `j1` used for each row.
    pub j1: Vec<i32>,
    /// Lower bound `(C/4) r^{1/q} / (2^{1/r} 3^{1/p})` for each row.
    pub lower_bounds: Vec<f64>,
}

/// `‖x ↦ (∫_{|u-x|≤1} |V_q G(u)|^r du)^{1/r}‖_{L^p[0,1]}`.
pub fn lr_numerator(config: &ExperimentConfig, g: &PiecewiseConstantFn, j1: i32, r: f64) -> Result<f64> {
    let a = config.lacunary.a;
    let radii = geometric_radius_set(a, config.lacunary.j0, j1)?;
    let grid = config.grid.inner_grid(a, (j1 + 2) as u32)?;
    let v = variation_profile(g, OperatorFamily::Heat, &radii, &grid, config.q)?;
    let s = sliding_power_sum(&v, 1.0, r)?.restrict(0.0, 1.0)?;
    bochner_norm(&VectorField::scalar(s.grid().clone(), s.values().to_vec())?, config.p)
}

/// `‖x ↦ (∫_{|u-x|≤1} |G(u)|^r du)^{1/r}‖_{L^p(ℝ)}`, sampled.
pub fn lr_denominator(config: &ExperimentConfig, g: &PiecewiseConstantFn, r: f64) -> Result<f64> {
    let g = g.abs();
    let mut pts = SampleGrid::uniform(-2.5, 3.5, 2 * config.grid.uniform_points)?.points().to_vec();
    pts.extend(g.breakpoints());
    let prof = ScalarProfile::from_fn(SampleGrid::from_points(pts)?, |x| g.eval(x))?;
    let s = sliding_power_sum(&prof, 1.0, r)?;
    bochner_norm(&VectorField::scalar(s.grid().clone(), s.values().to_vec())?, config.p)
}

/// Ratios in `L^p(L^r)` for each `r` in the config, `j1` from the config rule.
pub fn exp_lr_growth(config: &ExperimentConfig) -> Result<LrOutcome> {
    config.validate()?;
    if config.r_list.is_empty() {
        return Err(Error::EmptyInput);
    }
    let j0 = config.lacunary.j0;
    let j1: Vec<i32> = config.r_list.iter().map(|&r| config.j1_rule.j1_for(r, j0)).collect();
    if let Some(&bad) = j1.iter().find(|&&j| j <= j0) {
        return Err(Error::BadRange { j0, j1: bad });
    }
    let g = config.witness(*j1.iter().max().unwrap())?;
    let mut rows = Vec::with_capacity(j1.len());
    for (&r, &j) in config.r_list.iter().zip(&j1) {
        let start = Instant::now();
        let num = lr_numerator(config, &g, j, r)?;
        let den = lr_denominator(config, &g, r)?;
        rows.push(RatioReport::new(r, num, den, start.elapsed().as_secs_f64()));
    }
    let mut report = ExperimentReport::new("lr-growth", rows);
    let c = config.lacunary.key_constant;
    let lower_bounds: Vec<f64> = config
        .r_list
        .iter()
        .map(|&r| c / 4.0 * r.powf(1.0 / config.q) / (2f64.powf(1.0 / r) * 3f64.powf(1.0 / config.p)))
        .collect();
    let ratios = report.ratios();
    report.check(Check::new(
        "lower_bound",
        ratios.iter().zip(&lower_bounds).all(|(x, lb)| x >= lb),
        format!("ratios {ratios:?} against bounds {lower_bounds:?}"),
    ));
    if report.rows.len() >= 3 {
        let fit = report.fit_rows()?;
        report.fit = Some(fit);
        let target = 1.0 / config.q;
        report.check(Check::new(
            "slope",
            (fit.slope - target).abs() <= 0.15,
            format!("slope {:.4} against 1/q = {target:.4} ± 0.15", fit.slope),
        ));
        report.check(Check::new(
            "r_squared",
            fit.r_squared >= 0.95,
            format!("r² {:.4} against 0.95", fit.r_squared),
        ));
    }
    Ok(LrOutcome { report, j1, lower_bounds })
}
