use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::report::{Check, ExperimentReport, RatioReport};
use super::ExperimentConfig;
use crate::corefn::{bochner_norm, sliding_sup, PiecewiseConstantFn, SampleGrid, ScalarProfile, VectorField};
use crate::error::{Error, Result};
use crate::operators::OperatorFamily;
use crate::variation::{operator_profile, PointwiseOperator};
use crate::witnesses::geometric_radius_set;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupOutcome {
    /// Rows indexed by `param = j1 - j0`.
    pub report: ExperimentReport,
    /// `3^{1/p}`, the exact value of the denominator.
    pub expected_denominator: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastOutcome {
    pub variation: ExperimentReport,
    pub maximal: ExperimentReport,
}

fn check_j1_list(j0: i32, j1_list: &[i32]) -> Result<()> {
    if j1_list.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&j1) = j1_list.iter().find(|&&j1| j1 <= j0) {
        return Err(Error::BadRange { j0, j1 });
    }
    if j1_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("j1 values must be strictly increasing".into()));
    }
    Ok(())
}

/// `‖x ↦ sup_{|u-x|≤1} T_J G(u)‖_{L^p[0,1]}` for `J = {a^{-2j} : j0 ≤ j ≤ j1}`.
fn sheared_numerator(
    config: &ExperimentConfig,
    g: &PiecewiseConstantFn,
    j1: i32,
    op: PointwiseOperator,
) -> Result<f64> {
    let a = config.lacunary.a;
    let radii = geometric_radius_set(a, config.lacunary.j0, j1)?;
    let grid = config.grid.inner_grid(a, (j1 + 2) as u32)?;
    let inner = operator_profile(g, OperatorFamily::Heat, &radii, &grid, op)?;
    let sup = sliding_sup(&inner, 1.0)?.restrict(0.0, 1.0)?;
    bochner_norm(&VectorField::scalar(sup.grid().clone(), sup.values().to_vec())?, config.p)
}

/// `‖x ↦ sup_{|u-x|≤1} |G(u)|‖_{L^p(ℝ)}`, sampled.
pub fn linf_denominator(config: &ExperimentConfig) -> Result<f64> {
    let g = config.witness(0)?.abs();
    let n = 2 * config.grid.uniform_points;
    let mut pts = SampleGrid::uniform(-2.5, 3.5, n)?.points().to_vec();
    pts.extend(g.breakpoints());
    let grid = SampleGrid::from_points(pts)?;
    let prof = ScalarProfile::from_fn(grid, |x| g.eval(x))?;
    let sup = sliding_sup(&prof, 1.0)?;
    bochner_norm(&VectorField::scalar(sup.grid().clone(), sup.values().to_vec())?, config.p)
}

fn run(config: &ExperimentConfig, j1_list: &[i32], op: PointwiseOperator, name: &str) -> Result<ExperimentReport> {
    config.validate()?;
    let j0 = config.lacunary.j0;
    check_j1_list(j0, j1_list)?;
    let g = config.witness(*j1_list.last().unwrap())?;
    let denominator = linf_denominator(config)?;
    let mut rows = Vec::with_capacity(j1_list.len());
    for &j1 in j1_list {
        let start = Instant::now();
        let num = sheared_numerator(config, &g, j1, op)?;
        rows.push(RatioReport::new((j1 - j0) as f64, num, denominator, start.elapsed().as_secs_f64()));
    }
    Ok(ExperimentReport::new(name, rows))
}

/// Ratios `‖T_{V_q} G̃‖ / ‖G̃‖` in `L^p(L^∞)` for each `j1`, with growth checks
/// against `(j1 - j0)^{1/q}`.
pub fn exp_linf_blowup(config: &ExperimentConfig, j1_list: &[i32]) -> Result<BlowupOutcome> {
    let mut report = run(config, j1_list, PointwiseOperator::Variation { q: config.q }, "linf-blowup")?;
    let expected_denominator = 3f64.powf(1.0 / config.p);
    let ratios = report.ratios();
    report.check(Check::new(
        "strictly_increasing",
        ratios.windows(2).all(|w| w[1] > w[0]),
        format!("ratios {ratios:?}"),
    ));
    let denom = report.rows[0].denominator;
    report.check(Check::new(
        "denominator",
        ((denom - expected_denominator) / expected_denominator).abs() <= 0.01,
        format!("{denom:.6} against 3^(1/p) = {expected_denominator:.6}"),
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
            fit.r_squared >= 0.98,
            format!("r² {:.4} against 0.98", fit.r_squared),
        ));
    }
    Ok(BlowupOutcome { report, expected_denominator })
}

/// Same grids and witness for the q-variation and for the maximal function.
pub fn exp_maximal_contrast(config: &ExperimentConfig, j1_list: &[i32]) -> Result<ContrastOutcome> {
    let mut variation = run(config, j1_list, PointwiseOperator::Variation { q: config.q }, "linf-blowup")?;
    let mut maximal = run(config, j1_list, PointwiseOperator::Maximal, "maximal-contrast")?;
    let ratios = maximal.ratios();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(l, h), r| (l.min(*r), h.max(*r)));
    maximal.check(Check::new(
        "maximal_stable",
        (hi - lo) / lo < 0.25,
        format!("maximal ratios within [{lo:.4}, {hi:.4}]"),
    ));
    let v = variation.ratios();
    let growth = v[v.len() - 1] / v[0];
    let grows = Check::new("variation_growth", growth > 2.0, format!("variation ratio grows by {growth:.4}x"));
    variation.check(grows.clone());
    maximal.check(grows);
    Ok(ContrastOutcome { variation, maximal })
}
