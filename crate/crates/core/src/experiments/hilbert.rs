use std::f64::consts::E;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{Check, ExperimentReport, RatioReport};
use super::ExperimentConfig;
use crate::corefn::{bochner_norm, PiecewiseConstantFn, SampleGrid, VectorField};
use crate::error::{Error, Result};
use crate::operators::hilbert_apply;
use crate::special::GaussLegendre;
use crate::witnesses::unit_indicator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertOutcome {
    /// Rows indexed by `param = r`.
    pub report: ExperimentReport,
    /// `r / (2e · 2^{1/r} 3^{1/p})` for each row.
    pub lower_bounds: Vec<f64>,
    /// `‖Hχ_{[0,1)}‖_{L²(0,1)}`.
    pub inner_l2: f64,
    /// `(x, |Hf(x)|, ln(1/x)/2)` at the sampled points.
    pub pointwise: Vec<(f64, f64, f64)>,
}

/// `‖x ↦ ‖χ_{[x-1,x+1]} f‖_{L^r}‖_{L^p(ℝ)}` for `f = χ_{[0,1)}`:
/// `(1 + 2r/(r+p))^{1/p}`.
pub fn sheared_indicator_norm(p: f64, r: f64) -> f64 {
    (1.0 + 2.0 * r / (r + p)).powf(1.0 / p)
}

/// `∫_0^d ψ(v) dv` for `ψ` with a logarithmic singularity at 0, through
/// `v = d e^{-t}` and unit panels in `t`.
fn log_endpoint_integral<F: Fn(f64) -> f64>(psi: F, d: f64, r: f64, order: usize) -> f64 {
    if d <= 0.0 {
        return 0.0;
    }
    let gl = GaussLegendre::cached(order);
    let t_max = (r + 12.0 * r.sqrt() + 60.0 - (1.0 / d).ln()).max(40.0);
    let panels = t_max.ceil() as usize;
    (0..panels)
        .map(|k| {
            gl.integrate(k as f64, (k + 1) as f64, |t| {
                let v = d * (-t).exp();
                psi(v) * v
            })
        })
        .sum()
}

fn hilbert_power(f: &PiecewiseConstantFn, u: f64, r: f64) -> f64 {
    // the quadrature never lands on a breakpoint
    hilbert_apply(f, u).map(|h| h.abs().powf(r)).unwrap_or(0.0)
}

/// `∫_{x-1}^{x+1} |Hχ_{[0,1)}(u)|^r du` for `x ∈ [0, 1]`.
///
/// With `g = |Hχ_{[0,1)}|`, `g(1-u) = g(u)` and `g(1+v) = g(-v)`, so the
/// window splits into `L(1-x) + 2M + L(x)` where `L(d) = ∫_0^d g(-v)^r dv`
/// and `M = ∫_0^{1/2} g(v)^r dv`; every piece is singular only at `v = 0`.
pub fn hilbert_inner_integral(r: f64, x: f64, order: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Config(format!("x must lie in [0, 1], got {x}")));
    }
    let f = unit_indicator();
    let outer = |d: f64| log_endpoint_integral(|v| hilbert_power(&f, -v, r), d, r, order);
    let middle = log_endpoint_integral(|v| hilbert_power(&f, v, r), 0.5, r, order);
    Ok(outer(1.0 - x) + 2.0 * middle + outer(x))
}

/// `(∫_0^1 |ln(u/(1-u))|² du)^{1/2}`, exactly `π/√3`.
pub fn hilbert_inner_l2_on_unit(order: usize) -> f64 {
    let f = unit_indicator();
    (2.0 * log_endpoint_integral(|v| hilbert_power(&f, v, 2.0), 0.5, 2.0, order)).sqrt()
}

/// `(x, |Hf(x)|, ln(1/x)/2)` at `n` log-spaced points `x ∈ [e^{-5n}, e^{-5}]`.
pub fn hilbert_pointwise_bound_check(n: usize) -> Result<Vec<(f64, f64, f64)>> {
    let f = unit_indicator();
    (0..n)
        .map(|i| {
            let x = (-5.0 * (i + 1) as f64).exp();
            Ok((x, hilbert_apply(&f, x)?.abs(), 0.5 * (1.0 / x).ln()))
        })
        .collect()
}

fn outer_grid(config: &ExperimentConfig) -> Result<SampleGrid> {
    let depth = config.grid.hilbert_depth as i32;
    let mut edges = vec![0.0];
    edges.extend((1..=depth).rev().map(|k| 2f64.powi(-k)));
    SampleGrid::gauss_panels(&edges, config.grid.hilbert_order)
}

/// `(∫_0^1 (∫_{x-1}^{x+1} |Hχ_{[0,1)}(u)|^r du)^{p/r} dx)^{1/p}`, using the
/// symmetry `x ↔ 1 - x` of the inner integral.
fn hilbert_numerator(config: &ExperimentConfig, grid: &SampleGrid, r: f64) -> Result<f64> {
    let order = config.grid.hilbert_order;
    let inner: Vec<f64> = grid
        .points()
        .par_iter()
        .map(|&x| hilbert_inner_integral(r, x, order).map(|i| i.powf(1.0 / r)))
        .collect::<Result<_>>()?;
    let half = bochner_norm(&VectorField::scalar(grid.clone(), inner)?, config.p)?;
    Ok(2f64.powf(1.0 / config.p) * half)
}

/// Ratios `‖H F‖ / ‖F‖` in `L^p(L^r)` for the sheared unit indicator, one per `r`.
pub fn exp_hilbert_growth(config: &ExperimentConfig) -> Result<HilbertOutcome> {
    config.validate()?;
    if config.r_list.is_empty() {
        return Err(Error::EmptyInput);
    }
    let grid = outer_grid(config)?;
    let mut rows = Vec::with_capacity(config.r_list.len());
    for &r in &config.r_list {
        let start = Instant::now();
        let num = hilbert_numerator(config, &grid, r)?;
        let den = sheared_indicator_norm(config.p, r);
        rows.push(RatioReport::new(r, num, den, start.elapsed().as_secs_f64()));
    }
    let mut report = ExperimentReport::new("hilbert-growth", rows);

    let inner_l2 = hilbert_inner_l2_on_unit(config.grid.hilbert_order);
    report.check(Check::new(
        "inner_l2",
        (inner_l2 - 1.8138).abs() <= 1e-3,
        format!("{inner_l2:.6} against 1.8138 ± 1e-3"),
    ));
    let pointwise = hilbert_pointwise_bound_check(20)?;
    report.check(Check::new(
        "pointwise_bound",
        pointwise.iter().all(|(_, h, b)| h >= b),
        format!("|Hf(x)| ≥ ln(1/x)/2 at {} points x ≤ e^-5", pointwise.len()),
    ));
    let lower_bounds: Vec<f64> = config
        .r_list
        .iter()
        .map(|&r| r / (2.0 * E * 2f64.powf(1.0 / r) * 3f64.powf(1.0 / config.p)))
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
        report.check(Check::new(
            "slope",
            (fit.slope - 1.0).abs() <= 0.1,
            format!("slope {:.4} against 1 ± 0.1", fit.slope),
        ));
    }
    Ok(HilbertOutcome { report, lower_bounds, inner_l2, pointwise })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::GaussLegendre;

    #[test]
    fn sheared_norm_closed_form() {
        // p = r: (1 + 1)^{1/p}
        assert!((sheared_indicator_norm(2.0, 2.0) - 2f64.sqrt()).abs() < 1e-15);
        assert!(sheared_indicator_norm(2.0, 64.0) <= 2f64.powf(1.0 / 64.0) * 3f64.sqrt());
    }

    #[test]
    fn inner_l2_is_pi_over_root_three() {
        let v = hilbert_inner_l2_on_unit(16);
        assert!((v - std::f64::consts::PI / 3f64.sqrt()).abs() < 1e-10, "{v}");
    }

    #[test]
    fn log_endpoint_integral_gamma_identity() {
        // ∫_0^1 ln(1/v)^r dv = Γ(r + 1)
        for (r, gamma) in [(2.0, 2.0), (5.0, 120.0), (10.0, 3628800.0)] {
            let v = log_endpoint_integral(|v: f64| (1.0 / v).ln().powf(r), 1.0, r, 16);
            assert!((v - gamma).abs() / gamma < 1e-12, "r = {r}: {v}");
        }
    }

    /// Panels on `[lo, hi]` refined geometrically towards both ends.
    fn graded(lo: f64, hi: f64, gl: &GaussLegendre, g: impl Fn(f64) -> f64) -> f64 {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut edges = vec![lo, mid, hi];
        for k in 1..=50 {
            edges.push(lo + half * 2f64.powi(-k));
            edges.push(hi - half * 2f64.powi(-k));
        }
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        edges.windows(2).map(|w| gl.integrate(w[0], w[1], &g)).sum()
    }

    #[test]
    fn inner_integral_against_direct_quadrature() {
        let f = unit_indicator();
        let gl = GaussLegendre::new(32);
        for (r, x) in [(3.0, 0.3), (8.0, 0.05), (2.0, 0.9)] {
            let g = |u: f64| hilbert_power(&f, u, r);
            let direct = graded(x - 1.0, 0.0, &gl, g) + graded(0.0, 1.0, &gl, g) + graded(1.0, x + 1.0, &gl, g);
            let fast = hilbert_inner_integral(r, x, 16).unwrap();
            assert!((fast - direct).abs() / fast < 1e-8, "r = {r}, x = {x}: {fast} vs {direct}");
        }
    }

    #[test]
    fn pointwise_bound_holds() {
        let pts = hilbert_pointwise_bound_check(20).unwrap();
        assert_eq!(pts.len(), 20);
        assert!(pts.iter().all(|(x, h, b)| *x <= (-5.0f64).exp() && h >= b));
    }
}
