//! Closed-form evaluation of the averaging, heat and Hilbert operators on
//! step functions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::corefn::PiecewiseConstantFn;
use crate::error::{Error, Result};
use crate::special::{erfc, GaussLegendre};
use crate::variation::RadiusSet;

/// One-parameter operator families whose variation is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorFamily {
    /// `A_t`, parametrized by the radius `t`.
    Averages,
    /// `H_s`, parametrized by the time `s`.
    Heat,
}

/// `A_t f(x) = (F(x+t) - F(x-t)) / t`.
pub fn avg_apply(f: &PiecewiseConstantFn, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveRadius(t));
    }
    let c = f.cumulative();
    Ok((c.eval(x + t) - c.eval(x - t)) / t)
}

/// `(4πs)^{-1/2} e^{-x²/(4s)}`.
pub fn heat_kernel_value(s: f64, x: f64) -> Result<f64> {
    check_time(s)?;
    Ok((4.0 * PI * s).powf(-0.5) * (-x * x / (4.0 * s)).exp())
}

/// `H_s f(x)`, exact up to rounding: each cell contributes its value times
/// the heat mass of the cell seen from `x`.
pub fn heat_apply(f: &PiecewiseConstantFn, s: f64, x: f64) -> Result<f64> {
    check_time(s)?;
    Ok(heat_apply_unchecked(f, s.sqrt().recip(), x))
}

/// `inv_sqrt_s = s^{-1/2}`; caller guarantees `s > 0`.
fn heat_apply_unchecked(f: &PiecewiseConstantFn, inv_sqrt_s: f64, x: f64) -> f64 {
    let bps = f.breakpoints();
    // (Φ(z), 1 - Φ(z)) at z = (x - b) / √s, computed from whichever side is small
    let tails = |b: f64| {
        let z = (x - b) * inv_sqrt_s;
        if z < 0.0 {
            let lower = 0.5 * erfc(-0.5 * z);
            (lower, 1.0 - lower, z)
        } else {
            let upper = 0.5 * erfc(0.5 * z);
            (1.0 - upper, upper, z)
        }
    };
    let mut acc = 0.0;
    let mut left = tails(bps[0]);
    for (i, &c) in f.values().iter().enumerate() {
        let right = tails(bps[i + 1]);
        let (phi_l, q_l, z_l) = left;
        let (phi_r, q_r, z_r) = right;
        let mass = if z_r >= 0.0 {
            q_r - q_l
        } else if z_l <= 0.0 {
            phi_l - phi_r
        } else {
            1.0 - q_l - phi_r
        };
        acc += c * mass;
        left = right;
    }
    acc
}

/// `p.v. ∫ f(y) / (x - y) dy = Σ c_i ln|(x - b_{i-1}) / (x - b_i)|`.
pub fn hilbert_apply(f: &PiecewiseConstantFn, x: f64) -> Result<f64> {
    if f.is_breakpoint(x) {
        return Err(Error::SingularPoint(x));
    }
    let mut acc = 0.0;
    for (lo, hi, c) in f.cells() {
        if c == 0.0 {
            continue;
        }
        let (d_lo, d_hi) = (x - lo, x - hi);
        let ratio = d_lo / d_hi;
        // ln_1p is accurate far from the cell, the split form near an endpoint.
        let term = if ratio > 0.5 && ratio < 2.0 {
            ((hi - lo) / d_hi).ln_1p()
        } else {
            d_lo.abs().ln() - d_hi.abs().ln()
        };
        acc += c * term;
    }
    Ok(acc)
}

/// Values of the family at `x`, in the (decreasing) order of `radii`.
pub fn family_values(
    f: &PiecewiseConstantFn,
    family: OperatorFamily,
    radii: &RadiusSet,
    x: f64,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(radii.len());
    family_values_into(f, family, radii, x, &mut out);
    Ok(out)
}

/// Allocation-free variant of [`family_values`]; `radii` are valid by construction.
pub(crate) fn family_values_into(
    f: &PiecewiseConstantFn,
    family: OperatorFamily,
    radii: &RadiusSet,
    x: f64,
    out: &mut Vec<f64>,
) {
    out.clear();
    match family {
        OperatorFamily::Averages => {
            let c = f.cumulative();
            out.extend(radii.radii().iter().map(|&t| (c.eval(x + t) - c.eval(x - t)) / t));
        }
        OperatorFamily::Heat => {
            out.extend(radii.radii().iter().map(|&s| heat_apply_unchecked(f, s.sqrt().recip(), x)));
        }
    }
}

/// `-h'(t) = (t/2)(4π)^{-1/2} e^{-t²/4}` for the unit heat profile `h(|x|) = H(x)`.
pub fn heat_profile_neg_derivative(t: f64) -> f64 {
    0.5 * t * (4.0 * PI).powf(-0.5) * (-t * t / 4.0).exp()
}

/// Truncation point of the `t`-integral: `e^{-T²/4}` at `T = 20` is `e^{-100}`.
pub const REPRESENTATION_CUTOFF: f64 = 20.0;

/// Quadrature of `-∫_0^T A_{t√s} f(x) h'(t) t dt`.
///
/// The integrand has kinks where `x ± t√s` crosses a breakpoint; `[0, T]` is
/// split there and `quad_nodes` are shared among the smooth panels.
pub fn heat_integral_representation(
    f: &PiecewiseConstantFn,
    s: f64,
    x: f64,
    quad_nodes: usize,
) -> Result<f64> {
    check_time(s)?;
    let sqrt_s = s.sqrt();
    let cutoff = REPRESENTATION_CUTOFF;
    let mut edges: Vec<f64> = f
        .breakpoints()
        .iter()
        .map(|b| (x - b).abs() / sqrt_s)
        .filter(|t| *t > 0.0 && *t < cutoff)
        .collect();
    edges.push(0.0);
    edges.push(cutoff);
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * cutoff);
    let panels = edges.len() - 1;
    let per_panel = (quad_nodes / panels).max(8);
    let rule = GaussLegendre::cached(per_panel);
    let c = f.cumulative();
    let mut acc = 0.0;
    for w in edges.windows(2) {
        acc += rule.integrate(w[0], w[1], |t| {
            let r = t * sqrt_s;
            let avg = (c.eval(x + r) - c.eval(x - r)) / r;
            avg * heat_profile_neg_derivative(t) * t
        });
    }
    Ok(acc)
}

/// `|H_s f(x) - (-∫ A_{t√s} f(x) h'(t) t dt)|`.
pub fn heat_integral_representation_check(
    f: &PiecewiseConstantFn,
    s: f64,
    x: f64,
    quad_nodes: usize,
) -> Result<f64> {
    if quad_nodes < 16 {
        return Err(Error::Config(format!("quad_nodes must be >= 16, got {quad_nodes}")));
    }
    let exact = heat_apply(f, s, x)?;
    let quad = heat_integral_representation(f, s, x, quad_nodes)?;
    Ok((exact - quad).abs())
}

fn check_time(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveTime(s))
    }
}
