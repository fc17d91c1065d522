//! Witness functions and parameters for the lower-bound constructions.
//!
//! The blow-up witness is the lacunary sign function
//! `G = Σ_{k<0} (-1)^{k+1} χ_{[a^k, a^{k+1})}`, truncated at depth `k_min`.
//! Its heat averages at the origin oscillate with a fixed amplitude across
//! the scales `s = a^{-2j}`:
//! `D_j = |H_{a^{-2j}} G(0) - H_{a^{-2(j+1)}} G(0)| ≥ C` for `j ≥ j0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::corefn::PiecewiseConstantFn;
use crate::error::{Error, Result};
use crate::special::erf;
use crate::variation::RadiusSet;

/// Tail mass of the truncated witness must stay below this in every average.
pub const TRUNCATION_TOLERANCE: f64 = 1e-10;

/// Smallest acceptable certified key constant.
pub const KEY_THRESHOLD: f64 = 1e-4;

/// Default candidate bases for the key-estimate search.
pub const DEFAULT_BASES: [f64; 7] = [1.5, 2.0, std::f64::consts::E, 3.0, 4.0, 6.0, 8.0];

/// Default scale window `(j_lo, j_hi)` for the key-estimate search.
pub const DEFAULT_WINDOW: (i32, i32) = (2, 30);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LacunaryParams {
    pub a: f64,
    pub k_min: i32,
    pub j0: i32,
    /// Certified lower bound for `D_j` on the search window.
    pub key_constant: f64,
}

fn check_base(a: f64, k_min: i32) -> Result<()> {
    if a.is_finite() && a > 1.0 && k_min <= -1 {
        Ok(())
    } else {
        Err(Error::InvalidBase { a, k_min })
    }
}

/// `G` truncated to `k ∈ [k_min, -1]`: support `[a^{k_min}, 1)`, value
/// `(-1)^{k+1}` on `[a^k, a^{k+1})`.
pub fn lacunary_sign(a: f64, k_min: i32) -> Result<PiecewiseConstantFn> {
    check_base(a, k_min)?;
    let breakpoints: Vec<f64> = (k_min..=0).map(|k| a.powi(k)).collect();
    let values: Vec<f64> = (k_min..0).map(sign_of_cell).collect();
    PiecewiseConstantFn::new(breakpoints, values)
}

fn sign_of_cell(k: i32) -> f64 {
    if (k + 1).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `H_{a^{-2j}} G(y)`, summed over the jumps of `G`:
/// `Σ_k (c_k - c_{k-1}) · erf((y - a^k) a^j / 2) / 2`.
///
/// Independent of [`crate::operators::heat_apply`], which sums cell masses.
pub fn heat_of_g_at(a: f64, k_min: i32, j: i32, y: f64) -> f64 {
    let scale = a.powi(j);
    let mut acc = 0.0;
    let mut prev = 0.0;
    for k in k_min..=0 {
        let cur = if k < 0 { sign_of_cell(k) } else { 0.0 };
        let jump = cur - prev;
        let z = (y - a.powi(k)) * scale;
        acc += jump * erf(0.5 * z);
        prev = cur;
    }
    0.5 * acc
}

/// Requires `a^{k_min+1} (4π a^{-2j})^{-1/2} < 1e-10` at the finest scale used.
pub fn check_truncation(a: f64, k_min: i32, j_max: i32) -> Result<()> {
    check_base(a, k_min)?;
    let s = a.powi(-2 * j_max);
    let bound = a.powi(k_min + 1) / (4.0 * PI * s).sqrt();
    if bound.is_finite() && bound < TRUNCATION_TOLERANCE {
        Ok(())
    } else {
        Err(Error::TruncationTooShallow { a, k_min, j_max })
    }
}

/// Shallowest admissible truncation for scales up to `j_max`.
pub fn admissible_k_min(a: f64, j_max: i32) -> Result<i32> {
    check_base(a, -1)?;
    let guess = ((TRUNCATION_TOLERANCE * (4.0 * PI).sqrt()).ln() / a.ln()).floor() as i64 - 1 - j_max as i64;
    let mut k = guess.min(-1).max(i32::MIN as i64 / 2) as i32;
    while check_truncation(a, k + 1, j_max).is_ok() && k + 1 <= -1 {
        k += 1;
    }
    while check_truncation(a, k, j_max).is_err() {
        if k < -100_000 {
            return Err(Error::TruncationTooShallow { a, k_min: k, j_max });
        }
        k -= 1;
    }
    Ok(k)
}

/// `D_j` for `j = 0..=j_max`. Evaluates scales up to `j_max + 1`.
pub fn key_estimate_table(a: f64, k_min: i32, j_max: i32) -> Result<Vec<f64>> {
    if j_max < 0 {
        return Err(Error::BadRange { j0: 0, j1: j_max });
    }
    check_truncation(a, k_min, j_max + 1)?;
    let h: Vec<f64> = (0..=j_max + 1).map(|j| heat_of_g_at(a, k_min, j, 0.0)).collect();
    Ok(h.windows(2).map(|w| (w[0] - w[1]).abs()).collect())
}

/// Picks the candidate base maximizing `min_{j_lo ≤ j ≤ j_hi} D_j`.
///
/// With `k_min = None` each candidate gets its shallowest admissible depth;
/// with an explicit depth, candidates for which it is too shallow are skipped.
pub fn search_key_params(candidates: &[f64], k_min: Option<i32>, window: (i32, i32)) -> Result<LacunaryParams> {
    let (j_lo, j_hi) = window;
    if j_lo < 0 || j_lo > j_hi {
        return Err(Error::BadRange { j0: j_lo, j1: j_hi });
    }
    let mut best: Option<LacunaryParams> = None;
    for &a in candidates {
        check_base(a, -1)?;
        let depth = match k_min {
            Some(k) => k,
            None => admissible_k_min(a, j_hi + 1)?,
        };
        let table = match key_estimate_table(a, depth, j_hi) {
            Ok(t) => t,
            Err(Error::TruncationTooShallow { .. }) => continue,
            Err(e) => return Err(e),
        };
        let min = table[j_lo as usize..=j_hi as usize].iter().cloned().fold(f64::INFINITY, f64::min);
        if best.is_none_or(|b| min > b.key_constant) {
            best = Some(LacunaryParams { a, k_min: depth, j0: j_lo, key_constant: min });
        }
    }
    match best {
        Some(p) if p.key_constant >= KEY_THRESHOLD => Ok(p),
        _ => Err(Error::NoAdmissibleBase { threshold: KEY_THRESHOLD }),
    }
}

/// Largest `j` with `a^{-2j}` comfortably inside double range.
pub fn max_representable_scale(a: f64) -> i32 {
    ((708.0 / (2.0 * a.ln())).ceil() as i32 - 1).max(0)
}

/// `{a^{-2j} : j0 ≤ j ≤ j1}` in decreasing order.
pub fn geometric_radius_set(a: f64, j0: i32, j1: i32) -> Result<RadiusSet> {
    check_base(a, -1)?;
    if j0 > j1 {
        return Err(Error::BadRange { j0, j1 });
    }
    if 2.0 * j1 as f64 * a.ln() >= 708.0 || 2.0 * j0 as f64 * a.ln() <= -708.0 {
        return Err(Error::FloatRangeExceeded { a, j: j1 });
    }
    RadiusSet::new((j0..=j1).map(|j| a.powi(-2 * j)).collect())
}

/// Probe offsets `a^{-i/per_factor}` for `i = 0..=(j1+2)·per_factor`, ascending.
/// Probe sets for increasing `j1` are nested.
pub fn probe_offsets(a: f64, j1: i32, per_factor: usize) -> Vec<f64> {
    let per = per_factor.max(1);
    let n = (j1.max(0) as usize + 2) * per;
    let mut v: Vec<f64> = (0..=n).map(|i| a.powf(-(i as f64) / per as f64)).collect();
    v.reverse();
    v
}

fn halving_holds(a: f64, k_min: i32, j0: i32, j1: i32, y: f64, at_zero: &[f64]) -> bool {
    let mut prev = heat_of_g_at(a, k_min, j0, y);
    for (idx, j) in (j0..=j1).enumerate() {
        let next = heat_of_g_at(a, k_min, j + 1, y);
        if (prev - next).abs() < 0.5 * at_zero[idx] {
            return false;
        }
        prev = next;
    }
    true
}

/// Largest probe radius `ρ` such that every probe `|y| ≤ ρ` satisfies
/// `|D_j(y)| ≥ D_j(0)/2` for all `j ∈ [j0, j1]`, where
/// `D_j(y) = H_{a^{-2j}} G(y) - H_{a^{-2(j+1)}} G(y)`.
pub fn delta_halving_radius(a: f64, k_min: i32, j0: i32, j1: i32, per_factor: usize) -> Result<f64> {
    if j0 > j1 || j0 < 0 {
        return Err(Error::BadRange { j0, j1 });
    }
    check_truncation(a, k_min, j1 + 1)?;
    let at_zero: Vec<f64> = (j0..=j1)
        .map(|j| (heat_of_g_at(a, k_min, j, 0.0) - heat_of_g_at(a, k_min, j + 1, 0.0)).abs())
        .collect();
    if at_zero.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::KeyEstimateFailed);
    }
    let holds = |y: f64| {
        halving_holds(a, k_min, j0, j1, y, &at_zero) && halving_holds(a, k_min, j0, j1, -y, &at_zero)
    };
    let probes = probe_offsets(a, j1, per_factor);
    let mut rho = 0.0;
    for &y in &probes {
        if holds(y) {
            rho = y;
        } else {
            break;
        }
    }
    if rho > 0.0 {
        return Ok(rho);
    }
    // the smallest probe already fails: continue geometrically towards 0
    let mut y = probes[0];
    for _ in 0..200 {
        y /= a;
        if holds(y) {
            return Ok(y);
        }
    }
    Err(Error::KeyEstimateFailed)
}

/// `χ_{[0,1)}`.
pub fn unit_indicator() -> PiecewiseConstantFn {
    PiecewiseConstantFn::indicator(0.0, 1.0, 1.0).expect("valid indicator")
}
