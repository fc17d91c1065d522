//! Experiment drivers. Each produces explicit witnesses and reports
//! `‖T f‖ / ‖f‖` ratios, all of which are lower bounds for operator norms.

mod blowup;
mod hilbert;
mod key;
mod lr;
mod reduction;
mod report;
mod transfer;

use serde::{Deserialize, Serialize};

pub use blowup::{exp_linf_blowup, exp_maximal_contrast, linf_denominator, BlowupOutcome, ContrastOutcome};
pub use hilbert::{
    exp_hilbert_growth, hilbert_inner_integral, hilbert_inner_l2_on_unit, hilbert_pointwise_bound_check,
    sheared_indicator_norm, HilbertOutcome,
};
pub use key::{exp_key_estimate, KeyEstimateOutcome, STABILIZATION_FROM};
pub use lr::{exp_lr_growth, lr_denominator, lr_numerator, LrOutcome};
pub use reduction::exp_reduction_constant;
pub use report::{Check, ExperimentReport, RatioReport};
pub use transfer::{exp_norm_transfer, norm_transfer_for, random_simple_function, NormTransfer, SimpleFunction};

use crate::corefn::SampleGrid;
use crate::error::{Error, Result};
use crate::witnesses::{self, LacunaryParams};

/// Discretization controls shared by the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Equispaced points on the inner window `[-1, 2]`.
    pub uniform_points: usize,
    /// Log-spaced points per factor `a` towards the origin.
    pub per_factor: usize,
    /// Dyadic refinement depth of the outer panels near the endpoints (Hilbert).
    pub hilbert_depth: u32,
    /// Gauss–Legendre order per panel (Hilbert).
    pub hilbert_order: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { uniform_points: 6001, per_factor: 32, hilbert_depth: 40, hilbert_order: 16 }
    }
}

impl GridSpec {
    /// Twice the resolution in every direction.
    pub fn refined(&self) -> Self {
        Self {
            uniform_points: 2 * self.uniform_points - 1,
            per_factor: 2 * self.per_factor,
            hilbert_depth: 2 * self.hilbert_depth,
            hilbert_order: 2 * self.hilbert_order,
        }
    }

    /// Inner grid on `[-1, 2]`, log-refined towards 0 down to `a^{-depth}`,
    /// always containing 0 and 1.
    pub fn inner_grid(&self, a: f64, depth: u32) -> Result<SampleGrid> {
        let g = SampleGrid::log_refined(-1.0, 2.0, self.uniform_points, &[0.0], a, depth, self.per_factor, 1.0)?;
        let mut pts = g.points().to_vec();
        pts.push(1.0);
        SampleGrid::from_points(pts)
    }
}

/// How `j1` is chosen for each `r` in the growth experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum J1Rule {
    Explicit { j1: i32 },
    /// `j1 = ⌊r⌋ j0`.
    FloorRTimesJ0,
}

impl J1Rule {
    pub fn j1_for(&self, r: f64, j0: i32) -> i32 {
        match *self {
            J1Rule::Explicit { j1 } => j1,
            J1Rule::FloorRTimesJ0 => r.floor() as i32 * j0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub p: f64,
    pub q: f64,
    pub lacunary: LacunaryParams,
    pub grid: GridSpec,
    pub r_list: Vec<f64>,
    pub j1_rule: J1Rule,
}

/// Deepest scale covered by the default truncation.
pub const DEFAULT_MAX_SCALE: i32 = 70;

impl ExperimentConfig {
    /// Defaults `p = 2`, `q = 3`, `r ∈ {4, 8, 16, 32}`, `j1 = ⌊r⌋ j0`, with the
    /// truncation of `params` deepened to cover scales up to [`DEFAULT_MAX_SCALE`].
    pub fn with_params(params: LacunaryParams) -> Result<Self> {
        let mut lacunary = params;
        lacunary.k_min = lacunary.k_min.min(witnesses::admissible_k_min(params.a, DEFAULT_MAX_SCALE)?);
        let cfg = Self {
            p: 2.0,
            q: 3.0,
            lacunary,
            grid: GridSpec::default(),
            r_list: vec![4.0, 8.0, 16.0, 32.0],
            j1_rule: J1Rule::FloorRTimesJ0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Runs the key-estimate search with the default candidates and window.
    pub fn searched() -> Result<Self> {
        let params = witnesses::search_key_params(&witnesses::DEFAULT_BASES, None, witnesses::DEFAULT_WINDOW)?;
        Self::with_params(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::Config(format!("p must be in (1, ∞), got {}", self.p)));
        }
        if !(self.q > 2.0 && self.q.is_finite()) {
            return Err(Error::Config(format!("q must be in (2, ∞), got {}", self.q)));
        }
        if self.r_list.iter().any(|r| !(*r > 1.0 && r.is_finite())) {
            return Err(Error::Config("every r must be in (1, ∞)".into()));
        }
        if self.r_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("r_list must be strictly increasing".into()));
        }
        if self.lacunary.j0 < 0 {
            return Err(Error::Config("j0 must be nonnegative".into()));
        }
        if self.grid.uniform_points < 2 || self.grid.hilbert_order < 1 {
            return Err(Error::Config("grid resolution too small".into()));
        }
        Ok(())
    }

    /// Same run at twice the resolution.
    pub fn refined(&self) -> Self {
        Self { grid: self.grid.refined(), ..self.clone() }
    }

    /// The truncated witness, checked to be admissible up to scale `j_max`.
    pub fn witness(&self, j_max: i32) -> Result<crate::corefn::PiecewiseConstantFn> {
        let LacunaryParams { a, k_min, .. } = self.lacunary;
        witnesses::check_truncation(a, k_min, j_max)?;
        witnesses::lacunary_sign(a, k_min)
    }
}
