use serde::{Deserialize, Serialize};

use super::grid::SampleGrid;
use crate::error::{Error, Result};

/// Norm of the lattice in the inner variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InnerNorm {
    /// `L^∞`: max over inner indices (with positive weight).
    SupNorm,
    /// `L^r` of a function sampled on weighted inner cells.
    IntegralR { r: f64 },
    /// `ℓ^r`: plain sequence norm, weights ignored.
    SequenceR { r: f64 },
}

impl InnerNorm {
    pub fn integral(r: f64) -> Result<Self> {
        check_r(r)?;
        Ok(Self::IntegralR { r })
    }

    pub fn sequence(r: f64) -> Result<Self> {
        check_r(r)?;
        Ok(Self::SequenceR { r })
    }

    /// Applies the norm to one inner slice.
    pub fn apply(&self, values: &[f64], weights: &[f64]) -> f64 {
        match *self {
            InnerNorm::SupNorm => values
                .iter()
                .zip(weights)
                .filter(|(_, w)| **w > 0.0)
                .fold(0.0, |m, (v, _)| m.max(v.abs())),
            InnerNorm::IntegralR { r } => values
                .iter()
                .zip(weights)
                .map(|(v, w)| w * v.abs().powf(r))
                .sum::<f64>()
                .powf(1.0 / r),
            InnerNorm::SequenceR { r } => {
                values.iter().map(|v| v.abs().powf(r)).sum::<f64>().powf(1.0 / r)
            }
        }
    }
}

fn check_r(r: f64) -> Result<()> {
    if r.is_finite() && r > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidR(r))
    }
}

/// A lattice-valued function sampled on an x-grid: row `i` is the element of
/// the inner lattice at `x_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorField {
    x_grid: SampleGrid,
    inner_dim: usize,
    values: Vec<f64>,
    inner_norm: InnerNorm,
    inner_weights: Vec<f64>,
}

impl VectorField {
    /// `values` is row-major, `x_grid.len() × inner_dim`.
    pub fn new(
        x_grid: SampleGrid,
        inner_dim: usize,
        values: Vec<f64>,
        inner_norm: InnerNorm,
        inner_weights: Vec<f64>,
    ) -> Result<Self> {
        if inner_dim == 0 {
            return Err(Error::EmptyInput);
        }
        if values.len() != x_grid.len() * inner_dim {
            return Err(Error::LengthMismatch { expected: x_grid.len() * inner_dim, got: values.len() });
        }
        if inner_weights.len() != inner_dim {
            return Err(Error::LengthMismatch { expected: inner_dim, got: inner_weights.len() });
        }
        if inner_weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::NegativeWeight);
        }
        if let Some(&v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(v));
        }
        Ok(Self { x_grid, inner_dim, values, inner_norm, inner_weights })
    }

    /// Scalar field viewed as a one-dimensional lattice element per point.
    pub fn scalar(x_grid: SampleGrid, values: Vec<f64>) -> Result<Self> {
        Self::new(x_grid, 1, values, InnerNorm::SupNorm, vec![1.0])
    }

    pub fn x_grid(&self) -> &SampleGrid {
        &self.x_grid
    }

    pub fn inner_dim(&self) -> usize {
        self.inner_dim
    }

    pub fn inner_norm(&self) -> InnerNorm {
        self.inner_norm
    }

    pub fn inner_weights(&self) -> &[f64] {
        &self.inner_weights
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.inner_dim..(i + 1) * self.inner_dim]
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.inner_dim + k]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { values: self.values.iter().map(|v| v * factor).collect(), ..self.clone() }
    }

    /// Pointwise lattice norms `x ↦ ‖F(x, ·)‖_X`.
    pub fn inner_norms(&self) -> Vec<f64> {
        (0..self.x_grid.len())
            .map(|i| self.inner_norm.apply(self.row(i), &self.inner_weights))
            .collect()
    }
}

/// `‖F‖_{L^p(X)} = (Σ_x w_x ‖F(x,·)‖_X^p)^{1/p}`; `p = ∞` gives the max over x.
pub fn bochner_norm(field: &VectorField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidQ(p));
    }
    let norms = field.inner_norms();
    if p.is_infinite() {
        return Ok(norms.iter().fold(0.0, |m, v| m.max(*v)));
    }
    let s: f64 = field
        .x_grid
        .weights()
        .iter()
        .zip(&norms)
        .map(|(w, n)| w * n.powf(p))
        .sum();
    Ok(s.powf(1.0 / p))
}
