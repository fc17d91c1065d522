use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A compactly supported step function.
///
/// Cell `i` is the half-open interval `[b_i, b_{i+1})` carrying `values[i]`;
/// the function vanishes outside `[b_0, b_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstantFn {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstantFn {
    /// Validates and normalizes (adjacent equal values are merged).
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::LengthMismatch {
                expected: breakpoints.len().saturating_sub(1).max(1),
                got: values.len(),
            });
        }
        if breakpoints.iter().any(|b| !b.is_finite())
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::NonMonotoneBreakpoints);
        }
        if let Some(&v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(v));
        }
        Ok(Self { breakpoints, values }.normalize())
    }

    /// `c · χ_{[lo, hi)}`.
    pub fn indicator(lo: f64, hi: f64, c: f64) -> Result<Self> {
        Self::new(vec![lo, hi], vec![c])
    }

    /// The identically zero function, represented as a zero cell on `[0, 1)`.
    pub fn zero() -> Self {
        Self { breakpoints: vec![0.0, 1.0], values: vec![0.0] }
    }

    /// Merges neighbouring cells with equal values. Idempotent.
    pub fn normalize(self) -> Self {
        let mut bps = Vec::with_capacity(self.breakpoints.len());
        let mut vals: Vec<f64> = Vec::with_capacity(self.values.len());
        bps.push(self.breakpoints[0]);
        for (i, &v) in self.values.iter().enumerate() {
            if vals.last() == Some(&v) {
                *bps.last_mut().unwrap() = self.breakpoints[i + 1];
            } else {
                vals.push(v);
                bps.push(self.breakpoints[i + 1]);
            }
        }
        Self { breakpoints: bps, values: vals }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_cells(&self) -> usize {
        self.values.len()
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    /// Iterator over `(lo, hi, value)` cells.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &c)| (w[0], w[1], c))
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(x >= lo && x < hi) {
            return 0.0;
        }
        // number of breakpoints <= x, at least 1 here
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        self.values[idx - 1]
    }

    /// `∫_{-∞}^x f`.
    pub fn antiderivative(&self, x: f64) -> f64 {
        let (lo, _) = self.support();
        if x <= lo {
            return 0.0;
        }
        let mut acc = 0.0;
        for (a, b, c) in self.cells() {
            if x >= b {
                acc += c * (b - a);
            } else {
                acc += c * (x - a);
                break;
            }
        }
        acc
    }

    pub fn integral(&self) -> f64 {
        self.cells().map(|(a, b, c)| c * (b - a)).sum()
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `x ↦ f(x - shift)`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.iter().map(|b| b + shift).collect(),
            values: self.values.clone(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
        .normalize()
    }

    /// `x ↦ |f(x)|`.
    pub fn abs(&self) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
        .normalize()
    }

    /// True if `x` coincides with a breakpoint.
    pub fn is_breakpoint(&self, x: f64) -> bool {
        self.breakpoints.binary_search_by(|b| b.total_cmp(&x)).is_ok()
    }

    /// Cell-wise integrals precomputed for repeated antiderivative queries.
    pub fn cumulative(&self) -> Antiderivative<'_> {
        let mut prefix = Vec::with_capacity(self.breakpoints.len());
        let mut acc = 0.0;
        prefix.push(0.0);
        for (a, b, c) in self.cells() {
            acc += c * (b - a);
            prefix.push(acc);
        }
        Antiderivative { f: self, prefix }
    }
}

/// Antiderivative with `O(log n)` evaluation.
#[derive(Debug, Clone)]
pub struct Antiderivative<'a> {
    f: &'a PiecewiseConstantFn,
    prefix: Vec<f64>,
}

impl Antiderivative<'_> {
    pub fn eval(&self, x: f64) -> f64 {
        let bps = &self.f.breakpoints;
        if x <= bps[0] {
            return 0.0;
        }
        let n = self.f.values.len();
        if x >= bps[n] {
            return self.prefix[n];
        }
        let idx = bps.partition_point(|&b| b <= x) - 1;
        self.prefix[idx] + self.f.values[idx] * (x - bps[idx])
    }
}
