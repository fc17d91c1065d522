use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample points with quadrature weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl SampleGrid {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch { expected: points.len(), got: weights.len() });
        }
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if points.iter().any(|p| !p.is_finite()) || points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonMonotoneBreakpoints);
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::NegativeWeight);
        }
        Ok(Self { points, weights })
    }

    /// Points with the default cell weights: each point owns half the gap to
    /// each neighbour, so the weights sum to `last - first`.
    pub fn from_points(mut points: Vec<f64>) -> Result<Self> {
        points.sort_by(f64::total_cmp);
        points.dedup();
        let weights = default_weights(&points);
        Self::new(points, weights)
    }

    /// `n >= 2` equispaced points on `[lo, hi]` including both ends.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) {
            return Err(Error::Config(format!("uniform grid needs n >= 2 and lo < hi (n = {n})")));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let points: Vec<f64> = (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + h * i as f64 })
            .collect();
        Self::from_points(points)
    }

    /// Union of a uniform grid on `[lo, hi]` and, for every centre `c`,
    /// the points `c ± span·base^{-i/per_factor}` for `i = 0..=depth·per_factor`
    /// that fall inside `[lo, hi]`. The centres themselves are included.
    pub fn log_refined(
        lo: f64,
        hi: f64,
        uniform_points: usize,
        centres: &[f64],
        base: f64,
        depth: u32,
        per_factor: usize,
        span: f64,
    ) -> Result<Self> {
        let mut pts = Self::uniform(lo, hi, uniform_points)?.points;
        let per = per_factor.max(1);
        let ln_base = base.ln();
        for &c in centres {
            if c >= lo && c <= hi {
                pts.push(c);
            }
            for i in 0..=(depth as usize * per) {
                let d = span * (-(i as f64) * ln_base / per as f64).exp();
                for p in [c - d, c + d] {
                    if p >= lo && p <= hi {
                        pts.push(p);
                    }
                }
            }
        }
        Self::from_points(pts)
    }

    /// Composite Gauss–Legendre grid: `order` nodes on each of the panels
    /// delimited by `edges`.
    pub fn gauss_panels(edges: &[f64], order: usize) -> Result<Self> {
        let rule = crate::special::GaussLegendre::cached(order);
        let mut pts = Vec::new();
        let mut wts = Vec::new();
        for w in edges.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::NonMonotoneBreakpoints);
            }
            for (x, wt) in rule.mapped(w[0], w[1]) {
                pts.push(x);
                wts.push(wt);
            }
        }
        Self::new(pts, wts)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Indices of points in `[lo, hi]`.
    pub fn index_range(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let a = self.points.partition_point(|&p| p < lo);
        let b = self.points.partition_point(|&p| p <= hi);
        a..b.max(a)
    }

    /// Sub-grid of points in `[lo, hi]`, re-weighted as a grid on its own.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<Self> {
        let r = self.index_range(lo, hi);
        Self::from_points(self.points[r].to_vec())
    }
}

fn default_weights(points: &[f64]) -> Vec<f64> {
    let n = points.len();
    let mut w = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let half = 0.5 * (points[i + 1] - points[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    w
}

/// Values of a derived quantity sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarProfile {
    grid: SampleGrid,
    values: Vec<f64>,
}

impl ScalarProfile {
    pub fn new(grid: SampleGrid, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        if let Some(&v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(v));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: SampleGrid, f: F) -> Result<Self> {
        let values = grid.points().iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Restriction to grid points in `[lo, hi]`, keeping the values and
    /// re-weighting the retained points as a standalone grid.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<Self> {
        let r = self.grid.index_range(lo, hi);
        let grid = SampleGrid::from_points(self.grid.points[r.clone()].to_vec())?;
        Self::new(grid, self.values[r].to_vec())
    }

    /// `(Σ w |v|^p)^{1/p}`, or the max when `p` is infinite.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.max_abs();
        }
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_weights_sum_to_span() {
        let g = SampleGrid::from_points(vec![0.0, 0.1, 0.5, 2.0]).unwrap();
        assert!((g.total_weight() - 2.0).abs() < 1e-15);
        assert_eq!(g.weights()[0], 0.05);
    }

    #[test]
    fn rejects_bad_grids() {
        assert_eq!(SampleGrid::new(vec![0.0, 0.0], vec![1.0, 1.0]), Err(Error::NonMonotoneBreakpoints));
        assert_eq!(SampleGrid::new(vec![0.0, 1.0], vec![1.0, -1.0]), Err(Error::NegativeWeight));
        assert!(matches!(SampleGrid::new(vec![0.0], vec![]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn log_refined_resolves_small_scales() {
        let g = SampleGrid::log_refined(-1.0, 2.0, 31, &[0.0], 4.0, 10, 4, 1.0).unwrap();
        assert!(g.points().contains(&0.0));
        let smallest = g.points().iter().filter(|p| **p > 0.0).fold(1.0f64, |m, p| m.min(*p));
        assert!((smallest - 4f64.powi(-10)).abs() < 1e-18);
        assert!((g.total_weight() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn restriction_reweights() {
        let g = SampleGrid::uniform(-1.0, 2.0, 31).unwrap();
        let sub = g.restrict(0.0, 1.0).unwrap();
        assert_eq!(sub.len(), 11);
        assert!((sub.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_panels_integrate() {
        let g = SampleGrid::gauss_panels(&[0.0, 0.5, 1.0], 8).unwrap();
        let s: f64 = g.points().iter().zip(g.weights()).map(|(x, w)| w * x * x).sum();
        assert!((s - 1.0 / 3.0).abs() < 1e-14);
    }
}
