use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corefn::{bochner_norm, InnerNorm, PiecewiseConstantFn, SampleGrid, VectorField};
use crate::error::{Error, Result};
use crate::operators::OperatorFamily;
use crate::variation::{vector_variation_field, RadiusSet};

/// `f(x, y) = Σ_k (Σ_j a_{jk} χ_{F_j}(x)) χ_{E_k}(y)` with disjoint `E_k`
/// and disjoint `F_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleFunction {
    /// `|E_k|`.
    pub e_lengths: Vec<f64>,
    /// `F_j = [lo, hi)`, increasing and disjoint.
    pub f_intervals: Vec<(f64, f64)>,
    /// `a_{jk}`, row `j`, column `k`.
    pub coeffs: Vec<f64>,
}

impl SimpleFunction {
    pub fn new(e_lengths: Vec<f64>, f_intervals: Vec<(f64, f64)>, coeffs: Vec<f64>) -> Result<Self> {
        if e_lengths.is_empty() || f_intervals.is_empty() {
            return Err(Error::EmptyInput);
        }
        let expected = e_lengths.len() * f_intervals.len();
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch { expected, got: coeffs.len() });
        }
        if e_lengths.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::NegativeWeight);
        }
        if f_intervals.iter().any(|(lo, hi)| !(lo < hi)) || f_intervals.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(Error::NonMonotoneBreakpoints);
        }
        Ok(Self { e_lengths, f_intervals, coeffs })
    }

    pub fn m(&self) -> usize {
        self.e_lengths.len()
    }

    pub fn n(&self) -> usize {
        self.f_intervals.len()
    }

    pub fn coeff(&self, j: usize, k: usize) -> f64 {
        self.coeffs[j * self.m() + k]
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| c * a).collect(), ..self.clone() }
    }

    /// `x ↦ Σ_j a_{jk} χ_{F_j}(x)` for every `k`, scaled by `scale[k]`.
    fn columns(&self, scale: &[f64]) -> Result<Vec<PiecewiseConstantFn>> {
        (0..self.m())
            .map(|k| {
                let mut bps = vec![self.f_intervals[0].0];
                let mut vals = Vec::new();
                for (j, &(lo, hi)) in self.f_intervals.iter().enumerate() {
                    if lo > *bps.last().unwrap() {
                        vals.push(0.0);
                        bps.push(lo);
                    }
                    vals.push(scale[k] * self.coeff(j, k));
                    bps.push(hi);
                }
                PiecewiseConstantFn::new(bps, vals)
            })
            .collect()
    }
}

/// Random `m × n` simple function: `|E_k| ∈ [0.1, 1]`, `|F_j| ∈ [0.05, 0.5]`
/// with gaps in `[0, 0.3]`, `a_{jk} ∈ [-1, 1]`.
pub fn random_simple_function(seed: u64, m: usize, n: usize) -> Result<SimpleFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e_lengths = (0..m).map(|_| rng.gen_range(0.1..=1.0)).collect();
    let mut x = 0.0;
    let mut f_intervals = Vec::with_capacity(n);
    for _ in 0..n {
        let len = rng.gen_range(0.05..=0.5);
        f_intervals.push((x, x + len));
        x += len + rng.gen_range(0.0..=0.3);
    }
    let coeffs = (0..m * n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    SimpleFunction::new(e_lengths, f_intervals, coeffs)
}

/// Both sides of the two transfer identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormTransfer {
    /// `‖f‖_{L^p(L^r)}`.
    pub norm_lr: f64,
    /// `‖f̃‖_{L^p(ℓ^r)}`.
    pub norm_ellr: f64,
    /// `‖V_{q,J} f‖_{L^p(L^r)}`.
    pub var_lr: f64,
    /// `‖V_{q,J} f̃‖_{L^p(ℓ^r)}`.
    pub var_ellr: f64,
}

impl NormTransfer {
    /// Larger of the two relative discrepancies.
    pub fn max_rel_discrepancy(&self) -> f64 {
        let rel = |a: f64, b: f64| if a == b { 0.0 } else { (a - b).abs() / a.abs().max(b.abs()) };
        rel(self.norm_lr, self.norm_ellr).max(rel(self.var_lr, self.var_ellr))
    }
}

/// Points used to sample the variation fields in `x`.
const VARIATION_POINTS: usize = 801;

pub fn norm_transfer_for(sf: &SimpleFunction, p: f64, q: f64, r: f64, radii: &RadiusSet) -> Result<NormTransfer> {
    let lr = InnerNorm::integral(r)?;
    let ellr = InnerNorm::sequence(r)?;
    let m = sf.m();
    let tilde: Vec<f64> = sf.e_lengths.iter().map(|e| e.powf(1.0 / r)).collect();

    // f is constant on each F_j × E_k, so one sample per F_j is exact.
    let mids = sf.f_intervals.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
    let lens = sf.f_intervals.iter().map(|(lo, hi)| hi - lo).collect();
    let plain = SampleGrid::new(mids, lens)?;
    let f_field = VectorField::new(plain.clone(), m, sf.coeffs.clone(), lr, sf.e_lengths.clone())?;
    let tilde_vals = sf.coeffs.iter().enumerate().map(|(i, a)| tilde[i % m] * a).collect();
    let t_field = VectorField::new(plain, m, tilde_vals, ellr, vec![1.0; m])?;

    let reach = radii.radii()[0] + 0.5;
    let lo = sf.f_intervals[0].0 - reach;
    let hi = sf.f_intervals[sf.n() - 1].1 + reach;
    let grid = SampleGrid::uniform(lo, hi, VARIATION_POINTS)?;
    let ones = vec![1.0; m];
    let f_cols = sf.columns(&ones)?;
    let t_cols = sf.columns(&tilde)?;
    let vf = vector_variation_field(&f_cols, &grid, lr, sf.e_lengths.clone(), OperatorFamily::Averages, radii, q)?;
    let vt = vector_variation_field(&t_cols, &grid, ellr, ones, OperatorFamily::Averages, radii, q)?;

    Ok(NormTransfer {
        norm_lr: bochner_norm(&f_field, p)?,
        norm_ellr: bochner_norm(&t_field, p)?,
        var_lr: bochner_norm(&vf, p)?,
        var_ellr: bochner_norm(&vt, p)?,
    })
}

/// Both identities for the random simple function drawn from `seed`.
pub fn exp_norm_transfer(
    seed: u64,
    m: usize,
    n: usize,
    p: f64,
    q: f64,
    r: f64,
    radii: &RadiusSet,
) -> Result<NormTransfer> {
    norm_transfer_for(&random_simple_function(seed, m, n)?, p, q, r, radii)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radii() -> RadiusSet {
        RadiusSet::new(vec![1.0, 0.5, 0.25, 0.125]).unwrap()
    }

    #[test]
    fn single_block_is_exact() {
        let sf = SimpleFunction::new(vec![0.7], vec![(0.0, 0.4)], vec![1.0]).unwrap();
        let (p, r) = (2.0, 3.0);
        let out = norm_transfer_for(&sf, p, 3.0, r, &radii()).unwrap();
        let want = 0.7f64.powf(1.0 / r) * 0.4f64.powf(1.0 / p);
        assert!((out.norm_lr - want).abs() < 1e-15);
        assert!((out.norm_ellr - want).abs() < 1e-15);
    }

    #[test]
    fn identities_hold_for_random_seeds() {
        for seed in 0..10 {
            let out = exp_norm_transfer(seed, 3, 4, 2.0, 3.0, 4.0, &radii()).unwrap();
            assert!(out.max_rel_discrepancy() <= 1e-10, "seed {seed}: {out:?}");
            assert!(out.var_lr > 0.0);
        }
    }

    #[test]
    fn homogeneity() {
        let sf = random_simple_function(5, 2, 3).unwrap();
        let a = norm_transfer_for(&sf, 2.0, 3.0, 2.5, &radii()).unwrap();
        let b = norm_transfer_for(&sf.scaled(2.0), 2.0, 3.0, 2.5, &radii()).unwrap();
        for (x, y) in [(a.norm_lr, b.norm_lr), (a.norm_ellr, b.norm_ellr), (a.var_lr, b.var_lr), (a.var_ellr, b.var_ellr)] {
            assert!((2.0 * x - y).abs() <= 1e-12 * y);
        }
    }

    #[test]
    fn columns_fill_gaps_with_zero() {
        let sf = SimpleFunction::new(vec![1.0], vec![(0.0, 1.0), (2.0, 3.0)], vec![1.0, -1.0]).unwrap();
        let c = &sf.columns(&[1.0]).unwrap()[0];
        assert_eq!(c.eval(0.5), 1.0);
        assert_eq!(c.eval(1.5), 0.0);
        assert_eq!(c.eval(2.5), -1.0);
        assert!(SimpleFunction::new(vec![1.0], vec![(0.0, 1.0)], vec![1.0, 2.0]).is_err());
        assert!(SimpleFunction::new(vec![1.0], vec![(0.0, 1.0), (0.5, 2.0)], vec![1.0, 2.0]).is_err());
    }
}
