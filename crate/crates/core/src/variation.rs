//! The q-variation seminorm over decreasing radius sequences, the maximal
//! operator, and their pointwise profiles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corefn::{InnerNorm, PiecewiseConstantFn, SampleGrid, ScalarProfile, VectorField};
use crate::error::{Error, Result};
use crate::operators::{family_values_into, OperatorFamily};

/// Finite set of radii (or times), stored strictly decreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusSet {
    radii: Vec<f64>,
}

impl RadiusSet {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::EmptyInput);
        }
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) || radii.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidRadiusSet);
        }
        Ok(Self { radii })
    }

    /// Sorts decreasingly and drops duplicates before validating.
    pub fn from_unsorted(mut radii: Vec<f64>) -> Result<Self> {
        radii.sort_by(|a, b| b.total_cmp(a));
        radii.dedup();
        Self::new(radii)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// Value of the q-variation together with an optimal subsequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationCertificate {
    pub value: f64,
    /// Increasing indices into the value sequence; empty iff `value == 0`.
    pub subsequence: Vec<usize>,
}

impl VariationCertificate {
    fn zero() -> Self {
        Self { value: 0.0, subsequence: Vec::new() }
    }

    /// `(Σ |v_{i_j} - v_{i_{j+1}}|^q)^{1/q}` along the stored subsequence.
    pub fn recompute(&self, values: &[f64], q: f64) -> f64 {
        let s: f64 = self
            .subsequence
            .windows(2)
            .map(|w| pair_power(values[w[0]], values[w[1]], q))
            .sum();
        s.powf(1.0 / q)
    }
}

/// Differences below this contribute nothing.
const TINY_GAP: f64 = 1e-300;

#[inline]
fn pair_power(a: f64, b: f64, q: f64) -> f64 {
    let d = (a - b).abs();
    if d < TINY_GAP {
        0.0
    } else if q == 1.0 {
        d
    } else if q == 2.0 {
        d * d
    } else if q == 3.0 {
        d * d * d
    } else {
        d.powf(q)
    }
}

fn check_q(q: f64) -> Result<()> {
    if q.is_finite() && q >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidQ(q))
    }
}

/// Exact supremum over all subsequences, by dynamic programming:
/// `best[j] = max_{i<j} best[i] + |v_j - v_i|^q`. `O(n²)` time, `O(n)` space.
pub fn qvariation(values: &[f64], q: f64) -> Result<VariationCertificate> {
    check_q(q)?;
    if let Some(&v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue(v));
    }
    Ok(qvariation_unchecked(values, q))
}

fn qvariation_unchecked(values: &[f64], q: f64) -> VariationCertificate {
    let n = values.len();
    if n < 2 {
        return VariationCertificate::zero();
    }
    let mut best = vec![0.0f64; n];
    let mut parent = vec![usize::MAX; n];
    let mut top = 0usize;
    for j in 1..n {
        let vj = values[j];
        let mut bj = 0.0;
        let mut pj = usize::MAX;
        for i in 0..j {
            let cand = best[i] + pair_power(vj, values[i], q);
            if cand > bj {
                bj = cand;
                pj = i;
            }
        }
        best[j] = bj;
        parent[j] = pj;
        if bj > best[top] {
            top = j;
        }
    }
    if best[top] == 0.0 {
        return VariationCertificate::zero();
    }
    let mut chain = vec![top];
    let mut k = top;
    while parent[k] != usize::MAX {
        k = parent[k];
        chain.push(k);
    }
    chain.reverse();
    VariationCertificate { value: best[top].powf(1.0 / q), subsequence: chain }
}

/// Exhaustive search over all `2^n` subsets; the independent oracle for [`qvariation`].
pub fn qvariation_bruteforce(values: &[f64], q: f64) -> Result<VariationCertificate> {
    check_q(q)?;
    let n = values.len();
    if n > 20 {
        return Err(Error::TooLong(n));
    }
    if n < 2 {
        return Ok(VariationCertificate::zero());
    }
    let mut best_sum = 0.0;
    let mut best_mask = 0u32;
    for mask in 1u32..(1u32 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let mut prev: Option<f64> = None;
        let mut s = 0.0;
        for (i, &v) in values.iter().enumerate() {
            if mask & (1 << i) != 0 {
                if let Some(p) = prev {
                    s += pair_power(v, p, q);
                }
                prev = Some(v);
            }
        }
        if s > best_sum {
            best_sum = s;
            best_mask = mask;
        }
    }
    if best_sum == 0.0 {
        return Ok(VariationCertificate::zero());
    }
    let subsequence = (0..n).filter(|i| best_mask & (1 << i) != 0).collect();
    Ok(VariationCertificate { value: best_sum.powf(1.0 / q), subsequence })
}

/// Keeps the first and last values and the turning points of the sequence;
/// interior points of monotone runs and repeated values are dropped.
///
/// For `q ≥ 1`, `|a - c|^q ≥ |a - b|^q + |b - c|^q` whenever `b` lies between
/// `a` and `c`, so the q-variation is unchanged. Returns the pruned values and
/// the original index of each retained value.
pub fn prune_to_local_extrema(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut kept: Vec<f64> = Vec::with_capacity(values.len());
    let mut index: Vec<usize> = Vec::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        match kept.len() {
            0 => {}
            _ if *kept.last().unwrap() == v => continue,
            1 => {}
            n => {
                let (a, b) = (kept[n - 2], kept[n - 1]);
                if (b - a) * (v - b) > 0.0 {
                    kept[n - 1] = v;
                    index[n - 1] = i;
                    continue;
                }
            }
        }
        kept.push(v);
        index.push(i);
    }
    (kept, index)
}

/// `max_i |v_i|`.
pub fn maximal(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(values.iter().fold(0.0, |m, v| m.max(v.abs())))
}

/// Pointwise reduction applied to the family values at each grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointwiseOperator {
    Variation { q: f64 },
    Maximal,
}

impl PointwiseOperator {
    fn reduce(&self, values: &[f64]) -> f64 {
        match *self {
            PointwiseOperator::Variation { q } => {
                let (pruned, _) = prune_to_local_extrema(values);
                qvariation_unchecked(&pruned, q).value
            }
            PointwiseOperator::Maximal => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }
}

/// `x ↦ T(family(f)(x))` on every grid point, where `T` is the q-variation or the maximal function.
pub fn operator_profile(
    f: &PiecewiseConstantFn,
    family: OperatorFamily,
    radii: &RadiusSet,
    grid: &SampleGrid,
    op: PointwiseOperator,
) -> Result<ScalarProfile> {
    if let PointwiseOperator::Variation { q } = op {
        check_q(q)?;
    }
    let values: Vec<f64> = grid
        .points()
        .par_iter()
        .map_init(Vec::new, |buf, &x| {
            family_values_into(f, family, radii, x, buf);
            op.reduce(buf)
        })
        .collect();
    ScalarProfile::new(grid.clone(), values)
}

/// Pointwise q-variation `x ↦ V_{q,J} f(x)` over the grid.
pub fn variation_profile(
    f: &PiecewiseConstantFn,
    family: OperatorFamily,
    radii: &RadiusSet,
    grid: &SampleGrid,
    q: f64,
) -> Result<ScalarProfile> {
    operator_profile(f, family, radii, grid, PointwiseOperator::Variation { q })
}

/// Applies the q-variation coordinatewise to a lattice-valued function whose
/// inner coordinates are the step functions `columns`.
pub fn vector_variation_field(
    columns: &[PiecewiseConstantFn],
    x_grid: &SampleGrid,
    inner_norm: InnerNorm,
    inner_weights: Vec<f64>,
    family: OperatorFamily,
    radii: &RadiusSet,
    q: f64,
) -> Result<VectorField> {
    if columns.is_empty() {
        return Err(Error::EmptyInput);
    }
    let profiles = columns
        .iter()
        .map(|c| variation_profile(c, family, radii, x_grid, q))
        .collect::<Result<Vec<_>>>()?;
    let m = columns.len();
    let mut values = vec![0.0; x_grid.len() * m];
    for (k, p) in profiles.iter().enumerate() {
        for (i, v) in p.values().iter().enumerate() {
            values[i * m + k] = *v;
        }
    }
    VectorField::new(x_grid.clone(), m, values, inner_norm, inner_weights)
}

/// Samples every column on the grid as a lattice-valued field.
pub fn sample_field(
    columns: &[PiecewiseConstantFn],
    x_grid: &SampleGrid,
    inner_norm: InnerNorm,
    inner_weights: Vec<f64>,
) -> Result<VectorField> {
    let m = columns.len();
    let mut values = vec![0.0; x_grid.len() * m];
    for (i, &x) in x_grid.points().iter().enumerate() {
        for (k, c) in columns.iter().enumerate() {
            values[i * m + k] = c.eval(x);
        }
    }
    VectorField::new(x_grid.clone(), m, values, inner_norm, inner_weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const EXAMPLE: [f64; 4] = [0.0, 1.0, 0.9, 2.0];

    #[test]
    fn spec_examples() {
        assert_eq!(qvariation(&[1.5; 6], 2.0).unwrap(), VariationCertificate::zero());
        let c = qvariation(&EXAMPLE, 2.0).unwrap();
        assert!((c.value - 2.0).abs() < 1e-15);
        assert_eq!(c.subsequence, vec![0, 3]);
        let c = qvariation(&EXAMPLE, 1.0).unwrap();
        assert!((c.value - 2.2).abs() < 1e-15);
        assert_eq!(c.subsequence, vec![0, 1, 2, 3]);
        let c = qvariation(&[0.0, 1.0, 2.0, 3.0], 2.0).unwrap();
        assert!((c.value - 3.0).abs() < 1e-15);
        assert_eq!(c.subsequence, vec![0, 3]);
        assert_eq!(qvariation(&[1.0], 3.0).unwrap().value, 0.0);
        assert_eq!(qvariation(&EXAMPLE, 0.5), Err(Error::InvalidQ(0.5)));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(qvariation_bruteforce(&[4.0], 2.0).unwrap().value, 0.0);
        for q in [1.0, 2.5, 7.0] {
            assert!((qvariation_bruteforce(&[0.0, 1.0], q).unwrap().value - 1.0).abs() < 1e-15);
        }
        assert_eq!(qvariation_bruteforce(&[0.0; 21], 2.0), Err(Error::TooLong(21)));
        let b = qvariation_bruteforce(&EXAMPLE, 2.0).unwrap();
        assert_eq!(b.subsequence, vec![0, 3]);
    }

    #[test]
    fn pruning_examples() {
        assert_eq!(prune_to_local_extrema(&[0.0, 1.0, 2.0, 3.0]), (vec![0.0, 3.0], vec![0, 3]));
        assert_eq!(
            prune_to_local_extrema(&[0.0, 2.0, 1.0, 3.0]),
            (vec![0.0, 2.0, 1.0, 3.0], vec![0, 1, 2, 3])
        );
        assert_eq!(prune_to_local_extrema(&[]), (vec![], vec![]));
        assert_eq!(prune_to_local_extrema(&[1.0, 1.0, 1.0]), (vec![1.0], vec![0]));
    }

    #[test]
    fn maximal_examples() {
        assert_eq!(maximal(&[-3.0, 2.0]).unwrap(), 3.0);
        assert_eq!(maximal(&[0.0]).unwrap(), 0.0);
        assert_eq!(maximal(&[0.5, 1.0]).unwrap(), 1.0);
        assert_eq!(maximal(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn dp_matches_brute_force_on_random_sequences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..1000 {
            let n = rng.gen_range(0..=12);
            let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for q in [1.5, 2.0, 3.0, 5.0] {
                let dp = qvariation(&values, q).unwrap();
                let bf = qvariation_bruteforce(&values, q).unwrap();
                assert!((dp.value - bf.value).abs() <= 1e-12 * bf.value.max(1e-300), "trial {trial}");
                assert!((dp.recompute(&values, q) - dp.value).abs() <= 1e-12 * dp.value);
            }
        }
    }

    #[test]
    fn radius_set_validation() {
        assert_eq!(RadiusSet::new(vec![]), Err(Error::EmptyInput));
        assert_eq!(RadiusSet::new(vec![1.0, 2.0]), Err(Error::InvalidRadiusSet));
        assert_eq!(RadiusSet::new(vec![1.0, 0.0]), Err(Error::InvalidRadiusSet));
        assert_eq!(RadiusSet::from_unsorted(vec![0.5, 2.0, 0.5]).unwrap().radii(), &[2.0, 0.5]);
    }

    #[test]
    fn profiles_degenerate_cases() {
        let grid = SampleGrid::uniform(-1.0, 2.0, 31).unwrap();
        let j = RadiusSet::new(vec![0.5, 0.1, 0.01]).unwrap();
        let z = variation_profile(&PiecewiseConstantFn::zero(), OperatorFamily::Heat, &j, &grid, 3.0).unwrap();
        assert!(z.values().iter().all(|v| *v == 0.0));
        let f = PiecewiseConstantFn::indicator(0.0, 1.0, 1.0).unwrap();
        let one = RadiusSet::new(vec![0.3]).unwrap();
        let p = variation_profile(&f, OperatorFamily::Averages, &one, &grid, 3.0).unwrap();
        assert!(p.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn single_column_field_reduces_to_profile() {
        let grid = SampleGrid::uniform(-1.0, 2.0, 41).unwrap();
        let j = RadiusSet::new(vec![1.0, 0.5, 0.25, 0.125]).unwrap();
        let f = PiecewiseConstantFn::new(vec![0.0, 0.3, 1.0], vec![1.0, -1.0]).unwrap();
        let prof = variation_profile(&f, OperatorFamily::Averages, &j, &grid, 3.0).unwrap();
        let field = vector_variation_field(
            &[f.clone()],
            &grid,
            InnerNorm::SupNorm,
            vec![1.0],
            OperatorFamily::Averages,
            &j,
            3.0,
        )
        .unwrap();
        assert_eq!(field.values(), prof.values());
        let dup = vector_variation_field(
            &[f.clone(), f],
            &grid,
            InnerNorm::sequence(2.0).unwrap(),
            vec![1.0, 1.0],
            OperatorFamily::Averages,
            &j,
            3.0,
        )
        .unwrap();
        for i in 0..grid.len() {
            assert_eq!(dup.get(i, 0), dup.get(i, 1));
        }
    }

    fn seq(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-10.0f64..10.0, 0..max_len)
    }

    proptest! {
        #[test]
        fn pruning_preserves_variation(values in seq(200), qi in 0usize..3) {
            let q = [1.0, 2.0, 3.0][qi];
            let (pruned, index) = prune_to_local_extrema(&values);
            for (p, i) in pruned.iter().zip(&index) {
                prop_assert_eq!(*p, values[*i]);
            }
            let a = qvariation(&values, q).unwrap().value;
            let b = qvariation(&pruned, q).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
        }

        #[test]
        fn monotone_in_radius_subset(values in seq(40), keep in prop::collection::vec(any::<bool>(), 40), q in 1.0f64..6.0) {
            let sub: Vec<f64> = values.iter().zip(&keep).filter(|(_, k)| **k).map(|(v, _)| *v).collect();
            let full = qvariation(&values, q).unwrap().value;
            let part = qvariation(&sub, q).unwrap().value;
            prop_assert!(part <= full * (1.0 + 1e-12));
        }

        #[test]
        fn monotone_in_q(values in seq(40), q1 in 1.0f64..5.0, dq in 0.0f64..5.0) {
            let a = qvariation(&values, q1).unwrap().value;
            let b = qvariation(&values, q1 + dq).unwrap().value;
            prop_assert!(b <= a * (1.0 + 1e-12) + 1e-300);
        }

        #[test]
        fn dominates_every_pair(values in seq(40), q in 1.0f64..8.0) {
            let v = qvariation(&values, q).unwrap();
            let mut osc: f64 = 0.0;
            for a in &values {
                for b in &values {
                    osc = osc.max((a - b).abs());
                }
            }
            prop_assert!(v.value >= osc * (1.0 - 1e-12));
            prop_assert!((v.recompute(&values, q) - v.value).abs() <= 1e-12 * v.value.max(1e-300));
            prop_assert!(v.subsequence.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
