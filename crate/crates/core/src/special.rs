//! Special functions and quadrature rules.
//!
//! `erf`/`erfc` are the fdlibm rational approximations (via `libm`), accurate
//! to about one ulp and saturating correctly for large arguments.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Distribution function of the unit-time heat kernel `(4π)^{-1/2} e^{-x²/4}`,
/// i.e. of a centred Gaussian with variance 2: `Φ(w) = (1 + erf(w/2)) / 2`.
pub fn heat_cdf(w: f64) -> f64 {
    if w < 0.0 {
        0.5 * erfc(-0.5 * w)
    } else {
        1.0 - 0.5 * erfc(0.5 * w)
    }
}

/// `Φ(hi) - Φ(lo)` without cancellation in the tails.
pub fn heat_mass(lo: f64, hi: f64) -> f64 {
    if lo >= 0.0 {
        0.5 * (erfc(0.5 * lo) - erfc(0.5 * hi))
    } else if hi <= 0.0 {
        0.5 * (erfc(-0.5 * hi) - erfc(-0.5 * lo))
    } else {
        0.5 * (erf(0.5 * hi) - erf(0.5 * lo))
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the three-term Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared, memoized rule of order `n`.
    pub fn cached(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(rule) = cache.lock().unwrap().get(&n) {
            return Arc::clone(rule);
        }
        let rule = Arc::new(GaussLegendre::new(n));
        cache.lock().unwrap().insert(n, Arc::clone(&rule));
        rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[lo, hi]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Nodes and weights mapped onto `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, w * half))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from 30-digit arithmetic.
    const ERF_TABLE: &[(f64, f64)] = &[
        (0.125, 0.140316204801333817393029446521),
        (0.25, 0.276326390168236932985068267765),
        (0.5, 0.520499877813046537682746653892),
        (1.0, 0.842700792949714869341220635083),
        (1.5, 0.966105146475310727066976261646),
        (2.0, 0.995322265018952734162069256367),
        (3.0, 0.999977909503001414558627223870),
        (4.5, 0.999999999803383955845711252372),
    ];

    #[test]
    fn erf_matches_reference_table() {
        for &(x, want) in ERF_TABLE {
            let got = erf(x);
            assert!(((got - want) / want).abs() <= 1e-14, "erf({x}) = {got}, want {want}");
            assert!((erf(-x) + want).abs() <= 1e-14 * want);
        }
    }

    #[test]
    fn erfc_tail_and_saturation() {
        // erfc(6) = 2.15197367124989131...e-17
        let want = 2.151_973_671_249_891_3e-17;
        assert!(((erfc(6.0) - want) / want).abs() < 1e-13);
        assert_eq!(erf(40.0), 1.0);
        assert_eq!(erf(-40.0), -1.0);
        assert_eq!(erfc(40.0), 0.0);
    }

    #[test]
    fn heat_mass_of_symmetric_window_is_erf() {
        // Φ(2) - Φ(-2) = erf(1)
        assert!((heat_mass(-2.0, 2.0) - erf(1.0)).abs() < 1e-15);
        assert!((heat_cdf(0.0) - 0.5).abs() < 1e-16);
        let tail = heat_mass(30.0, 31.0);
        assert!(tail > 0.0 && tail < 1e-90);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [1usize, 2, 5, 16, 64] {
            let rule = GaussLegendre::new(n);
            let deg = 2 * n - 1;
            let got = rule.integrate(0.0, 1.0, |x| x.powi(deg as i32));
            assert!((got - 1.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n = {n}");
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn large_rule_integrates_gaussian() {
        let rule = GaussLegendre::cached(2048);
        let got = rule.integrate(0.0, 20.0, |t| (-t * t / 4.0).exp());
        assert!((got - PI.sqrt()).abs() < 1e-12);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
    }
}
