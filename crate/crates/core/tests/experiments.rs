//! Cross-module checks on the experiment drivers with reduced grids.

use varlat::experiments::{
    exp_key_estimate, exp_maximal_contrast, lr_numerator, norm_transfer_for, random_simple_function,
    ExperimentConfig, GridSpec, SimpleFunction,
};
use varlat::variation::RadiusSet;
use varlat::witnesses::{admissible_k_min, LacunaryParams};

fn small_config() -> ExperimentConfig {
    let k_min = admissible_k_min(4.0, 40).unwrap();
    let params = LacunaryParams { a: 4.0, k_min, j0: 2, key_constant: 0.17388 };
    let mut cfg = ExperimentConfig::with_params(params).unwrap();
    cfg.grid = GridSpec { uniform_points: 1201, per_factor: 8, hilbert_depth: 20, hilbert_order: 8 };
    cfg
}

fn radii() -> RadiusSet {
    RadiusSet::new((0..6).map(|i| 2f64.powi(-i)).collect()).unwrap()
}

#[test]
fn lr_numerator_needs_the_log_refinement() {
    // Without points near the origin the oscillation of the witness is invisible.
    let cfg = small_config();
    let g = cfg.witness(10).unwrap();
    let fine = lr_numerator(&cfg, &g, 10, 8.0).unwrap();
    let mut coarse_cfg = cfg.clone();
    coarse_cfg.grid.per_factor = 0;
    let coarse = lr_numerator(&coarse_cfg, &g, 10, 8.0).unwrap();
    let mut finer_cfg = cfg.clone();
    finer_cfg.grid.per_factor = 16;
    let finer = lr_numerator(&finer_cfg, &g, 10, 8.0).unwrap();
    assert!(coarse <= fine, "coarse {coarse} fine {fine}");
    assert!((finer - fine).abs() <= 0.02 * fine, "fine {fine} finer {finer}");
}

#[test]
fn norm_transfer_is_absolutely_homogeneous() {
    let sf = random_simple_function(11, 3, 4).unwrap();
    let a = norm_transfer_for(&sf, 2.5, 3.0, 4.0, &radii()).unwrap();
    let b = norm_transfer_for(&sf.scaled(-3.0), 2.5, 3.0, 4.0, &radii()).unwrap();
    for (x, y) in [(a.norm_lr, b.norm_lr), (a.norm_ellr, b.norm_ellr), (a.var_lr, b.var_lr), (a.var_ellr, b.var_ellr)] {
        assert!((3.0 * x - y).abs() <= 1e-12 * y, "{x} {y}");
    }
}

#[test]
fn norm_transfer_single_block() {
    let sf = SimpleFunction::new(vec![0.3], vec![(-0.5, 0.25)], vec![-2.0]).unwrap();
    for r in [1.5, 2.0, 7.0] {
        let out = norm_transfer_for(&sf, 3.0, 2.5, r, &radii()).unwrap();
        let want = 2.0 * 0.3f64.powf(1.0 / r) * 0.75f64.powf(1.0 / 3.0);
        assert!((out.norm_lr - want).abs() <= 1e-14 * want);
        assert!(out.max_rel_discrepancy() <= 1e-10, "{out:?}");
    }
}

#[test]
fn maximal_ratio_is_bounded_by_the_witness_sup() {
    // |H_s G| ≤ 1 caps the numerator at 1; the denominator is 3^{1/p}.
    let cfg = small_config();
    let out = exp_maximal_contrast(&cfg, &[3, 6, 10]).unwrap();
    let expected = 3f64.powf(1.0 / cfg.p);
    for row in &out.maximal.rows {
        assert!(row.numerator <= 1.0 + 1e-12, "{row:?}");
        assert!(row.numerator > 0.5);
        assert!((row.denominator - expected).abs() <= 0.01 * expected);
    }
    for (m, v) in out.maximal.rows.iter().zip(&out.variation.rows) {
        assert_eq!(m.param, v.param);
        assert_eq!(m.denominator, v.denominator);
    }
}

#[test]
fn certified_constant_is_the_table_minimum() {
    let k_min = admissible_k_min(3.0, 31).unwrap();
    let out = exp_key_estimate(3.0, k_min, 2, 30).unwrap();
    let min = out.table[2..].iter().cloned().fold(f64::INFINITY, f64::min);
    assert_eq!(out.certified_c, min);
    assert!(out.period_two_drift < 1e-6);
}
