//! Cross-module invariants that need the finite-difference harness on top
//! of the cotangent model: closedness and K x K invariance of the canonical
//! form, and determinism of the residual suites under a fixed seed.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use plie_core::cotangent::{act, omega_can_at, CotangentPoint};
use plie_core::liealg::basis_su_n;
use plie_core::linalg::max_abs_re;
use plie_core::sample;
use plie_core::verify::{
    fd_exterior_derivative, fd_pullback_two_form, run_suite, Chart, FdConfig,
};

#[test]
fn omega_can_is_closed() {
    let basis = basis_su_n(2).unwrap();
    let cfg = FdConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..5 {
        let pt = sample::random_cotangent(&mut rng, &basis, 0.2, 4.0);
        let chart = Chart::new(pt, &basis);
        let field = |p: &CotangentPoint| omega_can_at(p, &basis);
        let form = |w: &DVector<f64>| chart.form_in_chart(&field, w);
        let d = fd_exterior_derivative(&form, &DVector::zeros(6), &cfg).unwrap();
        assert!(d.max_abs() < 1e-5, "d omega_can = {:.3e}", d.max_abs());
    }
}

#[test]
fn omega_can_invariant_under_both_actions() {
    let basis = basis_su_n(2).unwrap();
    let cfg = FdConfig::tight();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..5 {
        let pt = sample::random_cotangent(&mut rng, &basis, 0.2, 3.0);
        let k1 = sample::random_su(&mut rng, 2);
        let k2 = sample::random_su(&mut rng, 2);
        let image = act(&k1, &k2, &pt, &basis).unwrap();
        let src = Chart::new(pt, &basis);
        let dst = Chart::new(image, &basis);
        let field = |p: &CotangentPoint| omega_can_at(p, &basis);
        let form = |w: &DVector<f64>| dst.form_in_chart(&field, w);
        let map = |w: &DVector<f64>| {
            let moved = act(&k1, &k2, &src.point(w)?, &basis)?;
            dst.coords_of(&moved)
        };
        let pulled = fd_pullback_two_form(&form, &map, &DVector::zeros(6), &cfg).unwrap();
        let direct = src.form_in_chart(&field, &DVector::zeros(6)).unwrap();
        let defect = max_abs_re(&(&pulled - direct));
        assert!(defect < 1e-6, "pullback defect {defect:.3e}");
    }
}

#[test]
fn suites_are_deterministic_under_fixed_seed() {
    for name in ["es-closed", "inverse-relation", "beta"] {
        let a = run_suite(name, 99).unwrap();
        let b = run_suite(name, 99).unwrap();
        assert_eq!(a.len(), b.len());
        for (ra, rb) in a.iter().zip(b.iter()) {
            assert_eq!(ra.max_residual.to_bits(), rb.max_residual.to_bits(), "{name}");
            assert_eq!(ra.num_samples, rb.num_samples);
        }
    }
}
