use proptest::prelude::*;

use ortho_spin::free_energy::{
    beta_c, classify_phase, maximize_phi, phi_j_region, phi_j_region_gradient, phi_j_region_hessian, Phase,
};
use ortho_spin::spectra::{convert_parameters, Params};

/// For L₂ ≥ 0 the maximiser has y = 0 and x = (x, (1−x)/(θ−1), …).
#[test]
fn maximiser_shape_for_nonnegative_l2() {
    for theta in 2..=6usize {
        for &(l1, l2) in &[(0.5, 0.0), (1.5, 0.3), (3.0, 1.0), (-1.0, 2.5), (4.0, 4.0)] {
            let r = maximize_phi(theta, l1, l2).unwrap();
            for m in &r.maximizers {
                let x = &m.point.x;
                let rest = (1.0 - x[0]) / (theta as f64 - 1.0);
                assert!(m.point.y.iter().all(|&y| y.abs() < 1e-8), "θ={theta} ({l1},{l2}) y={:?}", m.point.y);
                assert!(x[1..].iter().all(|&v| (v - rest).abs() < 1e-8), "θ={theta} ({l1},{l2}) x={x:?}");
            }
        }
    }
}

#[test]
fn constant_shifts_do_not_move_the_maximiser() {
    for &(k1, k2) in &[(-2.0, 1.0), (5.0, 0.5), (1.0, 6.0), (6.0, 6.5), (-3.0, -5.0)] {
        let shifted = classify_phase(2, Params::Xxz { k1, k2 }).unwrap();
        let c = convert_parameters(2, Params::Xxz { k1, k2 }).unwrap();
        let plain = classify_phase(2, Params::Canonical { l1: c.l1, l2: c.l2 }).unwrap();
        assert_eq!(shifted.phase, plain.phase, "({k1},{k2})");
        assert_eq!(shifted.result.maximizers, plain.result.maximizers, "({k1},{k2})");
    }
    for &(j1, j2) in &[(1.0, -2.0), (-1.0, -4.0), (2.5, 1.0), (0.5, 2.0)] {
        let shifted = classify_phase(3, Params::Blbq { j1, j2 }).unwrap();
        let c = convert_parameters(3, Params::Blbq { j1, j2 }).unwrap();
        let plain = classify_phase(3, Params::Canonical { l1: c.l1, l2: c.l2 }).unwrap();
        assert_eq!(shifted.result.maximizers, plain.result.maximizers, "({j1},{j2})");
    }
}

#[test]
fn disordered_region_is_flat() {
    for i in 0..=26 {
        for j in 0..=26 {
            let (k1, k2) = (-4.0 + 0.3 * i as f64, -4.0 + 0.3 * j as f64);
            let c = convert_parameters(2, Params::Xxz { k1, k2 }).unwrap();
            let r = maximize_phi(2, c.l1, c.l2).unwrap();
            let best = r.best();
            assert!((best.point.x[0] - 0.5).abs() < 1e-8, "({k1},{k2}): {:?}", best.point);
            let expect = 2f64.ln() + (c.l1 + c.l2) / 4.0;
            assert!((r.value - expect).abs() < 1e-12, "({k1},{k2})");
        }
    }
}

/// Along L₂ = 1, Φ has a kink at L₁ + L₂ = β_c(θ) for θ ≥ 3 and is smooth
/// elsewhere.
#[test]
fn first_order_kink_at_beta_c() {
    let e = 1e-4;
    let slope_gap = |theta: usize, l1: f64| {
        let f = |x: f64| maximize_phi(theta, x, 1.0).unwrap().value;
        let f0 = f(l1);
        ((f(l1 + e) - f0) / e - (f0 - f(l1 - e)) / e).abs()
    };
    for theta in 3..=5 {
        let at = beta_c(theta).unwrap() - 1.0;
        assert!(slope_gap(theta, at) > 1e-2, "θ={theta}: {}", slope_gap(theta, at));
        assert!(slope_gap(theta, at - 0.5) < 1e-5);
        assert!(slope_gap(theta, at + 0.5) < 1e-3);
    }
}

#[test]
fn spin_one_labels() {
    let label = |j1: f64, j2: f64| classify_phase(3, Params::Blbq { j1, j2 }).unwrap();
    assert_eq!(label(-1.0, -0.5).phase, Phase::Disordered);
    let f = label(2.0, -1.0);
    assert_eq!(f.phase, Phase::Ferromagnetic);
    assert!(f.conjectured);
    assert!(label(0.0, -4.0).not_proven);
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn region_partials_match_finite_differences(
        j1 in -3.0f64..3.0,
        dj in 0.0f64..3.0,
        x1 in 0.34f64..0.6,
        x2 in 0.15f64..0.33,
    ) {
        let j2 = j1 - dj;
        prop_assume!(1.0 - x1 - x2 > 0.02);
        let e = 1e-6;
        let (g1, g2) = phi_j_region_gradient(j1, j2, x1, x2);
        let f1 = (phi_j_region(j1, j2, x1 + e, x2) - phi_j_region(j1, j2, x1 - e, x2)) / (2.0 * e);
        let f2 = (phi_j_region(j1, j2, x1, x2 + e) - phi_j_region(j1, j2, x1, x2 - e)) / (2.0 * e);
        prop_assert!((g1 - f1).abs() < 1e-6 && (g2 - f2).abs() < 1e-6);
        let h = phi_j_region_hessian(j1, j2, x1, x2);
        let (a1, a2) = phi_j_region_gradient(j1, j2, x1 + e, x2);
        let (b1, b2) = phi_j_region_gradient(j1, j2, x1 - e, x2);
        let (c1, c2) = phi_j_region_gradient(j1, j2, x1, x2 + e);
        let (d1, d2) = phi_j_region_gradient(j1, j2, x1, x2 - e);
        prop_assert!((h[0][0] - (a1 - b1) / (2.0 * e)).abs() < 1e-5);
        prop_assert!((h[0][1] - (a2 - b2) / (2.0 * e)).abs() < 1e-5);
        prop_assert!((h[0][1] - (c1 - d1) / (2.0 * e)).abs() < 1e-5);
        prop_assert!((h[1][1] - (c2 - d2) / (2.0 * e)).abs() < 1e-5);
    }
}
