//! Transformation laws of pseudovolume bounds and K3 certificates.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use k3vol::eisenman::{
    k3_test_map, product_check, pullback_check, upper_bound, vanishing_certificate, Euclidean, Evaluator,
    FiberChordalMetric, PVector, ReferenceMetric, TestMap,
};
use k3vol::sample;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn linear(a: Vec<Vec<Complex64>>) -> Evaluator {
    Arc::new(move |x: &[Complex64]| Ok(a.iter().map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum()).collect()))
}

#[test]
fn linear_pullbacks_scale_by_determinant() {
    let mut rng = sample::rng(40);
    let e = Euclidean::default();
    let id = TestMap::identity(2).unwrap();
    let zeta = PVector::coordinate(2, 2).unwrap();
    for _ in 0..20 {
        let a: Vec<Vec<Complex64>> = (0..2).map(|_| (0..2).map(|_| sample::complex(&mut rng) * 2.0).collect()).collect();
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det.norm() < 1e-2 {
            continue;
        }
        let r = pullback_check(&id, linear(a), &zeta, &e, &e).unwrap();
        assert!(r.residual <= 1e-6, "{r:?}");
        assert!((r.bound_target * det.norm() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn nonlinear_pullback_into_fubini_study() {
    let e = Euclidean::default();
    let eval: Evaluator = Arc::new(|u: &[Complex64]| Ok(vec![u[0] + u[1] * u[1], (u[1] * 0.5).exp() - 1.0]));
    let m = TestMap::new(2, eval, 2.0, "quadratic").unwrap();
    let zeta = PVector::coordinate(2, 2).unwrap();
    let h: Evaluator = Arc::new(|x: &[Complex64]| Ok(vec![x[0] * x[0] + x[0] + x[1], x[1].sin() + 0.3, x[0] - x[1]]));
    let r = pullback_check(&m, h, &zeta, &e, &FiberChordalMetric).unwrap();
    assert!(r.residual <= 1e-6, "{r:?}");
}

#[test]
fn projection_and_product_bounds_agree() {
    let e: Arc<dyn ReferenceMetric> = Arc::new(Euclidean::default());
    let f1: Evaluator = Arc::new(|u: &[Complex64]| Ok(vec![u[0] * 2.0 + u[0] * u[0]]));
    let f2: Evaluator = Arc::new(|u: &[Complex64]| Ok(vec![u[0] * c(0.0, 3.0)]));
    let m1 = TestMap::new(1, f1.clone(), 1.0, "f1").unwrap();
    let m2 = TestMap::new(1, f2.clone(), 1.0, "f2").unwrap();
    let report = product_check(&m1, &m2, e.clone(), e.clone()).unwrap();
    assert!((report.bound_first - 0.5).abs() < 1e-9);
    assert!((report.bound_second - 1.0 / 3.0).abs() < 1e-9);
    assert!(report.residual < 1e-8, "{report:?}");

    // the diagonal disc u ↦ (f₁(u), f₂(u)) pushed down by pr₁ gives f₁'s bound
    let diag: Evaluator = Arc::new(move |u: &[Complex64]| Ok(vec![f1(u)?[0], f2(u)?[0]]));
    let m = TestMap::new(1, diag, 1.0, "diagonal").unwrap();
    let zeta = PVector { n: 2, p: 1, coords: vec![c(2.0, 0.0), c(0.0, 3.0)] };
    let pr1: Evaluator = Arc::new(|x: &[Complex64]| Ok(vec![x[0]]));
    let r = pullback_check(&m, pr1, &zeta, e.as_ref(), e.as_ref()).unwrap();
    assert!(r.residual < 1e-8, "{r:?}");
    assert!((r.bound_target - report.bound_first).abs() < 1e-8);
    assert!((r.bound_source - 1.0 / 13f64.sqrt()).abs() < 1e-9);
}

#[test]
fn certificates_cover_a_grid_of_base_points() {
    let mut rng = sample::rng(77);
    let x = sample::fibration(&mut rng).unwrap();
    let t0 = sample::regular_point(&mut rng, &x, 0.05).unwrap();
    let lattice = x.fiber_lattice(&t0).unwrap();
    let schedule = [1.0, 10.0, 100.0];
    let mut certified = 0;
    for i in 0..6 {
        for j in 0..6 {
            let z0 = lattice.omega1() * ((i as f64 + 0.5) / 6.0) + lattice.omega2() * ((j as f64 + 0.5) / 6.0);
            let m = k3_test_map(&x, z0, &t0, 1.0).unwrap();
            let norm = m.push_forward().unwrap().norm(&FiberChordalMetric, m.basepoint_image());
            if norm <= 1e-12 {
                continue;
            }
            let cert = vanishing_certificate(&x, z0, &t0, None, &schedule).unwrap();
            assert!(cert.strictly_decreasing());
            assert!((cert.slope + 1.0).abs() < 1e-6);
            certified += 1;
        }
    }
    assert_eq!(certified, 36);
}

#[test]
fn explicit_direction_matches_default() {
    let mut rng = sample::rng(3);
    let x = sample::fibration(&mut rng).unwrap();
    let t0 = sample::regular_point(&mut rng, &x, 0.05).unwrap();
    let z0 = c(rng.gen_range(0.1..0.4), rng.gen_range(0.1..0.4));
    let a = vanishing_certificate(&x, z0, &t0, None, &[2.0, 4.0]).unwrap();
    let b = vanishing_certificate(&x, z0, &t0, Some(&a.zeta.scale(c(0.0, 5.0))), &[2.0, 4.0]).unwrap();
    for (ea, eb) in a.schedule.iter().zip(&b.schedule) {
        assert!((ea.bound / eb.bound - 1.0).abs() < 1e-12);
    }
    // a direction transverse to the image is rejected
    let other = PVector { n: 3, p: 2, coords: vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)] };
    let m = k3_test_map(&x, z0, &t0, 2.0).unwrap();
    if (a.zeta.coords[1].norm() + a.zeta.coords[2].norm()) > 1e-3 {
        assert!(upper_bound(&m, &other, &FiberChordalMetric).is_err());
    }
}
