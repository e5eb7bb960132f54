//! Roots and discriminants of binary forms.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use k3vol::binaryforms::{discriminant_form, BinaryForm, P1Point};
use k3vol::sample;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Eigenvalues of the companion matrix of `Σ aₖ tᵏ`.
fn companion_roots(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let lead = a[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = c(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -a[i] / lead;
    }
    m.schur().eigenvalues().expect("complex Schur form is triangular").iter().copied().collect()
}

#[test]
fn roots_agree_with_companion_eigenvalues() {
    let mut rng = sample::rng(5);
    for degree in [3, 8, 12, 24] {
        for _ in 0..5 {
            let f = sample::form(&mut rng, degree);
            let ours = f.roots().unwrap();
            assert_eq!(ours.iter().map(|(_, m)| m).sum::<usize>(), degree);
            let oracle = companion_roots(f.coeffs());
            for z in oracle {
                let p = P1Point::affine(z);
                let d = ours.iter().map(|(r, _)| r.chordal_distance(&p)).fold(f64::INFINITY, f64::min);
                assert!(d < 1e-8, "degree {degree}: oracle root {z} missed by {d}");
            }
        }
    }
}

#[test]
fn roots_at_zero_and_infinity() {
    // t²(t − 1)³ s⁰ as a degree-7 form: two more roots at ∞
    let f = BinaryForm::from_real(7, &[0.0, 0.0, -1.0, 3.0, -3.0, 1.0, 0.0, 0.0]).unwrap();
    let r = f.roots().unwrap();
    let mult = |p: &P1Point| r.iter().find(|(q, _)| q.chordal_distance(p) < 1e-10).map(|(_, m)| *m);
    assert_eq!(mult(&P1Point::affine(c(0.0, 0.0))), Some(2));
    assert_eq!(mult(&P1Point::affine(c(1.0, 0.0))), Some(3));
    assert_eq!(mult(&P1Point::infinity()), Some(2));
    assert_eq!(f.order_at(&P1Point::infinity(), 1e-10), Some(2));
}

#[test]
fn high_multiplicity_is_recovered_and_located() {
    let r0 = c(0.3, -0.2);
    let lin = |r: Complex64| BinaryForm::new(1, vec![-r, c(1.0, 0.0)]).unwrap();
    let f = lin(r0).power(8).multiply(&lin(c(-1.0, 0.5)));
    let roots = f.roots().unwrap();
    assert_eq!(roots.len(), 2, "{roots:?}");
    let (p, m) = roots.iter().find(|(_, m)| *m == 8).expect("8-fold root");
    assert_eq!(*m, 8);
    assert!(p.chordal_distance(&P1Point::affine(r0)) < 1e-8);
}

#[test]
fn discriminant_of_generic_data_has_24_simple_roots() {
    let mut rng = sample::rng(17);
    for _ in 0..10 {
        let (g2, g3) = (sample::form(&mut rng, 8), sample::form(&mut rng, 12));
        let delta = discriminant_form(&g2, &g3).unwrap();
        assert_eq!(delta.degree(), 24);
        let roots = delta.roots().unwrap();
        assert_eq!(roots.len(), 24);
        for (p, _) in &roots {
            let (s, t) = p.canonical();
            let v = delta.eval_pair(s, t).norm();
            assert!(v < 1e-7 * delta.norm(), "{v} at {p:?}, norm {}", delta.norm());
        }
    }
}

fn form_strategy(degree: usize) -> impl Strategy<Value = BinaryForm> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), degree + 1)
        .prop_map(move |v| BinaryForm::new(degree, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
        .prop_filter("nonzero", |f| f.norm() > 1e-3)
}

proptest! {
    #[test]
    fn homogeneity(f in form_strategy(6), s in (-1.0..1.0f64, -1.0..1.0f64), t in (-1.0..1.0f64, -1.0..1.0f64), l in (-2.0..2.0f64, -2.0..2.0f64)) {
        let (s, t, l) = (c(s.0, s.1), c(t.0, t.1), c(l.0, l.1));
        let lhs = f.eval_pair(l * s, l * t);
        let rhs = l.powi(6) * f.eval_pair(s, t);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()) * (1.0 + l.norm()).powi(6));
    }

    #[test]
    fn product_degree_and_roots(f in form_strategy(3), g in form_strategy(4)) {
        let h = f.multiply(&g);
        prop_assert_eq!(h.degree(), 7);
        let total: usize = h.roots().unwrap().iter().map(|(_, m)| m).sum();
        prop_assert_eq!(total, 7);
    }

    #[test]
    fn discriminant_scales_by_lambda_12(lre in -2.0..2.0f64, lim in -2.0..2.0f64, seed in 0u64..1000) {
        let l = c(lre, lim);
        prop_assume!(l.norm() > 0.1);
        let mut rng = sample::rng(seed);
        let (g2, g3) = (sample::form(&mut rng, 8), sample::form(&mut rng, 12));
        let d = discriminant_form(&g2, &g3).unwrap();
        let dl = discriminant_form(&g2.scale(l.powi(4)), &g3.scale(l.powi(6))).unwrap();
        let expect = d.scale(l.powi(12));
        prop_assert!(dl.subtract(&expect).unwrap().norm() <= 1e-12 * expect.norm());
    }
}
