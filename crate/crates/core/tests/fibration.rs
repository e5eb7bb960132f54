//! Fibrations with known singular fibres.

use num_complex::Complex64;

use k3vol::binaryforms::{BinaryForm, Chart, P1Point};
use k3vol::elliptic::j_invariant;
use k3vol::fibration::{KodairaLabel, WeierstrassFibration};
use k3vol::sample;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Product of linear forms `t − rᵢ s`.
fn from_roots(roots: &[Complex64]) -> BinaryForm {
    roots.iter().fold(BinaryForm::from_real(0, &[1.0]).unwrap(), |acc, &r| {
        acc.multiply(&BinaryForm::new(1, vec![-r, c(1.0, 0.0)]).unwrap())
    })
}

fn label_at(x: &WeierstrassFibration, p: &P1Point) -> KodairaLabel {
    x.kodaira_type(p).unwrap().label
}

#[test]
fn isotrivial_family_has_four_i0_star_fibres() {
    // g₂ = 3q², g₃ = 2q³: Δ = (27 − 108) q⁶, j ≡ 1728·27/(27 − 108)
    let q = from_roots(&[c(2.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]);
    let x = WeierstrassFibration::validate(q.power(2).scale(c(3.0, 0.0)), q.power(3).scale(c(2.0, 0.0))).unwrap();
    let fibres = x.singular_fibers().unwrap();
    assert_eq!(fibres.len(), 4, "{fibres:?}");
    for (p, f) in &fibres {
        assert_eq!(f.label, KodairaLabel::I0Star, "at {p:?}");
        assert_eq!((f.ord_g2, f.ord_g3, f.ord_delta), (Some(2), Some(3), 6));
    }
    let expected = 1728.0 * 27.0 / (27.0 - 108.0);
    let mut rng = sample::rng(8);
    for _ in 0..5 {
        let t = sample::regular_point(&mut rng, &x, 0.05).unwrap();
        assert!((x.j_at(&t).unwrap() - c(expected, 0.0)).norm() < 1e-8 * expected.abs());
    }
}

#[test]
fn multiplicative_fibres_at_one_and_infinity() {
    // g₂ = 3a², g₃ = a³ + b: Δ = −27 b (2a³ + b)
    let a = BinaryForm::from_real(4, &[1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    let b = from_roots(&[c(1.0, 0.0); 5]).multiply(&BinaryForm::monomial(7, 0, c(1.0, 0.0)));
    let g3 = a.power(3).add(&b).unwrap();
    let x = WeierstrassFibration::validate(a.power(2).scale(c(3.0, 0.0)), g3).unwrap();
    let total: usize = x.singular_locus().iter().map(|(_, m)| m).sum();
    assert_eq!(total, 24);
    assert_eq!(label_at(&x, &P1Point::affine(c(1.0, 0.0))), KodairaLabel::I(5));
    assert_eq!(label_at(&x, &P1Point::infinity()), KodairaLabel::I(7));
    let fibres = x.singular_fibers().unwrap();
    assert_eq!(fibres.len(), 14);
    let euler: u32 = fibres.iter().map(|(_, f)| f.label.euler_number()).sum();
    assert_eq!(euler, 24);
    assert_eq!(fibres.iter().filter(|(_, f)| f.label == KodairaLabel::I(1)).count(), 12);
}

#[test]
fn random_fibrations_are_generic() {
    let mut rng = sample::rng(31);
    for _ in 0..20 {
        let x = sample::fibration(&mut rng).unwrap();
        let fibres = x.singular_fibers().unwrap();
        assert_eq!(fibres.len(), 24);
        assert!(fibres.iter().all(|(_, f)| f.label == KodairaLabel::I(1)));
    }
}

#[test]
fn j_is_independent_of_the_chart() {
    let mut rng = sample::rng(2);
    let x = sample::fibration(&mut rng).unwrap();
    for k in 0..8 {
        let t = Complex64::from_polar(1.0, 0.3 + k as f64 * 0.7);
        if x.distance_to_singular(&P1Point::affine(t)) < 1e-3 {
            continue;
        }
        let js = j_invariant(&x.curve_in_chart(Chart::S, t)).unwrap();
        let jt = j_invariant(&x.curve_in_chart(Chart::T, t.inv())).unwrap();
        assert!((js - jt).norm() < 1e-9 * (1.0 + js.norm()), "{js} vs {jt}");
    }
}

#[test]
fn uniformization_lands_on_the_fibre() {
    let mut rng = sample::rng(12);
    let x = sample::fibration(&mut rng).unwrap();
    for _ in 0..10 {
        let t = sample::regular_point(&mut rng, &x, 0.02).unwrap();
        let lattice = x.fiber_lattice(&t).unwrap();
        let z = sample::lattice_point_free(&mut rng, &lattice, 0.05);
        let f = x.uniformize(z, &t, 1e-12).unwrap();
        let curve = x.fiber_curve(&t).unwrap();
        assert!(f.weierstrass_residual(&curve) < 1e-8);
        let g = x.uniformize(z + lattice.point(-1, 3), &t, 1e-12).unwrap();
        assert!(f.approx_eq(&g, 1e-8));
    }
}

#[test]
fn json_validates_degrees() {
    let x = sample::fibration(&mut sample::rng(1)).unwrap();
    let text = serde_json::to_string(&x).unwrap();
    let back: WeierstrassFibration = serde_json::from_str(&text).unwrap();
    assert_eq!(back.g2(), x.g2());
    let bad = r#"{"g2": {"degree": 7, "coeffs": [[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]},
                  "g3": {"degree": 12, "coeffs": [[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}}"#;
    assert!(serde_json::from_str::<WeierstrassFibration>(bad).is_err());
}
