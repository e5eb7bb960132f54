use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PeriodLattice;
use crate::error::{Error, Result};

pub const DEFAULT_EISENSTEIN_TOL: f64 = 1e-8;

const MAX_ROWS: usize = 10_000;

/// A value together with a bound on its truncation error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex64,
    pub error_bound: f64,
}

/// `g₂(Λ) = 60 Σ' ω⁻⁴`.
pub fn eisenstein_g2(lattice: &PeriodLattice, tol: f64) -> Result<Estimate> {
    weighted_eisenstein(lattice, 4, tol)
}

/// `g₃(Λ) = 140 Σ' ω⁻⁶`.
pub fn eisenstein_g3(lattice: &PeriodLattice, tol: f64) -> Result<Estimate> {
    weighted_eisenstein(lattice, 6, tol)
}

fn sigma(k: u32, n: usize) -> f64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| (d as f64).powi(k as i32)).sum()
}

// Summing the row n·ω₂ + ℤω₁ in closed form (Lipschitz) turns Σ' ω⁻ᵏ into
//   ω₁⁻ᵏ [ 2ζ(k) + 2 (2πi)ᵏ/(k−1)! Σ_{n≥1} σ_{k−1}(n) qⁿ ],   q = e^{2πiτ},
// which for k = 4, 6 and the weights 60, 140 reads
//   g₂ = (4π⁴/3) ω₁⁻⁴ (1 + 240 Σ σ₃(n) qⁿ),  g₃ = (8π⁶/27) ω₁⁻⁶ (1 − 504 Σ σ₅(n) qⁿ).
fn weighted_eisenstein(lattice: &PeriodLattice, k: u32, tol: f64) -> Result<Estimate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let (prefactor, weight): (f64, f64) = match k {
        4 => (4.0 * PI.powi(4) / 3.0, 240.0),
        6 => (8.0 * PI.powi(6) / 27.0, -504.0),
        _ => unreachable!("only weights 4 and 6 are used"),
    };
    let tau = lattice.tau();
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let qa = q.norm();
    let scale = prefactor / lattice.omega1().norm().powi(k as i32);
    let kk = (k - 1) as i32;

    // σ_{k−1}(n) ≤ ζ(k−1) n^{k−1} ≤ 1.25 n^{k−1}
    let tail_after = |n: usize| -> Option<f64> {
        let next = (n + 1) as f64;
        let ratio = ((next + 1.0) / next).powi(kk) * qa;
        if ratio >= 1.0 {
            return None;
        }
        Some(scale * weight.abs() * 1.25 * next.powi(kk) * qa.powi(n as i32 + 1) / (1.0 - ratio))
    };

    let mut sum = Complex64::new(0.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    let mut rows = 0;
    let mut tail = f64::INFINITY;
    for n in 1..=MAX_ROWS {
        qn *= q;
        sum += sigma(k - 1, n) * qn;
        rows = n;
        if let Some(t) = tail_after(n) {
            if t <= tol {
                tail = t;
                break;
            }
        }
    }
    if tail > tol {
        return Err(Error::ToleranceUnachievable { tol });
    }
    let omega_pow = lattice.omega1().powi(k as i32);
    let value = prefactor * (1.0 + weight * sum) / omega_pow;
    let rounding = 8.0 * f64::EPSILON * (rows as f64 + 1.0) * scale * (1.0 + weight.abs() * sum.norm());
    Ok(Estimate { value, error_bound: tail + rounding })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{period_lattice, CurveCoefficients};

    #[test]
    fn square_lattice_has_vanishing_g3() {
        let lat = PeriodLattice::new(Complex64::new(0.8, 0.0), Complex64::new(0.0, 0.8)).unwrap();
        assert!(eisenstein_g3(&lat, 1e-12).unwrap().value.norm() <= 1e-10);
        let lat = lat.scaled(Complex64::new(1.7, -2.2)).unwrap();
        assert!(eisenstein_g3(&lat, 1e-12).unwrap().value.norm() <= 1e-10);
    }

    #[test]
    fn hexagonal_lattice_has_vanishing_g2() {
        let rho = Complex64::from_polar(1.0, PI / 3.0);
        let lat = PeriodLattice::new(Complex64::new(1.3, 0.2), Complex64::new(1.3, 0.2) * rho).unwrap();
        assert!(eisenstein_g2(&lat, 1e-12).unwrap().value.norm() <= 1e-10);
    }

    #[test]
    fn round_trip_square() {
        let lat = period_lattice(&CurveCoefficients::real(4.0, 0.0)).unwrap();
        let g2 = eisenstein_g2(&lat, 1e-12).unwrap();
        let g3 = eisenstein_g3(&lat, 1e-12).unwrap();
        assert!((g2.value - 4.0).norm() < 1e-12, "{:?}", g2);
        assert!(g3.value.norm() < 1e-12);
        assert!(g2.error_bound <= 1e-12);
    }

    #[test]
    fn homogeneity() {
        let lat = PeriodLattice::new(Complex64::new(1.0, 0.1), Complex64::new(0.3, 1.4)).unwrap();
        let lambda = Complex64::new(0.6, 0.9);
        let scaled = lat.scaled(lambda).unwrap();
        let g2 = eisenstein_g2(&lat, 1e-13).unwrap().value;
        let g3 = eisenstein_g3(&lat, 1e-13).unwrap().value;
        let g2s = eisenstein_g2(&scaled, 1e-13).unwrap().value;
        let g3s = eisenstein_g3(&scaled, 1e-13).unwrap().value;
        assert!((g2s - g2 / lambda.powi(4)).norm() < 1e-11 * g2s.norm().max(1.0));
        assert!((g3s - g3 / lambda.powi(6)).norm() < 1e-11 * g3s.norm().max(1.0));
    }

    #[test]
    fn rejects_bad_tolerance() {
        let lat = PeriodLattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)).unwrap();
        assert!(eisenstein_g2(&lat, 0.0).is_err());
    }
}
