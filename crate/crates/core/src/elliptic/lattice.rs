use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{agm, CurveCoefficients};
use crate::error::{Error, Result};

const TIE: f64 = 1e-12;

/// A lattice `Λ = ℤω₁ + ℤω₂ ⊂ ℂ` with reduced basis.
///
/// The basis is normalized so that `τ = ω₂/ω₁` lies in the standard
/// fundamental domain (`|Re τ| ≤ 1/2`, `|τ| ≥ 1`, boundary points moved to
/// `Re τ = −1/2` and to the left half of the unit arc). Among the bases with
/// that `τ`, `ω₁` is rotated by a unit of `Λ` so that `arg ω₁` lies in
/// `(−π/2, π/2]` (`(−π/4, π/4]` for `τ = i`, `(−π/6, π/6]` for `τ = e^{2πi/3}`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodLattice {
    omega1: Complex64,
    omega2: Complex64,
    tau: Complex64,
    source: Option<CurveCoefficients>,
}

impl PeriodLattice {
    /// Lattice generated by two ℝ-independent complex numbers.
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        let (omega1, omega2) = normalize_basis(omega1, omega2)?;
        Ok(PeriodLattice { omega1, omega2, tau: omega2 / omega1, source: None })
    }

    pub fn omega1(&self) -> Complex64 {
        self.omega1
    }

    pub fn omega2(&self) -> Complex64 {
        self.omega2
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// Curve the lattice was computed from, if any.
    pub fn source(&self) -> Option<CurveCoefficients> {
        self.source
    }

    /// Area of a fundamental parallelogram.
    pub fn covolume(&self) -> f64 {
        (self.omega1.conj() * self.omega2).im.abs()
    }

    /// `λΛ`.
    pub fn scaled(&self, lambda: Complex64) -> Result<Self> {
        if lambda.norm() == 0.0 {
            return Err(Error::InvalidParameter("lattice scale must be nonzero".into()));
        }
        PeriodLattice::new(self.omega1 * lambda, self.omega2 * lambda)
    }

    /// Real coordinates `(x, y)` with `z = (x + yτ) ω₁`.
    pub(crate) fn coordinates(&self, z: Complex64) -> (f64, f64) {
        let w = z / self.omega1;
        let y = w.im / self.tau.im;
        let x = w.re - y * self.tau.re;
        (x, y)
    }

    /// Splits `z = r + mω₁ + nω₂` with `r` in the parallelogram centred at 0.
    pub fn reduce(&self, z: Complex64) -> (Complex64, (i64, i64)) {
        let (x, y) = self.coordinates(z);
        let (m, n) = (x.round(), y.round());
        let r = (x - m) * self.omega1 + (y - n) * self.omega2;
        (r, (m as i64, n as i64))
    }

    /// `mω₁ + nω₂`.
    pub fn point(&self, m: i64, n: i64) -> Complex64 {
        self.omega1 * m as f64 + self.omega2 * n as f64
    }

    /// Distance from `z` to the nearest lattice point.
    pub fn distance_to_lattice(&self, z: Complex64) -> f64 {
        let (r, _) = self.reduce(z);
        // The reduced basis makes the centred parallelogram close to the
        // Voronoi cell; check the neighbouring points as well.
        let mut best = r.norm();
        for m in -1..=1 {
            for n in -1..=1 {
                best = best.min((r - self.point(m, n)).norm());
            }
        }
        best
    }
}

/// Reduce `(ω₁, ω₂)` to the canonical basis described on [`PeriodLattice`].
fn normalize_basis(mut w1: Complex64, mut w2: Complex64) -> Result<(Complex64, Complex64)> {
    if !(w1.is_finite() && w2.is_finite()) || w1.norm() == 0.0 {
        return Err(Error::InvalidLatticeBasis);
    }
    let t = w2 / w1;
    if t.im.abs() <= 1e-14 * t.norm().max(1.0) {
        return Err(Error::InvalidLatticeBasis);
    }
    if t.im < 0.0 {
        w2 = -w2;
    }
    for _ in 0..1000 {
        let tau = w2 / w1;
        let n = tau.re.round();
        w2 -= w1 * n;
        let tau = w2 / w1;
        if tau.norm() < 1.0 - TIE {
            // τ ↦ −1/τ
            let old1 = w1;
            w1 = w2;
            w2 = -old1;
        } else {
            break;
        }
    }
    let tau = w2 / w1;
    if (tau.re - 0.5).abs() <= TIE {
        w2 -= w1;
    }
    let tau = w2 / w1;
    if (tau.norm() - 1.0).abs() <= TIE && tau.re > TIE {
        let old1 = w1;
        w1 = w2;
        w2 = -old1;
        let tau = w2 / w1;
        if (tau.re - 0.5).abs() <= TIE {
            w2 -= w1;
        }
    }

    // Rotate by the units of Λ.
    let tau = w2 / w1;
    let i = Complex64::new(0.0, 1.0);
    let rho = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let (unit, half_width) = if (tau - i).norm() <= 1e-10 {
        (i, PI / 4.0)
    } else if (tau - rho).norm() <= 1e-10 {
        (Complex64::from_polar(1.0, PI / 3.0), PI / 6.0)
    } else {
        (Complex64::new(-1.0, 0.0), PI / 2.0)
    };
    for _ in 0..6 {
        let arg = w1.arg();
        if arg > -half_width + TIE && arg <= half_width + TIE {
            break;
        }
        w1 *= unit;
    }
    w2 = tau * w1;
    Ok((w1, w2))
}

/// The lattice of periods of `dx / √(4x³ − g₂x − g₃)`.
///
/// With branch points `e₁, e₂, e₃` in canonical order, a basis is
/// `π / M(√(e₁−e₃), √(e₁−e₂))` and `π / M(√(e₂−e₃), i√(e₁−e₂))`, where `M`
/// is the arithmetic–geometric mean with right choices at every step.
pub fn period_lattice(c: &CurveCoefficients) -> Result<PeriodLattice> {
    let [e1, e2, e3] = c.branch_points()?;
    let a = (e1 - e3).sqrt();
    let b = (e1 - e2).sqrt();
    let cc = (e2 - e3).sqrt();
    let i = Complex64::new(0.0, 1.0);
    let w1 = PI / agm_right(a, b)?;
    let w2 = PI / agm_right(cc, i * b)?;
    let mut lattice = PeriodLattice::new(w1, w2)?;
    lattice.source = Some(*c);
    Ok(lattice)
}

fn agm_right(a: Complex64, b: Complex64) -> Result<Complex64> {
    if (a - b).norm() > (a + b).norm() {
        agm(a, -b)
    } else {
        agm(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ∫₁^∞ dx / √(4x³ − 4x). With x = 1/s² this is ∫₀¹ ds / √(1 − s⁴), and
    /// with s = sin θ it becomes ∫₀^{π/2} dθ / √(1 + sin²θ).
    fn lemniscate_half_period() -> f64 {
        let n = 20_000;
        let h = PI / 2.0 / n as f64;
        let f = |t: f64| 1.0 / (1.0 + t.sin().powi(2)).sqrt();
        let mut s = f(0.0) + f(PI / 2.0);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(k as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn square_lattice() {
        let lat = period_lattice(&CurveCoefficients::real(4.0, 0.0)).unwrap();
        assert!((lat.tau() - Complex64::new(0.0, 1.0)).norm() < 1e-13, "{}", lat.tau());
        let half = lemniscate_half_period();
        assert!((lat.omega1() - Complex64::new(2.0 * half, 0.0)).norm() < 1e-12, "{} vs {}", lat.omega1(), 2.0 * half);
    }

    #[test]
    fn hexagonal_lattice() {
        let lat = period_lattice(&CurveCoefficients::real(0.0, 4.0)).unwrap();
        let rho = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((lat.tau() - rho).norm() < 1e-13, "{}", lat.tau());
        // e^{iπ/3} is the same point of the modular curve.
        let e = Complex64::from_polar(1.0, PI / 3.0);
        assert!((lat.tau() + 1.0 - e).norm() < 1e-13);
    }

    #[test]
    fn degenerate_cubic() {
        assert_eq!(period_lattice(&CurveCoefficients::real(3.0, 1.0)), Err(Error::DegenerateCubic));
    }

    #[test]
    fn basis_changes_normalize_identically() {
        let base = PeriodLattice::new(Complex64::new(1.1, 0.3), Complex64::new(-0.4, 1.7)).unwrap();
        for &(a, b, c, d) in &[(1i64, 0i64, 0i64, 1i64), (2, 1, 1, 1), (1, 3, 0, 1), (0, -1, 1, 0), (5, 2, 2, 1), (-1, 0, 0, -1)] {
            let w1 = base.point(a, b);
            let w2 = base.point(c, d);
            let other = PeriodLattice::new(w1, w2).unwrap();
            assert!((other.tau() - base.tau()).norm() < 1e-12);
            assert!((other.omega1() - base.omega1()).norm() < 1e-12);
        }
    }

    #[test]
    fn fundamental_domain() {
        let lat = PeriodLattice::new(Complex64::new(1.0, 0.0), Complex64::new(7.3, 0.02)).unwrap();
        let t = lat.tau();
        assert!(t.re.abs() <= 0.5 + 1e-12 && t.norm() >= 1.0 - 1e-12 && t.im > 0.0);
        assert!(PeriodLattice::new(Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn boundary_ties() {
        let lat = PeriodLattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.5, 2.0)).unwrap();
        assert!((lat.tau().re + 0.5).abs() < 1e-12);
        let arc = Complex64::from_polar(1.0, 1.2);
        let lat = PeriodLattice::new(Complex64::new(1.0, 0.0), arc).unwrap();
        assert!(lat.tau().re < 0.0 && (lat.tau().norm() - 1.0).abs() < 1e-12);
    }
}
