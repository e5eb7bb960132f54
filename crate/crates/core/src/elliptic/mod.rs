//! Analytics of a single complex elliptic curve `y² = 4x³ − g₂x − g₃`.
//!
//! The lattice of periods is obtained from the three branch points by the
//! complex arithmetic–geometric mean. The Weierstrass function and the
//! Eisenstein sums are evaluated from the defining lattice sums, resummed
//! row by row along `ω₁` so that the remaining sum over rows converges
//! geometrically and its tail can be bounded explicitly.
//!
//! [`direct`] holds plain truncated-disc versions of the same sums. They are
//! far slower and serve as an independent reference.

mod agm;
pub mod direct;
mod eisenstein;
mod lattice;
mod wp;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use agm::{agm, agm_with, AGM_MAX_ITER};
pub use eisenstein::{eisenstein_g2, eisenstein_g3, Estimate, DEFAULT_EISENSTEIN_TOL};
pub use lattice::{period_lattice, PeriodLattice};
pub use wp::{wp, wp_both, wp_prime, DEFAULT_WP_TOL, POLE_EPS};

/// Relative size of `|Δ|` below which the cubic counts as degenerate.
const DISC_REL_EPS: f64 = 1e-12;

/// Coefficients `(g₂, g₃)` of a Weierstrass cubic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveCoefficients {
    pub g2: Complex64,
    pub g3: Complex64,
}

impl CurveCoefficients {
    pub fn new(g2: Complex64, g3: Complex64) -> Self {
        CurveCoefficients { g2, g3 }
    }

    pub fn real(g2: f64, g3: f64) -> Self {
        Self::new(Complex64::new(g2, 0.0), Complex64::new(g3, 0.0))
    }

    /// `g₂³ − 27 g₃²`.
    pub fn disc(&self) -> Complex64 {
        self.g2 * self.g2 * self.g2 - 27.0 * self.g3 * self.g3
    }

    /// Whether the discriminant is nonzero relative to the size of its terms.
    pub fn is_nonsingular(&self) -> bool {
        let scale = self.g2.norm().powi(3).max(27.0 * self.g3.norm_sqr());
        scale > 0.0 && self.disc().norm() > DISC_REL_EPS * scale
    }

    pub fn ensure_nonsingular(&self) -> Result<()> {
        if self.is_nonsingular() {
            Ok(())
        } else {
            Err(Error::DegenerateCubic)
        }
    }

    /// `(λ⁴ g₂, λ⁶ g₃)`.
    pub fn rescale(&self, lambda: Complex64) -> Self {
        let l2 = lambda * lambda;
        CurveCoefficients { g2: self.g2 * l2 * l2, g3: self.g3 * l2 * l2 * l2 }
    }

    /// Roots of `4x³ − g₂x − g₃`, ordered by descending real part and then
    /// descending imaginary part.
    pub fn branch_points(&self) -> Result<[Complex64; 3]> {
        self.ensure_nonsingular()?;
        let cubic = [-self.g3, -self.g2, Complex64::new(0.0, 0.0), Complex64::new(4.0, 0.0)];
        let raw = crate::binaryforms::aberth_roots(&cubic)?;
        let mut e = [raw[0], raw[1], raw[2]];
        // Newton polish; roots are simple since Δ ≠ 0.
        for r in e.iter_mut() {
            for _ in 0..3 {
                let p = ((*r * *r) * 4.0 - self.g2) * *r - self.g3;
                let dp = *r * *r * 12.0 - self.g2;
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                *r -= step;
                if step.norm() <= f64::EPSILON * r.norm() {
                    break;
                }
            }
        }
        let scale = e.iter().map(|x| x.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let tie = 1e-12 * scale;
        e.sort_by(|a, b| {
            if (a.re - b.re).abs() <= tie {
                b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal)
            } else {
                b.re.partial_cmp(&a.re).unwrap_or(std::cmp::Ordering::Equal)
            }
        });
        Ok(e)
    }
}

/// `j = 1728 g₂³ / (g₂³ − 27 g₃²)`.
pub fn j_invariant(c: &CurveCoefficients) -> Result<Complex64> {
    c.ensure_nonsingular()?;
    let g2c = c.g2 * c.g2 * c.g2;
    Ok(1728.0 * g2c / c.disc())
}
