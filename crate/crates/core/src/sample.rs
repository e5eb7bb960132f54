//! Seeded random inputs: forms, curves, fibrations, base points.
//!
//! All samplers draw from a caller-supplied RNG; [`rng`] gives the
//! reproducible generator used by the CLI and the tests.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::binaryforms::{BinaryForm, P1Point};
use crate::elliptic::{CurveCoefficients, PeriodLattice};
use crate::error::{Error, Result};
use crate::fibration::WeierstrassFibration;

const MAX_ATTEMPTS: usize = 10_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the square `[-1, 1] × [-1, 1]`.
pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// A form of the given degree with coefficients uniform in the unit square.
pub fn form<R: Rng + ?Sized>(rng: &mut R, degree: usize) -> BinaryForm {
    let coeffs = (0..=degree).map(|_| complex(rng)).collect();
    BinaryForm::new(degree, coeffs).expect("degree + 1 coefficients")
}

/// A fibration with random `g₂`, `g₃`; generic, so all 24 singular fibres
/// are distinct of type I₁.
pub fn fibration<R: Rng + ?Sized>(rng: &mut R) -> Result<WeierstrassFibration> {
    for _ in 0..MAX_ATTEMPTS {
        if let Ok(x) = WeierstrassFibration::validate(form(rng, 8), form(rng, 12)) {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { what: "fibration sampling", iterations: MAX_ATTEMPTS })
}

/// A curve with `|Δ| / max(1, |g₂|³) > min_ratio`, coefficients in `[-2, 2]²`.
pub fn curve<R: Rng + ?Sized>(rng: &mut R, min_ratio: f64) -> Result<CurveCoefficients> {
    for _ in 0..MAX_ATTEMPTS {
        let c = CurveCoefficients::new(complex(rng) * 2.0, complex(rng) * 2.0);
        if c.disc().norm() / c.g2.norm().powi(3).max(1.0) > min_ratio {
            return Ok(c);
        }
    }
    Err(Error::NoConvergence { what: "curve sampling", iterations: MAX_ATTEMPTS })
}

/// A point of P¹ with affine coordinate in `[-2, 2]²` (hence both charts
/// occur) at chordal distance more than `min_distance` from the singular
/// locus.
pub fn regular_point<R: Rng + ?Sized>(rng: &mut R, x: &WeierstrassFibration, min_distance: f64) -> Result<P1Point> {
    for _ in 0..MAX_ATTEMPTS {
        let t = P1Point::affine(complex(rng) * 2.0);
        if x.distance_to_singular(&t) > min_distance {
            return Ok(t);
        }
    }
    Err(Error::NoConvergence { what: "regular point sampling", iterations: MAX_ATTEMPTS })
}

/// A point of the fundamental parallelogram at distance at least
/// `margin · min(|ω₁|, |ω₂|)` from the lattice.
pub fn lattice_point_free<R: Rng + ?Sized>(rng: &mut R, lattice: &PeriodLattice, margin: f64) -> Complex64 {
    let scale = lattice.omega1().norm().min(lattice.omega2().norm());
    loop {
        let z = lattice.omega1() * rng.gen_range(0.0..1.0) + lattice.omega2() * rng.gen_range(0.0..1.0);
        if lattice.distance_to_lattice(z) >= margin * scale {
            return z;
        }
    }
}
