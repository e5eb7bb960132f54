use std::f64::consts::PI;

use num_complex::Complex64;

use super::PeriodLattice;
use crate::error::{Error, Result};

pub const DEFAULT_WP_TOL: f64 = 1e-10;

/// Points closer than `POLE_EPS · |ω₁|` to the lattice are reported as poles.
pub const POLE_EPS: f64 = 1e-8;

const MAX_ROWS: usize = 10_000;

/// `csc²(x)` and `cot(x)`, switching to the exponential form when `|Im x|`
/// is large so that neither overflows.
fn csc2_cot(x: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    if x.im.abs() > 1.0 {
        let (u, sign) = if x.im > 0.0 { ((2.0 * i * x).exp(), -1.0) } else { ((-2.0 * i * x).exp(), 1.0) };
        let d = one - u;
        let csc2 = -4.0 * u / (d * d);
        let cot = sign * i * (one + u) / d;
        (csc2, cot)
    } else {
        let s = x.sin();
        (one / (s * s), x.cos() / s)
    }
}

/// Bound on Σ_{n>N} of the row terms, per unit of `π²|ω₁|⁻²` (℘) and
/// `2π³|ω₁|⁻³` (℘′), for `|Im(row offset)| ≥ (n − ½)·π·Im τ`.
fn row_tail(n: usize, im_tau: f64) -> (f64, f64) {
    let r = (-2.0 * PI * im_tau).exp();
    let first = (-2.0 * PI * (n as f64 + 0.5) * im_tau).exp();
    let geo = 1.0 / (1.0 - r);
    let sq = (1.0 - (-PI * im_tau).exp()).powi(2);
    // two rows (±n) each contribute csc² of the shifted and the unshifted point
    let wp_tail = 16.0 * first * geo / sq;
    let wpp_tail = 8.0 * first * geo * (1.0 + (-PI * im_tau).exp()) / (sq * (1.0 - (-PI * im_tau).exp()));
    (wp_tail, wpp_tail)
}

/// ℘ and ℘′ together.
///
/// Reducing `z` into the parallelogram centred at 0 and summing the defining
/// series row by row gives
/// `℘(z) = ω₁⁻² [π²csc²(πw) − π²/3 + Σ_{n≠0} π²(csc²(π(w−nτ)) − csc²(πnτ))]`
/// with `w = z/ω₁`, and the analogous series `℘′(z) = −2π³ω₁⁻³ Σ_n csc²cot(π(w−nτ))`.
/// Rows are added until the geometric tail bound drops below `tol`.
pub fn wp_both(z: Complex64, lattice: &PeriodLattice, tol: f64) -> Result<(Complex64, Complex64)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    if !z.is_finite() {
        return Err(Error::InvalidParameter("z must be finite".into()));
    }
    let (r, _) = lattice.reduce(z);
    let w1 = lattice.omega1();
    let distance = lattice.distance_to_lattice(r);
    if distance < POLE_EPS * w1.norm() {
        return Err(Error::Pole { distance });
    }
    let tau = lattice.tau();
    let w = r / w1;
    let pi = Complex64::new(PI, 0.0);
    let scale_wp = PI * PI / w1.norm_sqr();
    let scale_wpp = 2.0 * PI.powi(3) / w1.norm().powi(3);

    let (c0, k0) = csc2_cot(pi * w);
    let mut sum_wp = c0 - 1.0 / 3.0;
    let mut sum_wpp = c0 * k0;
    let mut rows = 0;
    loop {
        rows += 1;
        if rows > MAX_ROWS {
            return Err(Error::ToleranceUnachievable { tol });
        }
        let shift = tau * rows as f64;
        let (cp, kp) = csc2_cot(pi * (w - shift));
        let (cm, km) = csc2_cot(pi * (w + shift));
        let (cn, _) = csc2_cot(pi * shift);
        sum_wp += cp + cm - 2.0 * cn;
        sum_wpp += cp * kp + cm * km;
        let (t_wp, t_wpp) = row_tail(rows, tau.im);
        if scale_wp * t_wp <= tol && scale_wpp * t_wpp <= tol {
            break;
        }
    }
    let wp = PI * PI * sum_wp / (w1 * w1);
    let wpp = -2.0 * PI.powi(3) * sum_wpp / (w1 * w1 * w1);
    Ok((wp, wpp))
}

/// Weierstrass ℘ of the lattice, with truncation error at most `tol`.
pub fn wp(z: Complex64, lattice: &PeriodLattice, tol: f64) -> Result<Complex64> {
    wp_both(z, lattice, tol).map(|(p, _)| p)
}

/// ℘′, with truncation error at most `tol`.
pub fn wp_prime(z: Complex64, lattice: &PeriodLattice, tol: f64) -> Result<Complex64> {
    wp_both(z, lattice, tol).map(|(_, d)| d)
}
