//! Plain truncated lattice sums over the disc `|ω| ≤ R`.
//!
//! These evaluate the defining series term by term, in a fixed order, and are
//! only practical for moderate accuracy. They are kept as an independent
//! reference for the resummed evaluators.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::PeriodLattice;

/// Radius `R` at which `(2π/A)·R^{2−k}/(k−2)·(1 + c/R) ≤ tol`, with `A` the
/// covolume and `c = |ω₁| + |ω₂|`, doubled once.
pub fn eisenstein_radius(lattice: &PeriodLattice, k: u32, tol: f64) -> f64 {
    let a = lattice.covolume();
    let c = lattice.omega1().norm() + lattice.omega2().norm();
    let bound = |r: f64| (2.0 * PI / a) * r.powi(2 - k as i32) / (k as f64 - 2.0) * (1.0 + c / r);
    let mut r = c;
    while bound(r) > tol {
        r *= 1.25;
    }
    2.0 * r
}

/// Radius for the ℘ series: `C·|z|·(2π/A)/R ≤ tol` with `C = 2(1 + |z|)`.
pub fn wp_radius(lattice: &PeriodLattice, z: Complex64, tol: f64) -> f64 {
    let a = lattice.covolume();
    let cz = 2.0 * (1.0 + z.norm());
    (cz * z.norm().max(1e-3) * 2.0 * PI / (a * tol)).max(4.0 * lattice.omega1().norm())
}

fn for_each_point(lattice: &PeriodLattice, radius: f64, mut f: impl FnMut(Complex64)) {
    // For a reduced basis |mω₁ + nω₂| ≥ (√3/2)·max(|m|,|n|)·|ω₁|.
    let bound = (radius / (0.86 * lattice.omega1().norm())).ceil() as i64 + 1;
    for n in -bound..=bound {
        for m in -bound..=bound {
            if m == 0 && n == 0 {
                continue;
            }
            let w = lattice.point(m, n);
            if w.norm() <= radius {
                f(w);
            }
        }
    }
}

/// `Σ_{0<|ω|≤R} ω^{−k}`.
pub fn lattice_sum(lattice: &PeriodLattice, k: u32, radius: f64) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for_each_point(lattice, radius, |w| s += w.powi(-(k as i32)));
    s
}

/// `60 Σ' ω⁻⁴` truncated at `radius`.
pub fn eisenstein_g2_direct(lattice: &PeriodLattice, radius: f64) -> Complex64 {
    60.0 * lattice_sum(lattice, 4, radius)
}

/// `140 Σ' ω⁻⁶` truncated at `radius`.
pub fn eisenstein_g3_direct(lattice: &PeriodLattice, radius: f64) -> Complex64 {
    140.0 * lattice_sum(lattice, 6, radius)
}

/// `1/z² + Σ_{0<|ω|≤R} (1/(z−ω)² − 1/ω²)` with `z` first reduced modulo Λ.
pub fn wp_direct(z: Complex64, lattice: &PeriodLattice, radius: f64) -> Complex64 {
    let (r, _) = lattice.reduce(z);
    let mut s = 1.0 / (r * r);
    for_each_point(lattice, radius, |w| {
        let d = r - w;
        s += 1.0 / (d * d) - 1.0 / (w * w);
    });
    s
}

/// `−2 Σ_{|ω|≤R} (z−ω)^{−3}` with `z` first reduced modulo Λ.
pub fn wp_prime_direct(z: Complex64, lattice: &PeriodLattice, radius: f64) -> Complex64 {
    let (r, _) = lattice.reduce(z);
    let mut s = 1.0 / (r * r * r);
    for_each_point(lattice, radius, |w| {
        let d = r - w;
        s += 1.0 / (d * d * d);
    });
    -2.0 * s
}
