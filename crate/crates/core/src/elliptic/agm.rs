use num_complex::Complex64;

use crate::error::{Error, Result};

pub const AGM_MAX_ITER: usize = 64;

/// Complex arithmetic–geometric mean with relative tolerance `1e-15`.
///
/// From the first step on, the geometric mean takes the "right choice" of
/// square root, `|a_{n+1} − b_{n+1}| ≤ |a_{n+1} + b_{n+1}|`. The starting pair
/// is used as given, which keeps `agm(a, b) == agm(b, a)`; callers wanting the
/// optimal value flip the sign of `b` beforehand when `|a − b| > |a + b|`.
pub fn agm(a: Complex64, b: Complex64) -> Result<Complex64> {
    agm_with(a, b, 1e-15, AGM_MAX_ITER)
}

pub fn agm_with(mut a: Complex64, mut b: Complex64, tol: f64, max_iter: usize) -> Result<Complex64> {
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return Err(Error::InvalidParameter("agm requires nonzero arguments".into()));
    }
    for _ in 0..max_iter {
        if (a - b).norm() <= tol * a.norm() {
            return Ok((a + b) * 0.5);
        }
        let a1 = (a + b) * 0.5;
        let mut g = (a * b).sqrt();
        if (a1 - g).norm() > (a1 + g).norm() {
            g = -g;
        }
        if a1.norm() == 0.0 {
            return Err(Error::NoConvergence { what: "agm", iterations: max_iter });
        }
        a = a1;
        b = g;
    }
    Err(Error::NoConvergence { what: "agm", iterations: max_iter })
}
