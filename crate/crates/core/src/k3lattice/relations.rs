//! Expressing real numbers as rational combinations of a small ℚ-linearly
//! independent set, with a height bound tied to the tolerance.
//!
//! A relation `Σ cᵢxᵢ ≈ 0` with `|cᵢ| ≤ H` among `m` numbers is only
//! accepted when `(2H + 1)^m ≤ 10⁻³/tol`, and a single number is only
//! rationalized with denominator at most `√(10⁻³/tol)` (and at most
//! [`MAX_DENOMINATOR`]). Within these heights a chance relation among generic
//! reals at accuracy `tol` is unlikely, so a detected relation is taken to be
//! genuine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::lll::lll_reduce;

/// Largest denominator ever used when rationalizing a single number.
pub const MAX_DENOMINATOR: i64 = 1_000_000;

/// Beyond this many independent numbers, further values are only compared
/// pairwise against existing ones.
const BASIS_CAP: usize = 12;

/// Height bound for relations among `m ≥ 3` numbers at tolerance `tol`.
pub(crate) fn height_bound(m: usize, tol: f64) -> i64 {
    let h = (((1e-3 / tol).powf(1.0 / m as f64) - 1.0) / 2.0).floor();
    (h as i64).clamp(1, MAX_DENOMINATOR)
}

/// Denominator bound for rationalizing one number at tolerance `tol`.
pub(crate) fn denominator_bound(tol: f64) -> i64 {
    ((1e-3 / tol).sqrt().floor() as i64).clamp(1, MAX_DENOMINATOR)
}

/// Best rational approximation `p/q` (smallest `q ≤ max_den`) with
/// `|y − p/q| ≤ tol·max(1, |y|)`, by continued fractions.
pub fn rationalize(y: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !y.is_finite() || y.abs() > 1e12 {
        return None;
    }
    let accept = tol * y.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut x = y;
    for _ in 0..64 {
        let a = x.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            return None;
        }
        if (y - h2 as f64 / k2 as f64).abs() <= accept {
            return Some((h2 as i64, k2 as i64));
        }
        let frac = x - a;
        if frac <= 0.0 {
            return None;
        }
        x = 1.0 / frac;
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
    None
}

/// Values written as `Σ_l coords[l]·basis[l]` with rational coordinates and
/// `basis[0] = 1`.
#[derive(Clone, Debug)]
pub struct RationalDecomposition {
    pub basis: Vec<f64>,
    pub coords: Vec<Vec<BigRational>>,
}

impl RationalDecomposition {
    pub fn new(values: &[f64], tol: f64) -> Self {
        let mut basis = vec![1.0];
        let mut coords: Vec<Vec<BigRational>> = Vec::with_capacity(values.len());
        let h2 = denominator_bound(tol);
        for &y in values {
            let found = if y.abs() <= tol {
                Some(vec![])
            } else if let Some((p, q)) = rationalize(y, h2, tol) {
                Some(vec![ratio(p, q)])
            } else if let Some(c) = pairwise(&basis, y, h2, tol) {
                Some(c)
            } else if basis.len() >= 2 && basis.len() <= BASIS_CAP {
                relation(&basis, y, tol)
            } else {
                None
            };
            match found {
                Some(c) => coords.push(c),
                None => {
                    basis.push(y);
                    let mut c = vec![BigRational::zero(); basis.len()];
                    c[basis.len() - 1] = ratio(1, 1);
                    coords.push(c);
                }
            }
        }
        for c in coords.iter_mut() {
            c.resize(basis.len(), BigRational::zero());
        }
        RationalDecomposition { basis, coords }
    }

    /// True if every value was found rational.
    pub fn is_rational(&self) -> bool {
        self.basis.len() == 1
    }

    /// Largest deviation between a value and its reconstruction.
    pub fn max_residual(&self, values: &[f64]) -> f64 {
        values
            .iter()
            .zip(&self.coords)
            .map(|(y, c)| {
                let r: f64 = c.iter().zip(&self.basis).map(|(q, b)| to_f64(q) * b).sum();
                (y - r).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// `y = (p/q)·basis[l]` for some `l ≥ 1`.
fn pairwise(basis: &[f64], y: f64, max_den: i64, tol: f64) -> Option<Vec<BigRational>> {
    for (l, &b) in basis.iter().enumerate().skip(1) {
        if let Some((p, q)) = rationalize(y / b, max_den, tol) {
            let mut c = vec![BigRational::zero(); l + 1];
            c[l] = ratio(p, q);
            return Some(c);
        }
    }
    None
}

/// Integer relation among `basis ∪ {y}` involving `y`, by LLL.
fn relation(basis: &[f64], y: f64, tol: f64) -> Option<Vec<BigRational>> {
    let m = basis.len() + 1;
    let h = height_bound(m, tol);
    let x: Vec<f64> = basis.iter().copied().chain(std::iter::once(y)).collect();
    let s = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let k = 1.0 / tol;
    let mut rows: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut r = vec![0.0; m + 1];
            r[i] = 1.0;
            r[m] = k * x[i] / s;
            r
        })
        .collect();
    lll_reduce(&mut rows, 0.99);
    for row in &rows {
        let c: Vec<i64> = row[..m].iter().map(|v| v.round() as i64).collect();
        if c[m - 1] == 0 || c.iter().any(|v| v.abs() > h) {
            continue;
        }
        let residual: f64 = c.iter().zip(&x).map(|(&ci, xi)| ci as f64 * xi).sum();
        let size: f64 = c.iter().zip(&x).map(|(&ci, xi)| (ci as f64 * xi).abs()).sum();
        if residual.abs() <= tol * size.max(s) {
            let cy = c[m - 1];
            return Some(c[..m - 1].iter().map(|&ci| ratio(-ci, cy)).collect());
        }
    }
    None
}
