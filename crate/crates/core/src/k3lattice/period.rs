use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::exact::{integer_kernel, integer_row, to_i64_vec};
use super::lll::lll_reduce_integer;
use super::relations::RationalDecomposition;
use super::{lattice_l, IntegralLattice};
use crate::error::{Error, Result};

pub const DEFAULT_QUADRIC_TOL: f64 = 1e-10;
pub const DEFAULT_NS_TOL: f64 = 1e-13;

const RANK_L: usize = 22;

/// A point of `P(L ⊗ ℂ)`: 22 complex coordinates, not all zero, up to scale.
///
/// For a marked K3 surface `(X, α)` these are the periods `∫ ω_X` over the
/// 2-cycles `α⁻¹(γᵢ)` of a basis `γᵢ` of `L`; they are caller-supplied here.
#[derive(Clone, Debug)]
pub struct PeriodPoint {
    omega: Vec<Complex64>,
}

impl PeriodPoint {
    pub fn new(omega: Vec<Complex64>) -> Result<Self> {
        if omega.len() != RANK_L {
            return Err(Error::LengthMismatch { rank: RANK_L, found: omega.len() });
        }
        if omega.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("period coordinates must be finite".into()));
        }
        if omega.iter().all(|w| w.norm() == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(PeriodPoint { omega })
    }

    /// `x + i·y` for integer vectors.
    pub fn from_integer_parts(x: &[i64], y: &[i64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch { rank: x.len(), found: y.len() });
        }
        Self::new(x.iter().zip(y).map(|(&a, &b)| Complex64::new(a as f64, b as f64)).collect())
    }

    pub fn omega(&self) -> &[Complex64] {
        &self.omega
    }

    pub fn scaled(&self, lambda: Complex64) -> Result<Self> {
        Self::new(self.omega.iter().map(|w| w * lambda).collect())
    }

    fn pivot(&self) -> usize {
        let mut k = 0;
        for (i, w) in self.omega.iter().enumerate() {
            if w.norm() > self.omega[k].norm() {
                k = i;
            }
        }
        k
    }

    /// Representative with the largest coordinate (first on ties) equal to 1.
    pub fn normalized(&self) -> Vec<Complex64> {
        let k = self.pivot();
        let c = self.omega[k];
        let mut w: Vec<Complex64> = self.omega.iter().map(|x| x / c).collect();
        w[k] = Complex64::new(1.0, 0.0);
        w
    }

    /// Equality in projective space: all 2×2 minors small.
    pub fn projectively_equal(&self, other: &PeriodPoint, tol: f64) -> bool {
        let a = self.normalized();
        let b = other.normalized();
        a.iter().zip(&b).all(|(x, y)| (x - y).norm() <= tol)
    }

    /// `|⟨ω, ω⟩| / (‖ω‖² · max_i Σ_j |Gᵢⱼ|)`.
    pub fn quadric_residual(&self) -> f64 {
        let l = lattice_l();
        let w = &self.omega;
        let value = l.pairing_c(w, w).expect("length checked at construction");
        let row_sum = l.gram().iter().map(|r| r.iter().map(|g| g.abs()).sum::<i64>()).max().unwrap_or(1);
        let norm2: f64 = w.iter().map(|x| x.norm_sqr()).sum();
        value.norm() / (norm2 * row_sum as f64)
    }

    /// `⟨ω, ω⟩ = 0` to relative tolerance `tol`.
    pub fn is_on_period_quadric(&self, tol: f64) -> bool {
        self.quadric_residual() <= tol
    }

    /// Additionally requires `⟨ω, ω̄⟩ > 0`.
    pub fn is_on_period_quadric_strict(&self, tol: f64) -> bool {
        if !self.is_on_period_quadric(tol) {
            return false;
        }
        let conj: Vec<Complex64> = self.omega.iter().map(|w| w.conj()).collect();
        let h = lattice_l().pairing_c(&self.omega, &conj).expect("length checked at construction");
        let norm2: f64 = self.omega.iter().map(|w| w.norm_sqr()).sum();
        h.re > tol * norm2
    }
}

impl Serialize for PeriodPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.omega.iter().map(|w| [w.re, w.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PeriodPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        PeriodPoint::new(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()).map_err(D::Error::custom)
    }
}

/// `ω^⊥ ∩ ω̄^⊥ ∩ L` together with how it was obtained.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NeronSeveri {
    /// Gram matrix of `basis` under the pairing of `L`.
    pub lattice: IntegralLattice,
    /// Integer vectors of `L` spanning the sublattice.
    pub basis: Vec<Vec<i64>>,
    /// All coordinates of the normalized period were recognised as rational,
    /// so the kernel is exactly that of the rationalized point.
    pub exact: bool,
    /// Number of ℚ-linearly independent reals found among the coordinates
    /// (1 when everything is rational).
    pub rational_rank: usize,
    /// Largest `|⟨v, Re ω⟩|`, `|⟨v, Im ω⟩|` over basis vectors, for the
    /// normalized period.
    pub max_residual: f64,
}

impl NeronSeveri {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Néron–Severi lattice of a period point.
///
/// The period is scaled so that its largest coordinate is 1. Its 44 real
/// and imaginary parts are written as rational combinations of a few
/// ℚ-independent reals (continued fractions with denominators up to
/// [`super::MAX_DENOMINATOR`], and small integer relations found by LLL).
/// `⟨v, ω⟩ = 0` then splits into integer linear conditions, one pair per
/// independent real, whose integer kernel is computed exactly.
pub fn neron_severi(omega: &PeriodPoint, tol: f64) -> Result<NeronSeveri> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let l = lattice_l();
    let w = omega.normalized();
    let values: Vec<f64> = w.iter().map(|x| x.re).chain(w.iter().map(|x| x.im)).collect();
    let dec = RationalDecomposition::new(&values, tol);

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for b in 0..dec.basis.len() {
        for part in 0..2 {
            let alpha: Vec<&BigRational> = (0..RANK_L).map(|i| &dec.coords[part * RANK_L + i][b]).collect();
            let row: Vec<BigRational> = l
                .gram()
                .iter()
                .map(|g| {
                    g.iter()
                        .zip(&alpha)
                        .filter(|(&gij, _)| gij != 0)
                        .fold(BigRational::zero(), |acc, (&gij, &a)| acc + a * BigRational::from_integer(gij.into()))
                })
                .collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(integer_row(&row));
            }
        }
    }
    let kernel = integer_kernel(&rows, RANK_L);
    let mut basis: Vec<Vec<i64>> = kernel
        .iter()
        .map(|v| to_i64_vec(v))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidParameter("Néron–Severi basis does not fit in 64 bits".into()))?;
    lll_reduce_integer(&mut basis);
    for v in basis.iter_mut() {
        if let Some(first) = v.iter().find(|&&x| x != 0) {
            if *first < 0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
    }

    let re: Vec<f64> = w.iter().map(|x| x.re).collect();
    let im: Vec<f64> = w.iter().map(|x| x.im).collect();
    let mut max_residual = 0.0f64;
    for v in &basis {
        let gv = l.apply(v);
        let dr: f64 = gv.iter().zip(&re).map(|(&a, b)| a as f64 * b).sum();
        let di: f64 = gv.iter().zip(&im).map(|(&a, b)| a as f64 * b).sum();
        max_residual = max_residual.max(dr.abs()).max(di.abs());
    }
    let lattice = l.restrict(&basis)?;
    Ok(NeronSeveri { lattice, basis, exact: dec.is_rational(), rational_rank: dec.basis.len(), max_residual })
}
