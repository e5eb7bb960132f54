use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::metric::ReferenceMetric;
use crate::error::{Error, Result};

/// An element of `Λᵖ ℂⁿ` for `p ∈ {1, 2}`, in Plücker coordinates indexed by
/// increasing index sets in lexicographic order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PVector {
    pub n: usize,
    pub p: usize,
    pub coords: Vec<Complex64>,
}

/// Increasing index sets of size `p` in `0..n`.
pub(crate) fn index_sets(n: usize, p: usize) -> Vec<Vec<usize>> {
    match p {
        1 => (0..n).map(|i| vec![i]).collect(),
        2 => (0..n).flat_map(|i| (i + 1..n).map(move |j| vec![i, j])).collect(),
        _ => Vec::new(),
    }
}

/// Determinant of the `p × p` submatrix with rows `rows` and columns `cols`.
fn minor(m: &[Vec<Complex64>], rows: &[usize], cols: &[usize]) -> Complex64 {
    match rows.len() {
        1 => m[rows[0]][cols[0]],
        2 => m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]],
        _ => unreachable!("p is 1 or 2"),
    }
}

impl PVector {
    fn check_p(p: usize) -> Result<()> {
        if p == 1 || p == 2 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("p must be 1 or 2, got {p}")))
        }
    }

    /// `v₁ ∧ … ∧ v_p` for `p` vectors of equal length.
    pub fn wedge(vectors: &[Vec<Complex64>]) -> Result<Self> {
        let p = vectors.len();
        Self::check_p(p)?;
        let n = vectors[0].len();
        if vectors.iter().any(|v| v.len() != n) || n < p {
            return Err(Error::InvalidParameter("wedge factors must have equal length ≥ p".into()));
        }
        // matrix with the vectors as columns
        let m: Vec<Vec<Complex64>> = (0..n).map(|i| vectors.iter().map(|v| v[i]).collect()).collect();
        let cols: Vec<usize> = (0..p).collect();
        let coords = index_sets(n, p).iter().map(|rows| minor(&m, rows, &cols)).collect();
        Ok(PVector { n, p, coords })
    }

    /// `e₁ ∧ … ∧ e_p` in `ℂⁿ`.
    pub fn coordinate(n: usize, p: usize) -> Result<Self> {
        Self::check_p(p)?;
        let vectors: Vec<Vec<Complex64>> = (0..p)
            .map(|k| (0..n).map(|i| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        Self::wedge(&vectors)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        PVector { n: self.n, p: self.p, coords: self.coords.iter().map(|x| x * c).collect() }
    }

    /// Induced Hermitian product `⟨self, other⟩` at `point`, conjugate-linear
    /// in `self`: `⟨e_I, e_J⟩ = det H[I, J]`.
    pub fn inner(&self, other: &PVector, metric: &dyn ReferenceMetric, point: &[Complex64]) -> Complex64 {
        let h = metric.matrix(point);
        let sets = index_sets(self.n, self.p);
        let mut s = Complex64::new(0.0, 0.0);
        for (a, i) in sets.iter().enumerate() {
            if self.coords[a].norm() == 0.0 {
                continue;
            }
            for (b, j) in sets.iter().enumerate() {
                if other.coords[b].norm() == 0.0 {
                    continue;
                }
                s += self.coords[a].conj() * minor(&h, i, j) * other.coords[b];
            }
        }
        s
    }

    pub fn norm(&self, metric: &dyn ReferenceMetric, point: &[Complex64]) -> f64 {
        self.inner(self, metric, point).re.max(0.0).sqrt()
    }

    /// `Λᵖ A` applied to `self`, for an `m × n` matrix `A` given by rows.
    pub fn push_forward(&self, a: &[Vec<Complex64>]) -> Result<PVector> {
        if a.iter().any(|r| r.len() != self.n) {
            return Err(Error::InvalidParameter("Jacobian width does not match p-vector dimension".into()));
        }
        let m = a.len();
        let src = index_sets(self.n, self.p);
        let coords = index_sets(m, self.p)
            .iter()
            .map(|rows| src.iter().zip(&self.coords).map(|(cols, c)| minor(a, rows, cols) * c).sum())
            .collect();
        Ok(PVector { n: m, p: self.p, coords })
    }

    /// Writes `other = μ·self + rest`, returning `μ` and `‖rest‖/‖other‖`.
    pub fn project(&self, other: &PVector, metric: &dyn ReferenceMetric, point: &[Complex64]) -> (Complex64, f64) {
        let zz = self.inner(self, metric, point).re;
        let mu = self.inner(other, metric, point) / zz;
        let rest = PVector {
            n: self.n,
            p: self.p,
            coords: other.coords.iter().zip(&self.coords).map(|(o, s)| o - mu * s).collect(),
        };
        let on = other.norm(metric, point);
        let residual = if on > 0.0 { rest.norm(metric, point) / on } else { 0.0 };
        (mu, residual)
    }
}
