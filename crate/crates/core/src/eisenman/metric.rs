use std::sync::Arc;

use num_complex::Complex64;

/// Bumped whenever [`FiberChordalMetric`] changes.
pub const REFERENCE_METRIC_VERSION: u32 = 1;

/// A Hermitian metric on an open subset of `ℂⁿ`, given pointwise by its
/// matrix `H`, with `‖a‖² = Σ conj(aᵢ) Hᵢⱼ aⱼ`.
pub trait ReferenceMetric: Send + Sync {
    fn matrix(&self, point: &[Complex64]) -> Vec<Vec<Complex64>>;
    fn name(&self) -> String;
}

/// `c · (standard Euclidean metric)`.
#[derive(Clone, Copy, Debug)]
pub struct Euclidean {
    pub scale: f64,
}

impl Default for Euclidean {
    fn default() -> Self {
        Euclidean { scale: 1.0 }
    }
}

impl ReferenceMetric for Euclidean {
    fn matrix(&self, point: &[Complex64]) -> Vec<Vec<Complex64>> {
        let n = point.len();
        (0..n)
            .map(|i| (0..n).map(|j| Complex64::new(if i == j { self.scale } else { 0.0 }, 0.0)).collect())
            .collect()
    }

    fn name(&self) -> String {
        if self.scale == 1.0 {
            "euclidean".into()
        } else {
            format!("euclidean*{}", self.scale)
        }
    }
}

/// Fubini–Study metric of P² on the affine chart `(x, y) = [x : y : 1]`,
/// times the chordal metric `|dw|²/(1 + |w|²)²` on the base coordinate.
///
/// Both factors are bounded, so the metric stays finite as the fibre point
/// approaches the section `[0 : 1 : 0]`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FiberChordalMetric;

impl ReferenceMetric for FiberChordalMetric {
    fn matrix(&self, point: &[Complex64]) -> Vec<Vec<Complex64>> {
        let zero = Complex64::new(0.0, 0.0);
        let q = [point[0], point[1]];
        let s = 1.0 + q[0].norm_sqr() + q[1].norm_sqr();
        let mut h = vec![vec![zero; 3]; 3];
        for i in 0..2 {
            for j in 0..2 {
                let delta = if i == j { s } else { 0.0 };
                h[i][j] = (Complex64::new(delta, 0.0) - q[i] * q[j].conj()) / (s * s);
            }
        }
        let w = 1.0 + point[2].norm_sqr();
        h[2][2] = Complex64::new(1.0 / (w * w), 0.0);
        h
    }

    fn name(&self) -> String {
        format!("fubini-study(x,y) x chordal(w) v{REFERENCE_METRIC_VERSION}")
    }
}

/// Block-diagonal metric on `ℂ^{n₁} × ℂ^{n₂}`.
#[derive(Clone)]
pub struct ProductMetric {
    pub first: Arc<dyn ReferenceMetric>,
    pub second: Arc<dyn ReferenceMetric>,
    pub split: usize,
}

impl ReferenceMetric for ProductMetric {
    fn matrix(&self, point: &[Complex64]) -> Vec<Vec<Complex64>> {
        let n = point.len();
        let a = self.first.matrix(&point[..self.split]);
        let b = self.second.matrix(&point[self.split..]);
        let mut h = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..self.split {
            h[i][..self.split].copy_from_slice(&a[i]);
        }
        for i in self.split..n {
            h[i][self.split..].copy_from_slice(&b[i - self.split]);
        }
        h
    }

    fn name(&self) -> String {
        format!("{} x {}", self.first.name(), self.second.name())
    }
}
