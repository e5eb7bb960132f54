use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::metric::{ProductMetric, ReferenceMetric};
use super::pvector::PVector;
use crate::error::{Error, Result};

/// Largest admissible Cauchy–Riemann residual of a test map at 0.
pub const HOLOMORPHY_TOL: f64 = 1e-6;

/// Largest admissible relative distance of `φ_*(∂/∂t₁ ∧ … ∧ ∂/∂t_p)` from the
/// line through `ζ`.
pub const COLLINEARITY_TOL: f64 = 1e-6;

/// The image p-vector counts as zero when its norm is below this multiple of
/// the product of the norms of its factors.
pub const DEGENERACY_TOL: f64 = 1e-12;

const FD_STEP: f64 = 1e-5;

/// A holomorphic map from the open unit polydisk to `ℂⁿ`.
pub type Evaluator = Arc<dyn Fn(&[Complex64]) -> Result<Vec<Complex64>> + Send + Sync>;

/// A holomorphic map `Δᵖ → ℂⁿ`, `p ∈ {1, 2}`, with its value at the origin.
///
/// The Jacobian at 0 is either supplied in closed form or taken by central
/// differences with step `10⁻⁵ / fd_scale`; `fd_scale` should be of the order
/// of the derivatives, so that the step stays inside the region where the map
/// is well approximated by its Taylor polynomial.
#[derive(Clone)]
pub struct TestMap {
    p: usize,
    n: usize,
    evaluator: Evaluator,
    jacobian: Option<Vec<Vec<Complex64>>>,
    basepoint_image: Vec<Complex64>,
    safety_radius: f64,
    fd_scale: f64,
    label: String,
}

impl fmt::Debug for TestMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestMap")
            .field("label", &self.label)
            .field("p", &self.p)
            .field("n", &self.n)
            .field("basepoint_image", &self.basepoint_image)
            .field("safety_radius", &self.safety_radius)
            .finish()
    }
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn unit(p: usize, j: usize, c: Complex64) -> Vec<Complex64> {
    (0..p).map(|i| if i == j { c } else { zero() }).collect()
}

impl TestMap {
    /// `safety_radius ≥ 1` is the radius of a polydisk on which the caller
    /// guarantees the map is defined and holomorphic.
    pub fn new(p: usize, evaluator: Evaluator, safety_radius: f64, label: impl Into<String>) -> Result<Self> {
        if p != 1 && p != 2 {
            return Err(Error::InvalidParameter(format!("p must be 1 or 2, got {p}")));
        }
        if !(safety_radius >= 1.0) {
            return Err(Error::InvalidParameter("safety radius must be at least 1".into()));
        }
        let basepoint_image = evaluator(&vec![zero(); p])?;
        let n = basepoint_image.len();
        if n < p || basepoint_image.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("test map image must be finite with dimension ≥ p".into()));
        }
        Ok(TestMap { p, n, evaluator, jacobian: None, basepoint_image, safety_radius, fd_scale: 1.0, label: label.into() })
    }

    /// `u ↦ A u` for an `n × p` matrix given by rows; defined on all of `ℂᵖ`.
    pub fn linear(a: Vec<Vec<Complex64>>) -> Result<Self> {
        let p = a.first().map_or(0, |r| r.len());
        if a.iter().any(|r| r.len() != p) {
            return Err(Error::InvalidParameter("ragged matrix".into()));
        }
        let rows = a.clone();
        let eval: Evaluator = Arc::new(move |u: &[Complex64]| {
            Ok(rows.iter().map(|r| r.iter().zip(u).map(|(x, y)| x * y).sum()).collect())
        });
        let scale = a.iter().flatten().map(|c| c.norm()).fold(1.0, f64::max);
        Ok(TestMap::new(p, eval, f64::INFINITY, "linear")?.with_jacobian(a)?.with_fd_scale(scale))
    }

    /// The identity of `Δᵖ`.
    pub fn identity(p: usize) -> Result<Self> {
        let a = (0..p).map(|i| unit(p, i, Complex64::new(1.0, 0.0))).collect();
        let mut m = Self::linear(a)?;
        m.safety_radius = 1.0;
        m.label = "identity".into();
        Ok(m)
    }

    /// Closed-form Jacobian at 0 as `n` rows of length `p`.
    pub fn with_jacobian(mut self, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        if rows.len() != self.n || rows.iter().any(|r| r.len() != self.p) {
            return Err(Error::InvalidParameter(format!("Jacobian must be {} x {}", self.n, self.p)));
        }
        self.jacobian = Some(rows);
        Ok(self)
    }

    pub fn with_fd_scale(mut self, scale: f64) -> Self {
        self.fd_scale = scale.max(1.0);
        self
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn basepoint_image(&self) -> &[Complex64] {
        &self.basepoint_image
    }

    pub fn safety_radius(&self) -> f64 {
        self.safety_radius
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn evaluate(&self, u: &[Complex64]) -> Result<Vec<Complex64>> {
        if u.len() != self.p {
            return Err(Error::LengthMismatch { rank: self.p, found: u.len() });
        }
        (self.evaluator)(u)
    }

    fn fd_step(&self) -> f64 {
        FD_STEP / self.fd_scale
    }

    /// Central difference of the map at `u` along `c·e_j`.
    fn directional(&self, u: &[Complex64], j: usize, c: Complex64) -> Result<Vec<Complex64>> {
        let h = self.fd_step();
        let shift = |s: f64| -> Vec<Complex64> { u.iter().zip(unit(self.p, j, c * s)).map(|(a, b)| a + b).collect() };
        let plus = self.evaluate(&shift(h))?;
        let minus = self.evaluate(&shift(-h))?;
        Ok(plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect())
    }

    /// Central-difference Jacobian at `u`, `n` rows of length `p`.
    pub fn fd_jacobian_at(&self, u: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
        let mut rows = vec![vec![zero(); self.p]; self.n];
        for j in 0..self.p {
            let col = self.directional(u, j, Complex64::new(1.0, 0.0))?;
            for (row, c) in rows.iter_mut().zip(col) {
                row[j] = c;
            }
        }
        Ok(rows)
    }

    /// Jacobian at 0: closed form when supplied, otherwise central differences.
    pub fn jacobian(&self) -> Result<Vec<Vec<Complex64>>> {
        match &self.jacobian {
            Some(j) => Ok(j.clone()),
            None => self.fd_jacobian_at(&vec![zero(); self.p]),
        }
    }

    /// `max |∂f/∂ū| / max |∂f/∂u|` at `u`, from central differences along the
    /// real and imaginary axes of each source coordinate.
    pub fn holomorphy_residual_at(&self, u: &[Complex64]) -> Result<f64> {
        let i = Complex64::new(0.0, 1.0);
        let (mut dbar, mut d) = (0.0f64, 0.0f64);
        for j in 0..self.p {
            let dx = self.directional(u, j, Complex64::new(1.0, 0.0))?;
            let dy = self.directional(u, j, i)?;
            for (a, b) in dx.iter().zip(&dy) {
                dbar = dbar.max(((a + i * b) / 2.0).norm());
                d = d.max(((a - i * b) / 2.0).norm());
            }
        }
        Ok(if dbar == 0.0 { 0.0 } else { dbar / d })
    }

    /// The holomorphy witness at the origin.
    pub fn holomorphy_residual(&self) -> Result<f64> {
        self.holomorphy_residual_at(&vec![zero(); self.p])
    }

    /// `φ_*(∂/∂t₁ ∧ … ∧ ∂/∂t_p)` at the origin.
    pub fn push_forward(&self) -> Result<PVector> {
        let j = self.jacobian()?;
        let cols: Vec<Vec<Complex64>> = (0..self.p).map(|k| j.iter().map(|r| r[k]).collect()).collect();
        PVector::wedge(&cols)
    }

    /// Composition `h ∘ self`, differentiated numerically.
    pub fn compose(&self, h: Evaluator, label: impl Into<String>) -> Result<TestMap> {
        let inner = self.evaluator.clone();
        let eval: Evaluator = Arc::new(move |u: &[Complex64]| h(&inner(u)?));
        let mut m = TestMap::new(self.p, eval, self.safety_radius, label)?;
        m.fd_scale = self.fd_scale;
        Ok(m)
    }
}

/// `1/|μ|` for `φ_*(∂/∂t₁ ∧ … ∧ ∂/∂t_p) = μ ζ̂` with `ζ̂ = ζ/‖ζ‖`, norms taken
/// in `metric` at the image of the origin. This is an upper bound for the
/// Eisenman p-pseudovolume at `(φ(0), ζ̂)`.
pub fn upper_bound(m: &TestMap, zeta: &PVector, metric: &dyn ReferenceMetric) -> Result<f64> {
    if zeta.p != m.p || zeta.n != m.n {
        return Err(Error::InvalidParameter(format!(
            "direction lives in Λ^{} C^{}, test map needs Λ^{} C^{}",
            zeta.p, zeta.n, m.p, m.n
        )));
    }
    let witness = m.holomorphy_residual()?;
    if !(witness <= HOLOMORPHY_TOL) {
        return Err(Error::InvalidParameter(format!("test map fails the holomorphy witness ({witness:.3e})")));
    }
    let x = m.basepoint_image();
    let zn = zeta.norm(metric, x);
    if !(zn > 0.0) {
        return Err(Error::DegenerateDirection { norm: zn });
    }
    let j = m.jacobian()?;
    let factors: f64 = (0..m.p)
        .map(|k| PVector::wedge(&[j.iter().map(|r| r[k]).collect()]).map(|v| v.norm(metric, x)))
        .product::<Result<f64>>()?;
    let image = m.push_forward()?;
    let norm = image.norm(metric, x);
    if !(norm > DEGENERACY_TOL * factors) || !norm.is_finite() {
        return Err(Error::DegenerateJacobian);
    }
    let (mu, residual) = zeta.project(&image, metric, x);
    if residual > COLLINEARITY_TOL {
        return Err(Error::NonCollinear { residual });
    }
    Ok(1.0 / (mu.norm() * zn))
}

/// Smallest bound over a family of test maps, with the index attaining it.
/// Maps whose bound cannot be formed are skipped; if none succeeds the first
/// error is returned.
pub fn best_upper_bound(maps: &[TestMap], zeta: &PVector, metric: &dyn ReferenceMetric) -> Result<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    let mut first_err = None;
    for (i, m) in maps.iter().enumerate() {
        match upper_bound(m, zeta, metric) {
            Ok(b) if best.is_none_or(|(_, v)| b < v) => best = Some((i, b)),
            Ok(_) => {}
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_err.unwrap_or(Error::InvalidParameter("empty family of test maps".into())))
}

/// Outcome of comparing bounds across a holomorphic map `h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PullbackReport {
    /// Bound from `m` for the unit direction `ζ̂` at `x`.
    pub bound_source: f64,
    /// Bound from `h ∘ m` for the unit direction along `h_*ζ̂` at `h(x)`.
    pub bound_target: f64,
    /// `bound_source / ‖h_*ζ̂‖`.
    pub predicted: f64,
    /// `‖h_*ζ̂‖` in the target metric.
    pub push_norm: f64,
    /// `|bound_target − predicted| / bound_target`.
    pub residual: f64,
}

/// Checks the transformation law of bounds under `h`: pushing the test map
/// forward by `h` rescales its bound by `1/‖h_*ζ̂‖`.
///
/// `h_*ζ̂` uses central differences of `h` at `x`, and the bound of `h ∘ m`
/// uses central differences of the composite, so the two sides are computed
/// independently.
pub fn pullback_check(
    m: &TestMap,
    h: Evaluator,
    zeta: &PVector,
    metric_source: &dyn ReferenceMetric,
    metric_target: &dyn ReferenceMetric,
) -> Result<PullbackReport> {
    let x = m.basepoint_image().to_vec();
    let bound_source = upper_bound(m, zeta, metric_source)?;
    let zeta_hat = zeta.scale(Complex64::new(1.0 / zeta.norm(metric_source, &x), 0.0));

    let step = FD_STEP * (1.0 + x.iter().map(|c| c.norm()).fold(0.0, f64::max));
    let hx = h(&x)?;
    let mut dh = vec![vec![zero(); x.len()]; hx.len()];
    for j in 0..x.len() {
        let mut plus = x.clone();
        let mut minus = x.clone();
        plus[j] += step;
        minus[j] -= step;
        let (a, b) = (h(&plus)?, h(&minus)?);
        for (row, (p, q)) in dh.iter_mut().zip(a.iter().zip(&b)) {
            row[j] = (p - q) / (2.0 * step);
        }
    }
    let pushed = zeta_hat.push_forward(&dh)?;
    let push_norm = pushed.norm(metric_target, &hx);
    if !(push_norm > DEGENERACY_TOL) {
        return Err(Error::DegenerateDirection { norm: push_norm });
    }
    let composite = m.compose(h, format!("h o {}", m.label()))?;
    let bound_target = upper_bound(&composite, &pushed, metric_target)?;
    let predicted = bound_source / push_norm;
    Ok(PullbackReport {
        bound_source,
        bound_target,
        predicted,
        push_norm,
        residual: (bound_target - predicted).abs() / bound_target,
    })
}

/// Outcome of comparing a product of two one-dimensional test maps with its
/// factors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductReport {
    pub bound_first: f64,
    pub bound_second: f64,
    /// Bound of `(u, v) ↦ (φ₁(u), φ₂(v))` for `ζ₁ ∧ ζ₂`.
    pub bound_product: f64,
    /// `|bound_product − bound_first·bound_second| / bound_product`.
    pub residual: f64,
}

/// Bounds for `p = 1` test maps into `X₁` and `X₂`, and for their product
/// into `X₁ × X₂` with the block-diagonal metric; each `ζᵢ` is the unit
/// direction of `φᵢ` at the origin. The product bound is differentiated
/// numerically, independently of the factors.
pub fn product_check(
    first: &TestMap,
    second: &TestMap,
    metric_first: Arc<dyn ReferenceMetric>,
    metric_second: Arc<dyn ReferenceMetric>,
) -> Result<ProductReport> {
    if first.p() != 1 || second.p() != 1 {
        return Err(Error::InvalidParameter("product check needs two p = 1 test maps".into()));
    }
    let direction = |m: &TestMap, metric: &dyn ReferenceMetric| -> Result<(Vec<Complex64>, f64)> {
        let v = m.push_forward()?;
        let nv = v.norm(metric, m.basepoint_image());
        if !(nv > 0.0) {
            return Err(Error::DegenerateJacobian);
        }
        let coords: Vec<Complex64> = v.coords.iter().map(|c| c / nv).collect();
        let b = upper_bound(m, &PVector { n: m.n(), p: 1, coords: coords.clone() }, metric)?;
        Ok((coords, b))
    };
    let (z1, b1) = direction(first, metric_first.as_ref())?;
    let (z2, b2) = direction(second, metric_second.as_ref())?;
    let (n1, n2) = (first.n(), second.n());
    let lifted1: Vec<Complex64> = z1.iter().copied().chain(std::iter::repeat_n(zero(), n2)).collect();
    let lifted2: Vec<Complex64> = std::iter::repeat_n(zero(), n1).chain(z2.iter().copied()).collect();
    let zeta = PVector::wedge(&[lifted1, lifted2])?;

    let (e1, e2) = (first.evaluator().clone(), second.evaluator().clone());
    let eval: Evaluator = Arc::new(move |u: &[Complex64]| {
        let mut out = e1(&u[..1])?;
        out.extend(e2(&u[1..])?);
        Ok(out)
    });
    let radius = first.safety_radius().min(second.safety_radius());
    let product = TestMap::new(2, eval, radius, "product")?.with_fd_scale(first.fd_scale.max(second.fd_scale));
    let metric = ProductMetric { first: metric_first, second: metric_second, split: n1 };
    let bound_product = upper_bound(&product, &zeta, &metric)?;
    Ok(ProductReport {
        bound_first: b1,
        bound_second: b2,
        bound_product,
        residual: (bound_product - b1 * b2).abs() / bound_product,
    })
}
