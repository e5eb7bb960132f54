//! Binary forms on the projective line.
//!
//! A [`BinaryForm`] of degree `d` is a homogeneous polynomial
//! `f(s, t) = Σ coeffs[k] · s^(d-k) · t^k`, i.e. a section of `O(d)` on P¹.
//! In the affine chart `s = 1` it is a polynomial of degree at most `d` in `t`;
//! a deficit in the affine degree is a root at `∞ = [0:1]`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative magnitude below which a leading/trailing coefficient counts as zero
/// when splitting off the roots at `∞` and `0`.
const COEFF_ZERO_REL: f64 = 1e-13;

/// Cluster radius factor: roots within `1e-6 · (1 + max|root|)` are merged.
pub const CLUSTER_EPS: f64 = 1e-6;

/// A point `[s : t]` of P¹.
///
/// Stored with the larger-modulus coordinate scaled to exactly one, so that
/// `max(|s|, |t|) = 1`. Equality is projective.
#[derive(Clone, Copy, Debug)]
pub struct P1Point {
    s: Complex64,
    t: Complex64,
}

/// Affine chart on P¹ used to evaluate forms: `S` is `s = 1` with coordinate
/// `t/s`, `T` is `t = 1` with coordinate `s/t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    S,
    T,
}

impl P1Point {
    pub fn new(s: Complex64, t: Complex64) -> Result<Self> {
        if !(s.is_finite() && t.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        if s.norm() == 0.0 && t.norm() == 0.0 {
            return Err(Error::InvalidPoint("[0:0] is not a point of P1".into()));
        }
        Ok(if s.norm() >= t.norm() {
            P1Point { s: Complex64::new(1.0, 0.0), t: t / s }
        } else {
            P1Point { s: s / t, t: Complex64::new(1.0, 0.0) }
        })
    }

    /// The affine point `[1 : t]`.
    pub fn affine(t: Complex64) -> Self {
        P1Point::new(Complex64::new(1.0, 0.0), t).expect("s = 1 is never the zero pair")
    }

    pub fn infinity() -> Self {
        P1Point { s: Complex64::new(0.0, 0.0), t: Complex64::new(1.0, 0.0) }
    }

    pub fn is_infinity(&self) -> bool {
        self.s.norm() == 0.0
    }

    /// Canonical representative with `max(|s|, |t|) = 1`.
    pub fn canonical(&self) -> (Complex64, Complex64) {
        (self.s, self.t)
    }

    /// Representative `(1, t/s)` for finite points and `(0, 1)` at infinity.
    pub fn affine_rep(&self) -> (Complex64, Complex64) {
        if self.is_infinity() {
            (self.s, self.t)
        } else {
            (Complex64::new(1.0, 0.0), self.t / self.s)
        }
    }

    /// Affine coordinate `t/s`, or `None` at infinity.
    pub fn affine_coordinate(&self) -> Option<Complex64> {
        if self.is_infinity() {
            None
        } else {
            Some(self.t / self.s)
        }
    }

    /// The chart in which this point has coordinate of modulus at most one.
    pub fn working_chart(&self) -> Chart {
        if self.s.norm() >= self.t.norm() {
            Chart::S
        } else {
            Chart::T
        }
    }

    /// Coordinate of the point in the given chart, `None` if it is the
    /// chart's missing point.
    pub fn chart_coordinate(&self, chart: Chart) -> Option<Complex64> {
        match chart {
            Chart::S if self.s.norm() > 0.0 => Some(self.t / self.s),
            Chart::T if self.t.norm() > 0.0 => Some(self.s / self.t),
            _ => None,
        }
    }

    /// Point with the given coordinate in `chart`.
    pub fn from_chart(chart: Chart, w: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        match chart {
            Chart::S => P1Point::new(one, w).expect("nonzero"),
            Chart::T => P1Point::new(w, one).expect("nonzero"),
        }
    }

    /// Chordal (Fubini–Study chord) distance, in `[0, 1]`.
    pub fn chordal_distance(&self, other: &P1Point) -> f64 {
        let num = (self.s * other.t - self.t * other.s).norm();
        let den = (self.s.norm_sqr() + self.t.norm_sqr()).sqrt()
            * (other.s.norm_sqr() + other.t.norm_sqr()).sqrt();
        num / den
    }

    /// Projective equality within a chordal tolerance.
    pub fn approx_eq(&self, other: &P1Point, tol: f64) -> bool {
        self.chordal_distance(other) <= tol
    }
}

impl PartialEq for P1Point {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, 1e-12)
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.affine_coordinate() {
            None => write!(f, "inf"),
            Some(t) => write!(f, "{}{:+}i", t.re, t.im),
        }
    }
}

/// A homogeneous form of fixed degree on P¹ with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl BinaryForm {
    /// `coeffs[k]` multiplies `s^(degree-k) t^k`.
    pub fn new(degree: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != degree + 1 {
            return Err(Error::CoefficientCount { degree, count: coeffs.len() });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parse("non-finite coefficient".into()));
        }
        Ok(BinaryForm { degree, coeffs })
    }

    pub fn from_real(degree: usize, coeffs: &[f64]) -> Result<Self> {
        Self::new(degree, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm { degree, coeffs: vec![Complex64::new(0.0, 0.0); degree + 1] }
    }

    /// The monomial `c · s^(degree-k) t^k`.
    pub fn monomial(degree: usize, k: usize, c: Complex64) -> Self {
        assert!(k <= degree, "monomial exponent exceeds degree");
        let mut f = Self::zero(degree);
        f.coeffs[k] = c;
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `‖f‖ = max |coeff|`.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    /// Evaluate at an explicit homogeneous pair.
    pub fn eval_pair(&self, s: Complex64, t: Complex64) -> Complex64 {
        // Homogeneous Horner: ((c_d s^0) t + c_{d-1} s) t + ...
        let mut acc = Complex64::new(0.0, 0.0);
        let mut s_pow = Complex64::new(1.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c * s_pow;
            s_pow *= s;
        }
        acc
    }

    /// Evaluate at the point's affine representative `(1, t/s)` (or `(0, 1)` at ∞).
    pub fn eval(&self, p: &P1Point) -> Complex64 {
        let (s, t) = p.affine_rep();
        self.eval_pair(s, t)
    }

    /// Polynomial in `t` obtained in the chart `s = 1`.
    pub fn eval_affine(&self, t: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c)
    }

    /// Evaluate in a chart at chart coordinate `w`.
    pub fn eval_chart(&self, chart: Chart, w: Complex64) -> Complex64 {
        self.chart_polynomial(chart).iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c)
    }

    /// Ascending coefficients of the dehomogenized polynomial in the chart coordinate.
    pub fn chart_polynomial(&self, chart: Chart) -> Vec<Complex64> {
        match chart {
            Chart::S => self.coeffs.clone(),
            Chart::T => self.coeffs.iter().rev().cloned().collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        BinaryForm { degree: self.degree, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn multiply(&self, other: &BinaryForm) -> Self {
        let degree = self.degree + other.degree;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        BinaryForm { degree, coeffs }
    }

    pub fn power(&self, k: u32) -> Self {
        let mut out = BinaryForm::new(0, vec![Complex64::new(1.0, 0.0)]).expect("constant");
        for _ in 0..k {
            out = out.multiply(self);
        }
        out
    }

    pub fn add(&self, other: &BinaryForm) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn subtract(&self, other: &BinaryForm) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Order of vanishing at `p`, measured by Taylor coefficients in the
    /// point's working chart. Coefficients at most `rel_tol · ‖f‖ · (1+|w|)^d`
    /// count as zero. Returns `None` for the zero form.
    pub fn order_at(&self, p: &P1Point, rel_tol: f64) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let chart = p.working_chart();
        let w = p.chart_coordinate(chart).expect("working chart contains the point");
        let taylor = taylor_shift(&self.chart_polynomial(chart), w);
        let scale = self.norm() * (1.0 + w.norm()).powi(self.degree as i32);
        let threshold = rel_tol * scale;
        let k = taylor.iter().position(|c| c.norm() > threshold);
        Some(k.unwrap_or(self.degree + 1) as u32)
    }

    /// Roots on P¹ with multiplicities summing to the degree.
    ///
    /// The root at `∞` is read from the affine degree deficit and the root at
    /// `0` from vanishing low-order coefficients; the remaining affine roots
    /// come from Aberth–Ehrlich iteration followed by clustering with radius
    /// `1e-6 · (1 + max|root|)`. Nearby clusters are then merged when their
    /// spread is what rounding does to a multiple root. Finite roots are sorted by real then
    /// imaginary part and `∞`, if present, comes last.
    pub fn roots(&self) -> Result<Vec<(P1Point, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let zero_cut = COEFF_ZERO_REL * self.norm();
        let hi = self
            .coeffs
            .iter()
            .rposition(|c| c.norm() > zero_cut)
            .expect("nonzero form has a significant coefficient");
        let lo = self.coeffs.iter().position(|c| c.norm() > zero_cut).expect("nonzero");
        let mult_inf = self.degree - hi;

        let mut out: Vec<(Complex64, usize)> = Vec::new();
        if lo > 0 {
            out.push((Complex64::new(0.0, 0.0), lo));
        }
        if hi > lo {
            let poly: Vec<Complex64> = self.coeffs[lo..=hi].to_vec();
            let raw = aberth_roots(&poly)?;
            let mut clustered = merge_multiple_roots(&poly, cluster_roots(&raw));
            // Roots of the reduced polynomial that collapsed onto zero.
            if lo > 0 {
                let eps = CLUSTER_EPS;
                if let Some(pos) = clustered.iter().position(|(r, _)| r.norm() <= eps) {
                    let (_, m) = clustered.remove(pos);
                    out[0].1 += m;
                }
            }
            out.extend(clustered);
        }
        out.sort_by(|a, b| {
            a.0.re
                .partial_cmp(&b.0.re)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.0.im.partial_cmp(&b.0.im).unwrap_or(std::cmp::Ordering::Equal))
        });
        let mut roots: Vec<(P1Point, usize)> =
            out.into_iter().map(|(r, m)| (P1Point::affine(r), m)).collect();
        if mult_inf > 0 {
            roots.push((P1Point::infinity(), mult_inf));
        }
        Ok(roots)
    }
}

/// Coefficients of `p(w + h)` in powers of `h` (ascending input and output).
pub(crate) fn taylor_shift(ascending: &[Complex64], w: Complex64) -> Vec<Complex64> {
    let mut c = ascending.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let v = c[j + 1] * w;
            c[j] += v;
        }
    }
    c
}

/// `g2^3 - 27 g3^2` for `g2` of degree 8 and `g3` of degree 12.
pub fn discriminant_form(g2: &BinaryForm, g3: &BinaryForm) -> Result<BinaryForm> {
    if g2.degree() != 8 {
        return Err(Error::DegreeMismatch { expected: 8, found: g2.degree() });
    }
    if g3.degree() != 12 {
        return Err(Error::DegreeMismatch { expected: 12, found: g3.degree() });
    }
    g2.power(3).subtract(&g3.power(2).scale(Complex64::new(27.0, 0.0)))
}

fn poly_eval_with_derivative(asc: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in asc.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of the polynomial with ascending coefficients `asc`
/// (leading coefficient nonzero), by simultaneous Aberth–Ehrlich iteration.
pub(crate) fn aberth_roots(asc: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = asc.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = asc[n];
    if n == 1 {
        return Ok(vec![-asc[0] / lead]);
    }
    // Fujiwara-style bound for the initial circle.
    let radius = (0..n)
        .map(|k| (asc[k] / lead).norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let center = -asc[n - 1] / (lead * n as f64);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            center + Complex64::from_polar(radius, theta)
        })
        .collect();

    const MAX_ITER: usize = 1000;
    let mut converged = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all_done = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (p, dp) = poly_eval_with_derivative(asc, z[i]);
            if p.norm() == 0.0 {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let step = if denom.norm() == 0.0 || !ratio.is_finite() { Complex64::new(0.0, 0.0) } else { ratio / denom };
            if !step.is_finite() {
                converged[i] = true;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z[i].norm()) {
                converged[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return Ok(z);
        }
    }
    // Multiple roots converge slowly and stall at the attainable accuracy;
    // accept the iterate if residuals are at rounding level.
    let scale: f64 = asc.iter().map(|c| c.norm()).sum();
    let ok = z.iter().all(|&r| {
        let (p, _) = poly_eval_with_derivative(asc, r);
        p.norm() <= 1e-8 * scale * (1.0 + r.norm()).powi(n as i32)
    });
    if ok {
        Ok(z)
    } else {
        Err(Error::NoConvergence { what: "Aberth root iteration", iterations: MAX_ITER })
    }
}

/// Relative rounding level of polynomial evaluation.
const EVAL_ROUNDING: f64 = 64.0 * f64::EPSILON;

/// Merges nearby clusters into one root of multiplicity `m` when their spread
/// about the centroid `c` is at most `4 (δ/|aₘ|)^{1/m}`: the spread an m-fold
/// root acquires from a perturbation of size `δ`, the rounding level of `p`
/// near `c`, with `aₘ` the m-th Taylor coefficient of `p` at `c`.
fn merge_multiple_roots(poly: &[Complex64], mut clusters: Vec<(Complex64, usize)>) -> Vec<(Complex64, usize)> {
    loop {
        let mut best: Option<(Vec<usize>, Complex64, usize)> = None;
        for i in 0..clusters.len() {
            let mut order: Vec<usize> = (0..clusters.len()).collect();
            let d = |j: usize| (clusters[j].0 - clusters[i].0).norm();
            order.sort_by(|&a, &b| d(a).partial_cmp(&d(b)).unwrap_or(std::cmp::Ordering::Equal));
            for k in 2..=order.len() {
                let group = &order[..k];
                let m: usize = group.iter().map(|&j| clusters[j].1).sum();
                if m >= poly.len() {
                    break;
                }
                let c = group.iter().map(|&j| clusters[j].0 * clusters[j].1 as f64).sum::<Complex64>() / m as f64;
                let spread = group.iter().map(|&j| (clusters[j].0 - c).norm()).fold(0.0, f64::max);
                if spread > 1e-2 * (1.0 + c.norm()) {
                    break;
                }
                let am = taylor_shift(poly, c)[m].norm();
                let delta = EVAL_ROUNDING * poly.iter().rev().fold(0.0, |acc, a| acc * c.norm() + a.norm());
                if am > 0.0 && spread <= 4.0 * (delta / am).powf(1.0 / m as f64) && best.as_ref().is_none_or(|b| m > b.2)
                {
                    best = Some((group.to_vec(), c, m));
                }
            }
        }
        let Some((group, c, m)) = best else {
            return clusters.into_iter().map(|(c, m)| (polish_multiple_root(poly, c, m), m)).collect();
        };
        let mut rest: Vec<(Complex64, usize)> =
            clusters.iter().enumerate().filter(|(j, _)| !group.contains(j)).map(|(_, x)| *x).collect();
        rest.push((c, m));
        clusters = rest;
    }
}

/// Newton iteration on `p^{(m−1)}`, for which an m-fold root of `p` is simple.
/// The result is kept only if it stays within `1e-2·(1 + |c|)` of `c`.
fn polish_multiple_root(poly: &[Complex64], c: Complex64, m: usize) -> Complex64 {
    if m < 2 || m >= poly.len() {
        return c;
    }
    let mut z = c;
    for _ in 0..50 {
        let t = taylor_shift(poly, z);
        // p^{(m−1)}(z + h) ∝ a_{m−1} + m a_m h + …
        let step = t[m - 1] / (t[m] * m as f64);
        if !step.is_finite() {
            return c;
        }
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    if (z - c).norm() <= 1e-2 * (1.0 + c.norm()) {
        z
    } else {
        c
    }
}

/// Single-linkage clustering with radius `CLUSTER_EPS · (1 + max|root|)`;
/// each cluster is replaced by its mean.
pub(crate) fn cluster_roots(roots: &[Complex64]) -> Vec<(Complex64, usize)> {
    let n = roots.len();
    if n == 0 {
        return Vec::new();
    }
    let max_abs = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let eps = CLUSTER_EPS * (1.0 + max_abs);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = i;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() <= eps {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj.max(ri)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += roots[i];
                g.2 += 1;
            }
            None => groups.push((r, roots[i], 1)),
        }
    }
    groups.into_iter().map(|(_, sum, m)| (sum / m as f64, m)).collect()
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    degree: usize,
    coeffs: Vec<[f64; 2]>,
}

// On the wire coefficients run from the lowest power of s upwards, which is
// the reverse of the in-memory order.
impl Serialize for BinaryForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FormRepr {
            degree: self.degree,
            coeffs: self.coeffs.iter().rev().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BinaryForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = FormRepr::deserialize(deserializer)?;
        let coeffs = repr.coeffs.iter().rev().map(|c| Complex64::new(c[0], c[1])).collect();
        BinaryForm::new(repr.degree, coeffs).map_err(serde::de::Error::custom)
    }
}
