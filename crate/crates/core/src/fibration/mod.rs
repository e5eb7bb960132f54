//! Elliptic K3 surfaces with a section in Weierstrass form
//! `y²z = 4x³ − g₂(t)xz² − g₃(t)z³`, with `g₂` and `g₃` binary forms of
//! degrees 8 and 12 on P¹.
//!
//! Fibres over a point are evaluated in the working chart of that point
//! (`s = 1` when `|t| ≤ |s|`, otherwise `t = 1`); passing between the charts
//! multiplies `g₂` by the 8th and `g₃` by the 12th power of the transition
//! function, which rescales the fibre by `λ` with `λ⁴, λ⁶` and leaves `j`
//! unchanged.

mod kodaira;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::binaryforms::{discriminant_form, BinaryForm, Chart, P1Point, CLUSTER_EPS};
use crate::elliptic::{j_invariant, period_lattice, wp_both, CurveCoefficients, PeriodLattice, POLE_EPS};
use crate::error::{Error, Result};

pub use kodaira::{classify, kodaira_table_json, Bound, KodairaLabel, KodairaRule, KODAIRA_TABLE, KODAIRA_TABLE_VERSION};

/// `Δ` counts as identically zero when `‖Δ‖ ≤ DELTA_ZERO_REL · max(‖g₂‖³, 27‖g₃‖²)`.
const DELTA_ZERO_REL: f64 = 1e-12;

/// Relative threshold for vanishing Taylor coefficients of `g₂`, `g₃`.
const ORDER_TOL: f64 = 1e-7;

/// Default relative finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// A validated Weierstrass fibration with its discriminant and singular locus.
#[derive(Clone, Debug)]
pub struct WeierstrassFibration {
    g2: BinaryForm,
    g3: BinaryForm,
    delta: BinaryForm,
    singular: Vec<(P1Point, usize)>,
}

/// Kodaira type of the fibre over a point, with the vanishing orders that
/// determined it. `None` orders belong to identically zero coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KodairaFiber {
    pub label: KodairaLabel,
    pub ord_g2: Option<u32>,
    pub ord_g3: Option<u32>,
    pub ord_delta: u32,
}

impl WeierstrassFibration {
    /// Checks degrees 8 and 12 and that `Δ = g₂³ − 27g₃²` is not identically zero.
    pub fn validate(g2: BinaryForm, g3: BinaryForm) -> Result<Self> {
        let delta = discriminant_form(&g2, &g3)?;
        let scale = g2.norm().powi(3).max(27.0 * g3.norm().powi(2));
        if scale == 0.0 || delta.norm() <= DELTA_ZERO_REL * scale {
            return Err(Error::NoSmoothFibers);
        }
        let singular = delta.roots()?;
        Ok(WeierstrassFibration { g2, g3, delta, singular })
    }

    pub fn g2(&self) -> &BinaryForm {
        &self.g2
    }

    pub fn g3(&self) -> &BinaryForm {
        &self.g3
    }

    pub fn delta(&self) -> &BinaryForm {
        &self.delta
    }

    /// Zeros of `Δ` with multiplicities; they sum to 24.
    pub fn singular_locus(&self) -> &[(P1Point, usize)] {
        &self.singular
    }

    /// Chordal distance from `t` to the singular locus.
    pub fn distance_to_singular(&self, t: &P1Point) -> f64 {
        self.singular.iter().map(|(p, _)| p.chordal_distance(t)).fold(f64::INFINITY, f64::min)
    }

    /// Whether `t` is more than `CLUSTER_EPS` (chordally) from every point of
    /// `S_X`, together with that distance.
    pub fn is_regular(&self, t: &P1Point) -> (bool, f64) {
        let d = self.distance_to_singular(t);
        (d > CLUSTER_EPS, d)
    }

    fn ensure_regular(&self, t: &P1Point) -> Result<()> {
        match self.is_regular(t) {
            (true, _) => Ok(()),
            (false, distance) => Err(Error::SingularFiber { distance }),
        }
    }

    /// `(λ⁴g₂, λ⁶g₃)` for a nonzero constant `λ`.
    pub fn rescale(&self, lambda: Complex64) -> Result<Self> {
        if !(lambda.norm() > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter("rescaling factor must be finite and nonzero".into()));
        }
        let l4 = lambda.powi(4);
        let l6 = lambda.powi(6);
        Ok(WeierstrassFibration {
            g2: self.g2.scale(l4),
            g3: self.g3.scale(l6),
            delta: self.delta.scale(l6 * l6),
            singular: self.singular.clone(),
        })
    }

    /// Multiplicity of `p` in `S_X` (0 if `p` is regular).
    pub fn delta_order(&self, p: &P1Point) -> u32 {
        self.singular
            .iter()
            .filter(|(q, _)| q.chordal_distance(p) <= CLUSTER_EPS)
            .map(|(_, m)| *m as u32)
            .sum()
    }

    /// Kodaira type of the fibre over `p`; regular points give `Smooth`.
    pub fn kodaira_type(&self, p: &P1Point) -> Result<KodairaFiber> {
        let c = self.delta_order(p);
        let a = self.g2.order_at(p, ORDER_TOL);
        let b = self.g3.order_at(p, ORDER_TOL);
        let label = classify(a, b, c)?;
        Ok(KodairaFiber { label, ord_g2: a, ord_g3: b, ord_delta: c })
    }

    /// Kodaira types of all singular fibres, in the order of `S_X`.
    pub fn singular_fibers(&self) -> Result<Vec<(P1Point, KodairaFiber)>> {
        self.singular.iter().map(|(p, _)| Ok((*p, self.kodaira_type(p)?))).collect()
    }

    /// `(g₂, g₃)` at chart coordinate `w`, without regularity checks.
    pub fn curve_in_chart(&self, chart: Chart, w: Complex64) -> CurveCoefficients {
        CurveCoefficients::new(self.g2.eval_chart(chart, w), self.g3.eval_chart(chart, w))
    }

    /// The fibre over a regular point, in the point's working chart.
    pub fn fiber_curve(&self, t: &P1Point) -> Result<CurveCoefficients> {
        self.ensure_regular(t)?;
        let chart = t.working_chart();
        let w = t.chart_coordinate(chart).expect("working chart contains the point");
        let c = self.curve_in_chart(chart, w);
        c.ensure_nonsingular()?;
        Ok(c)
    }

    /// Period lattice of the fibre over a regular point.
    pub fn fiber_lattice(&self, t: &P1Point) -> Result<PeriodLattice> {
        period_lattice(&self.fiber_curve(t)?)
    }

    /// `j` of the fibre over a regular point.
    pub fn j_at(&self, t: &P1Point) -> Result<Complex64> {
        j_invariant(&self.fiber_curve(t)?)
    }

    /// `F(z, t) = [℘(z) : ℘′(z) : 1]` for the lattice of the fibre over `t`,
    /// and the section point `[0 : 1 : 0]` when `z` lies on that lattice.
    pub fn uniformize(&self, z: Complex64, t: &P1Point, tol: f64) -> Result<FiberPoint> {
        let lattice = self.fiber_lattice(t)?;
        match wp_both(z, &lattice, tol) {
            Ok((p, dp)) => FiberPoint::new(p, dp, Complex64::new(1.0, 0.0)),
            Err(Error::Pole { .. }) => Ok(FiberPoint::section()),
            Err(e) => Err(e),
        }
    }

    /// `(℘(z), ℘′(z))` for the fibre at chart coordinate `w`.
    pub fn wp_in_chart(&self, z: Complex64, chart: Chart, w: Complex64, tol: f64) -> Result<(Complex64, Complex64)> {
        let lattice = period_lattice(&self.curve_in_chart(chart, w))?;
        wp_both(z, &lattice, tol)
    }

    /// Derivatives of `(z, w) ↦ (℘(z), ℘′(z), w)`, with `w` the coordinate of
    /// `t` in its working chart.
    ///
    /// The `z`-row is the closed form `(℘′, 6℘² − g₂/2, 0)`, compared with
    /// central differences. The `w`-row uses central differences with step
    /// `h` and `h/2` combined by Richardson extrapolation; `h` defaults to
    /// `10⁻⁵(1 + |z|)` in `z` and `10⁻⁵(1 + |w|)` in `w`.
    pub fn jacobian_f(&self, z: Complex64, t: &P1Point, h: Option<f64>, tol: f64) -> Result<FiberJacobian> {
        let chart = t.working_chart();
        let w = t.chart_coordinate(chart).expect("working chart contains the point");
        let hz = h.unwrap_or(DEFAULT_FD_STEP * (1.0 + z.norm()));
        let hw = h.unwrap_or(DEFAULT_FD_STEP * (1.0 + w.norm()));
        if !(hz > 0.0 && hw > 0.0) {
            return Err(Error::InvalidParameter("finite-difference step must be positive".into()));
        }
        let distance = self.distance_to_singular(t);
        if distance <= 2.0 * hw {
            return Err(Error::SingularFiber { distance });
        }
        let curve = self.fiber_curve(t)?;
        let lattice = period_lattice(&curve)?;
        let (r, _) = lattice.reduce(z);
        let dl = lattice.distance_to_lattice(r);
        if dl <= 4.0 * hz + POLE_EPS * lattice.omega1().norm() {
            return Err(Error::Pole { distance: dl });
        }
        let (p, dp) = wp_both(z, &lattice, tol)?;
        let ddp = 6.0 * p * p - curve.g2 / 2.0;
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);

        let at_z = |dz: f64| wp_both(z + dz, &lattice, tol);
        let (pp, dpp) = at_z(hz)?;
        let (pm, dpm) = at_z(-hz)?;
        let fd_p = (pp - pm) / (2.0 * hz);
        let fd_dp = (dpp - dpm) / (2.0 * hz);
        let z_check = ((fd_p - dp).norm() / (1.0 + dp.norm())).max((fd_dp - ddp).norm() / (1.0 + ddp.norm()));

        let at_w = |dw: f64| self.wp_in_chart(z, chart, w + dw, tol);
        let central = |step: f64| -> Result<(Complex64, Complex64)> {
            let (a1, b1) = at_w(step)?;
            let (a0, b0) = at_w(-step)?;
            Ok(((a1 - a0) / (2.0 * step), (b1 - b0) / (2.0 * step)))
        };
        let (d1p, d1dp) = central(hw)?;
        let (d2p, d2dp) = central(hw / 2.0)?;
        let rp = (4.0 * d2p - d1p) / 3.0;
        let rdp = (4.0 * d2dp - d1dp) / 3.0;
        let t_error = (rp - d2p).norm().max((rdp - d2dp).norm());

        Ok(FiberJacobian {
            chart,
            dz: [dp, ddp, zero],
            dt: [rp, rdp, one],
            z_check,
            t_error,
        })
    }
}

/// Rows `∂/∂z` and `∂/∂w` of the map `(z, w) ↦ (x, y, w) = (℘, ℘′, w)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FiberJacobian {
    /// Chart of the base in which `w` is measured.
    pub chart: Chart,
    pub dz: [Complex64; 3],
    pub dt: [Complex64; 3],
    /// Relative disagreement between the closed-form `z`-row and central differences.
    pub z_check: f64,
    /// Richardson error estimate for the `w`-row.
    pub t_error: f64,
}

#[derive(Serialize, Deserialize)]
struct FibrationRepr {
    g2: BinaryForm,
    g3: BinaryForm,
}

impl Serialize for WeierstrassFibration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FibrationRepr { g2: self.g2.clone(), g3: self.g3.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeierstrassFibration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = FibrationRepr::deserialize(d)?;
        WeierstrassFibration::validate(repr.g2, repr.g3).map_err(D::Error::custom)
    }
}

/// A point `[x : y : z]` of the projective plane, stored with its
/// largest-modulus coordinate (first on ties) equal to 1.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FiberPoint {
    coords: [Complex64; 3],
}

impl FiberPoint {
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Result<Self> {
        let c = [x, y, z];
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let mut k = 0;
        for i in 1..3 {
            if c[i].norm() > c[k].norm() {
                k = i;
            }
        }
        if c[k].norm() == 0.0 {
            return Err(Error::InvalidPoint("[0:0:0] is not a point".into()));
        }
        let pivot = c[k];
        let mut coords = c.map(|v| v / pivot);
        coords[k] = Complex64::new(1.0, 0.0);
        Ok(FiberPoint { coords })
    }

    /// The point at infinity of every fibre, `[0 : 1 : 0]`.
    pub fn section() -> Self {
        let zero = Complex64::new(0.0, 0.0);
        FiberPoint { coords: [zero, Complex64::new(1.0, 0.0), zero] }
    }

    pub fn coords(&self) -> [Complex64; 3] {
        self.coords
    }

    pub fn is_section(&self) -> bool {
        self.approx_eq(&FiberPoint::section(), 1e-12)
    }

    /// `(x/z, y/z)`, or `None` on the line `z = 0`.
    pub fn affine(&self) -> Option<(Complex64, Complex64)> {
        let [x, y, z] = self.coords;
        (z.norm() > 0.0).then(|| (x / z, y / z))
    }

    /// All 2×2 minors of the canonical representatives below `tol`.
    pub fn approx_eq(&self, other: &FiberPoint, tol: f64) -> bool {
        let (a, b) = (self.coords, other.coords);
        (0..3).all(|i| (i + 1..3).all(|j| (a[i] * b[j] - a[j] * b[i]).norm() <= tol))
    }

    /// `|y²z − 4x³ + g₂xz² + g₃z³|` on the canonical representative.
    pub fn weierstrass_residual(&self, curve: &CurveCoefficients) -> f64 {
        let [x, y, z] = self.coords;
        (y * y * z - 4.0 * x * x * x + curve.g2 * x * z * z + curve.g3 * z * z * z).norm()
    }
}
