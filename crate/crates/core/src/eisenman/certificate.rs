use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::metric::{FiberChordalMetric, ReferenceMetric};
use super::pvector::PVector;
use super::testmap::{upper_bound, Evaluator, TestMap};
use crate::binaryforms::{Chart, P1Point};
use crate::elliptic::DEFAULT_WP_TOL;
use crate::error::{Error, Result};
use crate::fibration::{FiberJacobian, WeierstrassFibration};

/// The base disk has radius `BASE_DISK_FRACTION` times the chordal distance
/// from `t₀` to the singular locus.
pub const BASE_DISK_FRACTION: f64 = 0.9;

/// Data shared by the polydisk maps `(u, v) ↦ F(z₀ + Ru, w₀ + rv)` at a base
/// point, independent of `R`.
#[derive(Clone, Debug)]
pub struct K3Basepoint {
    pub fibration: WeierstrassFibration,
    pub z0: Complex64,
    pub t0: P1Point,
    pub chart: Chart,
    pub w0: Complex64,
    /// Chordal distance from `t₀` to the singular locus.
    pub distance: f64,
    /// Radius of the base disk in the chart coordinate.
    pub r: f64,
    pub jacobian: FiberJacobian,
    /// `(℘(z₀), ℘′(z₀), w₀)`.
    pub image: [Complex64; 3],
}

impl K3Basepoint {
    /// Errors with `SingularFiber` when `t₀` is within `CLUSTER_EPS` of the
    /// singular locus, `Pole` when `z₀` is on the lattice of its fibre, and
    /// `DegenerateJacobian` when `∂F/∂z ∧ ∂F/∂w` vanishes.
    pub fn new(fibration: &WeierstrassFibration, z0: Complex64, t0: &P1Point) -> Result<Self> {
        if !z0.is_finite() {
            return Err(Error::InvalidParameter("z0 must be finite".into()));
        }
        let (regular, distance) = fibration.is_regular(t0);
        if !regular {
            return Err(Error::SingularFiber { distance });
        }
        let chart = t0.working_chart();
        let w0 = t0.chart_coordinate(chart).expect("working chart contains the point");
        let jacobian = fibration.jacobian_f(z0, t0, None, DEFAULT_WP_TOL)?;
        let (x, y) = fibration.wp_in_chart(z0, chart, w0, DEFAULT_WP_TOL)?;
        let wedge = PVector::wedge(&[jacobian.dz.to_vec(), jacobian.dt.to_vec()])?;
        let scale = PVector::wedge(&[jacobian.dz.to_vec()])?.norm(&FiberChordalMetric, &[x, y, w0]);
        if !(wedge.norm(&FiberChordalMetric, &[x, y, w0]) > super::testmap::DEGENERACY_TOL * scale) {
            return Err(Error::DegenerateJacobian);
        }
        Ok(K3Basepoint {
            fibration: fibration.clone(),
            z0,
            t0: *t0,
            chart,
            w0,
            distance,
            r: BASE_DISK_FRACTION * distance,
            jacobian,
            image: [x, y, w0],
        })
    }

    /// `∂F/∂z ∧ ∂F/∂w` at the base point.
    pub fn wedge(&self) -> PVector {
        PVector::wedge(&[self.jacobian.dz.to_vec(), self.jacobian.dt.to_vec()]).expect("two vectors in C^3")
    }

    /// The test map `(u, v) ↦ (℘, ℘′, w)` at `(z₀ + Ru, w₀ + rv)` with closed-form
    /// Jacobian columns `R·∂F/∂z` and `r·∂F/∂w`.
    ///
    /// The map is holomorphic into the surface on all of `ℂ × Δ`; the
    /// evaluator reports `Pole` at points where the fibre coordinate reaches
    /// the section, which lies outside the affine chart.
    pub fn test_map(&self, radius: f64) -> Result<TestMap> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter("R must be positive and finite".into()));
        }
        let (x, z0, chart, w0, r) = (self.fibration.clone(), self.z0, self.chart, self.w0, self.r);
        let eval: Evaluator = Arc::new(move |u: &[Complex64]| {
            let w = w0 + r * u[1];
            let (p, dp) = x.wp_in_chart(z0 + radius * u[0], chart, w, DEFAULT_WP_TOL)?;
            Ok(vec![p, dp, w])
        });
        let j = &self.jacobian;
        let rows = (0..3).map(|k| vec![j.dz[k] * radius, j.dt[k] * r]).collect();
        // the disk in v may be enlarged up to the singular locus
        let safety = 1.0 / BASE_DISK_FRACTION;
        let scale = radius.max(1.0) * (1.0 + self.image[1].norm().max(self.jacobian.dz[1].norm()));
        Ok(TestMap::new(2, eval, safety, format!("F(z0 + {radius}u, w0 + {r}v)"))?
            .with_jacobian(rows)?
            .with_fd_scale(scale))
    }
}

/// `(u, v) ↦ F(z₀ + Ru, t₀ + rv)` with `r = 0.9·d(t₀, S_X)` in the working
/// chart of `t₀`.
pub fn k3_test_map(fibration: &WeierstrassFibration, z0: Complex64, t0: &P1Point, radius: f64) -> Result<TestMap> {
    K3Basepoint::new(fibration, z0, t0)?.test_map(radius)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    #[serde(rename = "R")]
    pub radius: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificatePoint {
    pub z0: Complex64,
    /// Canonical homogeneous coordinates `[s : t]`.
    pub t0: [Complex64; 2],
    pub chart: Chart,
    pub w0: Complex64,
    /// `(x, y, w)` image of the origin.
    pub image: [Complex64; 3],
}

/// Upper bounds for the Eisenman volume at one point and direction of the
/// surface along a schedule of radii.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingCertificate {
    pub target: String,
    pub metric: String,
    pub point: CertificatePoint,
    /// Unit 2-vector in `Λ² ℂ³`, coordinates on `(x∧y, x∧w, y∧w)`.
    pub zeta: PVector,
    /// Base disk radius in the chart coordinate.
    pub r: f64,
    /// `‖∂F/∂z ∧ ∂F/∂w‖` in the reference metric.
    pub jacobian_norm: f64,
    /// Relative agreement of the closed-form `z`-column with central differences.
    pub z_check: f64,
    /// Richardson error estimate of the `w`-column.
    pub t_error: f64,
    /// Relative difference between `‖J‖` from the closed-form Jacobian and from
    /// central differences of the test map at the first radius.
    pub fd_check: f64,
    pub schedule: Vec<ScheduleEntry>,
    /// Least-squares slope of `log bound` against `log R`.
    pub slope: f64,
}

impl VanishingCertificate {
    pub fn strictly_decreasing(&self) -> bool {
        self.schedule.windows(2).all(|w| w[1].bound < w[0].bound) && self.schedule.iter().all(|e| e.bound > 0.0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("R,bound\n");
        for e in &self.schedule {
            out.push_str(&format!("{},{}\n", e.radius, e.bound));
        }
        out
    }
}

/// `n` radii evenly spaced in `log R` from `rmin` to `rmax`.
pub fn logspace(rmin: f64, rmax: f64, n: usize) -> Result<Vec<f64>> {
    if !(rmin > 0.0 && rmax > rmin && rmax.is_finite()) || n < 2 {
        return Err(Error::InvalidParameter("need 0 < rmin < rmax and at least two radii".into()));
    }
    let (a, b) = (rmin.ln(), rmax.ln());
    let mut v: Vec<f64> = (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect();
    v[0] = rmin;
    v[n - 1] = rmax;
    Ok(v)
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Certificate with the default reference metric; `zeta = None` uses the unit
/// direction of `∂F/∂z ∧ ∂F/∂w`.
pub fn vanishing_certificate(
    fibration: &WeierstrassFibration,
    z0: Complex64,
    t0: &P1Point,
    zeta: Option<&PVector>,
    schedule: &[f64],
) -> Result<VanishingCertificate> {
    vanishing_certificate_with_metric(fibration, z0, t0, zeta, schedule, &FiberChordalMetric)
}

pub fn vanishing_certificate_with_metric(
    fibration: &WeierstrassFibration,
    z0: Complex64,
    t0: &P1Point,
    zeta: Option<&PVector>,
    schedule: &[f64],
    metric: &dyn ReferenceMetric,
) -> Result<VanishingCertificate> {
    if schedule.len() < 2 {
        return Err(Error::InvalidParameter("schedule needs at least two radii".into()));
    }
    if !schedule.windows(2).all(|w| w[0] < w[1]) || !(schedule[0] > 0.0) || !schedule.iter().all(|r| r.is_finite()) {
        return Err(Error::InvalidParameter("schedule must be positive, finite and strictly increasing".into()));
    }
    let base = K3Basepoint::new(fibration, z0, t0)?;
    let x = base.image;
    let wedge = base.wedge();
    let jacobian_norm = wedge.norm(metric, &x);
    let zeta = match zeta {
        Some(z) => {
            let n = z.norm(metric, &x);
            if !(n > 0.0) {
                return Err(Error::DegenerateDirection { norm: n });
            }
            z.scale(Complex64::new(1.0 / n, 0.0))
        }
        None => wedge.scale(Complex64::new(1.0 / jacobian_norm, 0.0)),
    };

    let mut entries = Vec::with_capacity(schedule.len());
    let mut fd_check = 0.0;
    for (k, &radius) in schedule.iter().enumerate() {
        let m = base.test_map(radius)?;
        if k == 0 {
            let fd = m.fd_jacobian_at(&[Complex64::new(0.0, 0.0); 2])?;
            let cols: Vec<Vec<Complex64>> = (0..2).map(|c| fd.iter().map(|r| r[c]).collect()).collect();
            let fd_norm = PVector::wedge(&cols)?.norm(metric, &x);
            let closed = m.push_forward()?.norm(metric, &x);
            fd_check = (fd_norm - closed).abs() / closed;
        }
        entries.push(ScheduleEntry { radius, bound: upper_bound(&m, &zeta, metric)? });
    }
    let logs_r: Vec<f64> = entries.iter().map(|e| e.radius.ln()).collect();
    let logs_b: Vec<f64> = entries.iter().map(|e| e.bound.ln()).collect();
    let (s, t) = t0.canonical();
    Ok(VanishingCertificate {
        target: format!(
            "Weierstrass fibration, deg g2 = {}, deg g3 = {}, {} singular fibres",
            fibration.g2().degree(),
            fibration.g3().degree(),
            fibration.singular_locus().len()
        ),
        metric: metric.name(),
        point: CertificatePoint { z0, t0: [s, t], chart: base.chart, w0: base.w0, image: x },
        zeta,
        r: base.r,
        jacobian_norm,
        z_check: base.jacobian.z_check,
        t_error: base.jacobian.t_error,
        fd_check,
        schedule: entries,
        slope: least_squares_slope(&logs_r, &logs_b),
    })
}
