//! Upper bounds for Kobayashi–Eisenman pseudovolumes from explicit test maps.
//!
//! A holomorphic map `φ : Δᵖ → X` with `φ_*(∂/∂t₁ ∧ … ∧ ∂/∂t_p) = μ ζ` at the
//! origin bounds the p-pseudovolume at `(φ(0), ζ)` by `1/|μ|`. Norms are
//! taken in a declared [`ReferenceMetric`]. For an elliptic K3 surface the
//! maps `(u, v) ↦ F(z₀ + Ru, w₀ + rv)` exist for every `R`, so the bounds at a
//! regular point decay like `1/R`; [`vanishing_certificate`] records this
//! along a schedule of radii. Only upper bounds are computed.

mod certificate;
mod metric;
mod pvector;
mod testmap;

pub use certificate::{
    k3_test_map, logspace, vanishing_certificate, vanishing_certificate_with_metric, CertificatePoint, K3Basepoint,
    ScheduleEntry, VanishingCertificate, BASE_DISK_FRACTION,
};
pub use metric::{Euclidean, FiberChordalMetric, ProductMetric, ReferenceMetric, REFERENCE_METRIC_VERSION};
pub use pvector::PVector;
pub use testmap::{
    best_upper_bound, product_check, pullback_check, upper_bound, Evaluator, ProductReport, PullbackReport, TestMap,
    COLLINEARITY_TOL, DEGENERACY_TOL, HOLOMORPHY_TOL,
};
