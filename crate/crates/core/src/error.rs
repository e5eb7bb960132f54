use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall into two families: validation problems with the input data
/// (wrong degrees, degenerate discriminants, malformed vectors) and numerical
/// failures (non-convergence, unattainable tolerances, poles). The CLI maps
/// the first family to exit code 2 and the second to exit code 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("coefficient count {count} does not match declared degree {degree}")]
    CoefficientCount { degree: usize, count: usize },

    #[error("the zero form has no well-defined roots")]
    ZeroForm,

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("discriminant vanishes identically: no smooth fibers")]
    NoSmoothFibers,

    #[error("degenerate cubic: g2^3 - 27 g3^2 = 0")]
    DegenerateCubic,

    #[error("point lies on the singular locus (chordal distance {distance:e})")]
    SingularFiber { distance: f64 },

    #[error("non-minimal Weierstrass data: ord(g2) = {a}, ord(g3) = {b}")]
    NonMinimal { a: u32, b: u32 },

    #[error("vanishing orders ({a}, {b}, {c}) match no Kodaira type")]
    UnclassifiedFiber { a: u32, b: u32, c: u32 },

    #[error("lattice vector length {found} does not match rank {rank}")]
    LengthMismatch { rank: usize, found: usize },

    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),

    #[error("degenerate Gram matrix (determinant zero)")]
    DegenerateGram,

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("invalid lattice basis: Im(omega2/omega1) must be nonzero")]
    InvalidLatticeBasis,

    #[error("z lies on the lattice (distance {distance:e}): pole")]
    Pole { distance: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("tolerance {tol:e} unachievable within resource limits")]
    ToleranceUnachievable { tol: f64 },

    #[error("degenerate Jacobian: pushed-forward p-vector vanishes")]
    DegenerateJacobian,

    #[error("pushed-forward p-vector is not collinear with zeta (residual {residual:e})")]
    NonCollinear { residual: f64 },

    #[error("decreasing property degenerate direction: h_* zeta has norm {norm:e}")]
    DegenerateDirection { norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    Parse(String),
}

impl Error {
    /// Whether the error stems from a numerical failure rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::ToleranceUnachievable { .. }
                | Error::DegenerateJacobian
                | Error::NonCollinear { .. }
                | Error::Pole { .. }
        )
    }

    /// Short machine-readable identifier used in CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegreeMismatch { .. } => "degree_mismatch",
            Error::CoefficientCount { .. } => "coefficient_count",
            Error::ZeroForm => "zero_form",
            Error::InvalidPoint(_) => "invalid_point",
            Error::NoSmoothFibers => "no_smooth_fibers",
            Error::DegenerateCubic => "degenerate_cubic",
            Error::SingularFiber { .. } => "singular_fiber",
            Error::NonMinimal { .. } => "non_minimal",
            Error::UnclassifiedFiber { .. } => "unclassified_fiber",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::InvalidGram(_) => "invalid_gram",
            Error::DegenerateGram => "degenerate_gram",
            Error::ZeroVector => "zero_vector",
            Error::InvalidLatticeBasis => "invalid_lattice_basis",
            Error::Pole { .. } => "pole",
            Error::NoConvergence { .. } => "no_convergence",
            Error::ToleranceUnachievable { .. } => "tolerance_unachievable",
            Error::DegenerateJacobian => "degenerate_jacobian",
            Error::NonCollinear { .. } => "non_collinear",
            Error::DegenerateDirection { .. } => "degenerate_direction",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
