use thiserror::Error;

/// Errors raised by every module of the crate.
///
/// Variants split into domain errors (bad input, violated preconditions)
/// and numerical failures (quadrature, integration); see [`Error::is_numerical`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty sequence")]
    EmptySequence,

    #[error("invalid scalar {0:?}: expected \"p/q\", an integer or a decimal")]
    ParseScalar(String),

    #[error("non-finite input {0}")]
    NonFinite(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("points coincide: {0}")]
    CoincidentPoints(String),

    #[error("collinear triple: {0}")]
    Collinear(String),

    #[error("alpha must be a rational >= 1, got {0}")]
    InvalidCone(String),

    #[error("cone too large to enumerate: {0}")]
    ConeTooLarge(String),

    #[error("sail has fewer than two vertices")]
    DegenerateSail,

    #[error("invalid LLS sequence: {0}")]
    InvalidLls(String),

    #[error("degenerate frame: observation point, first vertex and first edge are collinear")]
    DegenerateFrame,

    /// O, A_k and A_{k+1} lie on one line.
    #[error("degenerate polyline at edge {index}: observation point and edge are collinear")]
    DegeneratePolyline { index: usize },

    #[error("singular linear map (determinant zero)")]
    SingularMatrix,

    #[error("invalid curve parameters: {0}")]
    InvalidPreset(String),

    #[error("parameter {t} outside curve domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("degenerate areal density at t = {t}: radius vector and tangent are collinear")]
    DegenerateDensity { t: f64 },

    #[error("curve is not regular at t = {t}")]
    NotRegular { t: f64 },

    #[error("no finite curve: |A| = {a} exceeds radius {r}")]
    NoCurve { a: f64, r: f64 },

    #[error("radicand 1 - A^2/r^2 = {radicand} at t = {t}: density inconsistent with a unit-speed curve")]
    InconsistentDensity { t: f64, radicand: f64 },

    #[error("quadrature did not converge on [{a}, {b}] (estimated error {error:e})")]
    Quadrature { a: f64, b: f64, error: f64 },

    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. }
                | Error::Integration { .. }
                | Error::InconsistentDensity { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
