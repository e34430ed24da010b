use thiserror::Error;

/// Errors raised by the numerical foundation layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error(
        "matrix is not Hermitian: |H[{row}][{col}] - conj(H[{col}][{row}])| = {deviation:e} exceeds {tolerance:e}"
    )]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
        tolerance: f64,
    },
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error("expected {expected} entries for a {dim}x{dim} matrix, got {got}")]
    ShapeMismatch {
        dim: usize,
        expected: usize,
        got: usize,
    },
    #[error("eigenvalue iteration did not converge within {iterations} sweeps")]
    NoConvergence { iterations: usize },
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample abscissae must be strictly increasing (index {index})")]
    NotIncreasing { index: usize },
}

/// Errors raised by the physics layers (model, states, entanglement, phase, ribbon).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("curvature B = 0 leaves the ratio M/B undefined")]
    ZeroCurvature,
    #[error("missing parameter {0}")]
    MissingParameter(&'static str),
    #[error("bulk spinor is singular at A*kz = 0 (A = {a}, kz = {kz})")]
    SingularSpinor { a: f64, kz: f64 },
    #[error("no surface state in trivial phase (M/B = {ratio})")]
    TrivialPhase { ratio: f64 },
    #[error("decay constants do not decay into z > 0 (A/B = {ratio})")]
    NonDecaying { ratio: f64 },
    #[error("degenerate decay constants: A^2 = 4MB makes the envelope vanish identically")]
    DegenerateDecay,
    #[error("oscillatory regime: A^2 - 4MB = {discriminant} < 0 gives complex decay constants")]
    Oscillatory { discriminant: f64 },
    #[error("position z = {0} lies outside the half-space z >= 0")]
    NegativeDepth(f64),
    #[error("state is not normalized: norm^2 = {0}")]
    Unnormalized(f64),
    #[error("critical point undefined: {0}")]
    CriticalUndefined(&'static str),
    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),
    #[error("every grid point is singular for this sweep")]
    AllPointsSingular,
    #[error("invalid ribbon configuration: {0}")]
    InvalidRibbon(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
