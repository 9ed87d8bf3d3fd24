use thiserror::Error;

/// Errors produced by the collar-coordinate routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input is not finite")]
    NonFinite,

    #[error("tolerance must satisfy abs_tol > 0, rel_tol > 0, max_iter >= 1")]
    InvalidTolerance,

    #[error("value does not fit in double precision even in log scale")]
    DomainTooLarge,

    #[error("root finder did not converge after {iterations} iterations (last estimate {last})")]
    NoConvergence { iterations: usize, last: f64 },

    #[error("cross-section plane a+b+c = {0} does not meet the collar surface")]
    EmptySection(f64),

    #[error("length parameter must be positive, got {0}")]
    NonPositiveLength(f64),

    #[error("measure parameter must be non-negative, got {0}")]
    NegativeLength(f64),

    #[error("no twist sign reproduces the third triangle length (mismatch {0})")]
    Inconsistent(f64),

    #[error("point ({x}, {y}) is outside the annulus cover R x [-1, 1]")]
    OutOfDomain { x: f64, y: f64 },

    #[error("triangle lengths are not on the collar surface (normalized residual {0})")]
    NotOnH(f64),

    #[error("triangle lengths do not satisfy the triangle equality (defect {0})")]
    NotInDelta(f64),

    #[error("finite-difference step {step} too large at height {y}")]
    StepTooLarge { step: f64, y: f64 },

    #[error("depth estimate did not stabilize under grid refinement (change {0})")]
    GridTooCoarse(f64),

    #[error("transverse measures must be non-negative, got {0}")]
    NegativeMeasure(f64),

    #[error("element is not hyperbolic (|trace| = {0} is within rounding of <= 2)")]
    NotHyperbolic(f64),

    #[error("holonomy needs a > 0")]
    DegenerateA,

    #[error("word class ({0}, {1}) is outside the supported range |p|, |q| <= 3")]
    UnsupportedWord(i64, i64),

    #[error("cannot parse word: unexpected character {0:?} (use a, A, b, B)")]
    ParseWord(char),

    #[error("{0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
