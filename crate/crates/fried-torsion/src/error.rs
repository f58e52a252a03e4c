use thiserror::Error;

/// Errors raised by the graded calculus, the section computations and the drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("map of shift {shift} is not square at degree zero: {op} needs a degree-0 endomorphism")]
    NotDegreeZero { op: &'static str, shift: i32 },
    #[error("missing differential: {0}")]
    MissingDifferential(&'static str),
    #[error("not a differential: |{name}^2| = {residual:e} exceeds {tolerance:e}")]
    NotDifferential { name: &'static str, residual: f64, tolerance: f64 },
    #[error("complex is not exact: cohomology dims {dims:?}")]
    NotExact { dims: Vec<usize> },
    #[error("infeasible dims {dims:?}: {reason}")]
    InfeasibleDims { dims: Vec<usize>, reason: String },
    #[error("singular map: {0}")]
    Singular(String),
    #[error("frame mismatch: {0}")]
    FrameMismatch(String),
    #[error("gamma axiom fails: {identity} residual {residual:e}")]
    GammaAxiom { identity: &'static str, residual: f64 },
    #[error("eigenvalue {re}+{im}i lies on the cutoff circle |z| = {cutoff}")]
    CutoffOnSpectrum { cutoff: f64, re: f64, im: f64 },
    #[error("pole of order {order} at the requested point")]
    Pole { order: i64 },
    #[error("invalid cohomology representatives: {0}")]
    BadRepresentatives(String),
    #[error("model is not hyperbolic: {0}")]
    NotHyperbolic(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
