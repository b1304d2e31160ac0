//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("division by zero polynomial")]
    DivisionByZeroPoly,
    #[error("zero polynomial has no root count")]
    ZeroPolynomial,
    #[error("interval is empty")]
    EmptyInterval,
    #[error("bound must be positive")]
    NonPositiveBound,
}

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("alpha {0} outside the accepted range (-4, 2)")]
    AlphaOutOfRange(f64),
    #[error("growth bound M must be positive, got {0}")]
    NonPositiveM(f64),
    #[error("custom family: index {index} beyond table of length {len} and no extension rule")]
    CustomIndexOutOfRange { index: u32, len: usize },
    #[error("custom family requires a coupling table")]
    MissingCustomTable,
    #[error("formula parse error: {0}")]
    Formula(String),
}

#[derive(Debug, Error)]
pub enum SymbolicError {
    #[error("order k_max={0} outside supported range 1..=14")]
    OrderOutOfRange(usize),
    #[error("term at order {k} has lead power {lead} above -(k-1); recursion bug")]
    InconsistentLeadPower { k: usize, lead: i64 },
    #[error("expansion order {got} below required {need}")]
    OrderTooSmall { got: usize, need: usize },
    #[error("P_k(k-1) is identically zero for odd k={0}")]
    OddOrder(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error)]
pub enum NumericError {
    #[error("unsupported precision {0} bits (supported: 64..=8192)")]
    UnsupportedPrecision(usize),
    #[error("contour quadrature did not converge: last {last:?}, previous {prev:?}")]
    QuadratureNonConvergence {
        last: (f64, f64),
        prev: (f64, f64),
    },
    #[error("contour oracle requires n >= 2, got {0}")]
    ContourSmallN(u32),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("eigensolver did not reach residual {tol} (worst {worst}); partial results kept")]
    ResidualTooLarge {
        tol: f64,
        worst: f64,
        partial: Vec<nalgebra::Complex<f64>>,
    },
    #[error("schur iteration failed for dimension {0}")]
    IterationFailure(usize),
    #[error("eigenvalue continuation ambiguous at z = {z}; collision suspected")]
    Collision { z: nalgebra::Complex<f64> },
    #[error("eigenvalue E_{n} is degenerate at z = {z} (gap {gap} to branch {other})")]
    DegenerateEigenvalue {
        n: u32,
        other: usize,
        z: nalgebra::Complex<f64>,
        gap: f64,
    },
    #[error("need at least {need} usable radius estimates, got {got}")]
    TooFewEstimates { need: usize, got: usize },
    #[error("root test needs at least {need} nonzero even-order tail coefficients, got {got}")]
    TooFewCoefficients { need: usize, got: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("alpha {0} outside [0, 2)")]
    AlphaOutOfRange(f64),
    #[error("lemma hypothesis alpha < 2 - 2/k violated: alpha = {alpha}, k = {k}")]
    LemmaHypothesis { alpha: f64, k: usize },
    #[error("golden table: {0}")]
    Golden(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
