//! Perturbation series for eigenvalues of tri-diagonal operator families
//! `L + zB` (diagonal `k^2`, off-diagonal couplings growing like `k^alpha`).
//!
//! The crate has three layers:
//!
//! - exact: [`algebra`] (rational polynomials, series in `w = 1/n`, Sturm
//!   certification) and [`symbolic`] (the Rayleigh-Schrodinger term engine
//!   producing the asymptotic polynomials `P_k(j, alpha)` exactly);
//! - numeric: [`mp`] (multiprecision scalars) and [`numeric`] (the same
//!   recursion in floating point for any family, plus an independent
//!   contour-integral oracle);
//! - spectral: [`spectra`] (truncated spectra, eigenvalue continuation,
//!   branch-point search, convergence-radius estimates) and [`verify`]
//!   (executable forms of the coefficient and radius bounds).

pub mod algebra;
pub mod error;
pub mod family;
pub mod mp;
pub mod numeric;
pub mod spectra;
pub mod symbolic;
pub mod verify;

pub use error::{AlgebraError, FamilyError, NumericError, SpectraError, SymbolicError, VerifyError};
pub use family::{FamilyKind, FamilySpec, TriDiagonalMatrix, C64};

/// Output schema version stamped into every JSON export.
pub const SCHEMA_VERSION: u32 = 1;
