//! Exact arithmetic substrate: rational polynomials, rational functions,
//! truncated power series in `w = 1/n`, and Sturm-sequence certification.

pub mod poly;
pub mod ratfn;
pub mod series;
pub mod sturm;

pub use poly::{rat, rat_int, AlphaPoly, RatPoly};
pub use ratfn::RationalFunction;
pub use series::{binom_alpha, expand_rational, expand_shifted_power, PowerSeries};
pub use sturm::{certify_bound, roots_in_interval, sturm_roots, RatInterval};
