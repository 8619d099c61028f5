//! Exact and asymptotic analysis of the peak polynomials evaluated at `t = -1`.
//!
//! - [`series`]: exact truncated power series over rationals, including the
//!   scaled tanh kernel.
//! - [`peaks`]: peak statistics, the peak-polynomial recurrence and the
//!   generating-function route to `f_n = P_n(-1)`.
//! - [`bignum`]: arbitrary-precision real and complex scalars.
//! - [`asymptotics`]: poles, residues, the leading-term predictor and the
//!   sign-pattern analysis.
//! - [`verify`]: the cross-module check suite.

pub mod asymptotics;
pub mod bignum;
pub mod peaks;
pub mod series;
pub mod verify;

pub use bignum::{BigComplex, BigReal};
pub use peaks::{
    evaluate_gf_at_t, evaluate_polynomial, f_sequence, peak_polynomial_enum, peak_polynomial_rec,
    pk_count, FSequence, PeakError, PeakPolynomial,
};
pub use series::{tanh_scaled, EgfSeries, Rational, SeriesError};
