//! Scalar types, jets and the bump partition of unity.

pub mod bump;
pub mod field;
pub mod jet;
pub mod log_signed;
pub mod scalar;

pub use bump::{bump_jet, bump_value, psi_jet, scaled_patch_jet};
pub use field::{binomial, factorial, Field, Rational, Real};
pub use jet::Jet;
pub use log_signed::{ln_1m_exp, LogSigned};
pub use scalar::{precision, set_precision, Scalar, DEFAULT_PRECISION};
