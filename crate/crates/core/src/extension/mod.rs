//! Constructive side: decompositions in closed ideals, extensions of finite
//! data, and the test polynomials behind the dominating-norm probe.

pub mod function;
pub mod omega;
pub mod patchwork;
pub mod representative;
pub mod test_polynomial;

pub use function::{
    Constant, Difference, IdealSpec, JetFunction, ReciprocalZeros, ScaledBumpProduct, Sine,
};
pub use omega::{omega_decompose, OmegaDecomposition, OmegaParams};
pub use patchwork::{
    estimate_norm, GridSpec, NormEstimate, PatchworkFunction, Piece, DEFAULT_POINTS_PER_PATCH,
};
pub use representative::{
    construct_extension, quotient_norm_sandwich, Extension, ExtensionParams, Sandwich,
};
pub use test_polynomial::{
    build_test_polynomial, dn_probe, verify_test_polynomial_bounds, BoundCheck, DnProbe,
    DnProbePoint, TestPolynomialReport,
};
