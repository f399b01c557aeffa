//! Point sets, divided differences, Hermite interpolation and Whitney seminorms.

pub mod newton;
pub mod pointset;
pub mod whitney;

pub use newton::{
    divided_difference, divided_differences, hermite_interpolant, hermite_interpolant_in_frame, DividedDifferences,
    NewtonPolynomial,
};
pub use pointset::{HermiteData, PointSet, SampleFunction};
pub use whitney::{whitney_seminorm, WhitneyNorm, DEFAULT_TUPLE_BUDGET};
