//! Grid checkers for the sufficient and necessary criteria, the sequence
//! catalog, and the classification driver.

pub mod classify;
pub mod dn;
pub mod necessary;
pub mod ratio;
pub mod select;
pub mod sequence;
pub mod sufficient;
pub mod verdict;

pub use classify::{classify, ClassifyParams, Classification, Overall};
pub use dn::{check_dn, dn_diverges, dn_sequence_q, DnSweep};
pub use necessary::{check_necessary_point, check_necessary_points, necessary_point_cell};
pub use ratio::{check_ratio, check_vogt, ratio_trajectory, VogtReport};
pub use select::{ladder_exponent, select_regular_points, Scheme, Selection, Selector};
pub use sequence::{Family, SequenceSpec, SequenceTerms};
pub use sufficient::{
    check_sufficient, check_sufficient_multi, sufficient_cell, CellOutcome, SufficientParams,
};
pub use verdict::{fit_line, trend, EpsGrid, Num, Series, SlopeFit, Status, Verdict, Witness};
