//! Selection and certification of well-invertible column subsets of a real
//! matrix, with exact brute-force oracles at desk scale.
//!
//! The crate houses three constructive selectors (volume-exchange local
//! search, the iterated shattering/domination pipeline, and an interlacing
//! greedy driven by expected characteristic polynomials), the closed-form
//! bound calculators they are compared against, and a CLI front end.

pub mod bounds;
pub mod error;
pub mod gen;
pub mod gia_select;
pub mod matlin;
pub mod mss_select;
pub mod oracle;
pub mod report;
pub mod test_util;
pub mod volume_select;

pub use error::{Error, Result};
pub use matlin::{Matrix, SelectionMethod, SubsetSelection, Weights};
