//! Dense linear-algebra core: SVD with caching, Schatten norms, the stable
//! rank family, orthogonal-complement projectors, dual bases and their
//! leverages, brute-force grid norms, and restriction certificates.

pub(crate) mod dual;
pub mod io;
mod matrix;
pub mod norms;

pub use dual::DualBasis;
pub use matrix::{Matrix, SelectionMethod, SubsetSelection, SvdFactors, Weights};
pub use norms::{norm_2_to_1, norm_inf_to_2};

/// Relative threshold (against the top singular value) below which a singular
/// value is treated as zero.
pub const RANK_REL_TOL: f64 = 1e-10;

/// Default cap on the brute-force sign enumeration in [`norm_inf_to_2`].
pub const EXACT_CAP: usize = 22;
