//! Cube-free binary words and the relators
//! `r'_n = c·w_n^1 · c·w_n^2 ⋯ c·w_n^{2^n}` built from the first `2^n`
//! cube-free words of length `9n`.

mod cube;
mod family;
mod inequality;

pub use cube::{count_cube_free, enumerate_cube_free, is_cube_free, is_cube_free_naive, CubeFreeEnumerator};
pub use family::{
    build_family_relator, family_presentation, relator_length, verify_family, FamilyError, FamilyReport, FamilySource,
    Subcollection, DEFAULT_BUDGET,
};
pub use inequality::{inequality_value, log2_inequality_value, threshold_backward, threshold_forward, Threshold};
