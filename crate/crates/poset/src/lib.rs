//! Finite shadows of the thin-cone poset: exact comparison profiles between
//! symbolic generating sets, the index-set mixtures used to embed
//! `P(ω)/Fin`, and the bounded-piece-count test for `|TC(P)| = 1`.

mod mix;
mod profile;
mod trivial;

pub use mix::{
    laced_pair, mix_antichain, mix_pfin, pick_antipodal_bases, rule_le, split_witnesses, witness_indices,
    AntichainMixture, IndexSetMixture, DEFAULT_WITNESS_THRESHOLD,
};
pub use profile::{compare_profile, max_chord_distance, ComparisonProfile, ProfileEntry};
pub use trivial::{tc_triviality, TrivialityReport, TrivialityStatus};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("X² ⊄ X¹ at relator {index}: {small} is not contained in {large}")]
    SpecNotNested { index: usize, small: String, large: String },
    #[error("index {index} lies in both I_A and J_A")]
    OverlappingIndexSets { index: usize },
    #[error("position {position} outside the {len} witness indices")]
    BadPosition { position: usize, len: usize },
    #[error("range 1..={upto} exceeds the {count} relators")]
    BadRange { upto: usize, count: usize },
    #[error(transparent)]
    Cone(#[from] scc_cones::ConeError),
}
