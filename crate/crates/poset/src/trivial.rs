use scc_pieces::{Cover, PieceIndex};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrivialityStatus {
    /// The running maximum stopped increasing in the second half of the range.
    BoundedSoFar,
    Growing,
}

/// Full-cycle piece counts `min_s cover(C_i from s)` for `i = 1..=N`. A
/// count of `None` means the relator is not a product of pieces at all.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialityReport {
    pub upto: usize,
    pub counts: Vec<Option<u32>>,
    pub running_max: Vec<Option<u32>>,
    pub status: TrivialityStatus,
    /// Indices at which the running maximum strictly increased.
    pub witnesses: Vec<usize>,
}

fn key(c: Option<u32>) -> u64 {
    c.map_or(u64::MAX, u64::from)
}

pub fn tc_triviality(idx: &PieceIndex, upto: usize) -> TrivialityReport {
    let upto = upto.min(idx.relator_count());
    let counts: Vec<Option<u32>> = (1..=upto)
        .map(|i| match idx.full_cycle_cover(i) {
            Cover::Finite(k) => Some(k),
            Cover::Infinite => None,
        })
        .collect();
    let mut running_max = Vec::with_capacity(upto);
    let mut witnesses = Vec::new();
    let mut cur: Option<Option<u32>> = None;
    for (k, &c) in counts.iter().enumerate() {
        if cur.map_or(true, |m| key(c) > key(m)) {
            cur = Some(c);
            witnesses.push(k + 1);
        }
        running_max.push(cur.unwrap());
    }
    let recent = upto - upto.div_ceil(2);
    let status = if witnesses.iter().any(|&i| i > recent.max(1)) {
        TrivialityStatus::Growing
    } else {
        TrivialityStatus::BoundedSoFar
    };
    TrivialityReport { upto, counts, running_max, status, witnesses }
}
