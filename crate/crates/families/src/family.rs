use crate::cube::{enumerate_cube_free, is_cube_free};
use crate::inequality::inequality_value;
use scc_core::{Letter, Presentation, Rational, Word};
use scc_pieces::streamed::RelatorSource;
use scc_pieces::{PieceError, PieceIndex, Verdict};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Default cap on the total closure length `2·Σ|r'_n|` for the dense index.
pub const DEFAULT_BUDGET: usize = 200_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("only {available} cube-free words of length {length}, {requested} requested")]
    NotEnoughWords { length: usize, requested: usize, available: usize },
    #[error("the family is defined for n ≥ 6, got n = {0}")]
    ParameterTooSmall(usize),
    #[error("closure length {needed} exceeds the budget of {budget} letters")]
    ResourceBudgetExceeded { needed: usize, budget: usize },
    #[error("empty range {lo}..={hi}")]
    EmptyRange { lo: usize, hi: usize },
    #[error(transparent)]
    Piece(#[from] PieceError),
}

const A: Letter = Letter::gen(0);
const B: Letter = Letter::gen(1);
const C: Letter = Letter::gen(2);

/// `|r'_n| = 2^n (9n + 1)`.
pub fn relator_length(n: usize) -> usize {
    (1usize << n) * (9 * n + 1)
}

/// Letters of `r'_n` over `{a, b, c}` (symbols 0, 1, 2), without the `n ≥ 6`
/// check. Used by the streamed source and by tests on small `n`.
pub fn family_letters(n: usize) -> Result<Vec<Letter>, FamilyError> {
    let words = enumerate_cube_free(9 * n, 1 << n)?;
    let mut out = Vec::with_capacity(relator_length(n));
    for w in words {
        out.push(C);
        out.extend(w.iter().map(|&x| if x == 0 { A } else { B }));
    }
    Ok(out)
}

/// `r'_n = Π_{i=1}^{2^n} c·w_n^i` with the `w_n^i` the first `2^n` cube-free
/// words of length `9n` in lexicographic order.
pub fn build_family_relator(n: usize) -> Result<Word, FamilyError> {
    if n < 6 {
        return Err(FamilyError::ParameterTooSmall(n));
    }
    Ok(Word::from_letters(family_letters(n)?))
}

/// The joint presentation `⟨a, b, c | r'_lo, …, r'_hi⟩`.
pub fn family_presentation(lo: usize, hi: usize) -> Result<Presentation, FamilyError> {
    Subcollection::range(lo, hi).presentation()
}

/// A finite subset of block parameters `n`, used to assemble sparse
/// subfamilies of `{r'_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subcollection {
    pub members: BTreeSet<usize>,
}

impl Subcollection {
    pub fn range(lo: usize, hi: usize) -> Self {
        Subcollection { members: (lo..=hi).collect() }
    }

    /// `n = lo + k` for every set bit `k` of `mask`.
    pub fn from_mask(lo: usize, mask: u64) -> Self {
        Subcollection { members: (0..64).filter(|k| mask >> k & 1 == 1).map(|k| lo + k).collect() }
    }

    /// Every `stride`-th parameter of `lo..=hi`.
    pub fn sparse(lo: usize, hi: usize, stride: usize) -> Self {
        Subcollection { members: (lo..=hi).step_by(stride.max(1)).collect() }
    }

    pub fn from_list(ns: impl IntoIterator<Item = usize>) -> Self {
        Subcollection { members: ns.into_iter().collect() }
    }

    pub fn closure_length(&self) -> usize {
        self.members.iter().map(|&n| 2 * relator_length(n)).sum()
    }

    pub fn presentation(&self) -> Result<Presentation, FamilyError> {
        if self.members.is_empty() {
            return Err(FamilyError::EmptyRange { lo: 0, hi: 0 });
        }
        let relators = self.members.iter().map(|&n| build_family_relator(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation::new(vec!['a', 'b', 'c'], relators).expect("family relators are cyclically reduced"))
    }
}

/// Generates `r'_n` on demand for the streamed piece probes.
pub struct FamilySource {
    pub ns: Vec<usize>,
}

impl RelatorSource for FamilySource {
    fn count(&self) -> usize {
        self.ns.len()
    }

    fn len(&self, i: usize) -> usize {
        relator_length(self.ns[i - 1])
    }

    fn codes(&self, i: usize) -> Vec<u8> {
        family_letters(self.ns[i - 1])
            .expect("enough cube-free words for every n")
            .into_iter()
            .map(|l| l.code() as u8)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub n: usize,
    pub relator_length: usize,
    pub longest_piece: usize,
    pub witness_position: usize,
    pub piece_bound: usize,
    pub cube_free: bool,
    /// `|r|/24 − p` as an exact fraction.
    pub c24_margin: String,
    pub passes_c24: bool,
    pub inequality_value: f64,
}

impl FamilyReport {
    pub fn within_piece_bound(&self) -> bool {
        self.longest_piece <= self.piece_bound
    }

    pub fn length_exact(&self) -> bool {
        self.relator_length == relator_length(self.n)
    }
}

/// Builds `r'_lo … r'_hi`, checks cube-freeness directly, and computes
/// `p(r'_n)` from one joint piece index.
pub fn verify_family(lo: usize, hi: usize, budget: usize) -> Result<Vec<FamilyReport>, FamilyError> {
    if lo < 6 {
        return Err(FamilyError::ParameterTooSmall(lo));
    }
    if hi < lo {
        return Err(FamilyError::EmptyRange { lo, hi });
    }
    let sub = Subcollection::range(lo, hi);
    let needed = sub.closure_length();
    if needed > budget {
        return Err(FamilyError::ResourceBudgetExceeded { needed, budget });
    }
    let p = sub.presentation()?;
    let cube_free: Vec<bool> = p.relators().iter().map(|r| is_cube_free(r.letters())).collect();
    let idx = PieceIndex::build(&p)?;
    let lambda = Rational::new(1, 24);
    let sc = idx.check_small_cancellation(lambda);
    Ok(sc
        .per_relator
        .iter()
        .zip(lo..=hi)
        .map(|(s, n)| {
            let margin = Rational::new(s.length as u64, 24);
            let p = Rational::from_integer(s.longest_piece as u64);
            let c24_margin = if margin >= p {
                let m = margin - p;
                format!("{}/{}", m.numer(), m.denom())
            } else {
                let m = p - margin;
                format!("-{}/{}", m.numer(), m.denom())
            };
            FamilyReport {
                n,
                relator_length: s.length,
                longest_piece: s.longest_piece,
                witness_position: s.witness_position,
                piece_bound: 18 * n + 1,
                cube_free: cube_free[s.index - 1],
                passes_c24: 24 * s.longest_piece < s.length,
                c24_margin,
                inequality_value: inequality_value(n),
            }
        })
        .collect::<Vec<_>>())
    .map(|reports| {
        debug_assert_eq!(sc.verdict == Verdict::Pass, reports.iter().all(|r| r.passes_c24));
        reports
    })
}
