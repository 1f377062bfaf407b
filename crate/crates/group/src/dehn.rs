use crate::invariants::Invariants;
use crate::solver::WordSolver;
use crate::GroupError;
use scc_core::{Letter, MemberOrigin, MemberRef, Presentation, Rational, Word};
use scc_pieces::{PieceIndex, Verdict};
use serde::Serialize;

/// A factor `w[start..start+len]` of a word that is a prefix of `member`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub start: usize,
    pub len: usize,
    #[serde(skip)]
    pub member: MemberRef,
    pub member_len: usize,
    pub origin: MemberOrigin,
}

/// Dehn's algorithm for a presentation certified `C'(λ)` with `λ ≤ 1/6`.
///
/// A nontrivial reduced word equal to 1 contains more than `(1−3λ)|r|` letters
/// of some member `r` of R̄, and replacing that factor `u` of `r = u·t` by
/// `t⁻¹` shortens the word.
pub struct DehnMachine {
    presentation: Presentation,
    index: PieceIndex,
    lambda: Rational,
    min_depth: usize,
    max_len: usize,
    invariants: Invariants,
}

impl DehnMachine {
    pub fn new(p: &Presentation, lambda: Rational) -> Result<Self, GroupError> {
        if lambda > Rational::new(1, 6) {
            return Err(GroupError::LambdaTooLarge(format!("{}/{}", lambda.numer(), lambda.denom())));
        }
        let index = PieceIndex::build(p)?;
        let report = index.check_small_cancellation(lambda);
        if report.verdict == Verdict::Fail {
            let worst = report
                .per_relator
                .iter()
                .find(|s| (s.longest_piece as u64) * lambda.denom() >= lambda.numer() * s.length as u64)
                .expect("a failing verdict has a failing relator");
            return Err(GroupError::NotSmallCancellation {
                lambda: report.lambda,
                relator: worst.index,
                piece: worst.longest_piece,
            });
        }
        let lens: Vec<usize> = (1..=index.relator_count()).map(|i| index.relator_len(i)).collect();
        let min_len = lens.iter().copied().min().unwrap_or(0);
        let mut m = DehnMachine {
            presentation: p.clone(),
            invariants: Invariants::new(p.rank(), p.relators()),
            index,
            lambda,
            min_depth: 1,
            max_len: lens.iter().copied().max().unwrap_or(0),
        };
        m.min_depth = (1..=min_len.max(1)).find(|&d| m.exceeds(d, min_len)).unwrap_or(1);
        Ok(m)
    }

    /// Certifies with `λ = 1/6`, the weakest condition Dehn reduction needs.
    pub fn sixth(p: &Presentation) -> Result<Self, GroupError> {
        Self::new(p, Rational::new(1, 6))
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn index(&self) -> &PieceIndex {
        &self.index
    }

    pub fn lambda(&self) -> Rational {
        self.lambda
    }

    pub fn invariants(&self) -> &Invariants {
        &self.invariants
    }

    /// `d > (1−3λ)·len`, compared exactly.
    fn exceeds(&self, d: usize, len: usize) -> bool {
        let (num, den) = (*self.lambda.numer() as u128, *self.lambda.denom() as u128);
        d as u128 * den > (den - 3 * num) * len as u128
    }

    /// Threshold `⌈(1−3λ)|r|⌉` for a member of length `len`; a factor
    /// qualifies when strictly longer than `(1−3λ)|r|`.
    pub fn threshold(&self, len: usize) -> usize {
        let (num, den) = (*self.lambda.numer() as u128, *self.lambda.denom() as u128);
        ((den - 3 * num) * len as u128).div_ceil(den) as usize
    }

    /// The leftmost start, then longest factor of `w` that is a prefix of a
    /// member `r` of R̄ with length `> (1−3λ)|r|`; ties go to the least member.
    pub fn greendlinger_factor(&self, w: &[Letter]) -> Option<Factor> {
        if self.max_len == 0 {
            return None;
        }
        let closure = self.index.closure();
        for start in 0..w.len() {
            if w.len() - start < self.min_depth {
                break;
            }
            let mut best: Option<(usize, MemberRef)> = None;
            self.index.walk_prefixes(&w[start..], |d, members| {
                if d > self.max_len {
                    return false;
                }
                if d >= self.min_depth {
                    let pick = members.filter(|&m| {
                        let len = closure.member_len(m);
                        len >= d && self.exceeds(d, len)
                    });
                    if let Some(m) = pick.min() {
                        best = Some((d, m));
                    }
                }
                true
            });
            if let Some((len, member)) = best {
                return Some(Factor {
                    start,
                    len,
                    member,
                    member_len: closure.member_len(member),
                    origin: closure.origin(member),
                });
            }
        }
        None
    }

    /// Repeatedly replaces a Greendlinger factor `u` of `r = u·t` by `t⁻¹` and
    /// freely reduces. The result is empty iff `w = 1` in the group.
    pub fn dehn_normalize(&self, w: &Word) -> Word {
        let closure = self.index.closure();
        let mut w = w.free_reduce();
        while let Some(f) = self.greendlinger_factor(&w) {
            let mut out = Word::empty();
            for &l in &w[..f.start] {
                out.push_reduced(l);
            }
            for j in (f.len..f.member_len).rev() {
                out.push_reduced(closure.member_letter(f.member, j).inv());
            }
            for &l in &w[f.start + f.len..] {
                out.push_reduced(l);
            }
            w = out;
        }
        w
    }
}

impl WordSolver for DehnMachine {
    fn normalize(&self, w: &Word) -> Word {
        self.dehn_normalize(w)
    }

    fn key(&self, w: &Word) -> u64 {
        self.invariants.key(w)
    }
}
