//! Brute-force reference implementations, straight from the definitions.
//! Quadratic or worse; meant for fixtures of a few hundred letters.

use scc_core::{Presentation, Word};
use std::collections::BTreeSet;

/// R̄ materialized as explicit, deduplicated words.
pub struct BruteForce {
    relators: Vec<Word>,
    members: Vec<Word>,
}

impl BruteForce {
    pub fn new(p: &Presentation) -> Self {
        let mut set = BTreeSet::new();
        for r in p.relators() {
            for w in [r.clone(), r.invert()] {
                for k in 0..w.len() {
                    set.insert(w.rotate(k).into_letters());
                }
            }
        }
        BruteForce { relators: p.relators().to_vec(), members: set.into_iter().map(Word::from_letters).collect() }
    }

    pub fn members(&self) -> &[Word] {
        &self.members
    }

    /// Number of distinct members having `u` as a prefix.
    pub fn prefix_count(&self, u: &Word) -> usize {
        self.members.iter().filter(|m| m.starts_with(u)).count()
    }

    pub fn is_piece(&self, u: &Word) -> bool {
        !u.is_empty() && self.prefix_count(u) >= 2
    }

    /// Every piece, found as a prefix of some member.
    pub fn pieces(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for m in &self.members {
            for l in 1..=m.len() {
                let u = Word::from_letters(m[..l].to_vec());
                if self.is_piece(&u) {
                    out.insert(u);
                } else {
                    break;
                }
            }
        }
        out
    }

    /// Every nonempty factor of every member (as a cyclic word read from each
    /// position, lengths up to the member length).
    pub fn all_factors(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for m in &self.members {
            for l in 1..=m.len() {
                out.insert(Word::from_letters(m[..l].to_vec()));
            }
        }
        out
    }

    /// Longest piece starting at vertex `q` of `C_i`, by trying every length.
    pub fn run(&self, i: usize, q: usize) -> usize {
        let r = &self.relators[i - 1];
        (1..=r.len()).take_while(|&l| self.is_piece(&r.cyclic_factor(q, l))).last().unwrap_or(0)
    }

    /// Longest piece read backward from vertex `q`, i.e. along `r_i⁻¹`.
    pub fn run_backward(&self, i: usize, q: usize) -> usize {
        let r = self.relators[i - 1].invert();
        let n = r.len();
        (1..=n).take_while(|&l| self.is_piece(&r.cyclic_factor((n - q % n) % n, l))).last().unwrap_or(0)
    }

    pub fn longest_piece(&self, i: usize) -> usize {
        (0..self.relators[i - 1].len()).map(|q| self.run(i, q)).max().unwrap_or(0)
    }

    /// Minimal number of pieces whose concatenation is `label`, by DP over all
    /// factorizations. `None` means no factorization exists.
    pub fn cover(&self, label: &Word) -> Option<u32> {
        let l = label.len();
        let mut best = vec![None::<u32>; l + 1];
        best[0] = Some(0);
        for e in 1..=l {
            best[e] = (0..e)
                .filter_map(|s| {
                    let b = best[s]?;
                    self.is_piece(&Word::from_letters(label[s..e].to_vec())).then_some(b + 1)
                })
                .min();
        }
        best[l]
    }
}
