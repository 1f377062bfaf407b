//! Independent word-problem oracles for cross-checking Dehn reduction.

use crate::solver::WordSolver;
use scc_core::{Letter, Presentation, Word};
use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

/// Word problem for a one-relator group in which some generator `t` occurs
/// exactly once: `t` is eliminated and the group is free on the others, so
/// the free reduction of the substituted word is a canonical form.
#[derive(Clone, Debug)]
pub struct FreeElimination {
    eliminated: u16,
    image: Word,
}

impl FreeElimination {
    pub fn new(p: &Presentation) -> Option<Self> {
        let [r] = p.relators() else {
            return None;
        };
        let (pos, t) = (0..p.rank() as u16).find_map(|s| {
            let hits: Vec<usize> = r.iter().enumerate().filter(|(_, l)| l.symbol == s).map(|(k, _)| k).collect();
            (hits.len() == 1).then(|| (hits[0], r[hits[0]]))
        })?;
        // r = U t^ε V = 1 gives t^ε = U⁻¹ V⁻¹.
        let u = Word::from_letters(r[..pos].to_vec());
        let v = Word::from_letters(r[pos + 1..].to_vec());
        let power = u.invert().concat(&v.invert());
        let image = if t.inverse { power.invert() } else { power };
        Some(FreeElimination { eliminated: t.symbol, image })
    }

    pub fn eliminated(&self) -> Letter {
        Letter::gen(self.eliminated)
    }

    pub fn substitute(&self, w: &Word) -> Word {
        let mut out = Word::empty();
        for &l in w.iter() {
            if l.symbol == self.eliminated {
                let img = if l.inverse { self.image.invert() } else { self.image.clone() };
                for &m in img.iter() {
                    out.push_reduced(m);
                }
            } else {
                out.push_reduced(l);
            }
        }
        out
    }
}

impl WordSolver for FreeElimination {
    fn normalize(&self, w: &Word) -> Word {
        self.substitute(w)
    }

    fn key(&self, w: &Word) -> u64 {
        let mut h = DefaultHasher::new();
        w.hash(&mut h);
        h.finish()
    }

    fn canonical(&self) -> bool {
        true
    }
}

/// Every freely reduced word of length exactly `len` over `rank` generators,
/// in shortlex order.
pub fn reduced_words(rank: usize, len: usize) -> Vec<Word> {
    let letters: Vec<Letter> = (0..2 * rank as u32).map(Letter::from_code).collect();
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * (2 * rank));
        for w in &out {
            for &l in &letters {
                if w.last().is_some_and(|&x| x.cancels(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Number of elements of length at most `radius`: every reduced word of
/// length up to `radius` pushed through the canonical form, deduplicated.
pub fn naive_ball_size(oracle: &FreeElimination, rank: usize, radius: usize) -> usize {
    let mut seen = HashSet::new();
    for len in 0..=radius {
        for w in reduced_words(rank, len) {
            seen.insert(oracle.substitute(&w));
        }
    }
    seen.len()
}
