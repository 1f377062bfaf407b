use crate::{CoreError, Letter, Presentation, Word};
use serde::{Deserialize, Serialize};
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

/// Where a member of R̄ comes from: rotation `rotation` of `r_relator`
/// (1-based), or of its inverse when `inverted`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberOrigin {
    pub relator: usize,
    pub rotation: usize,
    pub inverted: bool,
}

/// A member of R̄ addressed as rotation `rotation` of cyclic class `class`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemberRef {
    pub class: u32,
    pub rotation: u32,
}

/// One cyclic word of R̄, stored once; its members are the rotations
/// `0..period`.
#[derive(Clone, Debug)]
pub struct CyclicClass {
    pub word: Word,
    pub period: usize,
    pub origin_relator: usize,
    pub origin_inverted: bool,
}

/// The closure of the relators under cyclic conjugation and inversion.
///
/// Members are never materialized: each distinct cyclic word is stored once
/// and its `period` distinct rotations are the members. Relator orientations
/// that are rotations of one another share a class.
#[derive(Clone, Debug)]
pub struct SymmetrizedClosure {
    classes: Vec<CyclicClass>,
    member_base: Vec<usize>,
    orient: Vec<[(u32, u32); 2]>,
    relator_lengths: Vec<usize>,
}

/// Start index of the lexicographically least rotation (two-pointer scan, O(n)).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = &s[(i + k) % n];
        let b = &s[(j + k) % n];
        match a.cmp(b) {
            std::cmp::Ordering::Equal => k += 1,
            std::cmp::Ordering::Greater => {
                i += k + 1;
                if i <= j {
                    i = j + 1;
                }
                k = 0;
            }
            std::cmp::Ordering::Less => {
                j += k + 1;
                if j <= i {
                    j = i + 1;
                }
                k = 0;
            }
        }
    }
    i.min(j)
}

/// Smallest `d` dividing `|s|` such that `s` is a power of its prefix of
/// length `d`.
pub fn primitive_period<T: Eq>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut pi = vec![0u32; n];
    for i in 1..n {
        let mut k = pi[i - 1] as usize;
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1] as usize;
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k as u32;
    }
    let p = n - pi[n - 1] as usize;
    if n % p == 0 {
        p
    } else {
        n
    }
}

fn rotation_hash(w: &[Letter], start: usize) -> u64 {
    let mut h = DefaultHasher::new();
    w.len().hash(&mut h);
    for j in 0..w.len() {
        w[(start + j) % w.len()].hash(&mut h);
    }
    h.finish()
}

fn same_rotation(a: &[Letter], sa: usize, b: &[Letter], sb: usize) -> bool {
    a.len() == b.len() && (0..a.len()).all(|j| a[(sa + j) % a.len()] == b[(sb + j) % b.len()])
}

impl SymmetrizedClosure {
    pub fn new(p: &Presentation) -> Result<Self, CoreError> {
        Self::from_relators(p.relators())
    }

    pub fn from_relators(relators: &[Word]) -> Result<Self, CoreError> {
        let mut classes: Vec<CyclicClass> = Vec::new();
        let mut least: Vec<usize> = Vec::new();
        let mut by_hash: HashMap<u64, Vec<u32>> = HashMap::new();
        let mut orient = Vec::with_capacity(relators.len());
        for (i, r) in relators.iter().enumerate() {
            if r.is_empty() {
                return Err(CoreError::EmptyRelator { index: i + 1 });
            }
            if !r.is_cyclically_reduced() {
                return Err(CoreError::RelatorNotCyclicallyReduced { index: i + 1 });
            }
            let mut pair = [(0u32, 0u32); 2];
            for (slot, inverted) in [false, true].into_iter().enumerate() {
                let w = if inverted { r.invert() } else { r.clone() };
                let l = least_rotation(w.letters());
                let h = rotation_hash(&w, l);
                let found = by_hash.get(&h).and_then(|cands| {
                    cands.iter().copied().find(|&c| {
                        let cw = &classes[c as usize].word;
                        same_rotation(cw, least[c as usize], &w, l)
                    })
                });
                let c = match found {
                    Some(c) => c,
                    None => {
                        let c = classes.len() as u32;
                        let period = primitive_period(&w);
                        classes.push(CyclicClass { word: w, period, origin_relator: i + 1, origin_inverted: inverted });
                        least.push(l);
                        by_hash.entry(h).or_default().push(c);
                        c
                    }
                };
                let cl = &classes[c as usize];
                let offset = (least[c as usize] + cl.period * r.len() - l) % cl.period;
                pair[slot] = (c, offset as u32);
            }
            orient.push(pair);
        }
        let mut member_base = Vec::with_capacity(classes.len() + 1);
        let mut acc = 0;
        for c in &classes {
            member_base.push(acc);
            acc += c.period;
        }
        member_base.push(acc);
        Ok(SymmetrizedClosure {
            classes,
            member_base,
            orient,
            relator_lengths: relators.iter().map(|r| r.len()).collect(),
        })
    }

    pub fn classes(&self) -> &[CyclicClass] {
        &self.classes
    }

    pub fn relator_count(&self) -> usize {
        self.orient.len()
    }

    /// `|r_i|` for the 1-based index `i`.
    pub fn relator_len(&self, i: usize) -> usize {
        self.relator_lengths[i - 1]
    }

    pub fn num_members(&self) -> usize {
        *self.member_base.last().unwrap_or(&0)
    }

    pub fn is_empty(&self) -> bool {
        self.num_members() == 0
    }

    /// Dense id in `0..num_members()`.
    pub fn member_id(&self, m: MemberRef) -> usize {
        self.member_base[m.class as usize] + m.rotation as usize
    }

    pub fn member_base(&self, class: usize) -> usize {
        self.member_base[class]
    }

    pub fn member_ref(&self, id: usize) -> MemberRef {
        let c = self.member_base.partition_point(|&b| b <= id) - 1;
        MemberRef { class: c as u32, rotation: (id - self.member_base[c]) as u32 }
    }

    pub fn member_len(&self, m: MemberRef) -> usize {
        self.classes[m.class as usize].word.len()
    }

    /// Letter `j` of member `m`.
    pub fn member_letter(&self, m: MemberRef, j: usize) -> Letter {
        let w = &self.classes[m.class as usize].word;
        w[(m.rotation as usize + j) % w.len()]
    }

    pub fn member_word(&self, m: MemberRef) -> Word {
        self.classes[m.class as usize].word.rotate(m.rotation as usize)
    }

    pub fn origin(&self, m: MemberRef) -> MemberOrigin {
        let c = &self.classes[m.class as usize];
        MemberOrigin { relator: c.origin_relator, rotation: m.rotation as usize, inverted: c.origin_inverted }
    }

    /// The member reading `r_i` (or `r_i⁻¹` when `inverted`) from rotation `q`.
    pub fn member_at(&self, i: usize, inverted: bool, q: usize) -> MemberRef {
        let (c, off) = self.orient[i - 1][inverted as usize];
        let period = self.classes[c as usize].period;
        MemberRef { class: c, rotation: ((off as usize + q) % period) as u32 }
    }

    pub fn members(&self) -> impl Iterator<Item = MemberRef> + '_ {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(c, cl)| (0..cl.period).map(move |r| MemberRef { class: c as u32, rotation: r as u32 }))
    }

    /// All members as explicit words; only sensible for small presentations.
    pub fn member_words(&self) -> Vec<Word> {
        self.members().map(|m| self.member_word(m)).collect()
    }
}
