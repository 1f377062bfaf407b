use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Deref;

/// A generator or its formal inverse.
///
/// The derived order is `a < A < b < B < ...`, which is the letter order used
/// for every shortlex comparison in the workspace.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Letter {
    pub symbol: u16,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(symbol: u16, inverse: bool) -> Self {
        Letter { symbol, inverse }
    }

    pub const fn gen(symbol: u16) -> Self {
        Letter { symbol, inverse: false }
    }

    pub const fn inv(self) -> Self {
        Letter { symbol: self.symbol, inverse: !self.inverse }
    }

    /// +1 for a generator, -1 for an inverse.
    pub const fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Dense code `2*symbol + inverse`; inverse pairs differ in the low bit.
    pub const fn code(self) -> u32 {
        2 * self.symbol as u32 + self.inverse as u32
    }

    pub const fn from_code(code: u32) -> Self {
        Letter { symbol: (code / 2) as u16, inverse: code % 2 == 1 }
    }

    /// ASCII rendering: lowercase for generators, uppercase for inverses.
    /// Only meaningful for symbols below 26.
    pub fn to_char(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        (base + (self.symbol % 26) as u8) as char
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.symbol == other.symbol && self.inverse != other.inverse
    }
}

/// A finite sequence of letters; not necessarily reduced.
///
/// The derived `Ord` is plain lexicographic; use [`Word::shortlex_cmp`] for
/// shortlex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub const fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Parses a word written with one ASCII letter per generator, where
    /// generator `k` is the `k`-th lowercase letter. Returns `None` on any other
    /// character.
    pub fn from_ascii(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                'a'..='z' => Some(Letter::gen(c as u16 - 'a' as u16)),
                'A'..='Z' => Some(Letter::new(c as u16 - 'A' as u16, true)),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l)
    }

    /// Appends `l` and cancels it against the last letter when possible.
    pub fn push_reduced(&mut self, l: Letter) {
        if self.0.last().is_some_and(|&last| last.cancels(l)) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The unique reduced word equal to `self` in the free group.
    pub fn free_reduce(&self) -> Word {
        let mut out = Word(Vec::with_capacity(self.len()));
        for &l in &self.0 {
            out.push_reduced(l);
        }
        out
    }

    /// Formal inverse: reverse the letters and flip every sign.
    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| !p[0].cancels(p[1]))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&f), Some(&l)) if self.len() > 1 => !f.cancels(l),
                _ => true,
            }
    }

    /// Splits a reduced word as `u · c · u⁻¹` with `c` cyclically reduced and
    /// returns `(c, u)`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let w = &self.0;
        let mut k = 0;
        while w.len() >= 2 * k + 2 && w[k].cancels(w[w.len() - 1 - k]) {
            k += 1;
        }
        (Word(w[k..w.len() - k].to_vec()), Word(w[..k].to_vec()))
    }

    /// Cyclic rotation starting at position `k` (taken modulo the length).
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut v = Vec::with_capacity(self.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Cyclic factor of length `len` starting at `start`.
    pub fn cyclic_factor(&self, start: usize, len: usize) -> Word {
        let n = self.len();
        Word((0..len).map(|j| self.0[(start + j) % n]).collect())
    }

    /// Shortlex order: shorter words first, then lexicographic in letter order.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    /// Renders with single ASCII letters (symbols must be below 26).
    pub fn to_ascii(&self) -> String {
        self.0.iter().map(|l| l.to_char()).collect()
    }
}

impl Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&self.to_ascii())
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
