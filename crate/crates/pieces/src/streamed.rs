//! Low-memory piece probing for relator sets too large for the dense index.
//!
//! Relators are produced on demand by a [`RelatorSource`], so only the
//! relator under study and one other relator are resident at a time. A probe
//! answers "does `r_i` contain a piece of length `L`" by hashing every cyclic
//! window of length `L` of `r_i` and streaming the windows of `r_i⁻¹` and of
//! every other relator and its inverse past that table. Hash hits are
//! confirmed letter by letter, so answers are exact. Memory is about
//! 17 bytes per letter of `r_i` plus the largest other relator.
//!
//! Distinct positions only give distinct members of R̄ when the relators are
//! primitive and pairwise non-conjugate (also to their own inverses);
//! [`check_generic`] verifies this up front.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use thiserror::Error;

/// Relators as byte codes `Letter::code()` (inverse pairs differ in bit 0).
pub trait RelatorSource {
    fn count(&self) -> usize;
    /// `|r_i|` without generating the relator.
    fn len(&self, i: usize) -> usize;
    fn codes(&self, i: usize) -> Vec<u8>;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StreamError {
    #[error("relator r_{0} is a proper power")]
    ProperPower(usize),
    #[error("relator r_{0} is conjugate to its inverse")]
    SelfInverse(usize),
    #[error("relators r_{0} and r_{1} are conjugate up to inversion")]
    Conjugate(usize, usize),
}

const MODULUS: u64 = (1 << 61) - 1;
const BASE: u64 = 0x5bd1_e995_3c6e_f372 % MODULUS;

fn mul(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & MODULUS;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

/// Rolling hashes of every cyclic window of length `len` of `w`, in order of
/// start position.
fn cyclic_windows(w: &[u8], len: usize) -> impl Iterator<Item = u64> + '_ {
    let n = w.len();
    let mut top = 1u64;
    for _ in 1..len {
        top = mul(top, BASE);
    }
    let mut h = 0u64;
    for k in 0..len {
        h = add(mul(h, BASE), w[k % n] as u64 + 1);
    }
    (0..n).map(move |q| {
        let out = h;
        let leaving = w[q] as u64 + 1;
        let entering = w[(q + len) % n] as u64 + 1;
        h = add(mul(sub(h, mul(leaving, top)), BASE), entering);
        out
    })
}

fn windows_equal(a: &[u8], qa: usize, b: &[u8], qb: usize, len: usize) -> bool {
    (0..len).all(|k| a[(qa + k) % a.len()] == b[(qb + k) % b.len()])
}

fn inverse_codes(w: &[u8]) -> Vec<u8> {
    w.iter().rev().map(|&c| c ^ 1).collect()
}

fn prefix_function(p: &[u8]) -> Vec<u32> {
    let mut pi = vec![0u32; p.len()];
    for i in 1..p.len() {
        let mut k = pi[i - 1] as usize;
        while k > 0 && p[i] != p[k] {
            k = pi[k - 1] as usize;
        }
        if p[i] == p[k] {
            k += 1;
        }
        pi[i] = k as u32;
    }
    pi
}

/// True iff `b` is a rotation of `a` (equal lengths assumed).
fn is_rotation(a: &[u8], b: &[u8]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let pi = prefix_function(a);
    let mut k = 0usize;
    for t in 0..2 * b.len() {
        let c = b[t % b.len()];
        while k > 0 && a[k] != c {
            k = pi[k - 1] as usize;
        }
        if a[k] == c {
            k += 1;
        }
        if k == a.len() {
            return true;
        }
    }
    false
}

fn is_primitive(w: &[u8]) -> bool {
    let n = w.len();
    let pi = prefix_function(w);
    let p = n - pi[n - 1] as usize;
    !(p < n && n % p == 0)
}

/// Verifies the conditions under which window positions are member identities.
pub fn check_generic(src: &impl RelatorSource) -> Result<(), StreamError> {
    for i in 1..=src.count() {
        let r = src.codes(i);
        if !is_primitive(&r) {
            return Err(StreamError::ProperPower(i));
        }
        let inv = inverse_codes(&r);
        if is_rotation(&r, &inv) {
            return Err(StreamError::SelfInverse(i));
        }
        for j in i + 1..=src.count() {
            if src.len(j) != r.len() {
                continue;
            }
            let s = src.codes(j);
            if is_rotation(&r, &s) || is_rotation(&inv, &s) {
                return Err(StreamError::Conjugate(i, j));
            }
        }
    }
    Ok(())
}

/// A vertex of `C_i` from which a piece of length `len` is read, if any.
/// Assumes [`check_generic`] passed.
pub fn piece_of_length(src: &impl RelatorSource, i: usize, len: usize) -> Option<usize> {
    let r = src.codes(i);
    let n = r.len();
    if len == 0 {
        return Some(0);
    }
    if len > n {
        return None;
    }
    let mut first: HashMap<u64, u32> = HashMap::with_capacity(n);
    let mut extra: HashMap<u64, Vec<u32>> = HashMap::new();
    for (q, h) in cyclic_windows(&r, len).enumerate() {
        match first.entry(h) {
            Entry::Vacant(e) => {
                e.insert(q as u32);
            }
            Entry::Occupied(e) => {
                let q0 = *e.get() as usize;
                if windows_equal(&r, q0, &r, q, len) {
                    return Some(q0);
                }
                let others = extra.entry(h).or_default();
                if let Some(&q1) = others.iter().find(|&&q1| windows_equal(&r, q1 as usize, &r, q, len)) {
                    return Some(q1 as usize);
                }
                others.push(q as u32);
            }
        }
    }
    let lookup = |s: &[u8]| -> Option<usize> {
        for (t, h) in cyclic_windows(s, len).enumerate() {
            if let Some(&q0) = first.get(&h) {
                if windows_equal(&r, q0 as usize, s, t, len) {
                    return Some(q0 as usize);
                }
                if let Some(others) = extra.get(&h) {
                    if let Some(&q1) = others.iter().find(|&&q1| windows_equal(&r, q1 as usize, s, t, len)) {
                        return Some(q1 as usize);
                    }
                }
            }
        }
        None
    };
    if let Some(q) = lookup(&inverse_codes(&r)) {
        return Some(q);
    }
    for j in (1..=src.count()).filter(|&j| j != i && src.len(j) >= len) {
        let s = src.codes(j);
        if let Some(q) = lookup(&s).or_else(|| lookup(&inverse_codes(&s))) {
            return Some(q);
        }
    }
    None
}

/// `p(r_i)` and a realizing vertex by binary search over probe lengths in
/// `[lo, hi]`, where a piece of length `lo` is assumed to exist.
pub fn longest_piece_between(src: &impl RelatorSource, i: usize, lo: usize, hi: usize) -> (usize, usize) {
    let (mut lo, mut hi) = (lo, hi.min(src.len(i)));
    let mut witness = piece_of_length(src, i, lo).unwrap_or(0);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        match piece_of_length(src, i, mid) {
            Some(q) => {
                lo = mid;
                witness = q;
            }
            None => hi = mid - 1,
        }
    }
    (lo, witness)
}

pub fn longest_piece(src: &impl RelatorSource, i: usize) -> (usize, usize) {
    longest_piece_between(src, i, 0, src.len(i))
}

impl RelatorSource for scc_core::Presentation {
    fn count(&self) -> usize {
        self.relators().len()
    }

    fn len(&self, i: usize) -> usize {
        self.relator(i).len()
    }

    fn codes(&self, i: usize) -> Vec<u8> {
        self.relator(i).iter().map(|l| l.code() as u8).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PieceIndex;
    use scc_core::Presentation;

    #[test]
    fn matches_dense_index() {
        for rels in
            [&["abAB"][..], &["abcab", "cbcA"], &["aabAbb", "bbaBaa"], &["abcabcaabcc", "bcbcaaCbbc", "aaccbcbAbc"]]
        {
            let p = Presentation::from_ascii(rels).unwrap();
            check_generic(&p).unwrap();
            let idx = PieceIndex::build(&p).unwrap();
            for i in 1..=rels.len() {
                assert_eq!(longest_piece(&p, i).0, idx.longest_piece(i).0, "{rels:?} r_{i}");
            }
        }
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let p = Presentation::from_ascii(&["abab"]).unwrap();
        assert_eq!(check_generic(&p), Err(StreamError::ProperPower(1)));
        let p = Presentation::from_ascii(&["abAB", "BAba"]).unwrap();
        assert!(matches!(check_generic(&p), Err(StreamError::SelfInverse(1)) | Err(StreamError::Conjugate(1, 2))));
        let p = Presentation::from_ascii(&["aabb", "abba"]).unwrap();
        assert_eq!(check_generic(&p), Err(StreamError::Conjugate(1, 2)));
    }

    #[test]
    fn rolling_hash_matches_direct_hash() {
        let w = b"\x01\x02\x03\x01\x02\x05";
        let direct: Vec<u64> = (0..w.len())
            .map(|q| (0..4).fold(0u64, |h, k| add(mul(h, BASE), w[(q + k) % w.len()] as u64 + 1)))
            .collect();
        assert_eq!(cyclic_windows(w, 4).collect::<Vec<_>>(), direct);
    }
}
