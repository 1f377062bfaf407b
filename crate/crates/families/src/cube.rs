use crate::FamilyError;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

/// Direct check: no `w₀w₀w₀` factor for any start and period. Cubic time.
pub fn is_cube_free_naive<T: Eq>(w: &[T]) -> bool {
    let n = w.len();
    for p in 1..=n / 3 {
        for s in 0..=n - 3 * p {
            if (s + p..s + 3 * p).all(|t| w[t] == w[t - p]) {
                return false;
            }
        }
    }
    true
}

const MODULUS: u64 = (1 << 61) - 1;
const BASE: u64 = 0x2f0e_7a1b_94c3_d5e9 % MODULUS;

fn mulmod(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let s = ((p as u64) & MODULUS) + (p >> 61) as u64;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

struct Hashed {
    prefix: Vec<u64>,
    pow: Vec<u64>,
}

impl Hashed {
    fn new(keys: &[u64]) -> Self {
        let mut prefix = Vec::with_capacity(keys.len() + 1);
        let mut pow = Vec::with_capacity(keys.len() + 1);
        prefix.push(0);
        pow.push(1);
        for &k in keys {
            let h = mulmod(*prefix.last().unwrap(), BASE) + k % MODULUS;
            prefix.push(if h >= MODULUS { h - MODULUS } else { h });
            pow.push(mulmod(*pow.last().unwrap(), BASE));
        }
        Hashed { prefix, pow }
    }

    fn get(&self, start: usize, len: usize) -> u64 {
        let a = self.prefix[start + len];
        let b = mulmod(self.prefix[start], self.pow[len]);
        if a >= b {
            a - b
        } else {
            a + MODULUS - b
        }
    }
}

/// Letters compared directly before an extension falls back to hashing.
const SCAN: usize = 16;

/// True iff no nonempty `w₀` has `w₀³` as a factor.
///
/// For each period `p` only the sample points `j ≡ 0 (mod p)` are examined:
/// a cube of period `p` contains some `j` with `w[j-b..j+p+f]` `p`-periodic and
/// `b + f ≥ 2p`. The forward and backward extensions are bounded through
/// rolling hashes, which can only overestimate; every candidate is then
/// confirmed letter by letter. Runs in `O(n log² n)`.
pub fn is_cube_free<T: Eq + Hash>(w: &[T]) -> bool {
    let n = w.len();
    if n < 64 {
        return is_cube_free_naive(w);
    }
    let keys: Vec<u64> = w
        .iter()
        .map(|x| {
            let mut h = DefaultHasher::new();
            x.hash(&mut h);
            h.finish() % (MODULUS - 1) + 1
        })
        .collect();
    let hs = Hashed::new(&keys);
    // Longest l ≤ cap with w[i..i+l] == w[j..j+l], hash-based.
    let ext_fwd = |i: usize, j: usize, cap: usize| {
        let cap = cap.min(n - j);
        let direct = cap.min(SCAN);
        if let Some(k) = (0..direct).find(|&k| w[i + k] != w[j + k]) {
            return k;
        }
        let (mut lo, mut hi) = (direct, cap);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if hs.get(i, mid) == hs.get(j, mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    };
    // Longest l ≤ cap with w[i-l..i] == w[j-l..j].
    let ext_bwd = |i: usize, j: usize, cap: usize| {
        let cap = cap.min(i);
        let direct = cap.min(SCAN);
        if let Some(k) = (0..direct).find(|&k| w[i - 1 - k] != w[j - 1 - k]) {
            return k;
        }
        let (mut lo, mut hi) = (direct, cap);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if hs.get(i - mid, mid) == hs.get(j - mid, mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    };
    for p in 1..=n / 3 {
        let mut j = 0;
        while j + p < n {
            let f = ext_fwd(j, j + p, 2 * p);
            if f < 2 * p {
                let b = ext_bwd(j, j + p, 2 * p - f);
                if b + f >= 2 * p && exact_cube_at(w, j, p) {
                    return false;
                }
            } else if exact_cube_at(w, j, p) {
                return false;
            }
            j += p;
        }
    }
    true
}

/// Exact check for a cube of period `p` through sample point `j`.
fn exact_cube_at<T: Eq>(w: &[T], j: usize, p: usize) -> bool {
    let n = w.len();
    let mut f = 0;
    while j + p + f < n && f < 2 * p && w[j + f] == w[j + p + f] {
        f += 1;
    }
    let mut b = 0;
    while b < j && b + f < 2 * p && w[j - 1 - b] == w[j + p - 1 - b] {
        b += 1;
    }
    b + f >= 2 * p
}

/// No cube ends at the last position, given that the prefix is cube-free.
fn suffix_ok(w: &[u8]) -> bool {
    let n = w.len();
    (1..=n / 3).all(|p| (n - 2 * p..n).any(|t| w[t] != w[t - p]))
}

/// Lexicographic (a < b) stream of the cube-free binary words of one length.
/// Letters are `0` for `a` and `1` for `b`.
pub struct CubeFreeEnumerator {
    length: usize,
    word: Vec<u8>,
    started: bool,
    done: bool,
    emitted: usize,
}

impl CubeFreeEnumerator {
    pub fn new(length: usize) -> Self {
        CubeFreeEnumerator { length, word: Vec::with_capacity(length), started: false, done: false, emitted: 0 }
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    /// Replaces the last letter by its successor, popping exhausted letters.
    fn bump(&mut self) -> bool {
        while let Some(l) = self.word.pop() {
            if l == 0 {
                self.word.push(1);
                return true;
            }
        }
        false
    }

    fn settle(&mut self) -> bool {
        while !suffix_ok(&self.word) {
            if !self.bump() {
                return false;
            }
        }
        true
    }

    fn extend(&mut self) -> bool {
        while self.word.len() < self.length {
            self.word.push(0);
            if !self.settle() {
                return false;
            }
        }
        true
    }
}

impl Iterator for CubeFreeEnumerator {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            self.extend()
        } else if self.length == 0 {
            false
        } else {
            self.bump() && self.settle() && self.extend()
        };
        if !ok {
            self.done = true;
            return None;
        }
        self.emitted += 1;
        Some(self.word.clone())
    }
}

/// The first `k` cube-free words of length `length` in lexicographic order.
pub fn enumerate_cube_free(length: usize, k: usize) -> Result<Vec<Vec<u8>>, FamilyError> {
    let words: Vec<Vec<u8>> = CubeFreeEnumerator::new(length).take(k).collect();
    if words.len() < k {
        return Err(FamilyError::NotEnoughWords { length, requested: k, available: words.len() });
    }
    Ok(words)
}

pub fn count_cube_free(length: usize) -> usize {
    CubeFreeEnumerator::new(length).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_count(l: usize) -> usize {
        (0u32..1 << l)
            .filter(|m| {
                let w: Vec<u8> = (0..l).map(|k| (m >> (l - 1 - k) & 1) as u8).collect();
                is_cube_free_naive(&w)
            })
            .count()
    }

    #[test]
    fn small_examples() {
        assert!(is_cube_free(b"aba"));
        assert!(!is_cube_free(b"aaa"));
        assert_eq!(count_cube_free(1), 2);
        assert_eq!(count_cube_free(2), 4);
        assert_eq!(count_cube_free(3), 6);
        assert_eq!(count_cube_free(0), 1);
    }

    #[test]
    fn length_three_in_order() {
        let words: Vec<String> = enumerate_cube_free(3, 6)
            .unwrap()
            .into_iter()
            .map(|w| w.iter().map(|&l| (b'a' + l) as char).collect())
            .collect();
        assert_eq!(words, ["aab", "aba", "abb", "baa", "bab", "bba"]);
        assert!(enumerate_cube_free(3, 0).unwrap().is_empty());
        assert_eq!(
            enumerate_cube_free(3, 7),
            Err(FamilyError::NotEnoughWords { length: 3, requested: 7, available: 6 })
        );
    }

    #[test]
    fn counts_match_brute_force() {
        for l in 0..=14 {
            assert_eq!(count_cube_free(l), brute_count(l), "length {l}");
        }
    }

    #[test]
    fn enumeration_is_sorted_and_cube_free() {
        let words: Vec<_> = CubeFreeEnumerator::new(12).collect();
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        assert!(words.iter().all(|w| is_cube_free_naive(w)));
    }

    proptest! {
        #[test]
        fn fast_check_agrees_with_naive(w in prop::collection::vec(0u8..2, 0..160)) {
            prop_assert_eq!(is_cube_free(&w), is_cube_free_naive(&w));
        }

        #[test]
        fn fast_check_agrees_on_ternary(w in prop::collection::vec(0u8..3, 60..200)) {
            prop_assert_eq!(is_cube_free(&w), is_cube_free_naive(&w));
        }

        #[test]
        fn planted_cubes_are_found(
            pre in prop::collection::vec(0u8..3, 0..80),
            root in prop::collection::vec(0u8..3, 1..20),
            post in prop::collection::vec(0u8..3, 0..80),
        ) {
            let mut w = pre.clone();
            for _ in 0..3 {
                w.extend_from_slice(&root);
            }
            w.extend_from_slice(&post);
            prop_assert!(!is_cube_free(&w));
        }

        #[test]
        fn cube_free_prefixes_of_enumerated_words_extend(n in 60usize..120) {
            let w = CubeFreeEnumerator::new(n).next().unwrap();
            prop_assert!(is_cube_free(&w));
        }
    }
}
