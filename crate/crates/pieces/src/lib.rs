//! Piece queries over the symmetrized closure R̄.
//!
//! The index is a suffix array over the text `w w $` for every distinct
//! cyclic word `w` of R̄. The member starts (rotations below the primitive
//! period) are extracted in suffix order together with the LCP of adjacent
//! member starts, which gives, for every member, the longest prefix it shares
//! with some other member. That value is `m(i, q)`, the longest piece read
//! from vertex `q` of the cycle `C_i`.

pub mod oracle;
pub mod streamed;

use scc_core::{Letter, MemberRef, Presentation, Rational, SymmetrizedClosure, Word};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::ops::Range;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PieceError {
    #[error("piece queries need a nonempty word")]
    EmptyWord,
    #[error("alphabet too large for the byte-coded index ({symbols} symbols)")]
    AlphabetTooLarge { symbols: usize },
    #[error("closure text of {letters} letters exceeds the dense index limit")]
    TooLarge { letters: usize },
    #[error(transparent)]
    Core(#[from] scc_core::CoreError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// A sub-arc of the cycle `C_i`: `len` edges read from vertex `start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub start: usize,
    pub len: usize,
    pub dir: Direction,
}

/// Minimal number of pieces in a concatenation factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Cover {
    Finite(u32),
    Infinite,
}

impl Cover {
    pub fn finite(self) -> Option<u32> {
        match self {
            Cover::Finite(k) => Some(k),
            Cover::Infinite => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelatorPieces {
    pub index: usize,
    pub length: usize,
    pub longest_piece: usize,
    pub ratio: f64,
    pub witness_position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceWitness {
    pub relator: usize,
    pub position: usize,
    pub piece: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallCancellationReport {
    pub lambda: String,
    pub per_relator: Vec<RelatorPieces>,
    pub verdict: Verdict,
    pub worst_witness: Option<PieceWitness>,
}

const SEPARATOR: u8 = 0;

fn byte_code(l: Letter) -> u8 {
    (l.code() + 1) as u8
}

/// Factor index over R̄ with the `m(i, q)` tables.
pub struct PieceIndex {
    closure: SymmetrizedClosure,
    alphabet: Vec<char>,
    text: Vec<u8>,
    class_start: Vec<usize>,
    order: Vec<u32>,
    run: Vec<u32>,
}

impl PieceIndex {
    pub fn build(p: &Presentation) -> Result<Self, PieceError> {
        let closure = SymmetrizedClosure::new(p)?;
        Self::from_closure(closure, p.alphabet().to_vec())
    }

    /// Builds the index for an already symmetrized closure. `alphabet` is only
    /// used to render witness words.
    pub fn from_closure(closure: SymmetrizedClosure, alphabet: Vec<char>) -> Result<Self, PieceError> {
        let max_symbol = closure.classes().iter().flat_map(|c| c.word.iter()).map(|l| l.symbol as usize).max();
        if max_symbol.is_some_and(|s| s >= 127) {
            return Err(PieceError::AlphabetTooLarge { symbols: max_symbol.unwrap() + 1 });
        }
        let total: usize = closure.classes().iter().map(|c| 2 * c.word.len() + 1).sum();
        if total >= i32::MAX as usize {
            return Err(PieceError::TooLarge { letters: total });
        }
        let mut text = Vec::with_capacity(total);
        let mut class_start = Vec::with_capacity(closure.classes().len());
        for c in closure.classes() {
            class_start.push(text.len());
            for _ in 0..2 {
                text.extend(c.word.iter().map(|&l| byte_code(l)));
            }
            text.push(SEPARATOR);
        }
        let mut idx = PieceIndex { closure, alphabet, text, class_start, order: Vec::new(), run: Vec::new() };
        if !idx.text.is_empty() {
            idx.build_tables();
        }
        Ok(idx)
    }

    fn class_of(&self, pos: usize) -> usize {
        self.class_start.partition_point(|&s| s <= pos) - 1
    }

    /// Member at text position `pos`, if `pos` starts one.
    fn member_at_pos(&self, pos: usize) -> Option<(usize, usize)> {
        let c = self.class_of(pos);
        let k = pos - self.class_start[c];
        (k < self.closure.classes()[c].period).then_some((c, k))
    }

    fn build_tables(&mut self) {
        let n = self.text.len();
        let (_, sa) = divsufsort::sort(&self.text).into_parts();
        // Φ-algorithm: phi[sa[k]] = sa[k-1], overwritten in place by PLCP.
        const NONE: u32 = u32::MAX;
        let mut plcp = vec![0u32; n];
        plcp[sa[0] as usize] = NONE;
        for k in 1..n {
            plcp[sa[k] as usize] = sa[k - 1] as u32;
        }
        let t = &self.text;
        let mut h = 0usize;
        for i in 0..n {
            let j = plcp[i];
            if j == NONE {
                plcp[i] = 0;
                h = 0;
                continue;
            }
            let j = j as usize;
            while i + h < n && j + h < n && t[i + h] == t[j + h] {
                h += 1;
            }
            plcp[i] = h as u32;
            h = h.saturating_sub(1);
        }

        let members = self.closure.num_members();
        let mut order = Vec::with_capacity(members);
        let mut adj = Vec::with_capacity(members);
        let mut lens = Vec::with_capacity(members);
        let mut ids = Vec::with_capacity(members);
        let mut run_min = u32::MAX;
        for (k, &p) in sa.iter().enumerate() {
            let p = p as usize;
            if k > 0 {
                run_min = run_min.min(plcp[p]);
            }
            if let Some((c, rot)) = self.member_at_pos(p) {
                adj.push(if order.is_empty() { 0 } else { run_min });
                order.push(p as u32);
                lens.push(self.closure.classes()[c].word.len() as u32);
                ids.push((self.closure.member_base(c) + rot) as u32);
                run_min = u32::MAX;
            }
        }
        drop(sa);
        drop(plcp);

        let m = order.len();
        let mut run = vec![0u32; members];
        for a in 0..m {
            let la = lens[a];
            let mut best = 0u32;
            let mut cur = u32::MAX;
            let mut j = a;
            while j > 0 && best < la {
                cur = cur.min(adj[j]);
                if cur <= best {
                    break;
                }
                j -= 1;
                best = best.max(cur.min(la).min(lens[j]));
            }
            cur = u32::MAX;
            j = a + 1;
            while j < m && best < la {
                cur = cur.min(adj[j]);
                if cur <= best {
                    break;
                }
                best = best.max(cur.min(la).min(lens[j]));
                j += 1;
            }
            run[ids[a] as usize] = best;
        }
        self.order = order;
        self.run = run;
    }

    pub fn closure(&self) -> &SymmetrizedClosure {
        &self.closure
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn relator_count(&self) -> usize {
        self.closure.relator_count()
    }

    pub fn relator_len(&self, i: usize) -> usize {
        self.closure.relator_len(i)
    }

    /// Letter `q` of `r_i` (1-based `i`).
    pub fn relator_letter(&self, i: usize, q: usize) -> Letter {
        self.closure.member_letter(self.closure.member_at(i, false, 0), q)
    }

    pub fn relator_word(&self, i: usize) -> Word {
        self.closure.member_word(self.closure.member_at(i, false, 0))
    }

    /// Longest prefix of `m` that is also a prefix of another member.
    pub fn member_run(&self, m: MemberRef) -> usize {
        self.run[self.closure.member_id(m)] as usize
    }

    /// `m(i, q)`: longest piece read forward from vertex `q` of `C_i`.
    pub fn max_piece_run(&self, i: usize, q: usize) -> usize {
        let n = self.relator_len(i);
        self.member_run(self.closure.member_at(i, false, q % n))
    }

    /// Longest piece read backward from vertex `q` (the letters
    /// `r[q-1]⁻¹ r[q-2]⁻¹ …`).
    pub fn max_piece_run_backward(&self, i: usize, q: usize) -> usize {
        let n = self.relator_len(i);
        self.member_run(self.closure.member_at(i, true, (n - q % n) % n))
    }

    pub fn max_piece_run_dir(&self, i: usize, q: usize, dir: Direction) -> usize {
        match dir {
            Direction::Forward => self.max_piece_run(i, q),
            Direction::Backward => self.max_piece_run_backward(i, q),
        }
    }

    fn codes(u: &[Letter]) -> Vec<u8> {
        u.iter().map(|&l| if l.symbol >= 127 { u8::MAX } else { byte_code(l) }).collect()
    }

    fn cmp_at(&self, pos: usize, u: &[u8]) -> Ordering {
        let end = (pos + u.len()).min(self.text.len());
        self.text[pos..end].cmp(u)
    }

    /// Positions in suffix order of the members whose cyclic reading starts
    /// with `u`. Members shorter than `u` may be included; callers filter by
    /// length.
    fn range_of_codes(&self, u: &[u8]) -> Range<usize> {
        let lo = self.order.partition_point(|&p| self.cmp_at(p as usize, u) == Ordering::Less);
        let hi = lo + self.order[lo..].partition_point(|&p| self.cmp_at(p as usize, u) == Ordering::Equal);
        lo..hi
    }

    fn member_of_order(&self, k: usize) -> MemberRef {
        let (c, rot) = self.member_at_pos(self.order[k] as usize).expect("order holds member starts");
        MemberRef { class: c as u32, rotation: rot as u32 }
    }

    /// Distinct members of R̄ having `u` as a prefix, counted up to `cap`.
    pub fn prefix_count_capped(&self, u: &Word, cap: usize) -> usize {
        let range = self.range_of_codes(&Self::codes(u));
        let mut count = 0;
        for k in range {
            if self.closure.member_len(self.member_of_order(k)) >= u.len() {
                count += 1;
                if count >= cap {
                    break;
                }
            }
        }
        count
    }

    pub fn prefix_count(&self, u: &Word) -> usize {
        self.prefix_count_capped(u, usize::MAX)
    }

    /// True iff `u` is a prefix of at least two distinct members of R̄.
    pub fn is_piece(&self, u: &Word) -> Result<bool, PieceError> {
        if u.is_empty() {
            return Err(PieceError::EmptyWord);
        }
        Ok(self.prefix_count_capped(u, 2) >= 2)
    }

    /// Members (with their lengths) whose prefix of length `|u|` is `u`.
    pub fn members_with_prefix(&self, u: &[Letter]) -> Vec<MemberRef> {
        self.range_of_codes(&Self::codes(u))
            .map(|k| self.member_of_order(k))
            .filter(|&m| self.closure.member_len(m) >= u.len())
            .collect()
    }

    /// Narrows the member range one letter at a time along `w` and calls
    /// `visit(depth, range)` while it is nonempty; `visit` returns `false` to
    /// stop early. Depth `d` means the first `d` letters of `w` matched.
    pub fn walk_prefixes(
        &self,
        w: &[Letter],
        mut visit: impl FnMut(usize, &mut dyn Iterator<Item = MemberRef>) -> bool,
    ) {
        let mut lo = 0usize;
        let mut hi = self.order.len();
        for (d, &l) in w.iter().enumerate() {
            let c = if l.symbol >= 127 { u8::MAX } else { byte_code(l) };
            let at = |p: u32| self.text.get(p as usize + d).copied().unwrap_or(SEPARATOR);
            let nlo = lo + self.order[lo..hi].partition_point(|&p| at(p) < c);
            let nhi = nlo + self.order[nlo..hi].partition_point(|&p| at(p) == c);
            if nlo == nhi {
                return;
            }
            lo = nlo;
            hi = nhi;
            let mut it = (lo..hi).map(|k| self.member_of_order(k));
            if !visit(d + 1, &mut it) {
                return;
            }
        }
    }

    /// `p(r_i)` and the first vertex realizing it.
    pub fn longest_piece(&self, i: usize) -> (usize, usize) {
        let n = self.relator_len(i);
        let mut best = (0, 0);
        for q in 0..n {
            let m = self.max_piece_run(i, q);
            if m > best.0 {
                best = (m, q);
            }
        }
        best
    }

    /// The label of `arc` on `C_i`.
    pub fn arc_label(&self, i: usize, arc: Arc) -> Word {
        let n = self.relator_len(i);
        (0..arc.len)
            .map(|k| match arc.dir {
                Direction::Forward => self.relator_letter(i, (arc.start + k) % n),
                Direction::Backward => self.relator_letter(i, (arc.start + n * (k + 1) - k - 1) % n).inv(),
            })
            .collect()
    }

    /// Vertex reached after `k` steps along `dir` from `start`.
    pub fn step(&self, i: usize, start: usize, k: usize, dir: Direction) -> usize {
        let n = self.relator_len(i);
        match dir {
            Direction::Forward => (start + k) % n,
            Direction::Backward => (start + n - k % n) % n,
        }
    }

    /// Greedy farthest-reach cover. Optimal because the piece set is closed
    /// under taking sub-arcs (see [`PieceIndex::sub_arc_closure_holds`]).
    pub fn min_piece_cover(&self, i: usize, arc: Arc) -> Cover {
        let mut pos = 0usize;
        let mut count = 0u32;
        while pos < arc.len {
            let v = self.step(i, arc.start, pos, arc.dir);
            let m = self.max_piece_run_dir(i, v, arc.dir);
            if m == 0 {
                return Cover::Infinite;
            }
            pos += m;
            count += 1;
        }
        Cover::Finite(count)
    }

    /// How far `k` greedy piece hops reach from `start` (capped at `cap`).
    pub fn greedy_reach(&self, i: usize, start: usize, k: usize, dir: Direction, cap: usize) -> usize {
        let mut pos = 0usize;
        for _ in 0..k {
            if pos >= cap {
                break;
            }
            let m = self.max_piece_run_dir(i, self.step(i, start, pos, dir), dir);
            if m == 0 {
                break;
            }
            pos += m;
        }
        pos.min(cap)
    }

    /// Dynamic programming over all factorizations using `is_piece`; the
    /// unconditional reference for [`PieceIndex::min_piece_cover`].
    pub fn min_piece_cover_dp(&self, i: usize, arc: Arc) -> Cover {
        let label = self.arc_label(i, arc);
        let l = label.len();
        let mut best = vec![u32::MAX; l + 1];
        best[0] = 0;
        for s in 0..l {
            if best[s] == u32::MAX {
                continue;
            }
            for e in s + 1..=l {
                let piece = Word::from_letters(label[s..e].to_vec());
                if !self.is_piece(&piece).unwrap_or(false) {
                    break;
                }
                best[e] = best[e].min(best[s] + 1);
            }
        }
        match best[l] {
            u32::MAX => Cover::Infinite,
            k => Cover::Finite(k),
        }
    }

    /// Minimal number of pieces covering the whole cycle `C_i`, minimized over
    /// the start vertex. Some optimal cover has a breakpoint in `[0, m(i,0)]`,
    /// so only those starts are tried.
    pub fn full_cycle_cover(&self, i: usize) -> Cover {
        let n = self.relator_len(i);
        let j0 = self.max_piece_run(i, 0);
        if j0 == 0 {
            return Cover::Infinite;
        }
        (0..=j0.min(n - 1))
            .map(|s| self.min_piece_cover(i, Arc { start: s, len: n, dir: Direction::Forward }))
            .min()
            .unwrap_or(Cover::Infinite)
    }

    /// Checks `m(v+1) ≥ m(v) − 1` around every cycle in both directions, which
    /// is equivalent to every sub-arc of a piece-arc being a piece-arc.
    pub fn sub_arc_closure_holds(&self) -> bool {
        (1..=self.relator_count()).all(|i| {
            let n = self.relator_len(i);
            (0..n).all(|q| {
                let f = self.max_piece_run(i, q);
                let fb = self.max_piece_run_backward(i, q);
                self.max_piece_run(i, q + 1) + 1 >= f && self.max_piece_run_backward(i, (q + n - 1) % n) + 1 >= fb
            })
        })
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.iter()
            .map(|&l| {
                let c = self.alphabet.get(l.symbol as usize).copied().unwrap_or('?');
                if l.inverse {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .collect()
    }

    pub fn relator_stats(&self) -> Vec<RelatorPieces> {
        (1..=self.relator_count())
            .map(|i| {
                let (p, q) = self.longest_piece(i);
                let n = self.relator_len(i);
                RelatorPieces { index: i, length: n, longest_piece: p, ratio: p as f64 / n as f64, witness_position: q }
            })
            .collect()
    }

    /// Verdict is pass iff `p(r_i) < λ|r_i|` for every relator.
    pub fn check_small_cancellation(&self, lambda: Rational) -> SmallCancellationReport {
        let per_relator = self.relator_stats();
        let (num, den) = (*lambda.numer() as u128, *lambda.denom() as u128);
        let passes = |s: &RelatorPieces| (s.longest_piece as u128) * den < num * s.length as u128;
        let verdict = if per_relator.iter().all(passes) { Verdict::Pass } else { Verdict::Fail };
        let worst = per_relator
            .iter()
            .filter(|s| s.longest_piece > 0)
            .fold(None::<&RelatorPieces>, |acc, s| match acc {
                Some(a)
                    if (a.longest_piece as u128) * (s.length as u128)
                        >= (s.longest_piece as u128) * (a.length as u128) =>
                {
                    Some(a)
                }
                _ => Some(s),
            })
            .map(|s| PieceWitness {
                relator: s.index,
                position: s.witness_position,
                piece: self.format_word(&self.arc_label(
                    s.index,
                    Arc { start: s.witness_position, len: s.longest_piece, dir: Direction::Forward },
                )),
            });
        SmallCancellationReport {
            lambda: format!("{}/{}", lambda.numer(), lambda.denom()),
            per_relator,
            verdict,
            worst_witness: worst,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::BruteForce;

    fn index(rels: &[&str]) -> PieceIndex {
        PieceIndex::build(&Presentation::from_ascii(rels).unwrap()).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::from_ascii(s).unwrap()
    }

    #[test]
    fn commutator_pieces() {
        let idx = index(&["abAB"]);
        assert!(!idx.is_piece(&w("ab")).unwrap());
        assert!(idx.is_piece(&w("a")).unwrap());
        for l in ["a", "A", "b", "B"] {
            assert!(idx.is_piece(&w(l)).unwrap());
        }
        assert_eq!(idx.longest_piece(1).0, 1);
        assert_eq!(idx.is_piece(&Word::empty()), Err(PieceError::EmptyWord));
        let bf = BruteForce::new(&Presentation::from_ascii(&["abAB"]).unwrap());
        assert_eq!(bf.pieces().len(), 4);
    }

    #[test]
    fn commutator_verdicts() {
        let idx = index(&["abAB"]);
        let check = |p, q| idx.check_small_cancellation(Rational::new(p, q)).verdict;
        assert_eq!(check(1, 3), Verdict::Pass);
        assert_eq!(check(1, 6), Verdict::Fail);
        assert_eq!(check(1, 4), Verdict::Fail);
        assert_eq!(check(1, 5), Verdict::Fail);
        let rep = idx.check_small_cancellation(Rational::new(1, 5));
        let wit = rep.worst_witness.unwrap();
        assert_eq!((wit.relator, wit.position, wit.piece.as_str()), (1, 0, "a"));
    }

    #[test]
    fn covers_on_commutator() {
        let idx = index(&["abAB"]);
        let arc = |start, len| Arc { start, len, dir: Direction::Forward };
        assert_eq!(idx.min_piece_cover(1, arc(0, 0)), Cover::Finite(0));
        assert_eq!(idx.min_piece_cover(1, arc(0, 2)), Cover::Finite(2));
        assert_eq!(idx.min_piece_cover_dp(1, arc(0, 2)), Cover::Finite(2));
        assert_eq!(idx.min_piece_cover(1, arc(1, 1)), Cover::Finite(1));
        assert_eq!(idx.full_cycle_cover(1), Cover::Finite(4));
    }

    #[test]
    fn non_piece_letter_gives_infinite_cover() {
        // c occurs once in r_1 and nowhere else, so it is not a piece.
        let idx = index(&["abcab"]);
        let arc = Arc { start: 0, len: 5, dir: Direction::Forward };
        assert_eq!(idx.min_piece_cover(1, arc), Cover::Infinite);
        assert_eq!(idx.min_piece_cover_dp(1, arc), Cover::Infinite);
        assert!(idx.is_piece(&w("ab")).unwrap());
    }

    #[test]
    fn proper_power_has_no_pieces() {
        // R̄ = {aaa, AAA}: no word is a prefix of two distinct members.
        let idx = index(&["aaa"]);
        assert!(!idx.is_piece(&w("a")).unwrap());
        assert!(!idx.is_piece(&w("aa")).unwrap());
        assert_eq!(idx.longest_piece(1).0, 0);
    }

    #[test]
    fn free_presentation_has_no_pieces() {
        let p = Presentation::parse("gens: a, b\n").unwrap();
        let idx = PieceIndex::build(&p).unwrap();
        assert!(!idx.is_piece(&w("a")).unwrap());
        assert_eq!(idx.check_small_cancellation(Rational::new(1, 6)).verdict, Verdict::Pass);
        assert!(idx.check_small_cancellation(Rational::new(1, 6)).worst_witness.is_none());
    }

    #[test]
    fn ab_relator_matches_oracle() {
        let p = Presentation::from_ascii(&["ab"]).unwrap();
        let idx = PieceIndex::build(&p).unwrap();
        let bf = BruteForce::new(&p);
        assert_eq!(idx.longest_piece(1).0, bf.longest_piece(1));
    }

    #[test]
    fn walk_prefixes_reports_depths() {
        let idx = index(&["abAB"]);
        let mut depths = Vec::new();
        idx.walk_prefixes(w("abAx").letters(), |d, it| {
            depths.push((d, it.count()));
            true
        });
        assert_eq!(depths, vec![(1, 2), (2, 1), (3, 1)]);
    }
}
