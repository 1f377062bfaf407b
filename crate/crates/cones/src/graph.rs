use crate::spec::{GenSetSpec, Rule};
use crate::ConeError;
use rayon::prelude::*;
use scc_pieces::{Direction, PieceIndex};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

/// Unreachable marker in distance vectors.
pub const INF: u32 = u32::MAX;

/// Largest cycle length for which the all-pairs matrix is materialized.
pub const DENSE_LIMIT: usize = 4096;

/// Provenance of an edge of `C_i^X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ChordTag {
    Cycle,
    /// Arc covered by at most `k` pieces.
    P(u32),
    L,
    LacedLevel,
    Explicit,
}

impl fmt::Display for ChordTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChordTag::Cycle => write!(f, "cycle"),
            ChordTag::P(k) => write!(f, "P{k}"),
            ChordTag::L => write!(f, "L"),
            ChordTag::LacedLevel => write!(f, "laced-level"),
            ChordTag::Explicit => write!(f, "explicit"),
        }
    }
}

impl ChordTag {
    pub fn parse(s: &str) -> Option<ChordTag> {
        match s {
            "cycle" => Some(ChordTag::Cycle),
            "L" => Some(ChordTag::L),
            "laced-level" => Some(ChordTag::LacedLevel),
            "explicit" => Some(ChordTag::Explicit),
            _ => s.strip_prefix('P').and_then(|k| k.parse().ok()).map(ChordTag::P),
        }
    }
}

/// Vertices partitioned into cliques.
#[derive(Clone, Debug)]
struct Classes {
    label: Vec<u32>,
    start: Vec<u32>,
    members: Vec<u32>,
    tag: ChordTag,
}

impl Classes {
    fn new(label: Vec<u32>, tag: ChordTag) -> Self {
        let count = label.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut start = vec![0u32; count + 1];
        for &l in &label {
            start[l as usize + 1] += 1;
        }
        for k in 0..count {
            start[k + 1] += start[k];
        }
        let mut fill = start.clone();
        let mut members = vec![0u32; label.len()];
        for (v, &l) in label.iter().enumerate() {
            members[fill[l as usize] as usize] = v as u32;
            fill[l as usize] += 1;
        }
        Classes { label, start, members, tag }
    }

    fn of(&self, c: u32) -> &[u32] {
        &self.members[self.start[c as usize] as usize..self.start[c as usize + 1] as usize]
    }

    fn count(&self) -> usize {
        self.start.len() - 1
    }
}

/// `C_i^X` stored implicitly. Edges are the cycle, the cyclic intervals
/// `u → u + fwd[u]` and `u → u − bwd[u]`, cliques on vertex classes, and an
/// explicit chord list.
pub struct ConeGraph {
    relator: usize,
    n: usize,
    fwd: Vec<u32>,
    bwd: Vec<u32>,
    interval_tag: Option<ChordTag>,
    classes: Option<Classes>,
    extra_start: Vec<u32>,
    extra: Vec<(u32, ChordTag)>,
    base: Option<usize>,
    dense: OnceLock<Vec<u16>>,
}

impl fmt::Debug for ConeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConeGraph")
            .field("relator", &self.relator)
            .field("n", &self.n)
            .field("interval_tag", &self.interval_tag)
            .field("classes", &self.classes.as_ref().map(|c| (c.count(), c.tag)))
            .field("extra", &self.extra.len())
            .field("base", &self.base)
            .finish()
    }
}

fn cycle_reach(n: usize) -> u32 {
    (n >= 2) as u32
}

/// Disjoint-set "next unvisited vertex" pointers over `0..=n`.
struct Unvisited(Vec<u32>);

impl Unvisited {
    fn new(n: usize) -> Self {
        Unvisited((0..=n as u32).collect())
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let up = self.0[self.0[x as usize] as usize];
            self.0[x as usize] = up;
            x = up;
        }
        x
    }

    fn remove(&mut self, x: u32) {
        self.0[x as usize] = x + 1;
    }
}

impl ConeGraph {
    fn bare(relator: usize, n: usize) -> Self {
        ConeGraph {
            relator,
            n,
            fwd: vec![cycle_reach(n); n],
            bwd: vec![cycle_reach(n); n],
            interval_tag: None,
            classes: None,
            extra_start: vec![0; n + 1],
            extra: Vec::new(),
            base: None,
            dense: OnceLock::new(),
        }
    }

    /// The plain cycle `C_n`.
    pub fn cycle(n: usize) -> Self {
        Self::bare(0, n)
    }

    /// The cycle plus arbitrary tagged chords (used by the importer and tests).
    pub fn from_chords(relator: usize, n: usize, chords: &[(usize, usize, ChordTag)]) -> Self {
        let mut g = Self::bare(relator, n);
        g.set_extra(chords.iter().map(|&(u, v, t)| (u as u32, v as u32, t)).collect());
        g
    }

    /// A cycle with interval chords `u → u + fwd[u]`; the backward reach is
    /// the mirror image, so adjacency stays symmetric.
    pub fn from_reach(n: usize, fwd: Vec<u32>, tag: ChordTag) -> Self {
        assert_eq!(fwd.len(), n);
        let mut g = Self::bare(0, n);
        let lo = cycle_reach(n);
        let cap = n.saturating_sub(1) as u32;
        g.fwd = fwd.into_iter().map(|r| r.clamp(lo, cap.max(lo))).collect();
        let mut bwd = vec![lo; n];
        for u in 0..n {
            for d in 1..=g.fwd[u] as usize {
                let v = (u + d) % n;
                bwd[v] = bwd[v].max(d as u32);
            }
        }
        g.bwd = bwd;
        g.interval_tag = Some(tag);
        g
    }

    fn set_extra(&mut self, chords: Vec<(u32, u32, ChordTag)>) {
        let mut adj: Vec<(u32, u32, ChordTag)> = Vec::with_capacity(2 * chords.len());
        for (u, v, t) in chords {
            if u != v {
                adj.push((u, v, t));
                adj.push((v, u, t));
            }
        }
        adj.sort();
        adj.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
        let mut start = vec![0u32; self.n + 1];
        for &(u, _, _) in &adj {
            start[u as usize + 1] += 1;
        }
        for k in 0..self.n {
            start[k + 1] += start[k];
        }
        self.extra_start = start;
        self.extra = adj.into_iter().map(|(_, v, t)| (v, t)).collect();
    }

    fn set_intervals(&mut self, idx: &PieceIndex, k: u32) {
        let n = self.n;
        let i = self.relator;
        let lo = cycle_reach(n) as usize;
        let cap = n.saturating_sub(1);
        let reach = |u: usize, dir: Direction| idx.greedy_reach(i, u, k as usize, dir, cap).max(lo) as u32;
        self.fwd = (0..n).into_par_iter().map(|u| reach(u, Direction::Forward)).collect();
        self.bwd = (0..n).into_par_iter().map(|u| reach(u, Direction::Backward)).collect();
        self.interval_tag = Some(ChordTag::P(k));
    }

    pub fn relator_index(&self) -> usize {
        self.relator
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> Option<usize> {
        self.base
    }

    /// Cyclic reach `(fwd[u], bwd[u])` of the interval chords at `u`.
    pub fn reach(&self, u: usize) -> (usize, usize) {
        (self.fwd[u] as usize, self.bwd[u] as usize)
    }

    /// True when the only edges are the cycle and the interval chords.
    pub fn is_interval_only(&self) -> bool {
        self.classes.is_none() && self.extra.is_empty()
    }

    pub fn is_bare_cycle(&self) -> bool {
        self.is_interval_only() && self.fwd.iter().chain(&self.bwd).all(|&r| r <= 1)
    }

    /// Interval ends advance monotonically around the cycle in both
    /// directions, which makes greedy hopping exact.
    pub fn intervals_monotone(&self) -> bool {
        let n = self.n;
        (0..n).all(|u| {
            let w = (u + 1) % n;
            self.fwd[w] + 1 >= self.fwd[u] && self.bwd[u] + 1 >= self.bwd[w]
        })
    }

    /// Tag of the edge `{u, v}`, if present; cycle and interval tags take
    /// precedence over class and explicit tags.
    pub fn edge_tag(&self, u: usize, v: usize) -> Option<ChordTag> {
        let n = self.n;
        if u == v {
            return None;
        }
        let d = (v + n - u) % n;
        if d == 1 || d == n - 1 {
            return Some(ChordTag::Cycle);
        }
        if d <= self.fwd[u] as usize || n - d <= self.bwd[u] as usize {
            return self.interval_tag;
        }
        if let Some(c) = &self.classes {
            if c.label[u] == c.label[v] {
                return Some(c.tag);
            }
        }
        let adj = &self.extra[self.extra_start[u] as usize..self.extra_start[u + 1] as usize];
        adj.binary_search_by_key(&(v as u32), |&(w, _)| w).ok().map(|k| adj[k].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_tag(u, v).is_some()
    }

    fn interval_ranges(&self, u: usize, mut f: impl FnMut(u32, u32)) {
        let n = self.n as u32;
        if n < 2 {
            return;
        }
        let u = u as u32;
        let a = self.fwd[u as usize];
        if u + a < n {
            f(u + 1, u + a);
        } else {
            if u + 1 < n {
                f(u + 1, n - 1);
            }
            f(0, u + a - n);
        }
        let b = self.bwd[u as usize];
        if b <= u {
            f(u - b, u - 1);
        } else {
            if u > 0 {
                f(0, u - 1);
            }
            f(n - (b - u), n - 1);
        }
    }

    /// Sorted neighbours of `u`.
    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.interval_ranges(u, |a, b| out.extend(a as usize..=b as usize));
        if let Some(c) = &self.classes {
            out.extend(c.of(c.label[u]).iter().map(|&v| v as usize));
        }
        out.extend(
            self.extra[self.extra_start[u] as usize..self.extra_start[u + 1] as usize].iter().map(|&(v, _)| v as usize),
        );
        out.sort_unstable();
        out.dedup();
        out.retain(|&v| v != u);
        out
    }

    /// Breadth-first distances from `src`, stopping after depth `max_depth`
    /// or once `target` is labelled. Unreached vertices hold [`INF`].
    pub fn bfs_bounded(&self, src: usize, max_depth: u32, target: Option<usize>) -> Vec<u32> {
        let n = self.n;
        let mut dist = vec![INF; n];
        let mut unvisited = Unvisited::new(n);
        let mut class_done = vec![false; self.classes.as_ref().map_or(0, |c| c.count())];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        unvisited.remove(src as u32);
        queue.push_back(src as u32);
        if target == Some(src) {
            return dist;
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if du >= max_depth {
                break;
            }
            let mut found = false;
            let mut visit = |v: u32, dist: &mut Vec<u32>, unvisited: &mut Unvisited, queue: &mut VecDeque<u32>| {
                dist[v as usize] = du + 1;
                unvisited.remove(v);
                queue.push_back(v);
                if target == Some(v as usize) {
                    found = true;
                }
            };
            let mut ranges = Vec::with_capacity(4);
            self.interval_ranges(u as usize, |a, b| ranges.push((a, b)));
            for (a, b) in ranges {
                let mut x = unvisited.find(a);
                while x <= b {
                    visit(x, &mut dist, &mut unvisited, &mut queue);
                    x = unvisited.find(x + 1);
                }
            }
            if let Some(c) = &self.classes {
                let l = c.label[u as usize];
                if !class_done[l as usize] {
                    class_done[l as usize] = true;
                    for &v in c.of(l) {
                        if dist[v as usize] == INF {
                            visit(v, &mut dist, &mut unvisited, &mut queue);
                        }
                    }
                }
            }
            for &(v, _) in &self.extra[self.extra_start[u as usize] as usize..self.extra_start[u as usize + 1] as usize]
            {
                if dist[v as usize] == INF {
                    visit(v, &mut dist, &mut unvisited, &mut queue);
                }
            }
            if found {
                break;
            }
        }
        dist
    }

    pub fn bfs(&self, src: usize) -> Vec<u32> {
        self.bfs_bounded(src, INF, None)
    }

    /// The all-pairs matrix (row-major, `u16::MAX` for unreachable), built on
    /// first use. `None` above [`DENSE_LIMIT`].
    pub fn dense(&self) -> Option<&[u16]> {
        if self.n > DENSE_LIMIT {
            return None;
        }
        Some(self.dense.get_or_init(|| {
            let n = self.n;
            let mut m = vec![0u16; n * n];
            m.par_chunks_mut(n.max(1)).enumerate().for_each(|(u, row)| {
                for (x, d) in row.iter_mut().zip(self.bfs(u)) {
                    *x = if d == INF { u16::MAX } else { d as u16 };
                }
            });
            m
        }))
    }

    fn interval_distance(&self, u: usize, v: usize) -> u32 {
        let n = self.n;
        let cw = (v + n - u) % n;
        let ccw = (n - cw) % n;
        let mut k = 0;
        let (mut r, mut l) = (0usize, 0usize);
        while r < cw && l < ccw {
            r += self.fwd[(u + r) % n] as usize;
            l += self.bwd[(u + n - l % n) % n] as usize;
            k += 1;
        }
        k
    }

    /// Levels of a BFS from `base` when each level lies in a single class;
    /// such graphs satisfy `|ℓ(u) − ℓ(v)| ≤ d(u, v) ≤ |ℓ(u) − ℓ(v)| + 1`.
    pub fn graded_levels(&self) -> Option<Vec<u32>> {
        let c = self.classes.as_ref()?;
        let base = self.base?;
        let levels = self.bfs(base);
        let mut owner: Vec<u32> = vec![u32::MAX; self.n];
        for (v, &l) in levels.iter().enumerate() {
            if l == INF {
                return None;
            }
            let o = &mut owner[l as usize];
            if *o == u32::MAX {
                *o = c.label[v];
            } else if *o != c.label[v] {
                return None;
            }
        }
        Some(levels)
    }

    pub fn class_count(&self) -> usize {
        self.classes.as_ref().map_or(0, |c| c.count())
    }

    /// Members of clique class `c`, in increasing order.
    pub fn class_members(&self, c: usize) -> &[u32] {
        self.classes.as_ref().map_or(&[], |k| k.of(c as u32))
    }

    pub fn class_tag(&self) -> Option<ChordTag> {
        self.classes.as_ref().map(|c| c.tag)
    }

    /// A single clique class spanning every vertex.
    pub fn is_complete(&self) -> bool {
        self.class_count() == 1 && self.n >= 1
    }

    /// The explicit chord list as `(u, v, tag)` with `u < v`.
    pub fn extra_chords(&self) -> Vec<(usize, usize, ChordTag)> {
        (0..self.n)
            .flat_map(|u| {
                self.extra[self.extra_start[u] as usize..self.extra_start[u + 1] as usize]
                    .iter()
                    .filter(move |&&(v, _)| v as usize > u)
                    .map(move |&(v, t)| (u, v as usize, t))
            })
            .collect()
    }

    /// Undirected chords (not cycle edges) as `(u, v, tag)` with `u < v`,
    /// sorted.
    pub fn chords(&self) -> Vec<(usize, usize, ChordTag)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    if let Some(t) = self.edge_tag(u, v).filter(|&t| t != ChordTag::Cycle) {
                        out.push((u, v, t));
                    }
                }
            }
        }
        out
    }
}

/// Builds `C_i^X` for the rule the spec assigns to relator `i` (1-based).
pub fn build_cone(idx: &PieceIndex, spec: &GenSetSpec, i: usize) -> Result<ConeGraph, ConeError> {
    let lengths: Vec<usize> = (1..=idx.relator_count()).map(|j| idx.relator_len(j)).collect();
    spec.validate(&lengths)?;
    if i == 0 || i > lengths.len() {
        return Err(ConeError::InvalidSpec(format!("relator index {i} outside 1..={}", lengths.len())));
    }
    let n = lengths[i - 1];
    let mut g = ConeGraph::bare(i, n);
    match spec.rule(i) {
        Rule::SOnly | Rule::Pk(0) => {}
        Rule::Pk(k) => g.set_intervals(idx, *k),
        Rule::FullL => g.classes = Some(Classes::new(vec![0; n], ChordTag::L)),
        Rule::Laced(b) => {
            g.set_intervals(idx, 4);
            let levels = g.bfs(*b);
            g.classes = Some(Classes::new(levels, ChordTag::LacedLevel));
            g.base = Some(*b);
        }
        Rule::ExplicitChords(cs) => {
            g.set_intervals(idx, 4);
            g.set_extra(cs.iter().map(|&(u, v)| (u as u32, v as u32, ChordTag::Explicit)).collect());
        }
    }
    Ok(g)
}

/// Hop distance in `c`.
pub fn cone_distance(c: &ConeGraph, u: usize, v: usize) -> u32 {
    if u == v {
        return 0;
    }
    if let Some(m) = c.dense() {
        let d = m[u * c.n + v];
        return if d == u16::MAX { INF } else { d as u32 };
    }
    if c.is_interval_only() && c.intervals_monotone() {
        return c.interval_distance(u, v);
    }
    c.bfs_bounded(u, INF, Some(v))[v]
}

/// Largest finite distance, or [`INF`] when disconnected.
pub fn cone_diameter(c: &ConeGraph) -> u32 {
    let n = c.n;
    if n <= 1 {
        return 0;
    }
    if c.classes.as_ref().is_some_and(|k| k.count() == 1) {
        return 1;
    }
    if c.is_bare_cycle() {
        return (n / 2) as u32;
    }
    if let Some(j) = crate::IntervalJumps::new(c) {
        let mut best = j.eccentricity(0);
        for u in 1..n {
            if !j.covers_within(u, best) {
                best = j.eccentricity(u);
            }
        }
        return best;
    }
    if let Some(m) = c.dense() {
        return m.iter().map(|&d| if d == u16::MAX { INF } else { d as u32 }).max().unwrap_or(0);
    }
    if let Some(levels) = c.graded_levels() {
        return levels.into_iter().max().unwrap_or(0);
    }
    (0..n).into_par_iter().map(|u| c.bfs(u).into_iter().max().unwrap_or(0)).max().unwrap_or(0)
}
