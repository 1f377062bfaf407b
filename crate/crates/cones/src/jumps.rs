use crate::graph::ConeGraph;

/// Binary-lifting tables for greedy interval hops on a cone whose only
/// chords are monotone intervals. Distances take `O(log n)`.
pub struct IntervalJumps {
    n: usize,
    cw: Vec<Vec<u32>>,
    ccw: Vec<Vec<u32>>,
}

fn lift(n: usize, base: Vec<u32>, levels: usize, backward: bool) -> Vec<Vec<u32>> {
    let mut tabs = vec![base];
    for _ in 1..levels {
        let prev = tabs.last().unwrap();
        let next = (0..n)
            .map(|p| {
                let a = prev[p] as usize;
                if a >= n {
                    return n as u32;
                }
                let q = if backward { (p + n - a) % n } else { (p + a) % n };
                (a + prev[q] as usize).min(n) as u32
            })
            .collect();
        tabs.push(next);
    }
    tabs
}

impl IntervalJumps {
    pub fn new(g: &ConeGraph) -> Option<Self> {
        if !g.is_interval_only() || !g.intervals_monotone() || g.n() < 2 {
            return None;
        }
        let n = g.n();
        let levels = (usize::BITS - n.leading_zeros()) as usize + 1;
        let cw = lift(n, (0..n).map(|u| g.reach(u).0 as u32).collect(), levels, false);
        let ccw = lift(n, (0..n).map(|u| g.reach(u).1 as u32).collect(), levels, true);
        Some(IntervalJumps { n, cw, ccw })
    }

    fn hops(&self, tabs: &[Vec<u32>], u: usize, off: usize, backward: bool) -> u32 {
        if off == 0 {
            return 0;
        }
        let n = self.n;
        let (mut adv, mut k) = (0usize, 0u32);
        for j in (0..tabs.len()).rev() {
            let p = if backward { (u + n - adv % n) % n } else { (u + adv) % n };
            let step = tabs[j][p] as usize;
            if adv + step < off {
                adv += step;
                k += 1 << j;
            }
        }
        k + 1
    }

    /// Greedy hops needed to advance `off` steps clockwise from `u`.
    pub fn hops_cw(&self, u: usize, off: usize) -> u32 {
        self.hops(&self.cw, u, off, false)
    }

    pub fn hops_ccw(&self, u: usize, off: usize) -> u32 {
        self.hops(&self.ccw, u, off, true)
    }

    pub fn distance(&self, u: usize, v: usize) -> u32 {
        let cw = (v + self.n - u) % self.n;
        self.hops_cw(u, cw).min(self.hops_ccw(u, (self.n - cw) % self.n))
    }

    /// `max_{v ∈ set} d(u, v)` for `set` sorted ascending. The clockwise hop
    /// count is nondecreasing in the offset and the counter-clockwise one
    /// nonincreasing, so the maximum of their minimum sits at the crossing.
    pub fn farthest_in(&self, u: usize, set: &[u32]) -> u32 {
        let n = self.n;
        let split = set.partition_point(|&v| v as usize <= u);
        let skip = usize::from(split > 0 && set[split - 1] as usize == u);
        let len = set.len() - skip;
        if len == 0 {
            return 0;
        }
        // Members in increasing clockwise offset from `u`.
        let at = |k: usize| {
            let t = if k < set.len() - split { split + k } else { k - (set.len() - split) };
            (set[t] as usize + n - u) % n
        };
        let f = |o: usize| self.hops_cw(u, o);
        let g = |o: usize| self.hops_ccw(u, n - o);
        let (mut lo, mut hi) = (0usize, len);
        while lo < hi {
            let mid = (lo + hi) / 2;
            let o = at(mid);
            if f(o) < g(o) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let mut best = 0;
        for k in [lo.wrapping_sub(1), lo] {
            if k < len {
                let o = at(k);
                best = best.max(f(o).min(g(o)));
            }
        }
        best
    }

    /// Whether every vertex lies within `k` hops of `u`.
    pub fn covers_within(&self, u: usize, k: u32) -> bool {
        self.span(&self.cw, u, k, false) + self.span(&self.ccw, u, k, true) >= self.n - 1
    }

    /// Eccentricity of `u`: least `k` whose two greedy spans cover the cycle.
    pub fn eccentricity(&self, u: usize) -> u32 {
        let n = self.n;
        let (mut lo, mut hi) = (0u32, (n / 2) as u32);
        while lo < hi {
            let k = (lo + hi) / 2;
            if self.covers_within(u, k) {
                hi = k;
            } else {
                lo = k + 1;
            }
        }
        lo
    }

    fn span(&self, tabs: &[Vec<u32>], u: usize, k: u32, backward: bool) -> usize {
        let n = self.n;
        let mut adv = 0usize;
        for j in 0..tabs.len() {
            if k >> j & 1 == 1 {
                let p = if backward { (u + n - adv % n) % n } else { (u + adv) % n };
                adv = (adv + tabs[j][p] as usize).min(n);
            }
        }
        if (k as u64) >> tabs.len() != 0 {
            adv = n;
        }
        adv
    }
}
