use crate::dehn::DehnMachine;
use crate::solver::{ElementTable, WordSolver};
use crate::GroupError;
use rayon::prelude::*;
use scc_cones::{build_cone, ConeGraph, GenSetSpec, Rule};
use scc_core::{Letter, Presentation, Word};
use scc_pieces::PieceIndex;
use serde::Serialize;
use std::collections::VecDeque;

/// `(v, g, (normal form, representative), key, known element)` for `v·g`.
type Probe = (u32, u32, (Word, Word), u64, Option<usize>);

pub const DEFAULT_BUDGET: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BallConfig {
    /// Relators `r_1..r_N` kept.
    pub truncation: usize,
    pub radius: u32,
    /// Vertex cap.
    pub budget: usize,
}

impl BallConfig {
    pub fn new(truncation: usize, radius: u32) -> Self {
        BallConfig { truncation, radius, budget: DEFAULT_BUDGET }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallStats {
    pub truncation: usize,
    pub metric: String,
    pub radius: u32,
    pub generators: usize,
    pub vertices: usize,
    pub per_level: Vec<usize>,
    pub edges: usize,
    pub boundary: String,
}

/// A shortest path given by its vertices and the generator indices read
/// along it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeodesicPath {
    pub vertices: Vec<usize>,
    pub generators: Vec<usize>,
}

impl GeodesicPath {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// The ball of a given radius about 1 in `Cay(G_N, X)`, where `G_N` is
/// presented by `r_1..r_N` and `X` is the generating set of a
/// [`GenSetSpec`] (`S` itself for the all-`S` spec).
///
/// Vertices are numbered in BFS order, so vertex 0 is the identity and each
/// level is a contiguous range. Every vertex at level below the radius has
/// its full star; edges out of the boundary sphere are only known when they
/// lead back inside.
pub struct TruncatedBall {
    presentation: Presentation,
    spec: GenSetSpec,
    radius: u32,
    gens: Vec<Word>,
    gen_inverse: Vec<u32>,
    table: ElementTable,
    reps: Vec<Word>,
    level: Vec<u32>,
    adj_start: Vec<u32>,
    adj: Vec<(u32, u32)>,
    cones: Vec<ConeGraph>,
    solver: Box<dyn WordSolver>,
}

/// The generating set `X` of `spec` over `r_1..r_N` as group elements: the
/// letters of `S` and the label of every cone chord (read along the shorter
/// arc) with its inverse, one shortlex-least word per element, in shortlex
/// order. Also returns the cones.
pub fn generator_words(
    p: &Presentation,
    spec: &GenSetSpec,
    solver: &dyn WordSolver,
) -> Result<(Vec<Word>, Vec<ConeGraph>), GroupError> {
    let mut words: Vec<Word> =
        (0..2 * p.rank() as u32).map(|c| Word::from_letters(vec![Letter::from_code(c)])).collect();
    let mut cones = Vec::new();
    if !p.relators().is_empty() {
        let idx = PieceIndex::build(p)?;
        for i in 1..=idx.relator_count() {
            let cone = build_cone(&idx, spec, i)?;
            let r = idx.relator_word(i);
            let n = r.len();
            for (u, v, _) in cone.chords() {
                let f = v - u;
                let label = if 2 * f <= n { r.cyclic_factor(u, f) } else { r.cyclic_factor(v, n - f).invert() };
                words.push(label.invert());
                words.push(label);
            }
            cones.push(cone);
        }
    }
    words.sort_by(|a, b| a.shortlex_cmp(b));
    words.dedup();
    let mut seen = ElementTable::new();
    let mut out = Vec::new();
    for w in words {
        if seen.intern(solver, &w).1 && !solver.is_trivial(&w) {
            out.push(w);
        }
    }
    Ok((out, cones))
}

fn spec_name(spec: &GenSetSpec) -> String {
    if spec.default == Rule::SOnly && spec.overrides.is_empty() {
        "S".to_string()
    } else {
        spec.serialize().trim_end().replace('\n', "; ")
    }
}

/// Builds the ball with identity decided by Dehn reduction on the truncated
/// presentation, which must be `C'(1/6)`.
pub fn build_ball(p: &Presentation, spec: &GenSetSpec, cfg: BallConfig) -> Result<TruncatedBall, GroupError> {
    let q = p.truncated(cfg.truncation);
    let machine = DehnMachine::sixth(&q)?;
    build_ball_with(p, spec, cfg, Box::new(machine))
}

/// Builds the ball with an arbitrary solver for the truncated group.
pub fn build_ball_with(
    p: &Presentation,
    spec: &GenSetSpec,
    cfg: BallConfig,
    solver: Box<dyn WordSolver>,
) -> Result<TruncatedBall, GroupError> {
    let q = p.truncated(cfg.truncation);
    let (gens, cones) = generator_words(&q, spec, solver.as_ref())?;
    let s = solver.as_ref();

    let mut gen_table = ElementTable::new();
    for g in &gens {
        gen_table.intern(s, g);
    }
    let gen_inverse: Vec<u32> = gens
        .iter()
        .map(|g| gen_table.locate(s, &g.invert()).expect("generating set is closed under inverses") as u32)
        .collect();

    let mut table = ElementTable::new();
    let e = Word::empty();
    let k = s.key(&e);
    table.push(e.clone(), k);
    let mut reps = vec![e];
    let mut level = vec![0u32];
    let mut edges: Vec<(u32, u32, u32)> = Vec::new();
    let mut lo = 0;
    for l in 0..cfg.radius {
        let hi = table.len();
        let found: Vec<Probe> = (lo..hi)
            .into_par_iter()
            .flat_map_iter(|v| {
                let (table, gens, reps) = (&table, &gens, &reps);
                gens.iter().enumerate().map(move |(g, x)| {
                    let c = reps[v].concat(x).free_reduce();
                    let n = s.normalize(&c);
                    let k = s.key(&n);
                    let hit = table.find(s, &n, k);
                    let shown = if s.canonical() { c } else { n.clone() };
                    (v as u32, g as u32, (n, shown), k, hit)
                })
            })
            .collect();
        for (v, g, (n, shown), k, hit) in found {
            let t = match hit.or_else(|| table.find(s, &n, k)) {
                Some(t) => t,
                None => {
                    if table.len() >= cfg.budget {
                        return Err(GroupError::BudgetExceeded { cap: cfg.budget });
                    }
                    level.push(l + 1);
                    reps.push(shown.clone());
                    table.push(n, k)
                }
            };
            if level[t] == l + 1 && shown.shortlex_cmp(&reps[t]).is_lt() {
                reps[t] = shown;
            }
            edges.push((v, g, t as u32));
        }
        lo = hi;
    }

    let mut rev: Vec<(u32, u32, u32)> = edges
        .iter()
        .filter(|e| level[e.2 as usize] == cfg.radius)
        .map(|&(v, g, t)| (t, gen_inverse[g as usize], v))
        .collect();
    edges.append(&mut rev);
    edges.sort_unstable();
    edges.dedup();
    let mut adj_start = vec![0u32; table.len() + 1];
    for &(v, ..) in &edges {
        adj_start[v as usize + 1] += 1;
    }
    for v in 0..table.len() {
        adj_start[v + 1] += adj_start[v];
    }
    let adj = edges.into_iter().map(|(_, g, t)| (g, t)).collect();

    Ok(TruncatedBall {
        presentation: q,
        spec: spec.clone(),
        radius: cfg.radius,
        gens,
        gen_inverse,
        table,
        reps,
        level,
        adj_start,
        adj,
        cones,
        solver,
    })
}

impl TruncatedBall {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn truncation(&self) -> usize {
        self.presentation.relators().len()
    }

    pub fn spec(&self) -> &GenSetSpec {
        &self.spec
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn generators(&self) -> &[Word] {
        &self.gens
    }

    pub fn generator_inverse(&self, g: usize) -> usize {
        self.gen_inverse[g] as usize
    }

    /// Cones `C_1^X..C_N^X`.
    pub fn cones(&self) -> &[ConeGraph] {
        &self.cones
    }

    pub fn solver(&self) -> &dyn WordSolver {
        self.solver.as_ref()
    }

    pub fn len(&self) -> usize {
        self.level.len()
    }

    pub fn is_empty(&self) -> bool {
        self.level.is_empty()
    }

    /// Distance from the identity.
    pub fn level(&self, v: usize) -> u32 {
        self.level[v]
    }

    /// Representative word: Dehn-irreducible and shortlex-least among the
    /// words enumerated at its level.
    pub fn rep(&self, v: usize) -> &Word {
        &self.reps[v]
    }

    /// `(generator, target)` pairs sorted by generator.
    pub fn neighbors(&self, v: usize) -> &[(u32, u32)] {
        &self.adj[self.adj_start[v] as usize..self.adj_start[v + 1] as usize]
    }

    pub fn step(&self, v: usize, g: usize) -> Option<usize> {
        let nb = self.neighbors(v);
        nb.binary_search_by_key(&(g as u32), |&(h, _)| h).ok().map(|k| nb[k].1 as usize)
    }

    /// Index of the one-letter generator `l`, if present.
    pub fn letter_generator(&self, l: Letter) -> Option<usize> {
        self.gens.iter().position(|g| g.len() == 1 && g[0] == l)
    }

    /// Follows the letters of `w` from vertex `v` along edges of the ball;
    /// `None` once the walk needs an edge the ball does not hold.
    pub fn walk(&self, v: usize, w: &Word) -> Option<usize> {
        let mut at = v;
        for &l in w.iter() {
            at = self.step(at, self.letter_generator(l)?)?;
        }
        Some(at)
    }

    /// The ball vertex equal to `w`, if any.
    pub fn locate(&self, w: &Word) -> Option<usize> {
        self.table.locate(self.solver(), w)
    }

    fn check(&self, v: usize) -> Result<(), GroupError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(GroupError::UnknownVertex(v))
        }
    }

    /// Distances from `src` inside the ball (`u32::MAX` when unreachable).
    pub fn bfs(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &(_, t) in self.neighbors(v) {
                if dist[t as usize] == u32::MAX {
                    dist[t as usize] = dist[v] + 1;
                    queue.push_back(t as usize);
                }
            }
        }
        dist
    }

    fn distances_to(&self, v: usize) -> Vec<u32> {
        if v == 0 {
            self.level.clone()
        } else {
            self.bfs(v)
        }
    }

    /// A path computed inside the ball is a true geodesic when
    /// `d(u,v) + min(|u|, |v|) ≤ radius`: every vertex of a geodesic from
    /// the nearer endpoint then lies in the ball.
    pub fn certified(&self, u: usize, v: usize, d: u32) -> bool {
        d != u32::MAX && d + self.level[u].min(self.level[v]) <= self.radius
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<u32, GroupError> {
        self.check(u)?;
        self.check(v)?;
        let d = if u == 0 { self.level[v] } else { self.distances_to(v)[u] };
        if self.certified(u, v, d) {
            Ok(d)
        } else {
            Err(self.out_of_region(u, v, d))
        }
    }

    fn out_of_region(&self, u: usize, v: usize, d: u32) -> GroupError {
        GroupError::OutOfCertifiedRegion { u, v, distance: (d != u32::MAX).then_some(d), radius: self.radius }
    }

    /// The shortest path from `u` to `v` whose generator sequence is
    /// lexicographically least.
    pub fn geodesic(&self, u: usize, v: usize) -> Result<GeodesicPath, GroupError> {
        self.check(u)?;
        self.check(v)?;
        let dist = self.distances_to(v);
        let d = dist[u];
        if !self.certified(u, v, d) {
            return Err(self.out_of_region(u, v, d));
        }
        let mut path = GeodesicPath { vertices: vec![u], generators: Vec::new() };
        let mut at = u;
        while at != v {
            let &(g, t) = self
                .neighbors(at)
                .iter()
                .find(|&&(_, t)| dist[t as usize] + 1 == dist[at])
                .expect("BFS distances decrease along some edge");
            path.generators.push(g as usize);
            path.vertices.push(t as usize);
            at = t as usize;
        }
        Ok(path)
    }

    /// The word read along a path of generator indices.
    pub fn path_word(&self, generators: &[usize]) -> Word {
        let mut w = Word::empty();
        for &g in generators {
            for &l in self.gens[g].iter() {
                w.push_reduced(l);
            }
        }
        w
    }

    pub fn per_level(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.radius as usize + 1];
        for &l in &self.level {
            counts[l as usize] += 1;
        }
        counts
    }

    pub fn stats(&self) -> BallStats {
        BallStats {
            truncation: self.truncation(),
            metric: spec_name(&self.spec),
            radius: self.radius,
            generators: self.gens.len(),
            vertices: self.len(),
            per_level: self.per_level(),
            edges: self.adj.len() / 2,
            boundary: format!(
                "distances are exact up to {r}; edges leaving the sphere of radius {r} are not enumerated",
                r = self.radius
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{naive_ball_size, FreeElimination};

    fn free2() -> Presentation {
        Presentation::new(vec!['a', 'b'], vec![]).unwrap()
    }

    #[test]
    fn free_group_counts() {
        let p = free2();
        let b0 = build_ball(&p, &GenSetSpec::s_only(), BallConfig::new(0, 0)).unwrap();
        assert_eq!(b0.len(), 1);
        assert_eq!(b0.rep(0), &Word::empty());
        let b = build_ball(&p, &GenSetSpec::s_only(), BallConfig::new(0, 2)).unwrap();
        assert_eq!(b.len(), 17);
        assert_eq!(b.per_level(), vec![1, 4, 12]);
        assert_eq!(b.stats().edges, 16);
        let b3 = build_ball(&p, &GenSetSpec::s_only(), BallConfig::new(0, 3)).unwrap();
        assert_eq!(b3.len(), 1 + 4 + 12 + 36);
    }

    #[test]
    fn budget_is_enforced() {
        let r = build_ball(&free2(), &GenSetSpec::s_only(), BallConfig::new(0, 4).with_budget(100));
        assert_eq!(r.err(), Some(GroupError::BudgetExceeded { cap: 100 }));
    }

    #[test]
    fn one_relator_counts_match_naive_enumeration() {
        let p = Presentation::from_ascii(&["dcacbCbcA"]).unwrap();
        let oracle = FreeElimination::new(&p).unwrap();
        for radius in 0..=4 {
            let b = build_ball(&p, &GenSetSpec::s_only(), BallConfig::new(1, radius)).unwrap();
            assert_eq!(b.len(), naive_ball_size(&oracle, 4, radius as usize), "radius {radius}");
            let c = build_ball_with(&p, &GenSetSpec::s_only(), BallConfig::new(1, radius), Box::new(oracle.clone()))
                .unwrap();
            assert_eq!(b.per_level(), c.per_level());
            for v in 0..b.len() {
                assert_eq!(b.rep(v).len() as u32, b.level(v));
                assert_eq!(b.rep(v), c.rep(v), "shortlex representatives agree");
            }
        }
    }

    #[test]
    fn geodesics() {
        let p = Presentation::from_ascii(&["dcacbCbcA"]).unwrap();
        let b = build_ball(&p, &GenSetSpec::s_only(), BallConfig::new(1, 4)).unwrap();
        assert!(b.geodesic(5, 5).unwrap().is_empty());
        let (g, t) = b.neighbors(0)[2];
        let path = b.geodesic(0, t as usize).unwrap();
        assert_eq!(path.generators, vec![g as usize]);
        let far = b.len() - 1;
        assert!(matches!(b.geodesic(far, far - 1), Err(GroupError::OutOfCertifiedRegion { .. })));
        for u in 0..30 {
            for v in 0..30 {
                if let (Ok(x), Ok(y)) = (b.distance(u, v), b.distance(v, u)) {
                    assert_eq!(x, y);
                    let path = b.geodesic(u, v).unwrap();
                    assert_eq!(path.len() as u32, x);
                    let w = b.rep(u).concat(&b.path_word(&path.generators)).concat(&b.rep(v).invert());
                    assert!(b.solver().is_trivial(&w));
                }
            }
        }
    }
}
