use crate::ball::TruncatedBall;
use crate::solver::{ElementTable, WordSolver};
use crate::GroupError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scc_cones::cone_distance;
use scc_core::Word;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// One `P_j`: an S-geodesic inside the relator coset `R_j` from `y_{j-1}` to
/// `y_j`, or a lone S-edge lying on no relator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    /// Indices into gamma of `y_{j-1}` and `y_j`.
    pub from: usize,
    pub to: usize,
    /// Relator index, `None` for a degenerate S-edge.
    pub relator: Option<usize>,
    /// Positions of `y_{j-1}` and `y_j` on the relator cycle.
    pub from_position: usize,
    pub to_position: usize,
    /// Word read along `P_j`.
    pub label: Word,
}

/// A point where the construction allowed several options.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Choice {
    /// Several cosets `(relator, position of y_{j-1})` reach the same
    /// breakpoint; the least was taken.
    RelatorTie { segment: usize, cosets: Vec<(usize, usize)> },
    /// `y_{j-1}` and `y_j` are antipodal; the shortlex-least way round was
    /// taken.
    Antipodal { segment: usize },
}

/// The S-path `P = P_1 ⋯ P_l` of an X-geodesic gamma and its essential part.
#[derive(Clone, Debug, Serialize)]
pub struct SPath {
    pub gamma: Vec<Word>,
    /// Breakpoints `i_0 = 0 < i_1 < ... < i_l = m`, so `y_j = gamma[i_j]`.
    pub breakpoints: Vec<usize>,
    pub segments: Vec<Segment>,
    /// Vertices of `P` as ids into `vertices`.
    pub path: Vec<usize>,
    /// Segment of each edge of `P`.
    pub edge_segment: Vec<usize>,
    /// `P_ess` as ids into `vertices`.
    pub essential: Vec<usize>,
    /// Distinct group elements met, as normalized words.
    pub vertices: Vec<Word>,
    /// Maximal type-(i) self-intersections as position ranges in `path`.
    pub type_i: Vec<(usize, usize)>,
    /// Closed subpaths that are not trees: type-(ii) self-intersections.
    pub type_ii: Vec<(usize, usize)>,
    pub choices: Vec<Choice>,
    /// Some edge of gamma lies on no relator and was taken as its own
    /// segment.
    pub degenerate: bool,
}

/// Every forward arc `r_i[q..k]` of every relator, indexed by group element.
struct ArcTable {
    table: ElementTable,
    entries: Vec<Vec<(usize, usize, usize)>>,
}

impl ArcTable {
    fn new(relators: &[Word], solver: &dyn WordSolver) -> Self {
        let mut table = ElementTable::new();
        let mut entries: Vec<Vec<(usize, usize, usize)>> = Vec::new();
        for (k0, r) in relators.iter().enumerate() {
            let n = r.len();
            for q in 0..n {
                for f in 1..n {
                    let (id, new) = table.intern(solver, &r.cyclic_factor(q, f));
                    if new {
                        entries.push(Vec::new());
                    }
                    entries[id].push((k0 + 1, q, (q + f) % n));
                }
            }
        }
        ArcTable { table, entries }
    }

    /// Arcs `(i, q, k)` with `x⁻¹ y = r_i[q..k]`: `y` sits at position `k`
    /// of the coset through `x` at position `q`.
    fn between(&self, solver: &dyn WordSolver, x: &Word, y: &Word) -> &[(usize, usize, usize)] {
        match self.table.locate(solver, &x.invert().concat(y)) {
            Some(id) => &self.entries[id],
            None => &[],
        }
    }
}

fn is_tree(walk: &[usize]) -> bool {
    let vs: HashSet<usize> = walk.iter().copied().collect();
    let es: HashSet<(usize, usize)> = walk.windows(2).map(|e| (e[0].min(e[1]), e[0].max(e[1]))).collect();
    es.len() + 1 == vs.len()
}

fn edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Reusable per-ball data for S-path extraction.
pub struct SPathContext<'a> {
    ball: &'a TruncatedBall,
    relators: Vec<Word>,
    arcs: ArcTable,
}

impl<'a> SPathContext<'a> {
    pub fn new(ball: &'a TruncatedBall) -> Self {
        let relators = ball.presentation().relators().to_vec();
        let arcs = ArcTable::new(&relators, ball.solver());
        SPathContext { ball, relators, arcs }
    }

    fn solver(&self) -> &dyn WordSolver {
        self.ball.solver()
    }

    /// The S-path of the X-geodesic with vertices `gamma` (as words).
    pub fn s_path(&self, gamma: &[Word]) -> Result<SPath, GroupError> {
        let s = self.solver();
        if gamma.is_empty() {
            return Err(GroupError::InvalidPath("empty gamma".into()));
        }
        let mut local = ElementTable::new();
        let gamma: Vec<Word> = gamma.iter().map(|w| s.normalize(w)).collect();
        for (k, w) in gamma.iter().enumerate() {
            if local.intern(s, w).0 != k {
                return Err(GroupError::InvalidPath(format!("gamma revisits a vertex at index {k}")));
            }
        }
        let m = gamma.len() - 1;
        let mut breakpoints = vec![0];
        let mut segments = Vec::new();
        let mut choices = Vec::new();
        let mut degenerate = false;
        let mut path = vec![0usize];
        let mut edge_segment = Vec::new();
        let mut a = 0;
        while a < m {
            let mut alive: BTreeMap<(usize, usize), usize> =
                self.arcs.between(s, &gamma[a], &gamma[a + 1]).iter().map(|&(i, q, k)| ((i, q), k)).collect();
            let j = segments.len();
            let seg = if alive.is_empty() {
                let label = gamma[a].invert().concat(&gamma[a + 1]).free_reduce();
                let word = s.normalize(&label);
                if word.len() != 1 {
                    return Err(GroupError::InvalidPath(format!("edge {a} lies on no relator and is not an S-edge")));
                }
                degenerate = true;
                Segment { from: a, to: a + 1, relator: None, from_position: 0, to_position: 0, label: word }
            } else {
                let mut t = a + 1;
                while t < m {
                    let next: BTreeMap<(usize, usize), usize> = self
                        .arcs
                        .between(s, &gamma[a], &gamma[t + 1])
                        .iter()
                        .filter(|&&(i, q, _)| alive.contains_key(&(i, q)))
                        .map(|&(i, q, k)| ((i, q), k))
                        .collect();
                    if next.is_empty() {
                        break;
                    }
                    alive = next;
                    t += 1;
                }
                if alive.len() > 1 {
                    choices.push(Choice::RelatorTie { segment: j, cosets: alive.keys().copied().collect() });
                }
                let (&(i, q), &k) = alive.iter().next().expect("nonempty");
                let r = &self.relators[i - 1];
                let n = r.len();
                let f = (k + n - q) % n;
                let forward = r.cyclic_factor(q, f);
                let backward = r.cyclic_factor(k, n - f).invert();
                let label = match (2 * f).cmp(&n) {
                    std::cmp::Ordering::Less => forward,
                    std::cmp::Ordering::Greater => backward,
                    std::cmp::Ordering::Equal => {
                        choices.push(Choice::Antipodal { segment: j });
                        if forward.shortlex_cmp(&backward).is_le() {
                            forward
                        } else {
                            backward
                        }
                    }
                };
                Segment { from: a, to: t, relator: Some(i), from_position: q, to_position: k, label }
            };
            let mut at = gamma[a].clone();
            for &l in seg.label.iter() {
                at.push_reduced(l);
                path.push(local.intern(s, &at).0);
                edge_segment.push(j);
            }
            if *path.last().unwrap() != seg.to {
                return Err(GroupError::InvalidPath(format!("segment {j} does not end at gamma[{}]", seg.to)));
            }
            a = seg.to;
            breakpoints.push(a);
            segments.push(seg);
        }

        let mut stack: Vec<(usize, usize)> = Vec::new();
        let mut type_i = Vec::new();
        let mut type_ii = Vec::new();
        for (t, &v) in path.iter().enumerate() {
            if let Some(k) = stack.iter().rposition(|&(u, _)| u == v) {
                let s0 = stack[k].1;
                if is_tree(&path[s0..=t]) {
                    type_i.push((s0, t));
                    stack.truncate(k + 1);
                    continue;
                }
                type_ii.push((s0, t));
            }
            stack.push((v, t));
        }
        let maximal: Vec<(usize, usize)> = type_i
            .iter()
            .copied()
            .filter(|&(s0, t0)| !type_i.iter().any(|&(s1, t1)| (s1, t1) != (s0, t0) && s1 <= s0 && t0 <= t1))
            .collect();

        Ok(SPath {
            gamma,
            breakpoints,
            segments,
            essential: stack.into_iter().map(|(v, _)| v).collect(),
            path,
            edge_segment,
            vertices: local.reps().to_vec(),
            type_i: maximal,
            type_ii,
            choices,
            degenerate,
        })
    }

    /// Evaluates the structural properties of an S-path.
    pub fn check(&self, sp: &SPath) -> SPathChecks {
        let s = self.solver();
        let nseg = sp.segments.len();
        let mut seg_edges: Vec<HashSet<(usize, usize)>> = vec![HashSet::new(); nseg];
        for (k, e) in sp.path.windows(2).enumerate() {
            seg_edges[sp.edge_segment[k]].insert(edge(e[0], e[1]));
        }
        let mut max_span = 0;
        for &(s0, t0) in &sp.type_i {
            let edges: HashSet<(usize, usize)> = sp.path[s0..=t0].windows(2).map(|e| edge(e[0], e[1])).collect();
            let span = (1..=nseg)
                .find(|&w| {
                    (0..=nseg - w)
                        .any(|start| edges.iter().all(|e| (start..start + w).any(|j| seg_edges[j].contains(e))))
                })
                .unwrap_or(nseg);
            max_span = max_span.max(span);
        }

        let ess: BTreeSet<usize> = sp.essential.iter().copied().collect();
        let embedded = ess.len() == sp.essential.len();
        let pruned: BTreeSet<usize> = sp.path.iter().copied().filter(|v| !ess.contains(v)).collect();
        let mut pruned_max: Option<u32> = Some(0);
        for &z in &pruned {
            let zi = sp.vertices[z].invert();
            let d = sp
                .essential
                .iter()
                .filter_map(|&w| self.ball.locate(&zi.concat(&sp.vertices[w])))
                .map(|v| self.ball.level(v))
                .min();
            pruned_max = match (pruned_max, d) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
        }

        let mut overlaps = Vec::new();
        let mut convex = true;
        for seg in &sp.segments {
            let Some(i) = seg.relator else { continue };
            let y = &sp.gamma[seg.from];
            let n = self.relators[i - 1].len();
            let position = |w: usize| -> Option<usize> {
                if s.same_element(&sp.vertices[w], y) {
                    return Some(seg.from_position);
                }
                self.arcs
                    .between(s, y, &sp.vertices[w])
                    .iter()
                    .find(|&&(i2, q, _)| i2 == i && q == seg.from_position)
                    .map(|&(_, _, k)| k)
            };
            let pos: Vec<Option<usize>> = sp.essential.iter().map(|&w| position(w)).collect();
            let on = pos
                .windows(2)
                .filter(|p| matches!((p[0], p[1]), (Some(a), Some(b)) if (a + 1) % n == b || (b + 1) % n == a))
                .count();
            overlaps.push((i, on, n));
            let cd = cone_distance(&self.ball.cones()[i - 1], seg.from_position, seg.to_position);
            convex &= cd as usize == seg.to - seg.from;
        }
        let overlap_ok = overlaps.iter().all(|&(_, on, n)| 4 * on < 3 * n);
        let max_overlap_ratio = overlaps.iter().map(|&(_, on, n)| on as f64 / n as f64).fold(0.0, f64::max);

        SPathChecks {
            segments: nseg,
            type_i: sp.type_i.len(),
            type_i_max_span: max_span,
            type_ii: sp.type_ii.len(),
            essential_embedded: embedded,
            pruned: pruned.len(),
            pruned_max_distance: pruned_max,
            overlaps,
            max_overlap_ratio,
            overlap_ok,
            segment_convexity: convex,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SPathChecks {
    pub segments: usize,
    pub type_i: usize,
    /// Fewest consecutive `P_j` whose union holds a type-(i)
    /// self-intersection, maximized over them (0 when there are none).
    pub type_i_max_span: usize,
    pub type_ii: usize,
    pub essential_embedded: bool,
    pub pruned: usize,
    /// Largest X-distance from a pruned vertex to `P_ess`; `None` when one
    /// is farther than the ball certifies.
    pub pruned_max_distance: Option<u32>,
    /// `(relator, |P_ess ∩ R_j|, |R_j|)` per segment.
    pub overlaps: Vec<(usize, usize, usize)>,
    pub max_overlap_ratio: f64,
    pub overlap_ok: bool,
    /// The cone distance between `y_{j-1}` and `y_j` equals `i_j − i_{j-1}`.
    pub segment_convexity: bool,
}

impl SPathChecks {
    pub fn pass(&self) -> bool {
        self.type_i_max_span <= 4
            && self.type_ii == 0
            && self.essential_embedded
            && self.pruned_max_distance.is_some_and(|d| d <= 2)
            && self.overlap_ok
            && self.segment_convexity
    }
}

/// The S-path of `gamma` in `ball`.
pub fn s_path(ball: &TruncatedBall, gamma: &[Word]) -> Result<SPath, GroupError> {
    SPathContext::new(ball).s_path(gamma)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityReport {
    pub pairs: usize,
    pub certified: usize,
    /// `(relator, q, k, cone distance, ball distance)`.
    pub violations: Vec<(usize, usize, usize, u32, Option<u32>)>,
}

/// Compares `d_X(1, r_i[q..k])` with the cone distance from `q` to `k` in
/// `C_i^X` for every relator of the ball and every ordered pair of positions.
/// By homogeneity this covers every pair of vertices on a common relator.
/// A pair is certified when the cone distance is at most `radius + 1`: an
/// element missing from the ball is at distance at least `radius + 1`.
pub fn cone_convexity(ball: &TruncatedBall) -> ConvexityReport {
    let r = ball.radius();
    let mut rep = ConvexityReport { pairs: 0, certified: 0, violations: Vec::new() };
    for (k0, rel) in ball.presentation().relators().iter().enumerate() {
        let cone = &ball.cones()[k0];
        let n = rel.len();
        for q in 0..n {
            for f in 1..n {
                let k = (q + f) % n;
                rep.pairs += 1;
                let cd = cone_distance(cone, q, k);
                let found = ball.locate(&rel.cyclic_factor(q, f)).map(|v| ball.level(v));
                let ok = match found {
                    Some(d) => d == cd,
                    None => cd > r,
                };
                if cd <= r + 1 {
                    rep.certified += 1;
                    if !ok {
                        rep.violations.push((k0 + 1, q, k, cd, found));
                    }
                } else if found.is_some() {
                    rep.violations.push((k0 + 1, q, k, cd, found));
                }
            }
        }
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub checked: usize,
    pub violations: usize,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub metric: String,
    pub truncation: usize,
    pub radius: u32,
    pub seed: u64,
    pub samples: usize,
    pub geodesic_length: usize,
    pub degenerate: usize,
    pub choices: usize,
    pub type_i_found: usize,
    pub max_type_i_span: usize,
    pub max_pruned_distance: Option<u32>,
    pub max_overlap_ratio: f64,
    pub assertions: Vec<Assertion>,
    pub convexity: ConvexityReport,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }
}

struct Tally {
    name: &'static str,
    checked: usize,
    violations: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, checked: 0, violations: 0, witness: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            self.witness.get_or_insert_with(witness);
        }
    }

    fn finish(self) -> Assertion {
        Assertion {
            name: self.name.to_string(),
            pass: self.violations == 0,
            checked: self.checked,
            violations: self.violations,
            witness: self.witness,
        }
    }
}

/// Samples `samples` X-geodesics of length `radius + 1` from the identity and
/// checks their S-paths. Each is a ball geodesic from 1 to a boundary vertex
/// `v`, extended by a generator `x` with `v·x` outside the ball, so
/// `|v·x|_X = radius + 1` exactly. Needs radius at least 2 so that the
/// distance-2 test against `P_ess` is decided by the ball.
pub fn spath_suite(ball: &TruncatedBall, samples: usize, seed: u64) -> Result<SuiteReport, GroupError> {
    if ball.radius() < 2 {
        return Err(GroupError::InvalidPath(format!("S-path suite needs radius ≥ 2, got {}", ball.radius())));
    }
    let ctx = SPathContext::new(ball);
    let r = ball.radius();
    let boundary: Vec<usize> = (0..ball.len()).filter(|&v| ball.level(v) == r).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut taken = 0;
    let mut attempts = 0;
    let (mut span, mut type_ii, mut pruned, mut overlap, mut seg_convex) = (
        Tally::new("type-(i) self-intersections lie in at most 4 consecutive P_j"),
        Tally::new("no type-(ii) self-intersections"),
        Tally::new("pruned vertices within X-distance 2 of P_ess"),
        Tally::new("|P_ess ∩ R_j| < 3/4 |R_j|"),
        Tally::new("cone distance between breakpoints equals their distance along gamma"),
    );
    let mut rep = SuiteReport {
        metric: ball.stats().metric,
        truncation: ball.truncation(),
        radius: r,
        seed,
        samples: 0,
        geodesic_length: r as usize + 1,
        degenerate: 0,
        choices: 0,
        type_i_found: 0,
        max_type_i_span: 0,
        max_pruned_distance: Some(0),
        max_overlap_ratio: 0.0,
        assertions: Vec::new(),
        convexity: cone_convexity(ball),
    };
    while taken < samples && attempts < 100 * samples.max(1) && !boundary.is_empty() {
        attempts += 1;
        let v = boundary[rng.gen_range(0..boundary.len())];
        let g = rng.gen_range(0..ball.generators().len());
        if !seen.insert((v, g)) {
            continue;
        }
        let end = ball.rep(v).concat(&ball.generators()[g]).free_reduce();
        if ball.locate(&end).is_some() {
            continue;
        }
        let path = ball.geodesic(v, 0)?;
        let mut gamma: Vec<Word> = path.vertices.iter().rev().map(|&u| ball.rep(u).clone()).collect();
        gamma.push(end);
        let sp = ctx.s_path(&gamma)?;
        let c = ctx.check(&sp);
        taken += 1;
        let tag = || format!("sample {taken}: gamma ends at {}", sp.gamma.last().unwrap().to_ascii());
        span.record(c.type_i_max_span <= 4, || format!("{}, span {}", tag(), c.type_i_max_span));
        type_ii.record(c.type_ii == 0 && c.essential_embedded, || format!("{}, {:?}", tag(), sp.type_ii));
        pruned.record(c.pruned_max_distance.is_some_and(|d| d <= 2), || {
            format!("{}, distance {:?}", tag(), c.pruned_max_distance)
        });
        overlap.record(c.overlap_ok, || format!("{}, overlaps {:?}", tag(), c.overlaps));
        seg_convex.record(c.segment_convexity, tag);
        rep.degenerate += sp.degenerate as usize;
        rep.choices += sp.choices.len();
        rep.type_i_found += c.type_i;
        rep.max_type_i_span = rep.max_type_i_span.max(c.type_i_max_span);
        rep.max_pruned_distance = match (rep.max_pruned_distance, c.pruned_max_distance) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        rep.max_overlap_ratio = rep.max_overlap_ratio.max(c.max_overlap_ratio);
    }
    rep.samples = taken;
    let mut conv = Tally::new("X-ball distance equals cone distance on common relators");
    conv.checked = rep.convexity.certified;
    conv.violations = rep.convexity.violations.len();
    conv.witness = rep.convexity.violations.first().map(|v| format!("{v:?}"));
    rep.assertions =
        vec![span.finish(), type_ii.finish(), pruned.finish(), overlap.finish(), seg_convex.finish(), conv.finish()];
    Ok(rep)
}
