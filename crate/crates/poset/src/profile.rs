use crate::PosetError;
use rayon::prelude::*;
use scc_cones::{build_cone, cone_diameter, cone_distance, ConeGraph, GenSetSpec, IntervalJumps, DENSE_LIMIT, INF};
use scc_pieces::PieceIndex;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub index: usize,
    pub n: usize,
    /// Largest `C_i^X`-distance between the endpoints of an edge of `C_i^Y`.
    pub value: u32,
}

/// How far the chords of `Y` are from being `X`-short, relator by relator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonProfile {
    pub from_spec: String,
    pub to_spec: String,
    pub per_index: Vec<ProfileEntry>,
    pub running_sup: Vec<u32>,
}

impl ComparisonProfile {
    pub fn values(&self) -> Vec<u32> {
        self.per_index.iter().map(|e| e.value).collect()
    }

    /// CSV with header `index,n,value,running_sup`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,n,value,running_sup\n");
        for (e, s) in self.per_index.iter().zip(&self.running_sup) {
            out.push_str(&format!("{},{},{},{}\n", e.index, e.n, e.value, s));
        }
        out
    }
}

fn dense_max(x: &ConeGraph, y: &ConeGraph) -> u32 {
    let n = x.n();
    let d = x.dense().expect("below the dense limit");
    let at = |u: usize, v: usize| d[u * n + v] as u32;
    let mut best = u32::from(n >= 2);
    for u in 0..n {
        let (fy, by) = y.reach(u);
        let (fx, bx) = x.reach(u);
        if fy > fx {
            best = best.max((fx + 1..=fy).map(|t| at(u, (u + t) % n)).max().unwrap_or(0));
        }
        if by > bx {
            best = best.max((bx + 1..=by).map(|t| at(u, (u + n - t) % n)).max().unwrap_or(0));
        }
    }
    for c in 0..y.class_count() {
        let m = y.class_members(c);
        for (k, &u) in m.iter().enumerate() {
            for &v in &m[k + 1..] {
                best = best.max(at(u as usize, v as usize));
            }
        }
    }
    for (u, v, _) in y.extra_chords() {
        best = best.max(at(u, v));
    }
    best
}

/// Exact maximum over a clique class of `Y` when `X` is graded: distances
/// are `Δ` or `Δ + 1` in the level difference, and `Δ` is attained iff a
/// strictly climbing path exists.
fn graded_class_max(x: &ConeGraph, levels: &[u32], classes: &[&[u32]]) -> u32 {
    let mut spans: Vec<(u32, usize)> = classes
        .iter()
        .enumerate()
        .filter(|(_, m)| m.len() >= 2)
        .map(|(k, m)| {
            let lo = m.iter().map(|&v| levels[v as usize]).min().unwrap();
            let hi = m.iter().map(|&v| levels[v as usize]).max().unwrap();
            (hi - lo, k)
        })
        .collect();
    spans.sort_by(|a, b| b.cmp(a));
    let mut best = 0;
    for (delta, k) in spans {
        if delta < best {
            break;
        }
        if delta == 0 {
            best = best.max(1);
            continue;
        }
        let m = classes[k];
        let lo = m.iter().map(|&v| levels[v as usize]).min().unwrap();
        let low: Vec<usize> = m.iter().map(|&v| v as usize).filter(|&v| levels[v] == lo).collect();
        let high: Vec<usize> = m.iter().map(|&v| v as usize).filter(|&v| levels[v] == lo + delta).collect();
        let detour = low.iter().any(|&u| {
            let d = x.bfs_bounded(u, delta, None);
            high.iter().any(|&v| d[v] == INF)
        });
        best = best.max(delta + u32::from(detour));
    }
    best
}

/// `max { d_{C_i^X}(u, v) : {u, v} an edge of C_i^Y }` on a common relator.
pub fn max_chord_distance(x: &ConeGraph, y: &ConeGraph) -> u32 {
    assert_eq!(x.n(), y.n(), "cones over different relators");
    let n = x.n();
    if n < 2 {
        return 0;
    }
    if y.is_complete() {
        return cone_diameter(x);
    }
    if n <= DENSE_LIMIT {
        return dense_max(x, y);
    }
    let jumps = IntervalJumps::new(x);
    let levels = if jumps.is_none() { x.graded_levels() } else { None };

    let uncovered: Vec<usize> = (0..n)
        .filter(|&u| {
            let (fy, by) = y.reach(u);
            let (fx, bx) = x.reach(u);
            fy > fx || by > bx
        })
        .collect();
    let interval_best = uncovered
        .par_iter()
        .map(|&u| {
            let (fy, by) = y.reach(u);
            let mut arc: Vec<u32> =
                (1..=fy).map(|t| ((u + t) % n) as u32).chain((1..=by).map(|t| ((u + n - t) % n) as u32)).collect();
            arc.sort_unstable();
            match &jumps {
                Some(j) => j.farthest_in(u, &arc),
                None => {
                    let d = x.bfs(u);
                    arc.iter().map(|&v| d[v as usize]).max().unwrap_or(0)
                }
            }
        })
        .max()
        .unwrap_or(1);

    let classes: Vec<&[u32]> = (0..y.class_count()).map(|c| y.class_members(c)).collect();
    let class_best = match (&jumps, &levels) {
        (Some(j), _) => {
            // Middle classes first: for laced `Y` they hold near-antipodal
            // pairs, so the diameter bound usually stops the scan early.
            let cap = cone_diameter(x);
            let mid = classes.len() / 2;
            let mut order: Vec<usize> = (0..classes.len()).collect();
            order.sort_by_key(|&c| c.abs_diff(mid));
            let mut best = 0;
            for c in order {
                if best >= cap {
                    break;
                }
                let m = classes[c];
                best = best.max(m.par_iter().map(|&u| j.farthest_in(u as usize, m)).max().unwrap_or(0));
            }
            best
        }
        (None, Some(lv)) => graded_class_max(x, lv, &classes),
        (None, None) => classes
            .par_iter()
            .flat_map(|m| m.par_iter().map(move |&u| (u, *m)))
            .map(|(u, m)| {
                let d = x.bfs(u as usize);
                m.iter().map(|&v| d[v as usize]).max().unwrap_or(0)
            })
            .max()
            .unwrap_or(0),
    };

    let extra_best = y.extra_chords().into_par_iter().map(|(u, v, _)| cone_distance(x, u, v)).max().unwrap_or(0);
    1.max(interval_best).max(class_best).max(extra_best)
}

/// `per_index(i) = max over edges {u,v} of C_i^Y of d_{C_i^X}(u, v)` for
/// `i = 1..=upto`, with prefix maxima.
pub fn compare_profile(
    idx: &PieceIndex,
    x: &GenSetSpec,
    y: &GenSetSpec,
    upto: usize,
) -> Result<ComparisonProfile, PosetError> {
    let count = idx.relator_count();
    if upto > count {
        return Err(PosetError::BadRange { upto, count });
    }
    let per_index = (1..=upto)
        .map(|i| {
            let xg = build_cone(idx, x, i)?;
            let yg = build_cone(idx, y, i)?;
            Ok(ProfileEntry { index: i, n: xg.n(), value: max_chord_distance(&xg, &yg) })
        })
        .collect::<Result<Vec<_>, PosetError>>()?;
    let running_sup = per_index
        .iter()
        .scan(0u32, |m, e| {
            *m = (*m).max(e.value);
            Some(*m)
        })
        .collect();
    Ok(ComparisonProfile { from_spec: x.serialize(), to_spec: y.serialize(), per_index, running_sup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use scc_cones::{ChordTag, Rule};
    use scc_core::Presentation;

    fn brute(x: &ConeGraph, y: &ConeGraph) -> u32 {
        let n = x.n();
        let mut best = 0;
        for u in 0..n {
            let d = x.bfs(u);
            for v in 0..n {
                if y.has_edge(u, v) {
                    best = best.max(d[v]);
                }
            }
        }
        best
    }

    fn fixture() -> PieceIndex {
        PieceIndex::build(&Presentation::from_ascii(&["abcabcaabccbaacbbcabacbcb", "aabbcabcBAcbbaccabcbaa"]).unwrap())
            .unwrap()
    }

    #[test]
    fn dense_agrees_with_brute_force() {
        let idx = fixture();
        let specs = [
            GenSetSpec::s_only(),
            GenSetSpec::uniform(Rule::Pk(2)),
            GenSetSpec::p4(),
            GenSetSpec::laced(&[0, 0]),
            GenSetSpec::laced(&[9, 5]),
            GenSetSpec::full_l(),
            GenSetSpec::p4().with_override(1, Rule::ExplicitChords(vec![(0, 12), (3, 17)])),
        ];
        for x in &specs {
            for y in &specs {
                let p = compare_profile(&idx, x, y, 2).unwrap();
                for e in &p.per_index {
                    let (xg, yg) = (build_cone(&idx, x, e.index).unwrap(), build_cone(&idx, y, e.index).unwrap());
                    assert_eq!(e.value, brute(&xg, &yg), "{x:?} vs {y:?} at {}", e.index);
                }
                if x == y {
                    assert!(p.values().iter().all(|&v| v <= 1));
                }
            }
        }
    }

    #[test]
    fn full_l_over_cycle() {
        let idx = fixture();
        let p = compare_profile(&idx, &GenSetSpec::s_only(), &GenSetSpec::full_l(), 2).unwrap();
        assert_eq!(p.values(), vec![25 / 2, 22 / 2]);
        assert_eq!(p.running_sup, vec![12, 12]);
        assert!(p.to_csv().starts_with("index,n,value,running_sup\n1,25,12,12\n"));
        assert!(matches!(
            compare_profile(&idx, &GenSetSpec::p4(), &GenSetSpec::p4(), 3),
            Err(PosetError::BadRange { .. })
        ));
    }

    #[test]
    fn structured_paths_agree_with_brute_force() {
        let n = 5000;
        let reach = |s: usize| (0..n).map(|u| 3 + ((u / 97 + s) % 5) as u32).collect::<Vec<u32>>();
        let mut f = reach(0);
        for _ in 0..3 {
            for u in 0..n {
                let w = (u + 1) % n;
                f[w] = f[w].max(f[u].saturating_sub(1));
            }
        }
        let x = ConeGraph::from_reach(n, f.clone(), ChordTag::P(4));
        assert!(x.intervals_monotone());
        let wide = ConeGraph::from_reach(n, f.iter().map(|r| r * 3).collect(), ChordTag::P(8));
        let chords: Vec<(usize, usize, ChordTag)> =
            (0..40).map(|k| (k * 7, (k * 131 + 2500) % n, ChordTag::Explicit)).collect();
        let extra = ConeGraph::from_chords(0, n, &chords);
        for y in [&wide, &extra] {
            assert_eq!(max_chord_distance(&x, y), brute(&x, y));
        }
        assert_eq!(max_chord_distance(&extra, &wide), brute(&extra, &wide));
    }
}
