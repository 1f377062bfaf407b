use crate::PosetError;
use scc_cones::{build_cone, cone_diameter, GenSetSpec, Rule};
use scc_pieces::PieceIndex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Witness indices are those with `diam(C̄_i)` above this.
pub const DEFAULT_WITNESS_THRESHOLD: u32 = 8;

/// Symbolic containment of the chord sets of two rules on one relator.
/// `false` when containment cannot be decided without building cones.
pub fn rule_le(a: &Rule, b: &Rule) -> bool {
    match (a, b) {
        _ if a == b => true,
        (Rule::SOnly, _) | (_, Rule::FullL) => true,
        (Rule::Pk(j), Rule::Pk(k)) => j <= k,
        (Rule::Pk(j), Rule::Laced(_) | Rule::ExplicitChords(_)) => *j <= 4,
        (Rule::ExplicitChords(cs), Rule::ExplicitChords(ds)) => {
            cs.iter().all(|c| ds.contains(c) || ds.contains(&(c.1, c.0)))
        }
        _ => false,
    }
}

/// Relators `i ≤ upto` whose `C̄_i` has diameter above `threshold`.
pub fn witness_indices(idx: &PieceIndex, upto: usize, threshold: u32) -> Result<Vec<usize>, PosetError> {
    let mut out = Vec::new();
    for i in 1..=upto {
        if cone_diameter(&build_cone(idx, &GenSetSpec::p4(), i)?) > threshold {
            out.push(i);
        }
    }
    Ok(out)
}

/// `x_i = 0` and `y_i` the least vertex at `C̄_i`-distance `⌊diam(C̄_i)/2⌋`
/// from it, for `i` in `indices`; elsewhere `y_i = x_i`.
pub fn pick_antipodal_bases(
    idx: &PieceIndex,
    upto: usize,
    indices: &[usize],
) -> Result<(Vec<usize>, Vec<usize>), PosetError> {
    let xs = vec![0; upto];
    let mut ys = vec![0; upto];
    for &i in indices.iter().filter(|&&i| i <= upto) {
        let cbar = build_cone(idx, &GenSetSpec::p4(), i)?;
        let half = cone_diameter(&cbar) / 2;
        let d = cbar.bfs(0);
        ys[i - 1] = d.iter().position(|&t| t == half).expect("every level up to the eccentricity is occupied");
    }
    Ok((xs, ys))
}

/// The laced cones based at `(x_i)` and `(y_i)`.
pub fn laced_pair(idx: &PieceIndex, upto: usize, threshold: u32) -> Result<(GenSetSpec, GenSetSpec), PosetError> {
    let w = witness_indices(idx, upto, threshold)?;
    let (xs, ys) = pick_antipodal_bases(idx, upto, &w)?;
    Ok((GenSetSpec::laced(&xs), GenSetSpec::laced(&ys)))
}

fn select(witnesses: &[usize], positions: &BTreeSet<usize>) -> Result<BTreeSet<usize>, PosetError> {
    positions
        .iter()
        .map(|&a| {
            witnesses
                .get(a.wrapping_sub(1))
                .copied()
                .ok_or(PosetError::BadPosition { position: a, len: witnesses.len() })
        })
        .collect()
}

/// `X^A`: `X²` off `I` and on `I_A`, `X¹` on `I ∖ I_A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSetMixture {
    pub x1: GenSetSpec,
    pub x2: GenSetSpec,
    /// 1-based positions into `witnesses`.
    pub a: BTreeSet<usize>,
    pub witnesses: Vec<usize>,
}

impl IndexSetMixture {
    pub fn spec(&self) -> Result<GenSetSpec, PosetError> {
        mix_pfin(&self.x1, &self.x2, &self.a, &self.witnesses)
    }
}

/// Requires `X²_j ⊆ X¹_j` on the witness indices `I`; `I_A` is the set of
/// `I[a]` for the 1-based positions `a ∈ A`.
pub fn mix_pfin(
    x1: &GenSetSpec,
    x2: &GenSetSpec,
    a: &BTreeSet<usize>,
    witnesses: &[usize],
) -> Result<GenSetSpec, PosetError> {
    for &j in witnesses {
        if !rule_le(x2.rule(j), x1.rule(j)) {
            return Err(PosetError::SpecNotNested {
                index: j,
                small: x2.rule(j).to_string(),
                large: x1.rule(j).to_string(),
            });
        }
    }
    let i_a = select(witnesses, a)?;
    let mut out = x2.clone();
    for &j in witnesses.iter().filter(|j| !i_a.contains(j)) {
        out.overrides.insert(j, x1.rule(j).clone());
    }
    Ok(out)
}

/// `W^A`: `X` on `I_A`, `Y` on `J_A`, `L` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntichainMixture {
    pub x: GenSetSpec,
    pub y: GenSetSpec,
    pub i_a: BTreeSet<usize>,
    pub j_a: BTreeSet<usize>,
}

impl AntichainMixture {
    pub fn spec(&self) -> Result<GenSetSpec, PosetError> {
        mix_antichain(&self.x, &self.y, &self.i_a, &self.j_a)
    }
}

pub fn mix_antichain(
    x: &GenSetSpec,
    y: &GenSetSpec,
    i_a: &BTreeSet<usize>,
    j_a: &BTreeSet<usize>,
) -> Result<GenSetSpec, PosetError> {
    if let Some(&index) = i_a.intersection(j_a).next() {
        return Err(PosetError::OverlappingIndexSets { index });
    }
    let mut out = GenSetSpec::full_l();
    out.overrides.extend(i_a.iter().map(|&k| (k, x.rule(k).clone())));
    out.overrides.extend(j_a.iter().map(|&k| (k, y.rule(k).clone())));
    Ok(out)
}

/// Splits witness indices alternately into the growth sequences `n(i)` (odd
/// positions) and `n'(j)` (even positions), then selects positions `A` from
/// each: `(I_A, J_A)`.
pub fn split_witnesses(
    witnesses: &[usize],
    a: &BTreeSet<usize>,
) -> Result<(BTreeSet<usize>, BTreeSet<usize>), PosetError> {
    let odd: Vec<usize> = witnesses.iter().step_by(2).copied().collect();
    let even: Vec<usize> = witnesses.iter().skip(1).step_by(2).copied().collect();
    let pick = |seq: &[usize]| a.iter().filter_map(|&p| seq.get(p.wrapping_sub(1)).copied()).collect::<BTreeSet<_>>();
    if let Some(&position) = a.iter().find(|&&p| p == 0 || p > odd.len()) {
        return Err(PosetError::BadPosition { position, len: odd.len() });
    }
    Ok((pick(&odd), pick(&even)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn pfin_endpoints() {
        let x1 = GenSetSpec::laced(&[0; 5]);
        let x2 = GenSetSpec::p4();
        let w = [2, 3, 5];
        let none = mix_pfin(&x1, &x2, &set(&[]), &w).unwrap();
        for j in 1..=5 {
            let expect = if w.contains(&j) { x1.rule(j) } else { x2.rule(j) };
            assert_eq!(none.rule(j), expect);
        }
        let all = mix_pfin(&x1, &x2, &set(&[1, 2, 3]), &w).unwrap();
        assert!((1..=5).all(|j| all.rule(j) == &Rule::Pk(4)));
        let some = mix_pfin(&x1, &x2, &set(&[2]), &w).unwrap();
        assert_eq!(some.rule(3), &Rule::Pk(4));
        assert_eq!(some.rule(5), &Rule::Laced(0));
        assert!(matches!(mix_pfin(&x2, &x1, &set(&[]), &w), Err(PosetError::SpecNotNested { index: 2, .. })));
        assert!(matches!(mix_pfin(&x1, &x2, &set(&[4]), &w), Err(PosetError::BadPosition { .. })));
    }

    #[test]
    fn antichain_rule() {
        let x = GenSetSpec::laced(&[0, 0, 0]);
        let y = GenSetSpec::laced(&[5, 6, 7]);
        let empty = mix_antichain(&x, &y, &set(&[]), &set(&[])).unwrap();
        assert!((1..=3).all(|k| empty.rule(k) == &Rule::FullL));
        let w = mix_antichain(&x, &y, &set(&[1]), &set(&[3])).unwrap();
        assert_eq!((w.rule(1), w.rule(2), w.rule(3)), (&Rule::Laced(0), &Rule::FullL, &Rule::Laced(7)));
        assert_eq!(mix_antichain(&x, &y, &set(&[2]), &set(&[2])), Err(PosetError::OverlappingIndexSets { index: 2 }));
        let (i, j) = split_witnesses(&[2, 4, 5, 7, 9], &set(&[1, 3])).unwrap();
        assert_eq!((i, j), (set(&[2, 9]), set(&[4])));
    }

    #[test]
    fn nesting() {
        assert!(rule_le(&Rule::Pk(4), &Rule::Laced(3)));
        assert!(rule_le(&Rule::SOnly, &Rule::Pk(1)));
        assert!(!rule_le(&Rule::Laced(0), &Rule::Laced(1)));
        assert!(!rule_le(&Rule::FullL, &Rule::Pk(9)));
        assert!(rule_le(&Rule::ExplicitChords(vec![(1, 4)]), &Rule::ExplicitChords(vec![(4, 1), (2, 6)])));
    }
}
