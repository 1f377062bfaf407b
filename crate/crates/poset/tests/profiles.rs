use proptest::prelude::*;
use scc_cones::{build_cone, ConeGraph, GenSetSpec};
use scc_families::family_presentation;
use scc_pieces::PieceIndex;
use scc_poset::{compare_profile, max_chord_distance, mix_pfin, witness_indices, DEFAULT_WITNESS_THRESHOLD};
use std::collections::BTreeSet;
use std::sync::OnceLock;

fn small_family() -> &'static PieceIndex {
    static IDX: OnceLock<PieceIndex> = OnceLock::new();
    IDX.get_or_init(|| PieceIndex::build(&family_presentation(6, 8).unwrap()).unwrap())
}

fn brute_force(x: &ConeGraph, y: &ConeGraph) -> u32 {
    (0..x.n())
        .map(|u| {
            let d = x.bfs(u);
            y.neighbors(u).into_iter().map(|v| d[v]).max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

#[test]
fn large_cones_match_bfs() {
    // r'_7 has 8192 vertices, past the dense limit, so the interval and
    // graded paths are taken.
    let idx = PieceIndex::build(&family_presentation(7, 7).unwrap()).unwrap();
    let half = idx.relator_len(1) / 2;
    for (x, y) in [
        (GenSetSpec::laced(&[0]), GenSetSpec::laced(&[half])),
        (GenSetSpec::p4(), GenSetSpec::laced(&[1234])),
        (GenSetSpec::laced(&[77]), GenSetSpec::p4()),
    ] {
        let (xg, yg) = (build_cone(&idx, &x, 1).unwrap(), build_cone(&idx, &y, 1).unwrap());
        assert_eq!(max_chord_distance(&xg, &yg), brute_force(&xg, &yg), "{} vs {}", x.serialize(), y.serialize());
    }
}

#[test]
fn equal_specs_are_within_one() {
    let idx = small_family();
    for s in [GenSetSpec::s_only(), GenSetSpec::p4(), GenSetSpec::laced(&[5, 9, 11])] {
        let prof = compare_profile(idx, &s, &s, 3).unwrap();
        assert!(prof.values().iter().all(|&v| v <= 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// `A ⊆ B` gives `X^B ⊆ X^A` index by index, so every chord of `X^B` is
    /// an edge of `X^A`.
    #[test]
    fn order_preservation(a_mask in 0u8..8, extra in 0u8..8) {
        let idx = small_family();
        let w = witness_indices(idx, 3, DEFAULT_WITNESS_THRESHOLD).unwrap();
        prop_assert_eq!(&w, &vec![1, 2, 3]);
        let positions = |m: u8| -> BTreeSet<usize> { (1..=3).filter(|&k| m >> (k - 1) & 1 == 1).collect() };
        let a = positions(a_mask);
        let b = positions(a_mask | extra);
        let (x1, x2) = (GenSetSpec::laced(&[]), GenSetSpec::p4());
        let xa = mix_pfin(&x1, &x2, &a, &w).unwrap();
        let xb = mix_pfin(&x1, &x2, &b, &w).unwrap();
        let prof = compare_profile(idx, &xa, &xb, 3).unwrap();
        prop_assert!(prof.values().iter().all(|&v| v <= 1), "{:?}", prof.values());
        if a != b {
            let back = compare_profile(idx, &xb, &xa, 3).unwrap();
            for (e, k) in back.per_index.iter().zip(1..) {
                prop_assert_eq!(e.value > 1, b.contains(&k) && !a.contains(&k));
            }
        }
    }
}
