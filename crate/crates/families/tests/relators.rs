use proptest::prelude::*;
use scc_families::{
    build_family_relator, count_cube_free, enumerate_cube_free, is_cube_free, is_cube_free_naive, CubeFreeEnumerator,
};

#[test]
fn r6_is_cube_free_by_both_checks() {
    let r = build_family_relator(6).unwrap();
    assert_eq!(r.len(), 64 * 55);
    assert!(is_cube_free(r.letters()));
    assert!(is_cube_free_naive(r.letters()));
}

#[test]
fn enumeration_agrees_with_counting() {
    for len in 1..=14 {
        let words: Vec<Vec<u8>> = CubeFreeEnumerator::new(len).collect();
        assert_eq!(words.len(), count_cube_free(len));
        assert!(enumerate_cube_free(len, words.len() + 1).is_err());
        assert!(words.windows(2).all(|w| w[0] < w[1]));
        assert!(words.iter().all(|w| is_cube_free_naive(w)));
    }
}

proptest! {
    #[test]
    fn fast_check_matches_naive(w in prop::collection::vec(0u8..2, 0..400)) {
        prop_assert_eq!(is_cube_free(&w), is_cube_free_naive(&w));
    }

    #[test]
    fn planted_cubes_are_found(prefix in prop::collection::vec(0u8..2, 0..100), root in prop::collection::vec(0u8..2, 1..30)) {
        let mut w = prefix;
        for _ in 0..3 {
            w.extend_from_slice(&root);
        }
        prop_assert!(!is_cube_free(&w));
    }
}
