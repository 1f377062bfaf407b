use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scc_core::{Letter, Presentation, Word};
use scc_pieces::oracle::BruteForce;
use scc_pieces::{Arc, Cover, Direction, PieceIndex};

fn random_relator(rng: &mut ChaCha8Rng, rank: u16, len: usize, pool: &[Word]) -> Word {
    let mut w = Word::empty();
    while w.len() < len {
        if !pool.is_empty() && rng.gen_bool(0.3) {
            let src = &pool[rng.gen_range(0..pool.len())];
            let a = rng.gen_range(0..src.len());
            let l = rng.gen_range(1..=src.len().min(6));
            let chunk = src.cyclic_factor(a, l);
            let chunk = if rng.gen_bool(0.5) { chunk.invert() } else { chunk };
            for &x in chunk.iter() {
                w.push_reduced(x);
            }
        } else {
            w.push_reduced(Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5)));
        }
    }
    w.cyclic_reduce().0
}

fn random_presentation(seed: u64) -> Presentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rank = rng.gen_range(2..=3u16);
        let count = rng.gen_range(1..=4);
        let mut rels: Vec<Word> = Vec::new();
        for _ in 0..count {
            let len = rng.gen_range(3..=40);
            let r = random_relator(&mut rng, rank, len, &rels);
            if !r.is_empty() {
                rels.push(r);
            }
        }
        let total: usize = rels.iter().map(|r| r.len()).sum();
        if rels.is_empty() || total > 200 {
            continue;
        }
        let alphabet: Vec<char> = (0..rank).map(|k| (b'a' + k as u8) as char).collect();
        if let Ok(p) = Presentation::new(alphabet, rels) {
            return p;
        }
    }
}

fn check_fixture(p: &Presentation) {
    let idx = PieceIndex::build(p).unwrap();
    let bf = BruteForce::new(p);
    assert_eq!(idx.closure().num_members(), bf.members().len());
    for u in bf.all_factors() {
        assert_eq!(idx.is_piece(&u).unwrap(), bf.is_piece(&u), "is_piece({u:?}) on {}", p.serialize());
        assert_eq!(idx.prefix_count(&u), bf.prefix_count(&u));
    }
    assert!(idx.sub_arc_closure_holds());
    for i in 1..=p.relators().len() {
        let n = p.relator(i).len();
        assert_eq!(idx.longest_piece(i).0, bf.longest_piece(i));
        for q in 0..n {
            assert_eq!(idx.max_piece_run(i, q), bf.run(i, q));
            assert_eq!(idx.max_piece_run_backward(i, q), bf.run_backward(i, q));
            for len in 0..=n {
                for dir in [Direction::Forward, Direction::Backward] {
                    let arc = Arc { start: q, len, dir };
                    let greedy = idx.min_piece_cover(i, arc);
                    let dp = idx.min_piece_cover_dp(i, arc);
                    assert_eq!(greedy, dp, "cover {arc:?} of r_{i} in {}", p.serialize());
                    if len <= 12 {
                        let reference = bf.cover(&idx.arc_label(i, arc)).map_or(Cover::Infinite, Cover::Finite);
                        assert_eq!(greedy, reference);
                    }
                }
            }
        }
    }
}

#[test]
fn random_fixtures_match_brute_force() {
    for seed in 0..24 {
        check_fixture(&random_presentation(seed));
    }
}

#[test]
fn hand_fixtures_match_brute_force() {
    for rels in [
        &["abAB"][..],
        &["aaa"],
        &["abab"],
        &["ab"],
        &["abcab", "cbcA"],
        &["aabbAABB", "abAB"],
        &["abcabcab"],
        &["aabAbb", "bbaBaa"],
    ] {
        check_fixture(&Presentation::from_ascii(rels).unwrap());
    }
}

#[test]
fn prefix_closure_of_found_pieces() {
    for seed in 100..110 {
        let p = random_presentation(seed);
        let idx = PieceIndex::build(&p).unwrap();
        for u in BruteForce::new(&p).pieces() {
            for l in 1..=u.len() {
                assert!(idx.is_piece(&Word::from_letters(u[..l].to_vec())).unwrap());
            }
        }
    }
}
