use proptest::prelude::*;
use scc_cones::GenSetSpec;
use scc_core::{Letter, Presentation, Rational, Word};
use scc_group::oracle::{reduced_words, FreeElimination};
use scc_group::{build_ball, build_ball_with, BallConfig, DehnMachine, WordSolver};

const REL: &str = "dcacbCbcA";

fn pres() -> Presentation {
    Presentation::from_ascii(&[REL]).unwrap()
}

fn machine() -> DehnMachine {
    DehnMachine::new(&pres(), Rational::new(1, 8)).unwrap()
}

fn word(codes: &[u32]) -> Word {
    Word::from_letters(codes.iter().map(|&c| Letter::from_code(c)).collect()).free_reduce()
}

#[test]
fn dehn_agrees_with_oracle_ball_up_to_length_six() {
    let p = pres();
    let m = machine();
    let ball =
        build_ball_with(&p, &GenSetSpec::s_only(), BallConfig::new(1, 3), Box::new(FreeElimination::new(&p).unwrap()))
            .unwrap();
    let mut trivial = 0;
    for len in 0..=6 {
        for w in reduced_words(4, len) {
            let by_ball = ball.walk(0, &w) == Some(0);
            assert_eq!(m.dehn_normalize(&w).is_empty(), by_ball, "{}", w.to_ascii());
            trivial += by_ball as usize;
        }
    }
    assert_eq!(trivial, 1);
}

#[test]
fn dehn_ball_matches_oracle_ball() {
    let p = pres();
    let oracle =
        build_ball_with(&p, &GenSetSpec::s_only(), BallConfig::new(1, 4), Box::new(FreeElimination::new(&p).unwrap()))
            .unwrap();
    let dehn = build_ball(&p, &GenSetSpec::s_only(), BallConfig::new(1, 4)).unwrap();
    assert_eq!(dehn.per_level(), oracle.per_level());
    let m = machine();
    for v in 0..dehn.len() {
        let rep = dehn.rep(v);
        assert_eq!(rep.len() as u32, dehn.level(v));
        assert!(m.greendlinger_factor(rep).is_none(), "{} is not Dehn-irreducible", rep.to_ascii());
        let u = oracle.locate(rep).unwrap();
        assert_eq!(oracle.level(u), dehn.level(v));
        assert_eq!(oracle.rep(u), rep);
    }
}

#[test]
fn x_ball_levels_bounded_by_s_levels() {
    let p = Presentation::from_ascii(&["CACDDBAdaDAcdbaaCBcBBaBCd"]).unwrap();
    let s = build_ball(&p, &GenSetSpec::s_only(), BallConfig::new(1, 3)).unwrap();
    let x = build_ball(&p, &GenSetSpec::p4(), BallConfig::new(1, 2)).unwrap();
    for v in 0..s.len() {
        if let Some(u) = x.locate(s.rep(v)) {
            assert!(x.level(u) <= s.level(v));
        } else {
            assert!(s.level(v) > 2);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_of_conjugates_vanish(parts in prop::collection::vec((prop::collection::vec(0u32..8, 0..6), any::<bool>()), 1..4)) {
        let r = Word::from_ascii(REL).unwrap();
        let m = machine();
        let mut w = Word::empty();
        for (g, inv) in &parts {
            let g = word(g);
            let rel = if *inv { r.invert() } else { r.clone() };
            w = w.concat(&g).concat(&rel).concat(&g.invert()).free_reduce();
        }
        prop_assert!(m.dehn_normalize(&w).is_empty());
    }

    #[test]
    fn normal_form_is_equal_and_no_longer(codes in prop::collection::vec(0u32..8, 0..24)) {
        let w = word(&codes);
        let m = machine();
        let o = FreeElimination::new(&pres()).unwrap();
        let n = m.dehn_normalize(&w);
        prop_assert!(n.len() <= w.len());
        prop_assert!(n.is_reduced());
        prop_assert_eq!(o.substitute(&n), o.substitute(&w));
        prop_assert!(m.greendlinger_factor(&n).is_none());
        prop_assert_eq!(m.same_element(&n, &w), true);
    }
}

#[test]
fn geodesics_are_symmetric_and_certified() {
    let p = Presentation::from_ascii(&["CACDDBAdaDAcdbaaCBcBBaBCd"]).unwrap();
    let b = build_ball(&p, &GenSetSpec::p4(), BallConfig::new(1, 2)).unwrap();
    let sample: Vec<usize> = (0..b.len()).step_by(997).collect();
    for &u in &sample {
        for &v in &sample {
            match (b.distance(u, v), b.distance(v, u)) {
                (Ok(d), Ok(e)) => {
                    assert_eq!(d, e);
                    let g = b.geodesic(u, v).unwrap();
                    assert_eq!(g.len() as u32, d);
                    assert_eq!(b.locate(&b.rep(u).concat(&b.path_word(&g.generators))), Some(v));
                }
                (Err(_), Err(_)) => {}
                other => panic!("asymmetric certification {other:?}"),
            }
        }
    }
}
