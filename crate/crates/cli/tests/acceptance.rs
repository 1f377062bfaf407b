//! Exit gate: one PASS/FAIL line per acceptance criterion. Thresholds and
//! budgets are the constants below; nothing is relaxed at run time.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scc_cones::{build_cone, hyperbolicity, GenSetSpec};
use scc_core::{Letter, Presentation, Rational, Word};
use scc_families::{
    count_cube_free, family_presentation, inequality_value, log2_inequality_value, threshold_backward,
    threshold_forward, FamilySource,
};
use scc_group::oracle::{reduced_words, FreeElimination};
use scc_group::{build_ball, build_ball_with, spath_suite, BallConfig, DehnMachine};
use scc_pieces::oracle::BruteForce;
use scc_pieces::{streamed, Arc, Direction, PieceIndex, Verdict};
use scc_poset::{compare_profile, laced_pair, mix_pfin, witness_indices, ComparisonProfile, DEFAULT_WITNESS_THRESHOLD};
use serde_json::Value;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

const FAMILY_RANGE: (usize, usize) = (6, 12);
const FAMILY_TIME_BUDGET: Duration = Duration::from_secs(60);
const CUBE_FREE_MAX_LEN: usize = 18;
const CUBE_FREE_ORACLE_MAX_LEN: usize = 10;
const LACED_RANGE: (usize, usize) = (6, 10);
const LACED_SLIM_MAX: u32 = 1;
const PIECE_FIXTURES: u64 = 24;
const PIECE_FIXTURE_MAX_TOTAL: usize = 200;
const DEHN_RELATOR: &str = "dcacbCbcA";
const DEHN_LAMBDA: (u64, u64) = (1, 8);
const DEHN_MAX_WORD: usize = 8;
const SPATH_MIN_SAMPLES: usize = 200;
const SPATH_PER_CONFIG: usize = 60;
const SPATH_SEED: u64 = 0x5eed;
const SPATH_FIXTURES: [&str; 2] = ["CACDDBAdaDAcdbaaCBcBBaBCd", "eBBaBddaabCacdcaCCdCBDaDB"];
const POSET_RANGE: (usize, usize) = (6, 12);
const GROWTH_FACTOR: u32 = 3;
const INEQUALITY_SCAN: usize = 64;
const PERF_RANGE: (usize, usize) = (6, 16);
const PERF_TIME_BUDGET: Duration = Duration::from_secs(120);
const PERF_MEMORY_BUDGET_KB: u64 = 8 * 1024 * 1024;
const STREAMED_CHECK_RANGE: (usize, usize) = (6, 10);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn family_verification() -> Outcome {
    let (lo, hi) = FAMILY_RANGE;
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_scc"))
        .args(["--no-meta", "family", "verify", "--from", &lo.to_string(), "--to", &hi.to_string()])
        .output()
        .expect("scc runs");
    let elapsed = t.elapsed();
    let doc: Value = match serde_json::from_slice(&out.stdout) {
        Ok(v) => v,
        Err(e) => return outcome(false, format!("unparsable report: {e}")),
    };
    let mut bad = Vec::new();
    let rows = doc["result"]["relators"].as_array().cloned().unwrap_or_default();
    for (row, n) in rows.iter().zip(lo..=hi) {
        let len = row["relator_length"].as_u64().unwrap_or(0);
        let p = row["longest_piece"].as_u64().unwrap_or(u64::MAX);
        let expected = (1u64 << n) * (9 * n as u64 + 1);
        // 24·p < |r| is the joint C'(1/24) condition for this relator.
        if row["n"] != n || len != expected || row["cube_free"] != true || p > 18 * n as u64 + 1 || 24 * p >= len {
            bad.push(n);
        }
    }
    let pass =
        out.status.code() == Some(0) && rows.len() == hi - lo + 1 && bad.is_empty() && elapsed <= FAMILY_TIME_BUDGET;
    let pieces: Vec<u64> = rows.iter().filter_map(|r| r["longest_piece"].as_u64()).collect();
    outcome(
        pass,
        format!("n={lo}..={hi} p(r'_n)={pieces:?} failing={bad:?} in {elapsed:.1?} (budget {FAMILY_TIME_BUDGET:?})"),
    )
}

fn has_cube(w: &[u8]) -> bool {
    let n = w.len();
    (0..n).any(|i| (1..=(n - i) / 3).any(|p| (0..2 * p).all(|k| w[i + k] == w[i + p + k])))
}

fn cube_free_counting() -> Outcome {
    let counts: Vec<usize> = (1..=CUBE_FREE_MAX_LEN).map(count_cube_free).collect();
    let below: Vec<usize> =
        (1..=CUBE_FREE_MAX_LEN).filter(|&l| (counts[l - 1] as f64) < (l as f64 / 9.0 + 1.0).exp2()).collect();
    let mut mismatches = Vec::new();
    for l in 1..=CUBE_FREE_ORACLE_MAX_LEN {
        let brute = (0u32..1 << l)
            .filter(|bits| {
                let w: Vec<u8> = (0..l).map(|k| (bits >> (l - 1 - k) & 1) as u8).collect();
                !has_cube(&w)
            })
            .count();
        if brute != counts[l - 1] {
            mismatches.push((l, counts[l - 1], brute));
        }
    }
    outcome(
        below.is_empty() && mismatches.is_empty(),
        format!("counts={counts:?} below_bound={below:?} oracle_mismatches={mismatches:?}"),
    )
}

fn laced_thinness() -> Outcome {
    let (lo, hi) = LACED_RANGE;
    let p = family_presentation(lo, hi).unwrap();
    let idx = PieceIndex::build(&p).unwrap();
    let mut laced = Vec::new();
    let mut cycle = Vec::new();
    let mut ok = true;
    for i in 1..=hi - lo + 1 {
        let l = hyperbolicity(&build_cone(&idx, &GenSetSpec::laced(&[]), i).unwrap()).unwrap();
        let c = hyperbolicity(&build_cone(&idx, &GenSetSpec::s_only(), i).unwrap()).unwrap();
        ok &= l.exact && c.exact && l.slim_lower <= LACED_SLIM_MAX;
        laced.push((l.delta4_twice, l.slim_lower));
        cycle.push(c.delta4_twice);
    }
    let constant = laced.windows(2).all(|w| w[0].0 == w[1].0);
    let growing = cycle.windows(2).all(|w| w[0] < w[1]);
    outcome(ok && constant && growing, format!("laced (2·delta4, slim)={laced:?}; cycle 2·delta4={cycle:?}"))
}

fn random_relator(rng: &mut ChaCha8Rng, rank: u16, len: usize, pool: &[Word]) -> Word {
    let mut w = Word::empty();
    while w.len() < len {
        if !pool.is_empty() && rng.gen_bool(0.3) {
            let src = &pool[rng.gen_range(0..pool.len())];
            let chunk = src.cyclic_factor(rng.gen_range(0..src.len()), rng.gen_range(1..=src.len().min(6)));
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

fn random_presentation(rng: &mut ChaCha8Rng) -> Presentation {
    loop {
        let rank = rng.gen_range(2..=3u16);
        let mut rels: Vec<Word> = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            let len = rng.gen_range(3..=50);
            let r = random_relator(rng, rank, len, &rels);
            if !r.is_empty() {
                rels.push(r);
            }
        }
        let total: usize = rels.iter().map(|r| r.len()).sum();
        if rels.is_empty() || total > PIECE_FIXTURE_MAX_TOTAL {
            continue;
        }
        let alphabet: Vec<char> = (0..rank).map(|k| (b'a' + k as u8) as char).collect();
        if let Ok(p) = Presentation::new(alphabet, rels) {
            return p;
        }
    }
}

fn piece_cover_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9ace);
    let (mut arcs, mut factors, mut mismatches) = (0usize, 0usize, 0usize);
    let mut witness = None;
    for _ in 0..PIECE_FIXTURES {
        let p = random_presentation(&mut rng);
        let idx = PieceIndex::build(&p).unwrap();
        let bf = BruteForce::new(&p);
        for u in bf.all_factors() {
            factors += 1;
            if idx.is_piece(&u).unwrap() != bf.is_piece(&u) {
                mismatches += 1;
                witness.get_or_insert_with(|| format!("is_piece({}) on {}", u.to_ascii(), p.serialize()));
            }
        }
        for i in 1..=p.relators().len() {
            let n = p.relator(i).len();
            for start in 0..n {
                for len in 0..=n {
                    for dir in [Direction::Forward, Direction::Backward] {
                        let arc = Arc { start, len, dir };
                        arcs += 1;
                        if idx.min_piece_cover(i, arc) != idx.min_piece_cover_dp(i, arc) {
                            mismatches += 1;
                            witness.get_or_insert_with(|| format!("cover {arc:?} of r_{i} on {}", p.serialize()));
                        }
                    }
                }
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("{PIECE_FIXTURES} fixtures, {arcs} arcs, {factors} factors, {mismatches} mismatches {witness:?}"),
    )
}

fn dehn_cross_validation() -> Outcome {
    let p = Presentation::from_ascii(&[DEHN_RELATOR]).unwrap();
    let lambda = Rational::new(DEHN_LAMBDA.0, DEHN_LAMBDA.1);
    let certified = PieceIndex::build(&p).unwrap().check_small_cancellation(lambda).verdict == Verdict::Pass;
    let machine = DehnMachine::new(&p, lambda).unwrap();
    let radius = (DEHN_MAX_WORD as u32).div_ceil(2);
    let oracle = FreeElimination::new(&p).unwrap();
    let ball = build_ball_with(&p, &GenSetSpec::s_only(), BallConfig::new(1, radius), Box::new(oracle)).unwrap();
    let dehn_ball = build_ball(&p, &GenSetSpec::s_only(), BallConfig::new(1, radius)).unwrap();
    let (mut words, mut trivial, mut disagree) = (0usize, 0usize, 0usize);
    let mut witness = None;
    for len in 0..=DEHN_MAX_WORD {
        for w in reduced_words(p.rank(), len) {
            words += 1;
            // A trivial word of length ≤ 2R never leaves the R-ball.
            let by_ball = ball.walk(0, &w) == Some(0);
            trivial += by_ball as usize;
            if machine.dehn_normalize(&w).is_empty() != by_ball {
                disagree += 1;
                witness.get_or_insert_with(|| w.to_ascii());
            }
        }
    }
    let levels = ball.per_level() == dehn_ball.per_level();
    outcome(
        certified && disagree == 0 && levels,
        format!(
            "C'(1/8) {certified}; {words} words of length ≤ {DEHN_MAX_WORD}, {trivial} trivial, {disagree} disagreements {witness:?}; ball levels {:?} agree {levels}",
            ball.per_level()
        ),
    )
}

fn spath_suite_check() -> Outcome {
    let mut total = 0;
    let mut fails = Vec::new();
    let mut notes = Vec::new();
    for rel in SPATH_FIXTURES {
        let p = Presentation::from_ascii(&[rel]).unwrap();
        for (spec, radius) in [(GenSetSpec::p4(), 3), (GenSetSpec::laced(&[]), 2)] {
            let ball = build_ball(&p, &spec, BallConfig::new(1, radius)).unwrap();
            let rep = spath_suite(&ball, SPATH_PER_CONFIG, SPATH_SEED).unwrap();
            total += rep.samples;
            for a in rep.assertions.iter().filter(|a| !a.pass) {
                fails.push(format!("{rel}/{}: {} {:?}", rep.metric, a.name, a.witness));
            }
            notes.push(format!(
                "{}@R{radius}: {} samples, {} type-(i), span ≤ {}, pruned ≤ {:?}, overlap ≤ {:.2}, {} degenerate, {}/{} convexity pairs",
                rep.metric.split_whitespace().last().unwrap_or(""),
                rep.samples,
                rep.type_i_found,
                rep.max_type_i_span,
                rep.max_pruned_distance,
                rep.max_overlap_ratio,
                rep.degenerate,
                rep.convexity.certified,
                rep.convexity.pairs
            ));
        }
    }
    outcome(
        total >= SPATH_MIN_SAMPLES && fails.is_empty(),
        format!("{total} geodesics (min {SPATH_MIN_SAMPLES}); violations {fails:?}; {}", notes.join("; ")),
    )
}

/// Strictly increasing running sup whose final value is at least
/// `GROWTH_FACTOR` times the first.
fn grows(p: &ComparisonProfile) -> bool {
    let s = &p.running_sup;
    s.len() >= 2 && s.windows(2).all(|w| w[0] < w[1]) && s[s.len() - 1] >= GROWTH_FACTOR * s[0]
}

fn incomparability() -> Outcome {
    let (lo, hi) = POSET_RANGE;
    let upto = hi - lo + 1;
    let p = family_presentation(lo, hi).unwrap();
    let idx = PieceIndex::build(&p).unwrap();
    let (x, y) = laced_pair(&idx, upto, DEFAULT_WITNESS_THRESHOLD).unwrap();
    let xy = compare_profile(&idx, &x, &y, upto).unwrap();
    let yx = compare_profile(&idx, &y, &x, upto).unwrap();
    let laced_ok = grows(&xy) && grows(&yx);

    let w = witness_indices(&idx, upto, DEFAULT_WITNESS_THRESHOLD).unwrap();
    let evens: BTreeSet<usize> = (1..=w.len()).filter(|a| a % 2 == 0).collect();
    let odds: BTreeSet<usize> = (1..=w.len()).filter(|a| a % 2 == 1).collect();
    let (x1, x2) = (GenSetSpec::laced(&[]), GenSetSpec::p4());
    let ma = mix_pfin(&x1, &x2, &evens, &w).unwrap();
    let mb = mix_pfin(&x1, &x2, &odds, &w).unwrap();
    let ab = compare_profile(&idx, &ma, &mb, upto).unwrap();
    let ba = compare_profile(&idx, &mb, &ma, upto).unwrap();
    // Chords of X^B missing from X^A sit at the witnesses selected by A ∖ B.
    let growth = |prof: &ComparisonProfile, only: &BTreeSet<usize>| {
        let at: BTreeSet<usize> = only.iter().map(|&a| w[a - 1]).collect();
        let vals: Vec<u32> = prof.per_index.iter().filter(|e| at.contains(&e.index)).map(|e| e.value).collect();
        let quiet = prof.per_index.iter().filter(|e| !at.contains(&e.index)).all(|e| e.value <= 1);
        quiet
            && vals.len() >= 2
            && vals.windows(2).all(|v| v[0] < v[1])
            && vals[vals.len() - 1] >= GROWTH_FACTOR * vals[0]
    };
    let pfin_ok = growth(&ab, &evens) && growth(&ba, &odds);
    outcome(
        laced_ok && pfin_ok,
        format!(
            "laced running_sup X→Y {:?}, Y→X {:?}; P(ω)/Fin evens→odds {:?}, odds→evens {:?}",
            xy.running_sup,
            yx.running_sup,
            ab.values(),
            ba.values()
        ),
    )
}

fn inequality_scan() -> Outcome {
    let below_at_6 = inequality_value(6) < 1.0;
    let monotone = (6..INEQUALITY_SCAN).all(|n| inequality_value(n) < inequality_value(n + 1));
    let fwd = threshold_forward(INEQUALITY_SCAN);
    let bwd = threshold_backward(INEQUALITY_SCAN);
    let eventually = fwd.is_some_and(|t| (t.n0..=INEQUALITY_SCAN).all(|n| inequality_value(n) >= 1.0));
    let domains_agree =
        (6..=INEQUALITY_SCAN).all(|n| (inequality_value(n) >= 1.0) == (log2_inequality_value(n) >= 0.0));
    outcome(
        below_at_6 && monotone && eventually && domains_agree && fwd.is_some() && fwd == bwd,
        format!(
            "value(6)={:.4}, n0 forward={:?} backward={:?}, monotone on 6..={INEQUALITY_SCAN}: {monotone}",
            inequality_value(6),
            fwd.map(|t| t.n0),
            bwd.map(|t| t.n0)
        ),
    )
}

fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn performance_gate() -> Outcome {
    // Resetting the high-water mark makes the reading specific to this
    // criterion; without it the reading is still an upper bound.
    let _ = std::fs::write("/proc/self/clear_refs", "5");
    let (lo, hi) = PERF_RANGE;
    let t = Instant::now();
    let p = family_presentation(lo, hi).unwrap();
    let idx = PieceIndex::build(&p).unwrap();
    let pieces: Vec<usize> = (1..=idx.relator_count()).map(|i| idx.longest_piece(i).0).collect();
    let elapsed = t.elapsed();
    let rss = peak_rss_kb();
    let closure = 2 * p.total_length();
    drop(idx);

    let (slo, shi) = STREAMED_CHECK_RANGE;
    let src = FamilySource { ns: (slo..=shi).collect() };
    let joint = PieceIndex::build(&family_presentation(slo, shi).unwrap()).unwrap();
    let streamed_ok = streamed::check_generic(&src).is_ok()
        && (1..=src.ns.len()).all(|i| streamed::longest_piece(&src, i).0 == joint.longest_piece(i).0);
    let readme = std::fs::read_to_string(workspace_root().join("README.md")).unwrap_or_default();
    let documented = readme.contains("--streamed") && readme.contains("n = 19");
    let within = elapsed <= PERF_TIME_BUDGET && rss.is_some_and(|kb| kb <= PERF_MEMORY_BUDGET_KB);
    outcome(
        within && streamed_ok && documented,
        format!(
            "closure {closure} letters, index + longest_piece in {elapsed:.1?} (budget {PERF_TIME_BUDGET:?}), peak RSS {} MB (budget {} MB), p={pieces:?}; streamed = joint on n={slo}..={shi}: {streamed_ok}; streamed mode documented: {documented}",
            rss.map_or(-1, |kb| (kb / 1024) as i64),
            PERF_MEMORY_BUDGET_KB / 1024
        ),
    )
}

/// Criteria that cannot hold as stated, with the counterexample. The harness
/// still reports them as FAIL; it exits nonzero if any other criterion fails
/// or if one of these starts passing.
type Criterion = (&'static str, fn() -> Outcome);

const KNOWN_FALSE: &[(usize, &str)] = &[(2, "length 1 has 2 cube-free words and 2 < 2^(1/9+1) ≈ 2.16")];

fn main() {
    let criteria: [Criterion; 9] = [
        ("family verification", family_verification),
        ("cube-free counting", cube_free_counting),
        ("laced-cone thinness", laced_thinness),
        ("piece-cover oracle equivalence", piece_cover_equivalence),
        ("Dehn/BFS cross-validation", dehn_cross_validation),
        ("S-path structural suite", spath_suite_check),
        ("incomparability experiment", incomparability),
        ("inequality scan", inequality_scan),
        ("performance gate", performance_gate),
    ];
    let mut failed = 0;
    let mut unexpected = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let known = KNOWN_FALSE.iter().find(|(c, _)| *c == k + 1).map(|(_, why)| *why);
        failed += !o.pass as usize;
        if o.pass == known.is_some() {
            unexpected.push(k + 1);
        }
        let note = known.map(|w| format!(" [known false: {w}]")).unwrap_or_default();
        println!(
            "{} [{}] {name} ({:.1?}): {}{note}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            t.elapsed(),
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
