use crate::args::*;
use anyhow::{anyhow, bail, Context, Result};
use scc_cones::{build_cone, cone_diameter, export_graph, hyperbolicity, ConeGraph, ExportFormat, GenSetSpec};
use scc_core::{parse_ratio, Presentation, Rational, SymmetrizedClosure};
use scc_families::{
    count_cube_free, inequality_value, threshold_backward, threshold_forward, verify_family, FamilyError, FamilyReport,
    FamilySource, Subcollection,
};
use scc_group::{build_ball, spath_suite, BallConfig, DehnMachine};
use scc_pieces::streamed;
use scc_pieces::{PieceIndex, Verdict};
use scc_poset::{
    compare_profile, laced_pair, mix_antichain, mix_pfin, split_witnesses, tc_triviality, witness_indices,
    ComparisonProfile,
};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::path::Path;

/// What a command produced: a JSON report, or raw text for `serialize`,
/// `export` and `gen`, plus a verdict when the command checks a property.
pub struct Outcome {
    pub command: &'static str,
    pub report: Report,
    pub pass: Option<bool>,
}

pub enum Report {
    Json(Value),
    Text(String),
}

impl Outcome {
    fn json(command: &'static str, v: Value) -> Self {
        Outcome { command, report: Report::Json(v), pass: None }
    }

    fn verdict(command: &'static str, v: Value, pass: bool) -> Self {
        Outcome { command, report: Report::Json(v), pass: Some(pass) }
    }

    fn text(command: &'static str, t: String) -> Self {
        Outcome { command, report: Report::Text(t), pass: None }
    }
}

fn load_pres(path: &Path) -> Result<Presentation> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Presentation::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A spec file path, "S", or inline rules with `;` separating lines; a bare
/// rule means `default: <rule>`.
pub fn load_spec(arg: &str) -> Result<GenSetSpec> {
    if arg.eq_ignore_ascii_case("s") {
        return Ok(GenSetSpec::s_only());
    }
    let path = Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?
    } else if arg.contains(':') {
        arg.replace(';', "\n")
    } else {
        format!("default: {arg}")
    };
    GenSetSpec::parse(&text).with_context(|| format!("spec {arg:?}"))
}

fn load_ratio(s: &str) -> Result<Rational> {
    parse_ratio(s).filter(|r| *r.numer() > 0).ok_or_else(|| anyhow!("invalid value {s:?} for --lambda: expected p/q"))
}

fn load_positions(flag: &str, s: &str) -> Result<BTreeSet<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>().map_err(|_| anyhow!("invalid value {s:?} for --{flag}: expected a list like 1,3,5"))
        })
        .collect()
}

fn index(p: &Presentation) -> Result<PieceIndex> {
    Ok(PieceIndex::build(p)?)
}

fn checked_spec(p: &Presentation, arg: &str) -> Result<GenSetSpec> {
    let spec = load_spec(arg)?;
    let lengths: Vec<usize> = p.relators().iter().map(|r| r.len()).collect();
    spec.validate(&lengths)?;
    Ok(spec)
}

fn cone(a: &ConeArgs) -> Result<(PieceIndex, GenSetSpec, ConeGraph)> {
    let p = load_pres(&a.pres)?;
    let spec = checked_spec(&p, &a.spec)?;
    if a.relator == 0 || a.relator > p.relators().len() {
        bail!("invalid value {} for --relator: expected 1..={}", a.relator, p.relators().len());
    }
    let idx = index(&p)?;
    let g = build_cone(&idx, &spec, a.relator)?;
    Ok((idx, spec, g))
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Pres(PresCmd::Parse { pres }) => {
            let p = load_pres(pres)?;
            let closure = SymmetrizedClosure::new(&p)?;
            Ok(Outcome::json(
                "pres parse",
                json!({
                    "alphabet": p.alphabet().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "relator_lengths": p.relators().iter().map(|r| r.len()).collect::<Vec<_>>(),
                    "total_length": p.total_length(),
                    "closure_members": closure.num_members(),
                    "lambda_target": format!("{}/{}", p.lambda_target().numer(), p.lambda_target().denom()),
                }),
            ))
        }
        Command::Pres(PresCmd::Serialize { pres }) => Ok(Outcome::text("pres serialize", load_pres(pres)?.serialize())),
        Command::Pieces(PiecesCmd::Stats { pres }) => {
            let idx = index(&load_pres(pres)?)?;
            Ok(Outcome::json("pieces stats", json!({ "relators": idx.relator_stats() })))
        }
        Command::Pieces(PiecesCmd::Check(a)) | Command::Check(a) => {
            let p = load_pres(&a.pres)?;
            let lambda = match &a.lambda {
                Some(s) => load_ratio(s)?,
                None => p.lambda_target(),
            };
            let report = index(&p)?.check_small_cancellation(lambda);
            let pass = report.verdict == Verdict::Pass;
            Ok(Outcome::verdict("pieces check", serde_json::to_value(report)?, pass))
        }
        Command::Cone(ConeCmd::Build(a)) => {
            let (_, spec, g) = cone(a)?;
            Ok(Outcome::json(
                "cone build",
                json!({
                    "relator": a.relator,
                    "rule": spec.rule(a.relator).to_string(),
                    "n": g.n(),
                    "base": g.base(),
                    "complete": g.is_complete(),
                    "interval_only": g.is_interval_only(),
                    "diameter": cone_diameter(&g),
                }),
            ))
        }
        Command::Cone(ConeCmd::Hyp(a)) => {
            let (_, spec, g) = cone(a)?;
            let mut v = serde_json::to_value(hyperbolicity(&g)?)?;
            v["relator"] = json!(a.relator);
            v["rule"] = json!(spec.rule(a.relator).to_string());
            Ok(Outcome::json("cone hyp", v))
        }
        Command::Cone(ConeCmd::Export { cone: a, format }) => {
            let (_, _, g) = cone(a)?;
            let f: ExportFormat = format.parse()?;
            Ok(Outcome::text("cone export", String::from_utf8(export_graph(&g, f))?))
        }
        Command::Family(f) => family(f),
        Command::Group(g) => group(g),
        Command::Poset(p) => poset(p),
    }
}

fn family(cmd: &FamilyCmd) -> Result<Outcome> {
    match cmd {
        FamilyCmd::Gen { n, to } => {
            let p = Subcollection::range(*n, to.unwrap_or(*n)).presentation()?;
            Ok(Outcome::text("family gen", p.serialize()))
        }
        FamilyCmd::Verify { from, to, json: path, streamed, budget } => {
            let reports = if *streamed { verify_streamed(*from, *to)? } else { verify_family(*from, *to, *budget)? };
            let pass =
                reports.iter().all(|r| r.length_exact() && r.cube_free && r.within_piece_bound() && r.passes_c24);
            let v = json!({ "mode": if *streamed { "streamed" } else { "joint-index" }, "relators": reports, "pass": pass });
            if let Some(path) = path {
                let mut text = serde_json::to_string_pretty(&v)?;
                text.push('\n');
                std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(Outcome::verdict("family verify", v, pass))
        }
        FamilyCmd::Count { max_len } => {
            let rows: Vec<Value> = (1..=*max_len)
                .map(|l| {
                    let count = count_cube_free(l);
                    let bound = (l as f64 / 9.0 + 1.0).exp2();
                    json!({ "length": l, "count": count, "bound": bound, "meets_bound": count as f64 >= bound })
                })
                .collect();
            let pass = rows.iter().all(|r| r["meets_bound"] == json!(true));
            Ok(Outcome::verdict("family count", json!({ "counts": rows }), pass))
        }
        FamilyCmd::Inequality { upto } => {
            if *upto < 6 {
                bail!("invalid value {upto} for --upto: expected at least 6");
            }
            let values: Vec<Value> = (6..=*upto).map(|n| json!({ "n": n, "value": inequality_value(n) })).collect();
            let (fwd, bwd) = (threshold_forward(*upto), threshold_backward(*upto));
            Ok(Outcome::verdict(
                "family inequality",
                json!({ "values": values, "threshold_forward": fwd, "threshold_backward": bwd }),
                fwd.is_some() && fwd == bwd,
            ))
        }
    }
}

/// Per-relator streamed probes: no joint index, so memory stays near one
/// relator. Cube-freeness is checked on the generated relator.
fn verify_streamed(lo: usize, hi: usize) -> Result<Vec<FamilyReport>> {
    if lo < 6 {
        return Err(FamilyError::ParameterTooSmall(lo).into());
    }
    if hi < lo {
        return Err(FamilyError::EmptyRange { lo, hi }.into());
    }
    let mut reports = Vec::new();
    let src = FamilySource { ns: (lo..=hi).collect() };
    streamed::check_generic(&src)?;
    for (k, n) in (lo..=hi).enumerate() {
        let r = scc_families::build_family_relator(n)?;
        let (p, q) = streamed::longest_piece(&src, k + 1);
        let len = r.len();
        let margin = Rational::new(len as u64, 24);
        let pp = Rational::from_integer(p as u64);
        let m = if margin >= pp { margin - pp } else { pp - margin };
        reports.push(FamilyReport {
            n,
            relator_length: len,
            longest_piece: p,
            witness_position: q,
            piece_bound: 18 * n + 1,
            cube_free: scc_families::is_cube_free(r.letters()),
            c24_margin: format!("{}{}/{}", if margin >= pp { "" } else { "-" }, m.numer(), m.denom()),
            passes_c24: 24 * p < len,
            inequality_value: inequality_value(n),
        });
    }
    Ok(reports)
}

fn ball_of(a: &BallArgs) -> Result<(Presentation, scc_group::TruncatedBall)> {
    let p = load_pres(&a.pres)?;
    if a.trunc == 0 || a.trunc > p.relators().len() {
        bail!("invalid value {} for --trunc: expected 1..={}", a.trunc, p.relators().len());
    }
    let q = p.truncated(a.trunc);
    let spec = checked_spec(&q, &a.metric)?;
    let b = build_ball(&p, &spec, BallConfig::new(a.trunc, a.radius).with_budget(a.budget))?;
    Ok((p, b))
}

fn group(cmd: &GroupCmd) -> Result<Outcome> {
    match cmd {
        GroupCmd::Ball(a) => {
            let (_, b) = ball_of(a)?;
            let mut v = serde_json::to_value(b.stats())?;
            v["note"] =
                json!("counts are exact inside the radius; the outer sphere sees only edges back into the ball");
            Ok(Outcome::json("group ball", v))
        }
        GroupCmd::Spath { ball, sample, seed } => {
            let (_, b) = ball_of(ball)?;
            let rep = spath_suite(&b, *sample, *seed)?;
            let pass = rep.pass() && rep.samples == *sample;
            Ok(Outcome::verdict("group spath", serde_json::to_value(&rep)?, pass))
        }
        GroupCmd::Reduce { word, trunc, pres } => {
            let p = load_pres(pres)?;
            let w = p.parse_word(word).ok_or_else(|| anyhow!("invalid value {word:?} for --word"))?;
            let m = DehnMachine::sixth(&p.truncated(*trunc))?;
            let n = m.dehn_normalize(&w);
            Ok(Outcome::json(
                "group reduce",
                json!({ "word": p.format_word(&w), "normal_form": p.format_word(&n), "trivial": n.is_empty() }),
            ))
        }
    }
}

fn profile_json(p: &ComparisonProfile) -> Value {
    json!({
        "from_spec": p.from_spec,
        "to_spec": p.to_spec,
        "values": p.values(),
        "running_sup": p.running_sup,
    })
}

/// Both running sups strictly increase.
fn grows(p: &ComparisonProfile) -> bool {
    p.running_sup.windows(2).all(|w| w[0] < w[1])
}

fn poset(cmd: &PosetCmd) -> Result<Outcome> {
    let range = match cmd {
        PosetCmd::Compare { range, .. }
        | PosetCmd::Laced { range, .. }
        | PosetCmd::Pfin { range, .. }
        | PosetCmd::Antichain { range, .. }
        | PosetCmd::Trivial(range) => range,
    };
    let p = load_pres(&range.pres)?;
    let upto = range.upto;
    if upto > p.relators().len() {
        bail!("invalid value {upto} for --upto: the presentation has {} relators", p.relators().len());
    }
    let idx = index(&p)?;
    match cmd {
        PosetCmd::Compare { x, y, csv, .. } => {
            let prof = compare_profile(&idx, &checked_spec(&p, x)?, &checked_spec(&p, y)?, upto)?;
            if let Some(path) = csv {
                std::fs::write(path, prof.to_csv()).with_context(|| format!("writing {}", path.display()))?;
            }
            let bounded = prof.running_sup.last().map_or(true, |&s| s <= 1);
            Ok(Outcome::json(
                "poset compare",
                json!({
                    "profile": prof,
                    "verdict": if bounded { "no obstruction up to N" } else { "chords of Y are not X-short" },
                }),
            ))
        }
        PosetCmd::Laced { threshold, .. } => {
            let (x, y) = laced_pair(&idx, upto, *threshold)?;
            let xy = compare_profile(&idx, &x, &y, upto)?;
            let yx = compare_profile(&idx, &y, &x, upto)?;
            let pass = grows(&xy) && grows(&yx);
            Ok(Outcome::verdict(
                "poset laced",
                json!({
                    "witnesses": witness_indices(&idx, upto, *threshold)?,
                    "x_in_y": profile_json(&xy),
                    "y_in_x": profile_json(&yx),
                    "both_grow": pass,
                }),
                pass,
            ))
        }
        PosetCmd::Pfin { x1, x2, a, b, threshold, .. } => {
            let w = witness_indices(&idx, upto, *threshold)?;
            let (x1, x2) = (checked_spec(&p, x1)?, checked_spec(&p, x2)?);
            let ma = mix_pfin(&x1, &x2, &load_positions("a", a)?, &w)?;
            let mb = mix_pfin(&x1, &x2, &load_positions("b", b)?, &w)?;
            two_way("poset pfin", &idx, &ma, &mb, upto, w)
        }
        PosetCmd::Antichain { x, y, a, b, threshold, .. } => {
            let w = witness_indices(&idx, upto, *threshold)?;
            let (lx, ly) = laced_pair(&idx, upto, *threshold)?;
            let x = x.as_deref().map(|s| checked_spec(&p, s)).transpose()?.unwrap_or(lx);
            let y = y.as_deref().map(|s| checked_spec(&p, s)).transpose()?.unwrap_or(ly);
            let (ia, ja) = split_witnesses(&w, &load_positions("a", a)?)?;
            let (ib, jb) = split_witnesses(&w, &load_positions("b", b)?)?;
            let wa = mix_antichain(&x, &y, &ia, &ja)?;
            let wb = mix_antichain(&x, &y, &ib, &jb)?;
            two_way("poset antichain", &idx, &wa, &wb, upto, w)
        }
        PosetCmd::Trivial(_) => Ok(Outcome::json("poset trivial", serde_json::to_value(tc_triviality(&idx, upto))?)),
    }
}

fn two_way(
    command: &'static str,
    idx: &PieceIndex,
    a: &GenSetSpec,
    b: &GenSetSpec,
    upto: usize,
    witnesses: Vec<usize>,
) -> Result<Outcome> {
    let ab = compare_profile(idx, a, b, upto)?;
    let ba = compare_profile(idx, b, a, upto)?;
    let top = |p: &ComparisonProfile| p.running_sup.last().copied().unwrap_or(0);
    Ok(Outcome::json(
        command,
        json!({
            "witnesses": witnesses,
            "a_in_b": profile_json(&ab),
            "b_in_a": profile_json(&ba),
            "both_exceed_1": top(&ab) > 1 && top(&ba) > 1,
        }),
    ))
}
