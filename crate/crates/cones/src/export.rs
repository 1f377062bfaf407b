use crate::graph::{ChordTag, ConeGraph};
use crate::ConeError;
use std::fmt::Write;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    EdgeList,
    Dot,
}

impl FromStr for ExportFormat {
    type Err = ConeError;

    fn from_str(s: &str) -> Result<Self, ConeError> {
        match s {
            "edge-list" | "edges" => Ok(ExportFormat::EdgeList),
            "dot" | "DOT" => Ok(ExportFormat::Dot),
            _ => Err(ConeError::UnknownFormat(s.to_string())),
        }
    }
}

fn cycle_edges(n: usize) -> impl Iterator<Item = (usize, usize)> {
    let m = if n >= 2 { n } else { 0 };
    (0..m).map(move |u| (u, (u + 1) % n))
}

/// Cycle edges `u u+1` in order, then chords `u v` with `u < v` in sorted
/// order, each followed by its tag.
pub fn export_graph(g: &ConeGraph, format: ExportFormat) -> Vec<u8> {
    let mut out = String::new();
    let chords = g.chords();
    match format {
        ExportFormat::EdgeList => {
            for (u, v) in cycle_edges(g.n()) {
                writeln!(out, "{u} {v} cycle").unwrap();
            }
            for (u, v, t) in chords {
                writeln!(out, "{u} {v} {t}").unwrap();
            }
        }
        ExportFormat::Dot => {
            writeln!(out, "graph C{} {{", g.relator_index()).unwrap();
            for v in 0..g.n() {
                writeln!(out, "  {v};").unwrap();
            }
            for (u, v) in cycle_edges(g.n()) {
                writeln!(out, "  {u} -- {v} [label=\"cycle\"];").unwrap();
            }
            for (u, v, t) in chords {
                writeln!(out, "  {u} -- {v} [label=\"{t}\"];").unwrap();
            }
            out.push_str("}\n");
        }
    }
    out.into_bytes()
}

/// Rebuilds a graph from [`export_graph`] edge-list output. The cycle lines
/// fix `n`; every other line becomes a tagged chord.
pub fn import_edge_list(text: &str) -> Result<ConeGraph, ConeError> {
    let mut cycle = Vec::new();
    let mut chords = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let err = |reason: &str| ConeError::Import { line: k + 1, reason: reason.to_string() };
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [u, v, tag] = parts[..] else {
            return Err(err("expected 'u v tag'"));
        };
        let u: usize = u.parse().map_err(|_| err("bad vertex"))?;
        let v: usize = v.parse().map_err(|_| err("bad vertex"))?;
        match ChordTag::parse(tag).ok_or_else(|| err("unknown tag"))? {
            ChordTag::Cycle => cycle.push((k + 1, u, v)),
            t => chords.push((k + 1, u, v, t)),
        }
    }
    let n = cycle.len();
    for (k, &(line, u, v)) in cycle.iter().enumerate() {
        if (u, v) != (k, (k + 1) % n) {
            return Err(ConeError::Import { line, reason: format!("cycle edge {k} should be '{k} {}'", (k + 1) % n) });
        }
    }
    if let Some(&(line, ..)) = chords.iter().find(|&&(_, u, v, _)| u >= n || v >= n || u == v) {
        return Err(ConeError::Import { line, reason: format!("chord outside the {n}-cycle") });
    }
    let chords: Vec<_> = chords.into_iter().map(|(_, u, v, t)| (u, v, t)).collect();
    Ok(ConeGraph::from_chords(0, n, &chords))
}
