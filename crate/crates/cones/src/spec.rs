use crate::ConeError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Symbolic description of `X_i` for one relator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// Labels of arcs covered by at most `k` pieces.
    Pk(u32),
    /// Every arc label: the cone is a complete graph.
    FullL,
    /// `P⁴` plus all pairs at equal `C̄_i`-distance from the base vertex.
    Laced(usize),
    /// Only the generators: the bare cycle.
    SOnly,
    /// `P⁴` plus the listed chords.
    ExplicitChords(Vec<(usize, usize)>),
}

impl Rule {
    /// Whether the rule contains `P⁴`, the lower end of the thin-cone sandwich.
    pub fn contains_p4(&self) -> bool {
        !matches!(self, Rule::SOnly | Rule::Pk(0..=3))
    }

    fn parse(text: &str, line: usize) -> Result<Rule, ConeError> {
        let err = |reason: String| ConeError::SpecParse { line, reason };
        let t = text.trim();
        match t {
            "L" => return Ok(Rule::FullL),
            "S" => return Ok(Rule::SOnly),
            "laced" => return Ok(Rule::Laced(0)),
            _ => {}
        }
        if let Some(k) = t.strip_prefix('P') {
            return k.parse().map(Rule::Pk).map_err(|_| err(format!("bad rule {t:?}")));
        }
        if let Some(v) = t.strip_prefix("laced@") {
            return v.parse().map(Rule::Laced).map_err(|_| err(format!("bad base vertex in {t:?}")));
        }
        if let Some(body) = t.strip_prefix("chords[").and_then(|s| s.strip_suffix(']')) {
            let mut chords = Vec::new();
            let mut rest = body.trim();
            while !rest.is_empty() {
                let inner = rest.strip_prefix('(').ok_or_else(|| err(format!("expected '(' in {t:?}")))?;
                let close = inner.find(')').ok_or_else(|| err(format!("unclosed '(' in {t:?}")))?;
                let (a, b) = inner[..close].split_once(',').ok_or_else(|| err(format!("expected u,v in {t:?}")))?;
                let u = a.trim().parse().map_err(|_| err(format!("bad vertex {a:?}")))?;
                let v = b.trim().parse().map_err(|_| err(format!("bad vertex {b:?}")))?;
                chords.push((u, v));
                rest = inner[close + 1..].trim_start();
                rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
            }
            return Ok(Rule::ExplicitChords(chords));
        }
        Err(err(format!("unknown rule {t:?}")))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Pk(k) => write!(f, "P{k}"),
            Rule::FullL => write!(f, "L"),
            Rule::Laced(v) => write!(f, "laced@{v}"),
            Rule::SOnly => write!(f, "S"),
            Rule::ExplicitChords(cs) => {
                write!(f, "chords[")?;
                for (k, (u, v)) in cs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "({u},{v})")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// A generating set `X = ⋃ X_i` given by a default rule and per-relator
/// overrides (1-based relator indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSetSpec {
    pub default: Rule,
    pub overrides: BTreeMap<usize, Rule>,
}

impl GenSetSpec {
    pub fn uniform(rule: Rule) -> Self {
        GenSetSpec { default: rule, overrides: BTreeMap::new() }
    }

    pub fn p4() -> Self {
        Self::uniform(Rule::Pk(4))
    }

    pub fn full_l() -> Self {
        Self::uniform(Rule::FullL)
    }

    pub fn s_only() -> Self {
        Self::uniform(Rule::SOnly)
    }

    /// Laced cones with base vertex `bases[i-1]` for relator `i`; relators
    /// past the end of `bases` use vertex 0.
    pub fn laced(bases: &[usize]) -> Self {
        let overrides =
            bases.iter().enumerate().filter(|(_, &b)| b != 0).map(|(k, &b)| (k + 1, Rule::Laced(b))).collect();
        GenSetSpec { default: Rule::Laced(0), overrides }
    }

    pub fn with_override(mut self, i: usize, rule: Rule) -> Self {
        self.overrides.insert(i, rule);
        self
    }

    pub fn rule(&self, i: usize) -> &Rule {
        self.overrides.get(&i).unwrap_or(&self.default)
    }

    /// Checks indices, base vertices and chord endpoints against the relator
    /// lengths `lengths[i-1]`.
    pub fn validate(&self, lengths: &[usize]) -> Result<(), ConeError> {
        if matches!(self.default, Rule::ExplicitChords(_)) {
            return Err(ConeError::InvalidSpec("explicit chords need a relator index".into()));
        }
        for &i in self.overrides.keys() {
            if i == 0 || i > lengths.len() {
                return Err(ConeError::InvalidSpec(format!("override index {i} outside 1..={}", lengths.len())));
            }
        }
        for (k, &n) in lengths.iter().enumerate() {
            let i = k + 1;
            match self.rule(i) {
                Rule::Laced(b) if *b >= n => {
                    return Err(ConeError::InvalidSpec(format!("base vertex {b} outside C_{i} of length {n}")))
                }
                Rule::ExplicitChords(cs) => {
                    if let Some(&(u, v)) = cs.iter().find(|&&(u, v)| u >= n || v >= n || u == v) {
                        return Err(ConeError::InvalidSpec(format!("chord ({u},{v}) invalid on C_{i} of length {n}")));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Spec file text: `default: <rule>` and `i: <rule>` lines, `#` comments.
    pub fn parse(text: &str) -> Result<Self, ConeError> {
        let mut default = None;
        let mut overrides = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once(':')
                .ok_or_else(|| ConeError::SpecParse { line, reason: "expected 'key: rule'".into() })?;
            let rule = Rule::parse(value, line)?;
            match key.trim() {
                "default" => {
                    if default.replace(rule).is_some() {
                        return Err(ConeError::SpecParse { line, reason: "second default line".into() });
                    }
                }
                idx => {
                    let i: usize = idx
                        .parse()
                        .map_err(|_| ConeError::SpecParse { line, reason: format!("bad relator index {idx:?}") })?;
                    if overrides.insert(i, rule).is_some() {
                        return Err(ConeError::SpecParse { line, reason: format!("duplicate override for {i}") });
                    }
                }
            }
        }
        let default = default.unwrap_or(Rule::Pk(4));
        if matches!(default, Rule::ExplicitChords(_)) {
            return Err(ConeError::InvalidSpec("explicit chords need a relator index".into()));
        }
        Ok(GenSetSpec { default, overrides })
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("default: {}\n", self.default);
        for (i, r) in &self.overrides {
            out.push_str(&format!("{i}: {r}\n"));
        }
        out
    }
}
