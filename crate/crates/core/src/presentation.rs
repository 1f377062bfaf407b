use crate::{Letter, Rational, Word};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

/// Default small cancellation target used when a file has no `lambda:` line.
pub const DEFAULT_LAMBDA: (u64, u64) = (1, 24);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("parse error at line {line}, column {col}: {reason}")]
    Parse { line: usize, col: usize, reason: String },
    #[error("relator r_{index} is not freely reduced")]
    RelatorNotReduced { index: usize },
    #[error("relator r_{index} is not cyclically reduced")]
    RelatorNotCyclicallyReduced { index: usize },
    #[error("relator r_{index} is empty")]
    EmptyRelator { index: usize },
    #[error("generator '{name}' appears in no relator")]
    UnusedGenerator { name: char },
    #[error("invalid generator name {name:?}")]
    InvalidGenerator { name: char },
    #[error("duplicate generator '{name}'")]
    DuplicateGenerator { name: char },
    #[error("letter symbol {symbol} is outside the alphabet")]
    SymbolOutOfRange { symbol: u16 },
}

/// `⟨S | r_1, r_2, …⟩` with a configured λ.
///
/// The alphabet is kept sorted, and letter symbols index into it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    alphabet: Vec<char>,
    relators: Vec<Word>,
    lambda_target: Rational,
}

fn perr(line: usize, col: usize, reason: impl Into<String>) -> CoreError {
    CoreError::Parse { line, col, reason: reason.into() }
}

/// Parses `p/q` (or a bare integer) into an exact positive rational.
pub fn parse_ratio(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<u64>().ok()?, q.trim().parse::<u64>().ok()?),
        None => (s.parse::<u64>().ok()?, 1),
    };
    (q != 0).then(|| Rational::new(p, q))
}

impl Presentation {
    /// Builds and validates a presentation. The alphabet is sorted and the
    /// relator letters are remapped to the sorted numbering.
    ///
    /// A presentation with relators must use every generator; the free
    /// presentation with no relators is accepted.
    pub fn new(alphabet: Vec<char>, relators: Vec<Word>) -> Result<Self, CoreError> {
        let p = Self::new_unchecked(alphabet, relators)?;
        p.validate()?;
        Ok(p)
    }

    /// Like [`Presentation::new`] but skips the unused-generator rule, which is
    /// what truncations `r_1..r_N` of a larger presentation need.
    pub fn new_unchecked(alphabet: Vec<char>, relators: Vec<Word>) -> Result<Self, CoreError> {
        let mut seen = [false; 26];
        for &c in &alphabet {
            if !c.is_ascii_lowercase() {
                return Err(CoreError::InvalidGenerator { name: c });
            }
            let k = (c as u8 - b'a') as usize;
            if seen[k] {
                return Err(CoreError::DuplicateGenerator { name: c });
            }
            seen[k] = true;
        }
        let mut order: Vec<usize> = (0..alphabet.len()).collect();
        order.sort_by_key(|&k| alphabet[k]);
        let mut remap = vec![0u16; alphabet.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new as u16;
        }
        let sorted: Vec<char> = order.iter().map(|&k| alphabet[k]).collect();
        let identity = remap.iter().enumerate().all(|(i, &r)| i as u16 == r);
        let mut rels = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(l) = r.iter().find(|l| l.symbol as usize >= alphabet.len()) {
                return Err(CoreError::SymbolOutOfRange { symbol: l.symbol });
            }
            rels.push(if identity {
                r
            } else {
                r.iter().map(|l| Letter::new(remap[l.symbol as usize], l.inverse)).collect()
            });
        }
        let p = Presentation {
            alphabet: sorted,
            relators: rels,
            lambda_target: Rational::new(DEFAULT_LAMBDA.0, DEFAULT_LAMBDA.1),
        };
        p.validate_relators()?;
        Ok(p)
    }

    /// Convenience constructor from ASCII relators; the alphabet is the set of
    /// generators that occur.
    pub fn from_ascii(relators: &[&str]) -> Result<Self, CoreError> {
        let mut names: Vec<char> = relators.iter().flat_map(|r| r.chars()).map(|c| c.to_ascii_lowercase()).collect();
        names.sort_unstable();
        names.dedup();
        let mut text = format!("gens: {}\n", names.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "));
        for r in relators {
            let _ = writeln!(text, "rel: {r}");
        }
        Self::parse(&text)
    }

    fn validate_relators(&self) -> Result<(), CoreError> {
        for (i, r) in self.relators.iter().enumerate() {
            let index = i + 1;
            if r.is_empty() {
                return Err(CoreError::EmptyRelator { index });
            }
            if !r.is_reduced() {
                return Err(CoreError::RelatorNotReduced { index });
            }
            if !r.is_cyclically_reduced() {
                return Err(CoreError::RelatorNotCyclicallyReduced { index });
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CoreError> {
        self.validate_relators()?;
        if self.relators.is_empty() {
            return Ok(());
        }
        let mut used = vec![false; self.alphabet.len()];
        for r in &self.relators {
            for l in r.iter() {
                used[l.symbol as usize] = true;
            }
        }
        if let Some(k) = used.iter().position(|u| !u) {
            return Err(CoreError::UnusedGenerator { name: self.alphabet[k] });
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Relator `r_i` by 1-based index.
    pub fn relator(&self, i: usize) -> &Word {
        &self.relators[i - 1]
    }

    pub fn lambda_target(&self) -> Rational {
        self.lambda_target
    }

    pub fn with_lambda(mut self, lambda: Rational) -> Self {
        self.lambda_target = lambda;
        self
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    /// `⟨S | r_1, …, r_n⟩` for the first `n` relators, keeping the alphabet.
    pub fn truncated(&self, n: usize) -> Presentation {
        Presentation {
            alphabet: self.alphabet.clone(),
            relators: self.relators[..n.min(self.relators.len())].to_vec(),
            lambda_target: self.lambda_target,
        }
    }

    pub fn letter_name(&self, l: Letter) -> char {
        let c = self.alphabet[l.symbol as usize];
        if l.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.iter().map(|&l| self.letter_name(l)).collect()
    }

    /// Parses a word in this presentation's alphabet (uppercase = inverse).
    pub fn parse_word(&self, s: &str) -> Option<Word> {
        s.chars().filter(|c| !c.is_whitespace()).map(|c| self.letter_of(c)).collect()
    }

    fn letter_of(&self, c: char) -> Option<Letter> {
        let lower = c.to_ascii_lowercase();
        let k = self.alphabet.binary_search(&lower).ok()?;
        Some(Letter::new(k as u16, c.is_ascii_uppercase()))
    }

    /// Parses the text format:
    ///
    /// ```text
    /// # comment
    /// gens: a, b
    /// lambda: 1/6      (optional, default 1/24)
    /// rel: abAB
    /// ```
    pub fn parse(text: &str) -> Result<Self, CoreError> {
        let mut alphabet: Option<Vec<char>> = None;
        let mut lambda = None;
        let mut relators = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once(':') else {
                let col = raw.len() - raw.trim_start().len() + 1;
                return Err(perr(line_no, col, "expected 'key: value'"));
            };
            let value_col = key.chars().count() + 2;
            match key.trim() {
                "gens" => {
                    if alphabet.is_some() {
                        return Err(perr(line_no, 1, "duplicate gens line"));
                    }
                    let mut names = Vec::new();
                    let mut col = value_col;
                    for part in value.split(',') {
                        let lead = part.chars().take_while(|c| c.is_whitespace()).count();
                        let name = part.trim();
                        let mut chars = name.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) if c.is_ascii_lowercase() => {
                                if names.contains(&c) {
                                    return Err(perr(line_no, col + lead, format!("duplicate generator '{c}'")));
                                }
                                names.push(c)
                            }
                            (None, _) if value.trim().is_empty() => {}
                            _ => {
                                return Err(perr(
                                    line_no,
                                    col + lead,
                                    format!("generator names must be single lowercase letters, got {name:?}"),
                                ))
                            }
                        }
                        col += part.chars().count() + 1;
                    }
                    alphabet = Some(names);
                }
                "lambda" => {
                    let r = parse_ratio(value).filter(|r| *r.numer() > 0);
                    lambda = Some(r.ok_or_else(|| perr(line_no, value_col, "lambda must be a positive rational p/q"))?);
                }
                "rel" => {
                    let Some(names) = alphabet.as_ref() else {
                        return Err(perr(line_no, 1, "rel line before gens line"));
                    };
                    let mut letters = Vec::with_capacity(value.len());
                    for (k, c) in value.chars().enumerate() {
                        if c.is_whitespace() {
                            continue;
                        }
                        let lower = c.to_ascii_lowercase();
                        match names.iter().position(|&n| n == lower) {
                            Some(s) if c.is_ascii_alphabetic() => {
                                letters.push(Letter::new(s as u16, c.is_ascii_uppercase()))
                            }
                            _ => return Err(perr(line_no, value_col + k, format!("unknown generator {c:?}"))),
                        }
                    }
                    if letters.is_empty() {
                        return Err(perr(line_no, value_col, "empty relator"));
                    }
                    relators.push(Word::from_letters(letters));
                }
                other => {
                    return Err(perr(line_no, 1, format!("unknown key {other:?}")));
                }
            }
        }
        let Some(alphabet) = alphabet else {
            return Err(perr(text.lines().count().max(1), 1, "missing gens line"));
        };
        let p = Presentation::new(alphabet, relators)?;
        Ok(match lambda {
            Some(l) => p.with_lambda(l),
            None => p,
        })
    }

    /// Canonical text form: sorted gens line, optional lambda line when it
    /// differs from the default, then the relators in order.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(self.total_length() + 16 * self.relators.len() + 32);
        out.push_str("gens: ");
        out.push_str(&self.alphabet.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "));
        out.push('\n');
        if self.lambda_target != Rational::new(DEFAULT_LAMBDA.0, DEFAULT_LAMBDA.1) {
            let _ = writeln!(out, "lambda: {}/{}", self.lambda_target.numer(), self.lambda_target.denom());
        }
        for r in &self.relators {
            out.push_str("rel: ");
            out.extend(r.iter().map(|&l| self.letter_name(l)));
            out.push('\n');
        }
        out
    }
}
