//! ICCMA-style APX and TGF readers, plus an APX writer.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use super::Af;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Apx,
    Tgf,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "apx" => Ok(Format::Apx),
            "tgf" => Ok(Format::Tgf),
            other => Err(Error::param(format!("unknown AF format `{other}`"))),
        }
    }
}

impl Format {
    /// Guess from a file extension, defaulting to APX.
    pub fn from_path(path: &std::path::Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("tgf") => Format::Tgf,
            _ => Format::Apx,
        }
    }
}

pub fn parse_af(text: &str, format: Format) -> Result<Af> {
    match format {
        Format::Apx => parse_apx(text),
        Format::Tgf => parse_tgf(text),
    }
}

struct Declared {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Declared {
    fn new() -> Self {
        Declared { labels: Vec::new(), index: HashMap::new() }
    }

    fn declare(&mut self, label: &str) -> Result<()> {
        if self.index.contains_key(label) {
            return Err(Error::DuplicateArgument(label.to_string()));
        }
        self.index.insert(label.to_string(), self.labels.len());
        self.labels.push(label.to_string());
        Ok(())
    }

    fn resolve(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UndeclaredArgument(label.to_string()))
    }
}

fn parse_apx(text: &str) -> Result<Af> {
    let mut declared = Declared::new();
    let mut pending: Vec<(String, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let code = raw.split('%').next().unwrap_or("");
        let mut rest = code.trim();
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| Error::syntax(line, format!("expected `(` in `{rest}`")))?;
            let close = rest.find(')').ok_or_else(|| Error::syntax(line, "missing `)`"))?;
            if close < open {
                return Err(Error::syntax(line, "unbalanced parentheses"));
            }
            let head = rest[..open].trim();
            let body = &rest[open + 1..close];
            let after = rest[close + 1..].trim_start();
            rest =
                after.strip_prefix('.').ok_or_else(|| Error::syntax(line, "statement must end with `.`"))?.trim_start();
            match head {
                "arg" => {
                    let label = body.trim();
                    if label.is_empty() || label.contains(',') {
                        return Err(Error::syntax(line, format!("bad argument name `{body}`")));
                    }
                    declared.declare(label)?;
                }
                "att" => {
                    let mut parts = body.split(',').map(str::trim);
                    match (parts.next(), parts.next(), parts.next()) {
                        (Some(a), Some(b), None) if !a.is_empty() && !b.is_empty() => {
                            pending.push((a.to_string(), b.to_string()))
                        }
                        _ => return Err(Error::syntax(line, format!("bad attack `{body}`"))),
                    }
                }
                other => return Err(Error::syntax(line, format!("unknown predicate `{other}`"))),
            }
        }
    }

    let attacks =
        pending.iter().map(|(a, b)| Ok((declared.resolve(a)?, declared.resolve(b)?))).collect::<Result<Vec<_>>>()?;
    Af::new(declared.labels, attacks)
}

fn parse_tgf(text: &str) -> Result<Af> {
    let mut declared = Declared::new();
    let mut attacks = Vec::new();
    let mut in_edges = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "#" {
            if in_edges {
                return Err(Error::syntax(line, "second `#` separator"));
            }
            in_edges = true;
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        if in_edges {
            match (tokens.next(), tokens.next()) {
                (Some(a), Some(b)) => attacks.push((declared.resolve(a)?, declared.resolve(b)?)),
                _ => return Err(Error::syntax(line, "edge line needs two vertex ids")),
            }
        } else {
            // The vertex id is the argument name; a trailing label is ignored.
            declared.declare(tokens.next().expect("non-empty line"))?;
        }
    }
    Af::new(declared.labels, attacks)
}

/// Renders an AF as APX, one statement per line.
pub fn write_apx(af: &Af) -> String {
    let mut out = String::new();
    for l in af.labels() {
        let _ = writeln!(out, "arg({l}).");
    }
    for &(a, b) in af.attacks() {
        let _ = writeln!(out, "att({},{}).", af.label(a), af.label(b));
    }
    out
}
