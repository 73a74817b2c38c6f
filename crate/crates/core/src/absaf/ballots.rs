//! Ballot files: a line format `<count> : <label>,<label>,...` with `#`
//! comments, and a JSON form `{"ballots": [{"count": 33, "approved": ["p1"]}]}`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Ballot;
use crate::af::Af;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallotFormat {
    Text,
    Json,
}

impl BallotFormat {
    /// `.json` selects JSON, anything else the line format.
    pub fn from_path(path: &std::path::Path) -> BallotFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => BallotFormat::Json,
            _ => BallotFormat::Text,
        }
    }
}

impl FromStr for BallotFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(BallotFormat::Text),
            "json" => Ok(BallotFormat::Json),
            other => Err(Error::param(format!("unknown ballot format `{other}`"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct BallotFile {
    ballots: Vec<BallotEntry>,
}

#[derive(Serialize, Deserialize)]
struct BallotEntry {
    count: u32,
    approved: Vec<String>,
}

/// Parses ballots against `af`. Empty ballots and unknown labels are errors.
pub fn parse_ballots(af: &Af, text: &str, format: BallotFormat) -> Result<Vec<Ballot>> {
    match format {
        BallotFormat::Text => parse_text(af, text),
        BallotFormat::Json => parse_json(af, text),
    }
}

fn parse_text(af: &Af, text: &str) -> Result<Vec<Ballot>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let code = raw.split('#').next().unwrap_or("").trim();
        if code.is_empty() {
            continue;
        }
        let (count, labels) =
            code.split_once(':').ok_or_else(|| Error::syntax(line, "expected `<count> : <labels>`"))?;
        let count: u32 =
            count.trim().parse().map_err(|_| Error::syntax(line, format!("bad count `{}`", count.trim())))?;
        if count == 0 {
            return Err(Error::syntax(line, "count must be positive"));
        }
        let labels: Vec<&str> = labels.split(',').map(str::trim).filter(|l| !l.is_empty()).collect();
        if labels.is_empty() {
            return Err(Error::InvalidBallot(format!("line {line}: empty ballot")));
        }
        out.push(Ballot::new(af.set_of(labels)?, count));
    }
    Ok(out)
}

fn parse_json(af: &Af, text: &str) -> Result<Vec<Ballot>> {
    let file: BallotFile = serde_json::from_str(text)?;
    file.ballots
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            if e.count == 0 {
                return Err(Error::InvalidBallot(format!("entry {i}: count must be positive")));
            }
            if e.approved.is_empty() {
                return Err(Error::InvalidBallot(format!("entry {i}: empty ballot")));
            }
            Ok(Ballot::new(af.set_of(&e.approved)?, e.count))
        })
        .collect()
}

pub fn write_ballots_json(af: &Af, ballots: &[Ballot]) -> String {
    let file = BallotFile {
        ballots: ballots
            .iter()
            .map(|b| BallotEntry {
                count: b.multiplicity,
                approved: af.labels_of(&b.approved).into_iter().map(String::from).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("ballots serialize")
}

pub fn write_ballots_text(af: &Af, ballots: &[Ballot]) -> String {
    let mut out = String::new();
    for b in ballots {
        let _ = writeln!(out, "{} : {}", b.multiplicity, af.labels_of(&b.approved).join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn text_format() {
        let af = fixtures::canada_af();
        let text = "# header\n33 : p1\n 2: p1 , p2 # inline\n\n";
        let b = parse_ballots(&af, text, BallotFormat::Text).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].multiplicity, 33);
        assert_eq!(b[1].approved, af.set_of(["p1", "p2"]).unwrap());
    }

    #[test]
    fn text_errors() {
        let af = fixtures::canada_af();
        assert!(matches!(parse_ballots(&af, "3 : zz", BallotFormat::Text), Err(Error::UnknownLabel(_))));
        assert!(matches!(parse_ballots(&af, "3 :", BallotFormat::Text), Err(Error::InvalidBallot(_))));
        assert!(matches!(parse_ballots(&af, "p1\n", BallotFormat::Text), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse_ballots(&af, "0 : p1", BallotFormat::Text), Err(Error::Syntax { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let s = fixtures::canada_absaf();
        let json = write_ballots_json(s.af(), s.ballots());
        let back = parse_ballots(s.af(), &json, BallotFormat::Json).unwrap();
        assert_eq!(back, s.ballots());
        let text = write_ballots_text(s.af(), s.ballots());
        assert_eq!(parse_ballots(s.af(), &text, BallotFormat::Text).unwrap(), s.ballots());
    }

    #[test]
    fn json_errors() {
        let af = fixtures::canada_af();
        let empty = r#"{"ballots":[{"count":1,"approved":[]}]}"#;
        assert!(matches!(parse_ballots(&af, empty, BallotFormat::Json), Err(Error::InvalidBallot(_))));
        assert!(matches!(parse_ballots(&af, "{", BallotFormat::Json), Err(Error::Json(_))));
    }
}
