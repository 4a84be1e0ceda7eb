//! Corpus files: source programs whose first line states the expected
//! verdict, `-- EXPECT: accept`, `-- EXPECT: reject CODE` or
//! `-- EXPECT: runs-to VALUE`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::pipeline::Pipeline;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "kebab-case")]
pub enum Verdict {
    Accept,
    Reject(String),
    RunsTo(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => write!(f, "accept"),
            Verdict::Reject(code) => write!(f, "reject {code}"),
            Verdict::RunsTo(v) => write!(f, "runs-to {v}"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("malformed verdict header `{0}`")]
pub struct HeaderError(pub String);

impl FromStr for Verdict {
    type Err = HeaderError;

    fn from_str(s: &str) -> Result<Verdict, HeaderError> {
        let bad = || HeaderError(s.to_string());
        let rest = s.trim().strip_prefix("-- EXPECT:").ok_or_else(bad)?.trim();
        let (word, arg) = match rest.split_once(char::is_whitespace) {
            Some((w, a)) => (w, a.trim()),
            None => (rest, ""),
        };
        match (word, arg) {
            ("accept", "") => Ok(Verdict::Accept),
            ("reject", code) if !code.is_empty() && !code.contains(char::is_whitespace) => {
                Ok(Verdict::Reject(code.to_string()))
            }
            ("runs-to", value) if !value.is_empty() => Ok(Verdict::RunsTo(value.to_string())),
            _ => Err(bad()),
        }
    }
}

/// The verdict declared on the first line of `src`.
pub fn expected_verdict(src: &str) -> Result<Verdict, HeaderError> {
    src.lines().next().unwrap_or("").parse()
}

/// What the pipeline actually does with `src`, in the shape of `expected`:
/// a program expected to run is run, anything else is only elaborated.
pub fn actual_verdict(pipeline: &Pipeline, src: &str, expected: &Verdict) -> Verdict {
    if let Verdict::RunsTo(_) = expected {
        return match pipeline.run(src) {
            Ok(out) => Verdict::RunsTo(out.display()),
            Err(e) => Verdict::Reject(e.code().to_string()),
        };
    }
    match pipeline.elaborate(src) {
        Ok(_) => Verdict::Accept,
        Err(e) => Verdict::Reject(e.code().to_string()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub file: String,
    pub expected: Verdict,
    pub actual: Verdict,
    pub passed: bool,
}

/// The `.sth` files of `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "sth"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn check_file(pipeline: &Pipeline, path: &Path) -> std::io::Result<CaseResult> {
    let src = std::fs::read_to_string(path)?;
    let file = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let (expected, actual) = match expected_verdict(&src) {
        Ok(expected) => {
            let actual = actual_verdict(pipeline, &src, &expected);
            (expected, actual)
        }
        Err(e) => (
            Verdict::Reject("MalformedHeader".into()),
            Verdict::Reject(e.to_string()),
        ),
    };
    Ok(CaseResult {
        passed: expected == actual,
        file,
        expected,
        actual,
    })
}

pub fn check_dir(pipeline: &Pipeline, dir: &Path) -> std::io::Result<Vec<CaseResult>> {
    corpus_files(dir)?
        .iter()
        .map(|f| check_file(pipeline, f))
        .collect()
}
