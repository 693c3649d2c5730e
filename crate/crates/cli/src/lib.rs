//! Command-line front end for `tractal`: family documents in, JSON reports
//! and CSV sweeps out.
//!
//! The parsers here are the only entry points that see untrusted text and
//! are the targets of the fuzz harnesses.

pub mod args;
pub mod commands;
pub mod verify;

use thiserror::Error;
use tractal::{Criterion, FamilySpec};

/// Largest dimension accepted on the command line.
pub const MAX_D: usize = 100_000;
/// Largest number of entries in one list argument.
pub const MAX_LIST: usize = 10_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resource limit: {0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Unsupported(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Resource(_) => 4,
        }
    }
}

impl From<tractal::Error> for CliError {
    fn from(e: tractal::Error) -> Self {
        use tractal::Error as E;
        let msg = e.to_string();
        match e {
            E::UnsupportedCriterion { .. }
            | E::ApproximateOnly { .. }
            | E::NoClosedForm(_)
            | E::MatrixFormOnly
            | E::Undecidable(_) => CliError::Unsupported(msg),
            E::Cap { .. } | E::Overflow(_) => CliError::Resource(msg),
            E::Domain(_)
            | E::InvalidSpec(_)
            | E::Json(_)
            | E::Divergent { .. }
            | E::NoFiniteTruncation { .. }
            | E::NoTailModel { .. }
            | E::NotSpt
            | E::NotQpt
            | E::NotPsd(_) => CliError::Invalid(msg),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// A family document (JSON, unknown fields rejected).
pub fn parse_family(text: &str) -> Result<FamilySpec> {
    FamilySpec::from_json(text).map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn parse_criterion(s: &str) -> std::result::Result<Criterion, String> {
    s.parse::<Criterion>().map_err(|e| e.to_string())
}

fn split_list(s: &str) -> std::result::Result<Vec<&str>, String> {
    let items: Vec<&str> = s.split(',').map(str::trim).collect();
    if items.iter().any(|t| t.is_empty()) {
        return Err(format!("empty entry in list {s:?}"));
    }
    if items.len() > MAX_LIST {
        return Err(format!("list has more than {MAX_LIST} entries"));
    }
    Ok(items)
}

/// Comma-separated accuracies, each in `(0, 1)`.
pub fn parse_epsilons(s: &str) -> std::result::Result<Vec<f64>, String> {
    split_list(s)?
        .into_iter()
        .map(|t| {
            let e: f64 = t.parse().map_err(|_| format!("not a number: {t:?}"))?;
            if e > 0.0 && e < 1.0 {
                Ok(e)
            } else {
                Err(format!("epsilon must lie in (0, 1), got {t}"))
            }
        })
        .collect()
}

/// Comma-separated dimensions and inclusive ranges, e.g. `1-5,8,10-12`.
pub fn parse_dims(s: &str) -> std::result::Result<Vec<usize>, String> {
    let parse_one = |t: &str| -> std::result::Result<usize, String> {
        let d: usize = t.parse().map_err(|_| format!("not a dimension: {t:?}"))?;
        if d == 0 || d > MAX_D {
            return Err(format!("dimension must lie in 1..={MAX_D}, got {d}"));
        }
        Ok(d)
    };
    let mut out = Vec::new();
    for item in split_list(s)? {
        match item.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (parse_one(a.trim())?, parse_one(b.trim())?);
                if a > b {
                    return Err(format!("empty range {item}"));
                }
                if out.len() + (b - a + 1) > MAX_LIST {
                    return Err(format!("dimension list has more than {MAX_LIST} entries"));
                }
                out.extend(a..=b);
            }
            None => out.push(parse_one(item)?),
        }
    }
    if out.len() > MAX_LIST {
        return Err(format!("dimension list has more than {MAX_LIST} entries"));
    }
    Ok(out)
}

/// `TRACTAL_THREADS`: a positive integer.
pub fn parse_threads(s: &str) -> Result<usize> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(CliError::Invalid(format!(
            "TRACTAL_THREADS must be a positive integer, got {s:?}"
        ))),
    }
}
