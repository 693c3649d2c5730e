use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use tractal::complexity::{info_complexity, info_complexity_parallel};
use tractal::products::{
    brute_force_oracle, count_products_above, oracle_count, oracle_validity_threshold,
    product_eigenvalues_top, ORACLE_LIMIT,
};
use tractal::{classify, ComplexityQuery, ComplexityResult, Criterion, Error, FamilySpec, ProductProblem};

use crate::args::{ClassifyArgs, Cli, Command, ComplexityArgs, FamilyArgs, GridArgs, OracleArgs, SweepArgs};
use crate::{parse_family, verify, CliError, Result};

/// What a command prints and the exit code it finishes with.
#[derive(Debug)]
pub struct Output {
    pub stdout: String,
    pub stderr: Vec<String>,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            stdout,
            stderr: Vec::new(),
            code: 0,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Classify(a) => run_classify(a),
        Command::Complexity(a) => run_complexity(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Verify(a) => {
            let report = verify::run_suite(a.suite)?;
            let text = to_json(&report);
            if let Some(path) = &a.out {
                write_atomic(path, &text)?;
            }
            let code = if report.passed { 0 } else { 1 };
            Ok(Output {
                stdout: text,
                stderr: Vec::new(),
                code,
            })
        }
        Command::OracleCompare(a) => run_oracle_compare(a),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports always serialise");
    s.push('\n');
    s
}

fn load_family(args: &FamilyArgs) -> Result<(FamilySpec, Vec<String>)> {
    let text = fs::read_to_string(&args.family)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", args.family.display())))?;
    let spec = parse_family(&text)?;
    let warnings = spec.warnings().iter().map(|w| format!("warning: {w}")).collect();
    if !spec.criterion_support().contains(args.criterion) {
        return Err(Error::UnsupportedCriterion {
            family: spec.family().name(),
            criterion: args.criterion,
        }
        .into());
    }
    Ok((spec, warnings))
}

fn run_classify(a: &ClassifyArgs) -> Result<Output> {
    let (spec, warnings) = load_family(&a.family)?;
    let report = classify(&spec, a.family.criterion)?;
    let mut out = Output::ok(to_json(&report));
    out.stderr = warnings;
    Ok(out)
}

/// Every `(eps, d)` of the grid, `d`-major then `eps` descending.
fn grid(g: &GridArgs) -> Vec<(usize, f64)> {
    let mut dims = g.d.0.clone();
    dims.sort_unstable();
    dims.dedup();
    let mut eps = g.epsilon.0.clone();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.dedup();
    dims.iter()
        .flat_map(|&d| eps.iter().map(move |&e| (d, e)))
        .collect()
}

fn compute_grid(spec: &FamilySpec, criterion: Criterion, g: &GridArgs) -> Result<Vec<ComplexityResult>> {
    let points = grid(g);
    let max_d = points.iter().map(|p| p.0).max().unwrap_or(1);
    let problem = ProductProblem::from_family(spec, max_d)?;
    let problems: Vec<ProductProblem> = {
        let mut dims: Vec<usize> = points.iter().map(|p| p.0).collect();
        dims.dedup();
        dims.into_iter()
            .map(|d| ProductProblem::new(problem.factors()[..d].to_vec()))
            .collect::<tractal::Result<_>>()?
    };
    // a lone point splits its count across threads instead
    let single = points.len() == 1;
    points
        .par_iter()
        .map(|&(d, eps)| {
            let p = problems.iter().find(|p| p.d() == d).expect("one problem per dimension");
            let q = ComplexityQuery::new(eps, d, criterion)?;
            if single {
                info_complexity_parallel(p, &q, g.cap)
            } else {
                info_complexity(p, &q, g.cap)
            }
        })
        .collect::<tractal::Result<Vec<_>>>()
        .map_err(CliError::from)
}

fn saturation_check(results: &[ComplexityResult], strict: bool) -> Result<Vec<String>> {
    let saturated: Vec<String> = results
        .iter()
        .filter(|r| r.saturated)
        .map(|r| format!("eps = {}, d = {}", r.epsilon, r.d))
        .collect();
    if saturated.is_empty() {
        return Ok(Vec::new());
    }
    let msg = format!("count cap reached (lower bounds only) at {}", saturated.join("; "));
    if strict {
        return Err(CliError::Resource(msg));
    }
    Ok(vec![format!("warning: {msg}")])
}

fn run_complexity(a: &ComplexityArgs) -> Result<Output> {
    let (spec, mut warnings) = load_family(&a.family)?;
    let results = compute_grid(&spec, a.family.criterion, &a.grid)?;
    warnings.extend(saturation_check(&results, a.grid.strict)?);
    let text = match results.as_slice() {
        [one] => to_json(one),
        many => to_json(&many),
    };
    let mut out = Output::ok(text);
    out.stderr = warnings;
    Ok(out)
}

pub const SWEEP_HEADER: &str = "family,criterion,epsilon,d,n,saturated";

fn run_sweep(a: &SweepArgs) -> Result<Output> {
    let (spec, mut warnings) = load_family(&a.family)?;
    let results = compute_grid(&spec, a.family.criterion, &a.grid)
        .map_err(|e| match e {
            CliError::Unsupported(_) => e,
            other => CliError::Resource(format!("sweep aborted: {other}")),
        })?;
    warnings.extend(saturation_check(&results, a.grid.strict)?);
    let name = spec.family().name();
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for r in &results {
        csv.push_str(&format!(
            "{name},{},{},{},{},{}\n",
            r.criterion, r.epsilon, r.d, r.n, r.saturated
        ));
    }
    let stdout = match &a.out {
        Some(path) => {
            write_atomic(path, &csv)?;
            String::new()
        }
        None => csv,
    };
    let mut out = Output::ok(stdout);
    out.stderr = warnings;
    Ok(out)
}

/// Write to a sibling temporary file, then rename over the destination.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::Invalid(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        file_name.to_string_lossy(),
        std::process::id()
    ));
    let io = |e: std::io::Error| CliError::Resource(format!("writing {}: {e}", path.display()));
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents.as_bytes())?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io)
}

#[derive(Debug, Serialize)]
struct CountComparison {
    epsilon: f64,
    threshold: f64,
    n: u64,
    oracle_n: Option<u64>,
    matches: Option<bool>,
}

#[derive(Debug, Serialize)]
struct OracleReport {
    family: &'static str,
    criterion: Criterion,
    d: usize,
    per_dim: u64,
    validity_threshold: f64,
    top_compared: usize,
    top_matches: bool,
    counts: Vec<CountComparison>,
    passed: bool,
}

/// Largest `J <= 30` with `J^d` within the oracle limit.
pub fn default_per_dim(d: usize) -> u64 {
    (1..=30u64)
        .rev()
        .find(|j| j.checked_pow(d as u32).is_some_and(|n| n <= ORACLE_LIMIT))
        .unwrap_or(1)
}

fn run_oracle_compare(a: &OracleArgs) -> Result<Output> {
    let (spec, warnings) = load_family(&a.family)?;
    let criterion = a.family.criterion;
    let mut reports = Vec::new();
    for &d in &a.d.0 {
        let raw = ProductProblem::from_family(&spec, d)?;
        // NOR counts live on the normalised spectrum, ABS on the raw one
        let p = match criterion {
            Criterion::Nor => raw.normalized(),
            Criterion::Abs => raw,
        };
        let j = a.per_dim.unwrap_or_else(|| default_per_dim(d));
        let oracle = brute_force_oracle(&p, j)?;
        let floor = oracle_validity_threshold(&p, j);
        let valid = oracle_count(&oracle, floor) as usize;
        let m = a.m.min(valid);
        let top = product_eigenvalues_top(&p, m)?;
        let top_matches = top.iter().zip(&oracle).all(|(x, y)| x.to_bits() == y.to_bits());
        let mut counts = Vec::new();
        for &eps in a.epsilon.as_ref().map_or(&[][..], |l| &l.0[..]) {
            let t = eps * eps;
            let n = count_products_above(&p, t, tractal::products::COUNTING_CAP)?;
            let (oracle_n, matches) = if t > floor {
                let o = oracle_count(&oracle, t);
                (Some(o), Some(!n.saturated && o == n.count))
            } else {
                (None, None)
            };
            counts.push(CountComparison {
                epsilon: eps,
                threshold: t,
                n: n.count,
                oracle_n,
                matches,
            });
        }
        let passed = top_matches && counts.iter().all(|c| c.matches != Some(false));
        reports.push(OracleReport {
            family: spec.family().name(),
            criterion,
            d,
            per_dim: j,
            validity_threshold: floor,
            top_compared: m,
            top_matches,
            counts,
            passed,
        });
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(Output {
        stdout: to_json(&reports),
        stderr: warnings,
        code: if passed { 0 } else { 1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_dim_defaults() {
        assert_eq!(default_per_dim(1), 30);
        assert_eq!(default_per_dim(4), 30);
        assert_eq!(default_per_dim(5), 25);
        assert_eq!(default_per_dim(40), 1);
    }
}
