use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use projpair::{index_report, read_pair, AnyPair, IndexReport, Scalar, TolerancePolicy};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{EXIT_FAIL, EXIT_INPUT};

/// Parses "1,3,5"; every entry must be an odd positive integer.
pub fn parse_ns(s: &str) -> Result<Vec<u32>> {
    let mut ns = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let n: i64 = part
            .parse()
            .with_context(|| format!("invalid power '{part}' in --n"))?;
        if n % 2 == 0 {
            bail!("n must be odd (got {n})");
        }
        if n < 1 {
            bail!("n must be a positive odd integer (got {n})");
        }
        ns.push(u32::try_from(n).context("n is too large")?);
    }
    Ok(ns)
}

fn policy(tol: Option<f64>) -> Result<TolerancePolicy> {
    let default = TolerancePolicy::default();
    match tol {
        None => Ok(default),
        Some(t) => Ok(TolerancePolicy::new(default.rank_rel_tol, t)?),
    }
}

enum Outcome {
    Report { json: Value, text: String, ok: bool },
    InputError(String),
}

fn render<T: Scalar>(path: &Path, r: &IndexReport<T>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: dim {} over {}", path.display(), r.dim, r.field);
    for (n, t) in &r.traces {
        let _ = writeln!(s, "  tr M^{n} = {t}");
    }
    let d = &r.dims;
    let _ = writeln!(
        s,
        "  E10={} E01={} E11={} E00={}  Et10={} Et01={} Et11={} Et00={}",
        d.e10, d.e01, d.e11, d.e00, d.et10, d.et01, d.et11, d.et00
    );
    let _ = writeln!(
        s,
        "  fitting k={} dim F={} dim Y={}",
        r.fitting.k, r.fitting.dim_f, r.fitting.dim_y
    );
    match r.index {
        Some(i) => {
            let _ = writeln!(s, "  index {i}");
        }
        None => {
            let _ = writeln!(s, "  index: trace is not an integer");
        }
    }
    if let Some(f) = r.rank_safety {
        let _ = writeln!(s, "  advisory (float): smallest rank safety factor {f:.3e}");
    }
    let failed = r.failed_verdicts();
    let _ = writeln!(
        s,
        "  verdicts: {}/{} true",
        r.verdicts.len() - failed.len(),
        r.verdicts.len()
    );
    for name in failed {
        let _ = writeln!(s, "  FAIL {name}");
    }
    s
}

fn report<T: Scalar>(path: &Path, pair: &projpair::ProjectionPair<T>, ns: &[u32]) -> Outcome {
    match index_report(pair, ns) {
        Ok(r) => Outcome::Report {
            json: r.to_json(),
            text: render(path, &r),
            ok: r.all_verdicts_true(),
        },
        Err(e) => Outcome::InputError(format!("{}: {e}", path.display())),
    }
}

fn verify_file(path: &Path, ns: &[u32], pol: TolerancePolicy) -> Outcome {
    match read_pair(path, pol) {
        Ok(AnyPair::Rational(p)) => report(path, &p, ns),
        Ok(AnyPair::Float(p)) => report(path, &p, ns),
        Err(e) => Outcome::InputError(format!("{}: {e}", path.display())),
    }
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        bail!("no .json files in {}", dir.display());
    }
    Ok(files)
}

pub fn run(input: &Path, n: &str, json: bool, tol: Option<f64>) -> Result<u8> {
    let ns = parse_ns(n)?;
    let pol = policy(tol)?;
    let is_dir = input.is_dir();
    let files = if is_dir {
        json_files(input)?
    } else {
        vec![input.to_path_buf()]
    };
    let outcomes: Vec<Outcome> = files.par_iter().map(|f| verify_file(f, &ns, pol)).collect();

    let mut code = 0;
    let mut entries = Vec::new();
    for (file, outcome) in files.iter().zip(&outcomes) {
        let name = file.file_name().map_or_else(
            || file.display().to_string(),
            |n| n.to_string_lossy().into_owned(),
        );
        match outcome {
            Outcome::Report { json: j, text, ok } => {
                if json {
                    eprint!("{text}");
                } else {
                    print!("{text}");
                }
                if !ok {
                    code = code.max(EXIT_FAIL);
                }
                entries.push(json!({"file": name, "report": j}));
            }
            Outcome::InputError(msg) => {
                eprintln!("error: {msg}");
                code = EXIT_INPUT;
                entries.push(json!({"file": name, "error": msg}));
            }
        }
    }
    if json {
        let out = if is_dir {
            json!({ "results": entries })
        } else {
            match &outcomes[0] {
                Outcome::Report { json: j, .. } => j.clone(),
                Outcome::InputError(_) => return Ok(code),
            }
        };
        println!("{}", serde_json::to_string_pretty(&out)?);
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ns_parsing() {
        assert_eq!(parse_ns("1,3,5").unwrap(), vec![1, 3, 5]);
        assert_eq!(parse_ns(" 7 ").unwrap(), vec![7]);
        assert!(parse_ns("2")
            .unwrap_err()
            .to_string()
            .contains("n must be odd"));
        assert!(parse_ns("0").is_err());
        assert!(parse_ns("-1").is_err());
        assert!(parse_ns("x").is_err());
    }
}
