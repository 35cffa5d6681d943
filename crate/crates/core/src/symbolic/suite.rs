use super::expr::{eval_matrix, expand, parse_expr};
use super::ncpoly::NCPoly;
use super::SymbolicError;
use crate::pair::ProjectionPair;
use crate::scalar::Rational;

const CORPUS: &str = include_str!("../../data/identities.txt");

#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub passed: bool,
    /// `expand(lhs) - expand(rhs)`.
    pub difference: NCPoly,
}

/// Whether `lhs` and `rhs` expand to the same polynomial, with the
/// difference for diagnostics.
pub fn verify_identity(lhs: &str, rhs: &str) -> Result<(bool, NCPoly), SymbolicError> {
    let diff = expand(&parse_expr(lhs)?)?.sub(&expand(&parse_expr(rhs)?)?);
    Ok((diff.is_zero(), diff))
}

fn check(
    name: impl Into<String>,
    lhs: String,
    rhs: String,
) -> Result<IdentityCheck, SymbolicError> {
    let (passed, difference) = verify_identity(&lhs, &rhs)?;
    Ok(IdentityCheck {
        name: name.into(),
        lhs,
        rhs,
        passed,
        difference,
    })
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub max_n: u32,
    pub checks: Vec<IdentityCheck>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `I + M^2 + … + M^(2j)`.
fn partial_series(j: u32) -> String {
    (0..=j)
        .map(|i| {
            if i == 0 {
                "I".to_string()
            } else {
                format!("M^{}", 2 * i)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Symbolic verification of the commutator identities up to odd power `max_n`.
pub fn lemma_suite(max_n: u32) -> Result<SuiteReport, SymbolicError> {
    if max_n < 3 || max_n.is_multiple_of(2) {
        return Err(SymbolicError::InvalidMaxN(max_n));
    }
    let s = |x: &str| x.to_string();
    let mut checks = vec![
        check("M^2 commutes with P", s("[M^2, P]"), s("0"))?,
        check("M^2 commutes with Q", s("[M^2, Q]"), s("0"))?,
        check("QU = UP", s("Q*U"), s("U*P"))?,
        check("UV = S", s("U*V"), s("S"))?,
        check("VU = S", s("V*U"), s("S"))?,
        check("S = I - M^2", s("S"), s("I - M^2"))?,
        check("I - U = (I-2Q)M", s("I - U"), s("(I - 2*Q)*M"))?,
        check(
            "chain: M(I-M^2) = PUV - QUV",
            s("M*(I - M^2)"),
            s("P*U*V - Q*U*V"),
        )?,
        check(
            "chain: PUV - QUV = PVU - UPV",
            s("P*U*V - Q*U*V"),
            s("P*V*U - U*P*V"),
        )?,
        check(
            "chain: PVU - UPV = -[U, PV]",
            s("P*V*U - U*P*V"),
            s("-[U, P*V]"),
        )?,
        check(
            "chain: -[U, PV] = [I-U, PV]",
            s("-[U, P*V]"),
            s("[I - U, P*V]"),
        )?,
        check(
            "chain: [I-U, PV] = [(I-2Q)M, PV]",
            s("[I - U, P*V]"),
            s("[(I - 2*Q)*M, P*V]"),
        )?,
    ];

    let max_j = (max_n - 3) / 2;
    let mut family = vec![s("I"), s("M^2")];
    family.extend((1..=max_j.max(1)).map(partial_series));
    for t in family {
        checks.push(check(
            format!("[(I-2Q)TM, PV] = TM(I-M^2), T = {t}"),
            format!("[(I - 2*Q)*({t})*M, P*V]"),
            format!("({t})*M*(I - M^2)"),
        )?);
    }

    for n in (3..=max_n).step_by(2) {
        let t = partial_series((n - 3) / 2);
        checks.push(check(
            format!("[(I-2Q)T_nM, PV] = M - M^n, n = {n}"),
            format!("[(I - 2*Q)*({t})*M, P*V]"),
            format!("M - M^{n}"),
        )?);
    }
    Ok(SuiteReport { max_n, checks })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusLine {
    pub line: usize,
    pub lhs: String,
    pub rhs: String,
}

/// Parses `lhs == rhs` lines; blank lines and `#` comments are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusLine>, SymbolicError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((lhs, rhs)) = line.split_once("==") else {
            return Err(SymbolicError::Corpus {
                line: i + 1,
                message: "missing '=='".into(),
            });
        };
        for side in [lhs, rhs] {
            parse_expr(side).map_err(|e| SymbolicError::Corpus {
                line: i + 1,
                message: e.to_string(),
            })?;
        }
        out.push(CorpusLine {
            line: i + 1,
            lhs: lhs.trim().to_string(),
            rhs: rhs.trim().to_string(),
        });
    }
    Ok(out)
}

/// The identity corpus shipped with the crate.
pub fn builtin_corpus() -> Vec<CorpusLine> {
    parse_corpus(CORPUS).expect("bundled corpus parses")
}

impl CorpusLine {
    pub fn check(&self) -> Result<IdentityCheck, SymbolicError> {
        check(
            format!("{} == {}", self.lhs, self.rhs),
            self.lhs.clone(),
            self.rhs.clone(),
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct BridgeReport {
    pub identities: usize,
    pub pairs: usize,
    pub evaluations: usize,
    pub failures: Vec<String>,
}

impl BridgeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Soundness bridge: every symbolically verified identity must evaluate to
/// equal matrices on concrete rational pairs, and evaluating the difference
/// polynomial at `(P, Q)` must agree with direct matrix evaluation.
pub fn numeric_bridge(
    checks: &[IdentityCheck],
    pairs: &[ProjectionPair<Rational>],
) -> Result<BridgeReport, SymbolicError> {
    let mut report = BridgeReport {
        identities: checks.iter().filter(|c| c.passed).count(),
        pairs: pairs.len(),
        ..Default::default()
    };
    for c in checks.iter().filter(|c| c.passed) {
        let (lhs, rhs) = (parse_expr(&c.lhs)?, parse_expr(&c.rhs)?);
        for (k, pair) in pairs.iter().enumerate() {
            let (p, q) = (pair.p(), pair.q());
            let direct = &eval_matrix(&lhs, p, q)? - &eval_matrix(&rhs, p, q)?;
            let via_poly = c.difference.evaluate(p, q);
            report.evaluations += 1;
            if !direct.is_zero() {
                report.failures.push(format!(
                    "{}: nonzero on pair #{k} (dim {})",
                    c.name,
                    pair.dim()
                ));
            } else if direct != via_poly {
                report.failures.push(format!(
                    "{}: polynomial evaluation disagrees on pair #{k}",
                    c.name
                ));
            }
        }
    }
    Ok(report)
}
