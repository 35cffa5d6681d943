//! Negation symmetry of the spectrum of `M = P - Q`.
//!
//! `(P + Q - I)` anticommutes with `M`, so away from `{-1, 0, 1}` every
//! eigenvalue `λ` of `M` comes with `-λ` (same multiplicity). This is
//! checked numerically; it is the spectral shadow of `tr Mⁿ` being the same
//! for every odd `n`.

use std::fmt::Write;

use nalgebra::{Complex, DMatrix};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::float::to_dmatrix;
use crate::pair::ProjectionPair;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    fn c(self) -> Complex<f64> {
        Complex::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub tol: f64,
    pub symmetric_solver: bool,
    /// All eigenvalues, sorted by real then imaginary part.
    pub eigenvalues: Vec<Eigenvalue>,
    /// Eigenvalues within `tol` of `-1`, `0` or `1`.
    pub excluded: Vec<Eigenvalue>,
    pub pairs: Vec<(Eigenvalue, Eigenvalue)>,
    pub unmatched: Vec<Eigenvalue>,
}

impl SpectrumReport {
    pub fn is_symmetric(&self) -> bool {
        self.unmatched.is_empty()
    }

    /// One row per eigenvalue: `re,im,status,partner_re,partner_im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,status,partner_re,partner_im\n");
        for e in &self.excluded {
            let _ = writeln!(out, "{},{},excluded,,", e.re, e.im);
        }
        for (a, b) in &self.pairs {
            let _ = writeln!(out, "{},{},paired,{},{}", a.re, a.im, b.re, b.im);
            let _ = writeln!(out, "{},{},paired,{},{}", b.re, b.im, a.re, a.im);
        }
        for e in &self.unmatched {
            let _ = writeln!(out, "{},{},unmatched,,", e.re, e.im);
        }
        out
    }
}

fn eigenvalues(m: &DMatrix<f64>, tol: f64) -> Result<(bool, Vec<Eigenvalue>)> {
    let n = m.nrows();
    let asym = (m - m.transpose()).amax();
    if asym <= tol * m.amax().max(1.0) {
        let sym = (m + m.transpose()) * 0.5;
        let vals = sym.symmetric_eigenvalues();
        return Ok((
            true,
            vals.iter().map(|&re| Eigenvalue { re, im: 0.0 }).collect(),
        ));
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 100 * n.max(1))
        .ok_or_else(|| Error::EigensolverFailure("Schur iteration did not converge".into()))?;
    let vals = schur.complex_eigenvalues();
    if vals.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::EigensolverFailure("non-finite eigenvalue".into()));
    }
    Ok((
        false,
        vals.iter()
            .map(|z| Eigenvalue { re: z.re, im: z.im })
            .collect(),
    ))
}

/// Pairs each eigenvalue of `M` outside `{-1, 0, 1} ± tol` with an unused
/// eigenvalue within `tol` of its negation.
pub fn spectrum_symmetry_check(pair: &ProjectionPair<f64>, tol: f64) -> Result<SpectrumReport> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive (got {tol})"
        )));
    }
    let m = to_dmatrix(&pair.m());
    let (symmetric_solver, mut all) = eigenvalues(&m, tol)?;
    all.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let special = [-1.0, 0.0, 1.0];
    let (excluded, rest): (Vec<Eigenvalue>, Vec<Eigenvalue>) = all
        .iter()
        .copied()
        .partition(|e: &Eigenvalue| special.iter().any(|&s| (e.c() - s).norm() <= tol));

    let mut used = vec![false; rest.len()];
    let mut pairs = Vec::new();
    let mut unmatched = Vec::new();
    for i in 0..rest.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let target = -rest[i].c();
        let best = (0..rest.len())
            .filter(|&j| !used[j])
            .map(|j| (j, (rest[j].c() - target).norm()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, _)) => {
                used[j] = true;
                pairs.push((rest[i], rest[j]));
            }
            None => unmatched.push(rest[i]),
        }
    }
    Ok(SpectrumReport {
        tol,
        symmetric_solver,
        eigenvalues: all,
        excluded,
        pairs,
        unmatched,
    })
}
