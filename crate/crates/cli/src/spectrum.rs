use std::path::Path;

use anyhow::Result;
use projpair::{read_pair, spectrum_symmetry_check, AnyPair, TolerancePolicy};

use crate::EXIT_FAIL;

pub fn run(input: &Path, tol: f64) -> Result<u8> {
    let pair = match read_pair(input, TolerancePolicy::default())? {
        AnyPair::Float(p) => p,
        AnyPair::Rational(p) => {
            eprintln!("notice: rational input converted to float for the eigenvalue computation");
            p.to_float()?
        }
    };
    let report = spectrum_symmetry_check(&pair, tol)?;
    print!("{}", report.to_csv());
    eprintln!(
        "{} eigenvalues: {} excluded near -1/0/1, {} pairs, {} unmatched",
        report.eigenvalues.len(),
        report.excluded.len(),
        report.pairs.len(),
        report.unmatched.len()
    );
    Ok(if report.is_symmetric() { 0 } else { EXIT_FAIL })
}
