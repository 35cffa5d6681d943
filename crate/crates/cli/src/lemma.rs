use std::path::Path;

use anyhow::{Context, Result};
use projpair::generators::{derive_seed, gen_pair_oblique_rational, rng};
use projpair::pair::{check_lemma3, CentralizerElement};
use projpair::symbolic::{
    builtin_corpus, lemma_suite, numeric_bridge, parse_corpus, IdentityCheck,
};
use projpair::{ProjectionPair, Rational, Scalar};
use rand::Rng;

use crate::EXIT_FAIL;

/// Seeded rational pairs of dimension 1 to 4 for the numeric cross-check.
pub fn sample_pairs(count: usize, seed: u64) -> Result<Vec<ProjectionPair<Rational>>> {
    (0..count as u64)
        .map(|i| {
            let s = derive_seed(seed, i);
            let mut g = rng(s);
            let dim = g.random_range(1..=4);
            let rp = g.random_range(0..=dim);
            let rq = g.random_range(0..=dim);
            Ok(gen_pair_oblique_rational(dim, rp, rq, s, 2)?)
        })
        .collect()
}

fn print_check(c: &IdentityCheck) {
    if c.passed {
        println!("PASS  {}", c.name);
    } else {
        println!("FAIL  {}  (difference {})", c.name, c.difference);
    }
}

pub fn run(max_n: u32, samples: usize, seed: u64, corpus: Option<&Path>) -> Result<u8> {
    let suite = lemma_suite(max_n)?;
    let mut checks = suite.checks;
    let mut lines = builtin_corpus();
    if let Some(path) = corpus {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        lines.extend(parse_corpus(&text).with_context(|| path.display().to_string())?);
    }
    for line in &lines {
        checks.push(line.check()?);
    }
    checks.iter().for_each(print_check);
    let symbolic_ok = checks.iter().all(|c| c.passed);

    let pairs = sample_pairs(samples, seed)?;
    let bridge = numeric_bridge(&checks, &pairs)?;
    for f in &bridge.failures {
        println!("FAIL  numeric: {f}");
    }
    println!(
        "numeric cross-check: {} identities x {} pairs, {} evaluations, {} failures",
        bridge.identities,
        bridge.pairs,
        bridge.evaluations,
        bridge.failures.len()
    );

    // The inverse form has no polynomial certificate; it is only checked on
    // the samples where S is invertible.
    let family: [(&str, Vec<Rational>); 3] = [
        ("I", vec![Rational::one()]),
        ("M^2", vec![Rational::zero(), Rational::one()]),
        ("I + M^2", vec![Rational::one(), Rational::one()]),
    ];
    let mut inverse_ok = true;
    let mut invertible = 0;
    for pair in &pairs {
        let m = pair.m();
        let s = &pair.identity() - &(&m * &m);
        if !Rational::is_invertible(&s, pair.policy()) {
            continue;
        }
        invertible += 1;
        for (name, coeffs) in &family {
            let r = check_lemma3(pair, &CentralizerElement::new(coeffs.clone()))?;
            if !r.matrix.is_zero() {
                inverse_ok = false;
                println!(
                    "FAIL  numeric: inverse form, T = {name}, dim {}",
                    pair.dim()
                );
            }
        }
    }
    println!(
        "{}  [(I-2Q)TM(I-M^2)^-1, PV] = TM for T in {{I, M^2, I + M^2}} on {invertible} pairs with S invertible (numeric only)",
        if inverse_ok { "PASS" } else { "FAIL" }
    );

    let ok = symbolic_ok && bridge.passed() && inverse_ok;
    println!(
        "{}",
        if ok {
            "all identities hold"
        } else {
            "some identities failed"
        }
    );
    Ok(if ok { 0 } else { EXIT_FAIL })
}
