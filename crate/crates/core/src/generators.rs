//! Seeded test pairs: orthogonal projections over binary64, oblique rational
//! projections, and block-diagonal pairs with prescribed eigenspaces.
//!
//! Every generator draws from a ChaCha8 stream seeded with a `u64`, so the
//! output depends only on the arguments. Batch instance `i` of a run with
//! base seed `s` uses [`derive_seed`]`(s, i)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::index::EigenDims;
use crate::linalg::float::from_dmatrix;
use crate::matrix::Matrix;
use crate::pair::{make_pair, ProjectionPair};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar, TolerancePolicy};

/// Draws per projection before [`Error::GenerationExhausted`].
pub const RETRY_BUDGET: usize = 64;

/// SplitMix64 finalizer applied to `base + (i + 1)·φ`, where `φ` is the
/// 64-bit golden-ratio increment.
pub fn derive_seed(base: u64, i: u64) -> u64 {
    let mut z = base.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_ranks(dim: usize, rank_p: usize, rank_q: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if rank_p > dim || rank_q > dim {
        return Err(Error::InvalidArgument(format!(
            "ranks ({rank_p}, {rank_q}) exceed dimension {dim}"
        )));
    }
    Ok(())
}

fn orthogonal_projection(dim: usize, rank: usize, rng: &mut ChaCha8Rng) -> Matrix<f64> {
    if rank == 0 {
        return Matrix::zeros(dim, dim);
    }
    if rank == dim {
        return Matrix::identity(dim);
    }
    let g = DMatrix::<f64>::from_fn(dim, rank, |_, _| rng.sample(StandardNormal));
    let frame = g.qr().q();
    let p = &frame * frame.transpose();
    from_dmatrix(&((&p + p.transpose()) * 0.5))
}

/// Symmetric idempotents of the given ranks from Gaussian frames.
pub fn gen_pair_orthogonal(
    dim: usize,
    rank_p: usize,
    rank_q: usize,
    seed: u64,
) -> Result<ProjectionPair<f64>> {
    check_ranks(dim, rank_p, rank_q)?;
    let mut r = rng(seed);
    let p = orthogonal_projection(dim, rank_p, &mut r);
    let q = orthogonal_projection(dim, rank_q, &mut r);
    make_pair(p, q, TolerancePolicy::default())
}

/// `A (BA)⁻¹ B`, or `None` when `BA` is singular.
pub fn oblique_projection(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Option<Matrix<Rational>> {
    let ba_inv = Rational::inverse(&(b * a), &TolerancePolicy::default())?;
    Some(&(a * &ba_inv) * b)
}

fn random_integer_matrix(
    rows: usize,
    cols: usize,
    bound: i64,
    rng: &mut ChaCha8Rng,
) -> Matrix<Rational> {
    Matrix::from_fn(rows, cols, |_, _| {
        Rational::from_i64(rng.random_range(-bound..=bound))
    })
}

fn random_oblique(
    dim: usize,
    rank: usize,
    bound: i64,
    rng: &mut ChaCha8Rng,
) -> Result<Matrix<Rational>> {
    if rank == 0 {
        return Ok(Matrix::zeros(dim, dim));
    }
    for _ in 0..RETRY_BUDGET {
        let a = random_integer_matrix(dim, rank, bound, rng);
        let b = random_integer_matrix(rank, dim, bound, rng);
        if let Some(p) = oblique_projection(&a, &b) {
            return Ok(p);
        }
    }
    Err(Error::GenerationExhausted {
        attempts: RETRY_BUDGET,
    })
}

/// Exact idempotents `A (BA)⁻¹ B` with integer `A`, `B` bounded by `entry_bound`.
pub fn gen_pair_oblique_rational(
    dim: usize,
    rank_p: usize,
    rank_q: usize,
    seed: u64,
    entry_bound: i64,
) -> Result<ProjectionPair<Rational>> {
    check_ranks(dim, rank_p, rank_q)?;
    if entry_bound < 1 {
        return Err(Error::InvalidArgument(format!(
            "entry bound must be at least 1 (got {entry_bound})"
        )));
    }
    let mut r = rng(seed);
    let p = random_oblique(dim, rank_p, entry_bound, &mut r)?;
    let q = random_oblique(dim, rank_q, entry_bound, &mut r)?;
    make_pair(p, q, TolerancePolicy::default())
}

/// A 2×2 block with `P = diag(1, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GenericBlock {
    /// `Q` projects orthogonally onto `(c, s)` with
    /// `c = (m² - k²)/(m² + k²)`, `s = 2mk/(m² + k²)`; `M² = s² I`.
    Pythagorean { m: u32, k: u32 },
    /// `Q = [[1, t], [0, 0]]`; `M` is nilpotent.
    Shear { t: Rational },
}

impl GenericBlock {
    pub fn validate(&self) -> Result<()> {
        match self {
            GenericBlock::Pythagorean { m, k } if !(*m > *k && *k >= 1) => {
                Err(Error::InvalidArgument(format!(
                    "pythagorean block needs m > k >= 1 (got m={m}, k={k})"
                )))
            }
            GenericBlock::Shear { t } if t.is_zero() => Err(Error::InvalidArgument(
                "shear parameter must be nonzero".into(),
            )),
            _ => Ok(()),
        }
    }

    /// `(P, Q)` for this block.
    pub fn matrices(&self) -> (Matrix<Rational>, Matrix<Rational>) {
        let p = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        let q = match self {
            GenericBlock::Pythagorean { m, k } => {
                let (m, k) = (i64::from(*m), i64::from(*k));
                let h = m * m + k * k;
                let c = Rational::from_ratio(m * m - k * k, h);
                let s = Rational::from_ratio(2 * m * k, h);
                Matrix::from_rows(vec![
                    vec![c.clone() * c.clone(), c.clone() * s.clone()],
                    vec![c * s.clone(), s.clone() * s],
                ])
                .expect("2x2")
            }
            GenericBlock::Shear { t } => Matrix::from_rows(vec![
                vec![Rational::from_i64(1), t.clone()],
                vec![Rational::from_i64(0), Rational::from_i64(0)],
            ])
            .expect("2x2"),
        };
        (p, q)
    }
}

impl fmt::Display for GenericBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenericBlock::Pythagorean { m, k } => write!(f, "pyth:{m}:{k}"),
            GenericBlock::Shear { t } => write!(f, "shear:{}", format_rational(t)),
        }
    }
}

impl FromStr for GenericBlock {
    type Err = Error;

    /// `pyth:M:K` or `shear:T` with `T` an integer or `a/b`.
    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidArgument(format!("bad block '{s}': expected pyth:M:K or shear:T"));
        let mut parts = s.trim().split(':');
        let block = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some("pyth"), Some(m), Some(k), None) => GenericBlock::Pythagorean {
                m: m.parse().map_err(|_| bad())?,
                k: k.parse().map_err(|_| bad())?,
            },
            (Some("shear"), Some(t), None, None) => GenericBlock::Shear {
                t: parse_rational(t).map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        block.validate()?;
        Ok(block)
    }
}

/// Comma-separated list of blocks; the empty string is the empty list.
pub fn parse_blocks(s: &str) -> Result<Vec<GenericBlock>> {
    s.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrescribedSpec {
    pub d10: usize,
    pub d01: usize,
    pub d11: usize,
    pub d00: usize,
    pub blocks: Vec<GenericBlock>,
    pub conjugate: bool,
    pub seed: u64,
}

impl PrescribedSpec {
    pub fn dim(&self) -> usize {
        self.d10 + self.d01 + self.d11 + self.d00 + 2 * self.blocks.len()
    }

    pub fn expected_index(&self) -> i64 {
        self.d10 as i64 - self.d01 as i64
    }

    fn shear_count(&self) -> usize {
        self.blocks
            .iter()
            .filter(|b| matches!(b, GenericBlock::Shear { .. }))
            .count()
    }

    /// Eigenspace dimensions of the generated pair. A shear block has `e₁`
    /// as a common fixed vector and `(0, 1)` as a common transposed null
    /// vector, so it adds one to `E₁₁` and one to `Ẽ₀₀`; Pythagorean blocks
    /// add nothing.
    pub fn expected_dims(&self) -> EigenDims {
        let shears = self.shear_count();
        EigenDims {
            e10: self.d10,
            e01: self.d01,
            e11: self.d11 + shears,
            e00: self.d00,
            et10: self.d10,
            et01: self.d01,
            et11: self.d11,
            et00: self.d00 + shears,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim() == 0 {
            return Err(Error::ZeroDimension);
        }
        self.blocks.iter().try_for_each(GenericBlock::validate)
    }
}

/// An integer matrix of determinant ±1 and its inverse, from seeded row
/// additions and sign flips.
pub fn unimodular(dim: usize, seed: u64) -> (Matrix<Rational>, Matrix<Rational>) {
    let mut r = Matrix::<Rational>::identity(dim);
    let mut r_inv = Matrix::<Rational>::identity(dim);
    if dim == 0 {
        return (r, r_inv);
    }
    let mut g = rng(seed);
    for _ in 0..2 * dim {
        let i = g.random_range(0..dim);
        let j = g.random_range(0..dim);
        if i == j {
            // Negate row i of R and column i of R⁻¹.
            for c in 0..dim {
                r.set(i, c, -r.get(i, c).clone());
                r_inv.set(c, i, -r_inv.get(c, i).clone());
            }
            continue;
        }
        let c = Rational::from_i64(if g.random_bool(0.5) { 1 } else { -1 });
        // R ← (I + c eᵢeⱼᵀ) R, R⁻¹ ← R⁻¹ (I - c eᵢeⱼᵀ).
        for col in 0..dim {
            let v = r.get(i, col).clone() + c.clone() * r.get(j, col).clone();
            r.set(i, col, v);
        }
        for row in 0..dim {
            let v = r_inv.get(row, j).clone() - c.clone() * r_inv.get(row, i).clone();
            r_inv.set(row, j, v);
        }
    }
    (r, r_inv)
}

/// The unconjugated block-diagonal pair of `spec`.
pub fn prescribed_blocks(spec: &PrescribedSpec) -> Result<ProjectionPair<Rational>> {
    spec.validate()?;
    let one = |v: i64| Matrix::from_i64(&[&[v]]);
    let mut ps = Vec::new();
    let mut qs = Vec::new();
    for (count, pv, qv) in [
        (spec.d10, 1, 0),
        (spec.d01, 0, 1),
        (spec.d11, 1, 1),
        (spec.d00, 0, 0),
    ] {
        for _ in 0..count {
            ps.push(one(pv));
            qs.push(one(qv));
        }
    }
    for b in &spec.blocks {
        let (p, q) = b.matrices();
        ps.push(p);
        qs.push(q);
    }
    make_pair(
        Matrix::block_diag(&ps),
        Matrix::block_diag(&qs),
        TolerancePolicy::default(),
    )
}

/// The prescribed pair, conjugated if requested, and its index `d10 - d01`.
pub fn gen_prescribed(spec: &PrescribedSpec) -> Result<(ProjectionPair<Rational>, i64)> {
    let pair = prescribed_blocks(spec)?;
    let pair = if spec.conjugate {
        let (r, r_inv) = unimodular(spec.dim(), spec.seed);
        pair.conjugate(&r, &r_inv)?
    } else {
        pair
    };
    Ok((pair, spec.expected_index()))
}
