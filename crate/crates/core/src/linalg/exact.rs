//! Exact elimination over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::matrix::Matrix;
use crate::scalar::Rational;

pub struct BareissResult {
    pub rank: usize,
    /// Determinant of the integer-scaled matrix after elimination (square input only).
    pub scaled_det: Option<BigInt>,
    /// Product of the per-row denominator lcms used to clear fractions.
    pub row_scale: BigInt,
}

/// Clears denominators row by row, returning the integer rows and the product of scalings.
fn integer_rows(m: &Matrix<Rational>) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..m.rows())
        .map(|i| {
            let lcm = m
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let row = m
                .row(i)
                .iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect();
            scale *= &lcm;
            row
        })
        .collect();
    (rows, scale)
}

/// Fraction-free Gaussian elimination. Every intermediate entry is a minor of
/// the integer-scaled input, so the divisions by the previous pivot are exact.
pub fn bareiss(m: &Matrix<Rational>) -> BareissResult {
    let (mut a, row_scale) = integer_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut negate = false;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            negate = !negate;
        }
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let num = &a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "inexact Bareiss division");
                a[i][j] = q;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    let scaled_det = (rows == cols).then(|| {
        if rank < rows {
            BigInt::zero()
        } else if rows == 0 {
            BigInt::one()
        } else if negate {
            -a[rows - 1][cols - 1].clone()
        } else {
            a[rows - 1][cols - 1].clone()
        }
    });
    BareissResult {
        rank,
        scaled_det,
        row_scale,
    }
}

/// Exact determinant via Bareiss. Panics on non-square input.
pub fn determinant(m: &Matrix<Rational>) -> Rational {
    let res = bareiss(m);
    let det = res.scaled_det.expect("determinant of non-square matrix");
    BigRational::new(det, res.row_scale)
}

/// Reduced row echelon form and pivot columns (Gauss-Jordan).
pub fn rref(m: &Matrix<Rational>) -> (Matrix<Rational>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let t = a.get(p, j).clone();
                a.set(p, j, a.get(r, j).clone());
                a.set(r, j, t);
            }
        }
        let inv = a.get(r, c).recip();
        for j in c..cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in c..cols {
                let v = a.get(i, j) - &f * a.get(r, j);
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn kernel(m: &Matrix<Rational>) -> Matrix<Rational> {
    let (r, pivots) = rref(m);
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let columns: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, f).clone();
            }
            v
        })
        .collect();
    Matrix::from_columns(n, &columns)
}

/// Pivot columns of the input itself.
pub fn column_space(m: &Matrix<Rational>) -> Matrix<Rational> {
    let (_, pivots) = rref(m);
    let columns: Vec<Vec<Rational>> = pivots.iter().map(|&c| m.column(c)).collect();
    Matrix::from_columns(m.rows(), &columns)
}

/// Solves `a x = b` for `a` of full column rank. If the system is
/// inconsistent the returned `x` is meaningless; callers check the residual.
pub fn solve(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Matrix<Rational> {
    let aug = a.hstack(b);
    let (r, _) = rref(&aug);
    let k = a.cols();
    Matrix::from_fn(k, b.cols(), |i, j| {
        if i < r.rows() {
            r.get(i, k + j).clone()
        } else {
            Rational::zero()
        }
    })
}

pub fn inverse(m: &Matrix<Rational>) -> Option<Matrix<Rational>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let (r, pivots) = rref(&m.hstack(&Matrix::identity(n)));
    if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
}
