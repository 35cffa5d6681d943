//! The two scalar fields the engine works over.
//!
//! Exact rationals are the reference backend: every identity is decided by
//! comparing against the exact zero. Binary64 floats exist for scale and for
//! the spectral check, and consult a [`TolerancePolicy`] wherever a rank or
//! zero decision has to be made. The rational field ignores the policy.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{exact, float, RankMargin};
use crate::matrix::Matrix;

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rational,
    Float,
}

impl Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("rational"),
            Field::Float => f.write_str("float"),
        }
    }
}

/// Thresholds for float-mode rank and equality decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// Singular values at or below `rank_rel_tol * max(1, sigma_max) * max(rows, cols)` count as zero.
    pub rank_rel_tol: f64,
    /// Absolute tolerance for entrywise comparisons, scaled by `max(1, scale)`.
    pub compare_abs_tol: f64,
}

impl TolerancePolicy {
    pub fn new(rank_rel_tol: f64, compare_abs_tol: f64) -> Result<Self> {
        if !(rank_rel_tol > 0.0 && compare_abs_tol > 0.0)
            || !rank_rel_tol.is_finite()
            || !compare_abs_tol.is_finite()
        {
            return Err(Error::InvalidArgument(
                "tolerances must be finite and strictly positive".into(),
            ));
        }
        Ok(TolerancePolicy {
            rank_rel_tol,
            compare_abs_tol,
        })
    }
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            rank_rel_tol: 1e-9,
            compare_abs_tol: 1e-8,
        }
    }
}

/// A field element plus the field-specific linear algebra kernels.
///
/// Generic code is written once against this trait; the kernels that differ
/// in kind between the fields (exact elimination vs. SVD thresholding) are
/// dispatched through the associated functions.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const FIELD: Field;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn magnitude(&self) -> f64;
    fn to_f64(&self) -> f64;

    /// Zero up to tolerance, relative to the magnitude `scale` of the quantities involved.
    fn negligible(&self, scale: f64, pol: &TolerancePolicy) -> bool;

    /// The integer this value equals (exactly, or within tolerance for floats).
    fn as_integer(&self, pol: &TolerancePolicy) -> Option<i64>;

    /// JSON encoding: canonical `a/b` strings for rationals, numbers for floats.
    fn to_json(&self) -> serde_json::Value;

    fn from_json(v: &serde_json::Value) -> Result<Self>;

    fn rank(m: &Matrix<Self>, pol: &TolerancePolicy) -> usize;

    /// Columns spanning the null space; linearly independent.
    fn kernel(m: &Matrix<Self>, pol: &TolerancePolicy) -> Matrix<Self>;

    /// Columns forming a basis of the column space.
    fn column_space(m: &Matrix<Self>, pol: &TolerancePolicy) -> Matrix<Self>;

    /// Nonzero rows of the reduced row echelon form.
    fn echelon_rows(m: &Matrix<Self>, pol: &TolerancePolicy) -> Matrix<Self>;

    /// A solution (exact, or least squares) of `a x = b` for `a` of full column rank.
    fn solve(a: &Matrix<Self>, b: &Matrix<Self>, pol: &TolerancePolicy) -> Matrix<Self>;

    fn is_invertible(m: &Matrix<Self>, pol: &TolerancePolicy) -> bool;

    fn inverse(m: &Matrix<Self>, pol: &TolerancePolicy) -> Option<Matrix<Self>>;

    /// Singular-value margins around the rank cut; `None` for exact fields.
    fn rank_margin(_m: &Matrix<Self>, _pol: &TolerancePolicy) -> Option<RankMargin> {
        None
    }
}

impl Scalar for Rational {
    const FIELD: Field = Field::Rational;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn negligible(&self, _scale: f64, _pol: &TolerancePolicy) -> bool {
        Zero::is_zero(self)
    }

    fn as_integer(&self, _pol: &TolerancePolicy) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(_) => Err(Error::FieldMismatch {
                expected: Field::Rational,
                found: Field::Float,
            }),
            other => Err(Error::PairFile(format!("unexpected entry {other}"))),
        }
    }

    fn rank(m: &Matrix<Self>, _pol: &TolerancePolicy) -> usize {
        exact::bareiss(m).rank
    }

    fn kernel(m: &Matrix<Self>, _pol: &TolerancePolicy) -> Matrix<Self> {
        exact::kernel(m)
    }

    fn column_space(m: &Matrix<Self>, _pol: &TolerancePolicy) -> Matrix<Self> {
        exact::column_space(m)
    }

    fn echelon_rows(m: &Matrix<Self>, _pol: &TolerancePolicy) -> Matrix<Self> {
        let (r, pivots) = exact::rref(m);
        r.transpose().take_columns(pivots.len()).transpose()
    }

    fn solve(a: &Matrix<Self>, b: &Matrix<Self>, _pol: &TolerancePolicy) -> Matrix<Self> {
        exact::solve(a, b)
    }

    fn is_invertible(m: &Matrix<Self>, _pol: &TolerancePolicy) -> bool {
        m.is_square() && !Zero::is_zero(&exact::determinant(m))
    }

    fn inverse(m: &Matrix<Self>, _pol: &TolerancePolicy) -> Option<Matrix<Self>> {
        exact::inverse(m)
    }
}

impl Scalar for f64 {
    const FIELD: Field = Field::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn negligible(&self, scale: f64, pol: &TolerancePolicy) -> bool {
        self.abs() <= pol.compare_abs_tol * scale.max(1.0)
    }

    fn as_integer(&self, pol: &TolerancePolicy) -> Option<i64> {
        let r = self.round();
        if (self - r).abs() <= pol.compare_abs_tol * self.abs().max(1.0) {
            Some(r as i64)
        } else {
            None
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map_or(serde_json::Value::Null, serde_json::Value::Number)
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::PairFile(format!("entry {n} is not representable"))),
            serde_json::Value::String(_) => Err(Error::FieldMismatch {
                expected: Field::Float,
                found: Field::Rational,
            }),
            other => Err(Error::PairFile(format!("unexpected entry {other}"))),
        }
    }

    fn rank(m: &Matrix<Self>, pol: &TolerancePolicy) -> usize {
        float::rank(m, pol)
    }

    fn kernel(m: &Matrix<Self>, pol: &TolerancePolicy) -> Matrix<Self> {
        float::kernel(m, pol)
    }

    fn column_space(m: &Matrix<Self>, pol: &TolerancePolicy) -> Matrix<Self> {
        float::column_space(m, pol)
    }

    fn echelon_rows(m: &Matrix<Self>, pol: &TolerancePolicy) -> Matrix<Self> {
        float::echelon_rows(m, pol)
    }

    fn solve(a: &Matrix<Self>, b: &Matrix<Self>, pol: &TolerancePolicy) -> Matrix<Self> {
        float::solve(a, b, pol)
    }

    fn is_invertible(m: &Matrix<Self>, pol: &TolerancePolicy) -> bool {
        float::is_invertible(m, pol)
    }

    fn inverse(m: &Matrix<Self>, pol: &TolerancePolicy) -> Option<Matrix<Self>> {
        if float::is_invertible(m, pol) {
            float::inverse(m)
        } else {
            None
        }
    }

    fn rank_margin(m: &Matrix<Self>, pol: &TolerancePolicy) -> Option<RankMargin> {
        Some(float::rank_margin(m, pol))
    }
}

/// Canonical string form of a rational: `a/b` gcd-reduced with the sign on
/// the numerator, integers without `/1`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::PairFile(format!("malformed rational entry {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if Zero::is_zero(&den) {
        return Err(Error::PairFile(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_canonical() {
        let r = parse_rational("6/-4").unwrap();
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(*r.denom(), BigInt::from(2));
        assert_eq!(format_rational(&parse_rational("10/5").unwrap()), "2");
        assert_eq!(format_rational(&parse_rational("0/7").unwrap()), "0");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn tolerance_policy_requires_positive() {
        assert!(TolerancePolicy::new(0.0, 1e-8).is_err());
        assert!(TolerancePolicy::new(1e-9, -1.0).is_err());
        assert!(TolerancePolicy::new(1e-9, 1e-8).is_ok());
    }

    #[test]
    fn float_integer_detection() {
        let pol = TolerancePolicy::default();
        assert_eq!(2.000_000_000_01_f64.as_integer(&pol), Some(2));
        assert_eq!(1.5_f64.as_integer(&pol), None);
        assert_eq!(Rational::from_ratio(4, 2).as_integer(&pol), Some(2));
        assert_eq!(Rational::from_ratio(1, 2).as_integer(&pol), None);
    }
}
