//! Fitting decomposition `X = F ⊕ Y` of `S = I - M²`.
//!
//! `F = ker Sᵏ` collects the generalized null vectors of `S` and
//! `Y = im Sᵏ` is the part where `S` is invertible, for the least `k` with
//! `rank Sᵏ = rank Sᵏ⁺¹`. In finite dimensions the compactness hypothesis of
//! the Fredholm version is automatic. Both parts are invariant under `P` and
//! `Q` because `S` commutes with them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{is_negligible, kernel_basis, rank, restrict_operator, RankMargin, Subspace};
use crate::matrix::Matrix;
use crate::pair::ProjectionPair;
use crate::scalar::{Field, Scalar, TolerancePolicy};

#[derive(Debug, Clone)]
pub struct FittingDecomposition<T: Scalar> {
    /// Stabilization exponent; `0` when `S` is invertible.
    pub k: usize,
    pub f: Subspace<T>,
    pub y: Subspace<T>,
    pub p_f: Matrix<T>,
    pub q_f: Matrix<T>,
    pub m_f: Matrix<T>,
    pub s_f: Matrix<T>,
    pub p_y: Matrix<T>,
    pub q_y: Matrix<T>,
    pub m_y: Matrix<T>,
    pub s_y: Matrix<T>,
    /// `rank Sʲ` for `j = 0..=k+1`.
    pub power_ranks: Vec<usize>,
    /// Float mode only: singular-value margins of each rank decision above.
    pub rank_margins: Vec<RankMargin>,
}

impl<T: Scalar> FittingDecomposition<T> {
    /// Float decompositions are advisory: rank decisions near the threshold
    /// may split the space differently from exact arithmetic.
    pub fn is_advisory(&self) -> bool {
        T::FIELD == Field::Float
    }

    /// Smallest singular-value safety factor over all rank decisions.
    pub fn min_safety_factor(&self) -> Option<f64> {
        self.rank_margins
            .iter()
            .map(RankMargin::safety_factor)
            .reduce(f64::min)
    }
}

fn restrict<T: Scalar>(
    name: &str,
    t: &Matrix<T>,
    w: &Subspace<T>,
    pol: &TolerancePolicy,
) -> Result<Matrix<T>> {
    restrict_operator(t, w, pol).map_err(|e| Error::RestrictionFailure(format!("{name}: {e}")))
}

pub fn fitting_decomposition<T: Scalar>(
    pair: &ProjectionPair<T>,
) -> Result<FittingDecomposition<T>> {
    let pol = pair.policy();
    let n = pair.dim();
    let id = pair.identity();
    let m = pair.m();
    let s = &id - &(&m * &m);

    let mut power = id.clone();
    let mut power_ranks = vec![n];
    let mut rank_margins = Vec::new();
    let mut k = 0;
    loop {
        let next = &power * &s;
        let r = rank(&next, pol);
        if let Some(margin) = T::rank_margin(&next, pol) {
            rank_margins.push(margin);
        }
        power_ranks.push(r);
        if r == power_ranks[k] {
            break;
        }
        if k == n {
            return Err(Error::RestrictionFailure(format!(
                "rank of powers of S did not stabilize within {n} steps"
            )));
        }
        power = next;
        k += 1;
    }

    let f = kernel_basis(&power, pol)?;
    let y = Subspace::span(&power, pol)?;
    let fd = FittingDecomposition {
        k,
        p_f: restrict("P_F", pair.p(), &f, pol)?,
        q_f: restrict("Q_F", pair.q(), &f, pol)?,
        m_f: restrict("M_F", &m, &f, pol)?,
        s_f: restrict("S_F", &s, &f, pol)?,
        p_y: restrict("P_Y", pair.p(), &y, pol)?,
        q_y: restrict("Q_Y", pair.q(), &y, pol)?,
        m_y: restrict("M_Y", &m, &y, pol)?,
        s_y: restrict("S_Y", &s, &y, pol)?,
        f,
        y,
        power_ranks,
        rank_margins,
    };

    if fd.f.dim() + fd.y.dim() != n {
        return Err(Error::RestrictionFailure(format!(
            "dim F + dim Y = {} + {} != {n}",
            fd.f.dim(),
            fd.y.dim()
        )));
    }
    if fd.f.sum(&fd.y, pol)?.dim() != n {
        return Err(Error::RestrictionFailure("F and Y intersect".into()));
    }
    if !T::is_invertible(&fd.s_y, pol) {
        return Err(Error::RestrictionFailure("S is not invertible on Y".into()));
    }
    let s_f_pow = fd.s_f.pow(k as u32);
    if !is_negligible(&s_f_pow, fd.s_f.max_abs().powi(k as i32), pol) {
        return Err(Error::RestrictionFailure("S is not nilpotent on F".into()));
    }
    Ok(fd)
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FittingReport {
    pub verdicts: Vec<Verdict>,
}

impl FittingReport {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.verdicts
            .iter()
            .find(|v| v.name == name)
            .map(|v| v.passed)
    }
}

/// Re-derives every defining property of `fd` from `pair` without trusting
/// the stored restrictions.
pub fn verify_fitting<T: Scalar>(
    fd: &FittingDecomposition<T>,
    pair: &ProjectionPair<T>,
) -> FittingReport {
    let pol = pair.policy();
    let n = pair.dim();
    let id = pair.identity();
    let m = pair.m();
    let s = &id - &(&m * &m);
    let sk = s.pow(fd.k as u32);
    let mut verdicts = Vec::new();
    let mut push = |name, passed| verdicts.push(Verdict { name, passed });

    push("k_at_most_dim", fd.k <= n);
    push("direct_sum_dims", fd.f.dim() + fd.y.dim() == n);
    push(
        "trivial_intersection",
        fd.f.intersection(&fd.y, pol).is_ok_and(|i| i.dim() == 0),
    );
    push(
        "f_is_kernel_of_power",
        kernel_basis(&sk, pol).is_ok_and(|kf| kf.equals(&fd.f, pol)),
    );
    push(
        "y_is_image_of_power",
        Subspace::span(&sk, pol).is_ok_and(|iy| iy.equals(&fd.y, pol)),
    );
    let r_k = rank(&sk, pol);
    push("stabilized", rank(&(&sk * &s), pol) == r_k);
    push(
        "k_minimal",
        fd.k == 0 || rank(&s.pow(fd.k as u32 - 1), pol) != r_k,
    );

    let invariant = |t: &Matrix<T>, w: &Subspace<T>| restrict_operator(t, w, pol).is_ok();
    push(
        "f_invariant_under_p_q",
        invariant(pair.p(), &fd.f) && invariant(pair.q(), &fd.f),
    );
    push(
        "y_invariant_under_p_q",
        invariant(pair.p(), &fd.y) && invariant(pair.q(), &fd.y),
    );
    push(
        "s_invertible_on_y",
        restrict_operator(&s, &fd.y, pol).is_ok_and(|sy| T::is_invertible(&sy, pol)),
    );
    push(
        "s_nilpotent_on_f",
        restrict_operator(&s, &fd.f, pol).is_ok_and(|sf| {
            let scale = sf.max_abs().max(1.0).powi(fd.k as i32);
            is_negligible(&sf.pow(fd.k as u32), scale, pol)
        }),
    );
    FittingReport { verdicts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::make_pair;
    use crate::scalar::Rational;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_i64(rows)
    }

    fn pol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn orthogonal() -> ProjectionPair<Rational> {
        make_pair(q(&[&[1, 0], &[0, 0]]), q(&[&[0, 0], &[0, 1]]), pol()).unwrap()
    }

    fn pythagorean_q() -> Matrix<Rational> {
        let r = Rational::from_ratio;
        Matrix::from_rows(vec![vec![r(9, 25), r(12, 25)], vec![r(12, 25), r(16, 25)]]).unwrap()
    }

    fn pythagorean() -> ProjectionPair<Rational> {
        make_pair(q(&[&[1, 0], &[0, 0]]), pythagorean_q(), pol()).unwrap()
    }

    #[test]
    fn orthogonal_pair_is_all_f() {
        let fd = fitting_decomposition(&orthogonal()).unwrap();
        assert_eq!(fd.k, 1);
        assert_eq!(fd.f.dim(), 2);
        assert_eq!(fd.y.dim(), 0);
        assert!(verify_fitting(&fd, &orthogonal()).all_passed());
    }

    #[test]
    fn pythagorean_pair_is_all_y() {
        let fd = fitting_decomposition(&pythagorean()).unwrap();
        assert_eq!(fd.k, 0);
        assert_eq!(fd.f.dim(), 0);
        assert_eq!(fd.y.dim(), 2);
        assert!(verify_fitting(&fd, &pythagorean()).all_passed());
    }

    #[test]
    fn block_sum_splits_evenly() {
        let p = Matrix::block_diag(&[q(&[&[1, 0], &[0, 0]]), q(&[&[1, 0], &[0, 0]])]);
        let qq = Matrix::block_diag(&[q(&[&[0, 0], &[0, 1]]), pythagorean_q()]);
        let pair = make_pair(p, qq, pol()).unwrap();
        let fd = fitting_decomposition(&pair).unwrap();
        assert_eq!((fd.k, fd.f.dim(), fd.y.dim()), (1, 2, 2));
        assert_eq!(fd.m_f.trace().unwrap(), Rational::from_i64(0));
        assert_eq!(
            fd.s_y,
            Matrix::identity(2).scale(&Rational::from_ratio(9, 25))
        );
        assert!(verify_fitting(&fd, &pair).all_passed());
    }

    #[test]
    fn nilpotent_m_gives_trivial_f() {
        let pair = make_pair(q(&[&[1, 0], &[0, 0]]), q(&[&[1, 1], &[0, 0]]), pol()).unwrap();
        let fd = fitting_decomposition(&pair).unwrap();
        assert_eq!((fd.k, fd.f.dim(), fd.y.dim()), (0, 0, 2));
        assert!(verify_fitting(&fd, &pair).all_passed());
    }

    #[test]
    fn truncated_f_fails_direct_sum() {
        let pair = orthogonal();
        let mut fd = fitting_decomposition(&pair).unwrap();
        fd.f = Subspace::from_basis(fd.f.basis().take_columns(1), &pol()).unwrap();
        let report = verify_fitting(&fd, &pair);
        assert_eq!(report.get("direct_sum_dims"), Some(false));
        assert!(!report.all_passed());
    }

    #[test]
    fn float_mode_records_margins() {
        let pair = orthogonal().to_float().unwrap();
        let fd = fitting_decomposition(&pair).unwrap();
        assert!(fd.is_advisory());
        assert_eq!((fd.k, fd.f.dim()), (1, 2));
        assert!(!fd.rank_margins.is_empty());
        assert!(verify_fitting(&fd, &pair).all_passed());
    }
}
