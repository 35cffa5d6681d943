//! Binary64 kernels: SVD thresholding for rank and subspaces.

use nalgebra::DMatrix;

use super::RankMargin;
use crate::matrix::Matrix;
use crate::scalar::TolerancePolicy;

pub(crate) fn to_dmatrix(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.entries())
}

pub(crate) fn from_dmatrix(d: &DMatrix<f64>) -> Matrix<f64> {
    Matrix::from_fn(d.nrows(), d.ncols(), |i, j| d[(i, j)])
}

/// Singular values of `m` padded with zero rows to at least square, with the
/// full right singular basis. Columns of `v` pair with `sigma`.
struct PaddedSvd {
    sigma: Vec<f64>,
    u: DMatrix<f64>,
    v: DMatrix<f64>,
}

fn padded_svd(m: &Matrix<f64>) -> PaddedSvd {
    let (r, c) = (m.rows(), m.cols());
    let padded =
        faer::Mat::<f64>::from_fn(r.max(c), c, |i, j| if i < r { *m.get(i, j) } else { 0.0 });
    let (sigma, u, v) = svd(&padded);
    PaddedSvd {
        sigma,
        u: u.rows(0, r).into_owned(),
        v,
    }
}

/// Full SVD through faer; nalgebra's bidiagonal SVD loses accuracy on some
/// rank-deficient inputs.
fn svd(a: &faer::Mat<f64>) -> (Vec<f64>, DMatrix<f64>, DMatrix<f64>) {
    let s = a.svd().expect("svd of a finite matrix");
    let (u, d, v) = (s.U(), s.S(), s.V());
    let k = a.nrows().min(a.ncols());
    let sigma = (0..k).map(|i| d[i]).collect();
    (
        sigma,
        DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
        DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]),
    )
}

fn to_faer(m: &Matrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.rows(), m.cols(), |i, j| *m.get(i, j))
}

fn threshold(sigma: &[f64], rows: usize, cols: usize, pol: &TolerancePolicy) -> f64 {
    // Floored at 1 so a block of pure rounding noise has rank 0.
    let smax = sigma.iter().copied().fold(1.0, f64::max);
    pol.rank_rel_tol * smax * rows.max(cols) as f64
}

pub fn rank(m: &Matrix<f64>, pol: &TolerancePolicy) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let svd = padded_svd(m);
    let thr = threshold(&svd.sigma, m.rows(), m.cols(), pol);
    svd.sigma.iter().filter(|&&s| s > thr).count()
}

pub fn rank_margin(m: &Matrix<f64>, pol: &TolerancePolicy) -> RankMargin {
    if m.rows() == 0 || m.cols() == 0 {
        return RankMargin {
            threshold: 0.0,
            smallest_kept: None,
            largest_dropped: None,
        };
    }
    let svd = padded_svd(m);
    let thr = threshold(&svd.sigma, m.rows(), m.cols(), pol);
    let kept = svd.sigma.iter().copied().filter(|&s| s > thr);
    let dropped = svd.sigma.iter().copied().filter(|&s| s <= thr);
    RankMargin {
        threshold: thr,
        smallest_kept: kept.reduce(f64::min),
        largest_dropped: dropped.reduce(f64::max),
    }
}

pub fn kernel(m: &Matrix<f64>, pol: &TolerancePolicy) -> Matrix<f64> {
    let n = m.cols();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    if m.rows() == 0 {
        return Matrix::identity(n);
    }
    let svd = padded_svd(m);
    let thr = threshold(&svd.sigma, m.rows(), n, pol);
    let columns: Vec<Vec<f64>> = svd
        .sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= thr)
        .map(|(j, _)| svd.v.column(j).iter().copied().collect())
        .collect();
    Matrix::from_columns(n, &columns)
}

pub fn column_space(m: &Matrix<f64>, pol: &TolerancePolicy) -> Matrix<f64> {
    let rows = m.rows();
    if rows == 0 || m.cols() == 0 {
        return Matrix::zeros(rows, 0);
    }
    let svd = padded_svd(m);
    let thr = threshold(&svd.sigma, rows, m.cols(), pol);
    let columns: Vec<Vec<f64>> = svd
        .sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > thr)
        .map(|(j, _)| svd.u.column(j).iter().copied().collect())
        .collect();
    Matrix::from_columns(rows, &columns)
}

/// Gauss-Jordan with partial pivoting; pivots below tolerance are treated as zero.
pub fn echelon_rows(m: &Matrix<f64>, pol: &TolerancePolicy) -> Matrix<f64> {
    let mut a = to_dmatrix(m);
    let (rows, cols) = a.shape();
    let tol = pol.compare_abs_tol * m.max_abs().max(1.0);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (p, best) = (r..rows)
            .map(|i| (i, a[(i, c)].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            for i in r..rows {
                a[(i, c)] = 0.0;
            }
            continue;
        }
        a.swap_rows(p, r);
        let piv = a[(r, c)];
        for j in 0..cols {
            a[(r, j)] /= piv;
        }
        for i in 0..rows {
            if i != r {
                let f = a[(i, c)];
                if f != 0.0 {
                    for j in 0..cols {
                        a[(i, j)] -= f * a[(r, j)];
                    }
                }
            }
        }
        r += 1;
    }
    from_dmatrix(&a.rows(0, r).into_owned())
}

/// Least-squares solution of `a x = b` through the SVD pseudo-inverse.
pub fn solve(a: &Matrix<f64>, b: &Matrix<f64>, pol: &TolerancePolicy) -> Matrix<f64> {
    if a.cols() == 0 {
        return Matrix::zeros(0, b.cols());
    }
    let (sigma, u, v) = svd(&to_faer(a));
    let thr = threshold(&sigma, a.rows(), a.cols(), pol);
    let mut ut_b = u.transpose() * to_dmatrix(b);
    for (i, &s) in sigma.iter().enumerate() {
        let scale = if s > thr { 1.0 / s } else { 0.0 };
        ut_b.row_mut(i).scale_mut(scale);
    }
    let x = v.columns(0, sigma.len()) * ut_b.rows(0, sigma.len());
    from_dmatrix(&x)
}

pub fn is_invertible(m: &Matrix<f64>, pol: &TolerancePolicy) -> bool {
    if !m.is_square() {
        return false;
    }
    if m.rows() == 0 {
        return true;
    }
    let sv = to_faer(m)
        .singular_values()
        .expect("singular values of a finite matrix");
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    smax > 0.0 && smin > pol.rank_rel_tol * smax
}

pub fn inverse(m: &Matrix<f64>) -> Option<Matrix<f64>> {
    to_dmatrix(m).try_inverse().map(|d| from_dmatrix(&d))
}
