use proptest::prelude::*;

use projpair::linalg::{exact, kernel_basis, rank};
use projpair::{Matrix, Rational, Scalar, Subspace, TolerancePolicy};

fn pol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |v| Matrix::from_fn(rows, cols, |i, j| Rational::from_i64(v[i * cols + j])))
}

/// Random matrix of the form `A·B` so low ranks are common.
fn low_rank_matrix() -> impl Strategy<Value = Matrix<Rational>> {
    (1usize..=6, 1usize..=6, 0usize..=4).prop_flat_map(|(r, c, k)| {
        (int_matrix(r, k), int_matrix(k, c)).prop_map(move |(a, b)| {
            if k == 0 {
                Matrix::zeros(r, c)
            } else {
                &a * &b
            }
        })
    })
}

/// Span of up to `n` random integer columns in dimension `n`.
fn subspace(n: usize) -> impl Strategy<Value = Subspace<Rational>> {
    (0usize..=n).prop_flat_map(move |k| {
        int_matrix(n, k.max(1)).prop_map(move |m| {
            if k == 0 {
                Subspace::zero(n).unwrap()
            } else {
                Subspace::span(&m, &pol()).unwrap()
            }
        })
    })
}

fn square_pair() -> impl Strategy<Value = (Matrix<Rational>, Matrix<Rational>)> {
    (1usize..=6).prop_flat_map(|n| (int_matrix(n, n), int_matrix(n, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_nullity(m in low_rank_matrix()) {
        let k = kernel_basis(&m, &pol()).unwrap();
        prop_assert_eq!(rank(&m, &pol()) + k.dim(), m.cols());
        prop_assert!((&m * k.basis()).is_zero());
    }

    #[test]
    fn bareiss_rank_matches_echelon_rank(m in low_rank_matrix()) {
        let (_, pivots) = exact::rref(&m);
        prop_assert_eq!(exact::bareiss(&m).rank, pivots.len());
    }

    #[test]
    fn modular_law((a, b) in (1usize..=5).prop_flat_map(|n| (subspace(n), subspace(n)))) {
        let sum = a.sum(&b, &pol()).unwrap();
        let meet = a.intersection(&b, &pol()).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), a.dim() + b.dim());
        prop_assert!(meet.is_contained_in(&a, &pol()).unwrap());
        prop_assert!(meet.is_contained_in(&b, &pol()).unwrap());
        prop_assert!(a.is_contained_in(&sum, &pol()).unwrap());
    }

    #[test]
    fn canonical_form_is_idempotent(s in (1usize..=6).prop_flat_map(subspace)) {
        if s.dim() > 0 {
            let again = Subspace::from_basis(s.canonical().clone(), &pol()).unwrap();
            prop_assert_eq!(again.canonical(), s.canonical());
            prop_assert!(again.equals(&s, &pol()));
        }
    }

    #[test]
    fn trace_is_cyclic((a, b) in square_pair()) {
        prop_assert_eq!((&a * &b).trace().unwrap(), (&b * &a).trace().unwrap());
        prop_assert!(a.commutator(&b).trace().unwrap().is_zero());
    }

    #[test]
    fn float_rank_agrees_when_separated(m in low_rank_matrix()) {
        let f = m.to_f64();
        let separated = singular_values(&f).iter().all(|&s| !(1e-12..=1e-6).contains(&s));
        prop_assume!(separated);
        prop_assert_eq!(rank(&f, &pol()), rank(&m, &pol()));
        let kf = kernel_basis(&f, &pol()).unwrap();
        let km = kernel_basis(&m, &pol()).unwrap();
        prop_assert_eq!(kf.dim(), km.dim());
    }

    #[test]
    fn inverse_is_exact(m in (1usize..=5).prop_flat_map(|n| int_matrix(n, n))) {
        let det = exact::determinant(&m);
        match exact::inverse(&m) {
            Some(inv) => {
                prop_assert!(!det.is_zero());
                prop_assert_eq!(&m * &inv, Matrix::identity(m.rows()));
            }
            None => prop_assert!(det.is_zero()),
        }
    }
}

fn singular_values(m: &Matrix<f64>) -> Vec<f64> {
    faer::Mat::from_fn(m.rows(), m.cols(), |i, j| *m.get(i, j))
        .singular_values()
        .unwrap()
}
