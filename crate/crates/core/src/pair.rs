//! Projection pairs, the derived operators `M, S, U, V`, and residual checks
//! for the commutator identities relating them.
//!
//! With `M = P - Q`, `S = I - M²`, `U = (I-Q)(I-P) + QP` and
//! `V = (I-P)(I-Q) + PQ`:
//!
//! * `M²` commutes with `P` and `Q`;
//! * `[(I-2Q) T M, P V] = T M S` for every `T` commuting with `P` and `Q`;
//! * `[(I-2Q) T M S⁻¹, P V] = T M` whenever `S` is invertible.
//!
//! The operators `T` used here are polynomials in `M²`, which commute with
//! `P` and `Q` by the first identity.

use crate::error::{Error, Result, Which};
use crate::linalg::is_negligible;
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar, TolerancePolicy};

#[derive(Debug, Clone)]
pub struct ProjectionPair<T: Scalar> {
    p: Matrix<T>,
    q: Matrix<T>,
    pol: TolerancePolicy,
}

/// Validates `P² = P` and `Q² = Q` (exactly over ℚ, and within
/// `compare_abs_tol · (1 + ‖P‖²)` over floats).
pub fn make_pair<T: Scalar>(
    p: Matrix<T>,
    q: Matrix<T>,
    pol: TolerancePolicy,
) -> Result<ProjectionPair<T>> {
    for (which, m) in [(Which::P, &p), (Which::Q, &q)] {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{which} is {}x{}, expected square",
                m.rows(),
                m.cols()
            )));
        }
    }
    if p.rows() != q.rows() {
        return Err(Error::DimensionMismatch(format!(
            "P is {0}x{0} but Q is {1}x{1}",
            p.rows(),
            q.rows()
        )));
    }
    if p.rows() == 0 {
        return Err(Error::ZeroDimension);
    }
    for (which, m) in [(Which::P, &p), (Which::Q, &q)] {
        let residual = &(m * m) - m;
        let norm = m.max_abs();
        let ok = match T::FIELD {
            Field::Rational => residual.is_zero(),
            Field::Float => residual.max_abs() <= pol.compare_abs_tol * (1.0 + norm * norm),
        };
        if !ok {
            return Err(Error::NotIdempotent {
                which,
                residual: residual.max_abs(),
            });
        }
    }
    Ok(ProjectionPair { p, q, pol })
}

impl<T: Scalar> ProjectionPair<T> {
    pub fn dim(&self) -> usize {
        self.p.rows()
    }

    pub fn field(&self) -> Field {
        T::FIELD
    }

    pub fn p(&self) -> &Matrix<T> {
        &self.p
    }

    pub fn q(&self) -> &Matrix<T> {
        &self.q
    }

    pub fn policy(&self) -> &TolerancePolicy {
        &self.pol
    }

    pub fn with_policy(mut self, pol: TolerancePolicy) -> Self {
        self.pol = pol;
        self
    }

    pub fn identity(&self) -> Matrix<T> {
        Matrix::identity(self.dim())
    }

    pub fn m(&self) -> Matrix<T> {
        &self.p - &self.q
    }

    /// `I - 2Q`, an involution.
    pub fn reflection(&self) -> Matrix<T> {
        &self.identity() - &self.q.scale(&T::from_i64(2))
    }

    /// Similarity transform `(R P R⁻¹, R Q R⁻¹)`.
    pub fn conjugate(&self, r: &Matrix<T>, r_inv: &Matrix<T>) -> Result<Self> {
        make_pair(&(r * &self.p) * r_inv, &(r * &self.q) * r_inv, self.pol)
    }

    /// The pair over binary64, entries rounded.
    pub fn to_float(&self) -> Result<ProjectionPair<f64>> {
        make_pair(self.p.to_f64(), self.q.to_f64(), self.pol)
    }
}

/// A matrix that should vanish, with the magnitude it is judged against.
#[derive(Debug, Clone)]
pub struct Residual<T: Scalar> {
    pub name: &'static str,
    pub matrix: Matrix<T>,
    pub scale: f64,
}

impl<T: Scalar> Residual<T> {
    /// `lhs - rhs`, judged relative to the size of both sides.
    pub fn between(name: &'static str, lhs: &Matrix<T>, rhs: &Matrix<T>) -> Self {
        let scale = lhs.max_abs().max(rhs.max_abs()) * lhs.rows().max(1) as f64;
        Residual {
            name,
            matrix: lhs - rhs,
            scale,
        }
    }

    pub fn norm(&self) -> f64 {
        self.matrix.max_abs()
    }

    /// Exact zero over ℚ; within tolerance over floats.
    pub fn holds(&self, pol: &TolerancePolicy) -> bool {
        is_negligible(&self.matrix, self.scale, pol)
    }

    fn require(self, pol: &TolerancePolicy) -> Result<Self> {
        if self.holds(pol) {
            Ok(self)
        } else {
            Err(Error::IdentityViolation {
                name: self.name,
                residual: self.norm(),
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct DerivedOps<T: Scalar> {
    pub m: Matrix<T>,
    pub s: Matrix<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    /// `QU = UP`, `UV = S`, `VU = S`, `I - U = (I-2Q)M`.
    pub certificate: Vec<Residual<T>>,
}

pub fn derived_ops<T: Scalar>(pair: &ProjectionPair<T>) -> Result<DerivedOps<T>> {
    let id = pair.identity();
    let (p, q) = (pair.p(), pair.q());
    let m = pair.m();
    let s = &id - &(&m * &m);
    let ip = &id - p;
    let iq = &id - q;
    let u = &(&iq * &ip) + &(q * p);
    let v = &(&ip * &iq) + &(p * q);
    let pol = pair.policy();
    let certificate = vec![
        Residual::between("QU = UP", &(q * &u), &(&u * p)).require(pol)?,
        Residual::between("UV = S", &(&u * &v), &s).require(pol)?,
        Residual::between("VU = S", &(&v * &u), &s).require(pol)?,
        Residual::between("I - U = (I-2Q)M", &(&id - &u), &(&pair.reflection() * &m))
            .require(pol)?,
    ];
    Ok(DerivedOps {
        m,
        s,
        u,
        v,
        certificate,
    })
}

/// `T = Σ cⱼ (M²)ʲ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralizerElement<T: Scalar> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> CentralizerElement<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        CentralizerElement { coeffs }
    }

    pub fn identity() -> Self {
        Self::new(vec![T::one()])
    }

    /// `I + M² + … + M^(n-3)`, the operator that turns the commutator
    /// identity into `[A, B] = M - Mⁿ`.
    pub fn witness_series(n: u32) -> Result<Self> {
        check_odd_at_least(n, 3)?;
        Ok(Self::new(vec![T::one(); ((n - 1) / 2) as usize]))
    }

    /// Evaluates the polynomial at `M²` and checks it commutes with `P` and `Q`.
    pub fn materialize(&self, pair: &ProjectionPair<T>) -> Result<Matrix<T>> {
        let m = pair.m();
        let m2 = &m * &m;
        let n = pair.dim();
        let mut t = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            t = &(&t * &m2) + &Matrix::identity(n).scale(c);
        }
        let pol = pair.policy();
        Residual::between("[T, P] = 0", &(&t * pair.p()), &(pair.p() * &t)).require(pol)?;
        Residual::between("[T, Q] = 0", &(&t * pair.q()), &(pair.q() * &t)).require(pol)?;
        Ok(t)
    }
}

fn check_odd_at_least(n: u32, min: u32) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenPower(n));
    }
    if n < min {
        return Err(Error::InvalidArgument(format!(
            "n must be at least {min} (got {n})"
        )));
    }
    Ok(())
}

/// Residuals of `[M², P]` and `[M², Q]`.
pub fn check_lemma1<T: Scalar>(pair: &ProjectionPair<T>) -> (Residual<T>, Residual<T>) {
    let m = pair.m();
    let m2 = &m * &m;
    let (p, q) = (pair.p(), pair.q());
    (
        Residual::between("[M^2, P] = 0", &(&m2 * p), &(p * &m2)),
        Residual::between("[M^2, Q] = 0", &(&m2 * q), &(q * &m2)),
    )
}

/// Residual of `[(I-2Q) T M, P V] - T M (I - M²)`.
pub fn check_lemma2<T: Scalar>(
    pair: &ProjectionPair<T>,
    t: &CentralizerElement<T>,
) -> Result<Residual<T>> {
    let ops = derived_ops(pair)?;
    let tm = &t.materialize(pair)? * &ops.m;
    let a = &pair.reflection() * &tm;
    let b = pair.p() * &ops.v;
    Ok(Residual::between(
        "[(I-2Q)TM, PV] = TM(I-M^2)",
        &a.commutator(&b),
        &(&tm * &ops.s),
    ))
}

/// Residual of `[(I-2Q) T M S⁻¹, P V] - T M`; requires `S` invertible.
pub fn check_lemma3<T: Scalar>(
    pair: &ProjectionPair<T>,
    t: &CentralizerElement<T>,
) -> Result<Residual<T>> {
    let ops = derived_ops(pair)?;
    let s_inv = T::inverse(&ops.s, pair.policy()).ok_or(Error::SingularS)?;
    let tm = &t.materialize(pair)? * &ops.m;
    let a = &(&pair.reflection() * &tm) * &s_inv;
    let b = pair.p() * &ops.v;
    Ok(Residual::between(
        "[(I-2Q)TM(I-M^2)^-1, PV] = TM",
        &a.commutator(&b),
        &tm,
    ))
}

/// Matrices `A`, `B` with `[A, B] = M - Mⁿ`.
#[derive(Debug, Clone)]
pub struct CommutatorWitness<T: Scalar> {
    pub n: u32,
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub residual: Residual<T>,
}

/// `A = (I-2Q) Tₙ M`, `B = P V` with `Tₙ = Σ_{j ≤ (n-3)/2} M²ʲ`. Since the
/// trace of a commutator vanishes, `tr Mⁿ = tr M` follows.
pub fn commutator_witness<T: Scalar>(
    pair: &ProjectionPair<T>,
    n: u32,
) -> Result<CommutatorWitness<T>> {
    let t = CentralizerElement::witness_series(n)?;
    let ops = derived_ops(pair)?;
    let a = &(&pair.reflection() * &t.materialize(pair)?) * &ops.m;
    let b = pair.p() * &ops.v;
    let residual = Residual::between(
        "[A, B] = M - M^n",
        &a.commutator(&b),
        &(&ops.m - &ops.m.pow(n)),
    )
    .require(pair.policy())?;
    Ok(CommutatorWitness { n, a, b, residual })
}
