//! Eigenspaces, odd-power traces, and the full verification report for
//!
//! ```text
//! tr Mⁿ = dim E₁₀ - dim Ẽ₀₁ = dim Ẽ₁₀ - dim E₀₁      (n odd)
//! ```
//!
//! The report follows the commutator argument step by step: the trace
//! splits over `F ⊕ Y`, vanishes on `Y` (where `Mⁿ` is a commutator with an
//! invertible `S` factored out), and on the finite-dimensional part
//! `tr M_Fⁿ = tr M_F = tr P_F - tr Q_F`, which is then counted with
//! eigenspace dimensions. Adjoints are transposes, so `Ẽ_ab` is computed
//! from `Pᵀ`, `Qᵀ`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fitting::{fitting_decomposition, verify_fitting, FittingDecomposition};
use crate::linalg::{kernel_basis, rank, Subspace};
use crate::matrix::Matrix;
use crate::pair::ProjectionPair;
use crate::scalar::{Field, Scalar, TolerancePolicy};

fn check_bit(a: u8) -> Result<()> {
    if a > 1 {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue index must be 0 or 1 (got {a})"
        )));
    }
    Ok(())
}

/// `ker(P - aI) ∩ ker(Q - bI)` as the kernel of the stacked matrix.
fn joint_kernel<T: Scalar>(
    p: &Matrix<T>,
    q: &Matrix<T>,
    a: u8,
    b: u8,
    pol: &TolerancePolicy,
) -> Result<Subspace<T>> {
    check_bit(a)?;
    check_bit(b)?;
    let id = Matrix::<T>::identity(p.rows());
    let pa = p - &id.scale(&T::from_i64(a.into()));
    let qb = q - &id.scale(&T::from_i64(b.into()));
    kernel_basis(&pa.vstack(&qb), pol)
}

/// `E_ab = {x : Px = ax, Qx = bx}`.
pub fn eigenspace<T: Scalar>(pair: &ProjectionPair<T>, a: u8, b: u8) -> Result<Subspace<T>> {
    joint_kernel(pair.p(), pair.q(), a, b, pair.policy())
}

/// `Ẽ_ab = {f : Pᵀf = af, Qᵀf = bf}`.
pub fn dual_eigenspace<T: Scalar>(pair: &ProjectionPair<T>, a: u8, b: u8) -> Result<Subspace<T>> {
    joint_kernel(
        &pair.p().transpose(),
        &pair.q().transpose(),
        a,
        b,
        pair.policy(),
    )
}

#[derive(Debug, Clone)]
pub struct EigenspaceSet<T: Scalar> {
    pub e10: Subspace<T>,
    pub e01: Subspace<T>,
    pub e11: Subspace<T>,
    pub e00: Subspace<T>,
    pub et10: Subspace<T>,
    pub et01: Subspace<T>,
    pub et11: Subspace<T>,
    pub et00: Subspace<T>,
}

impl<T: Scalar> EigenspaceSet<T> {
    pub fn compute(pair: &ProjectionPair<T>) -> Result<Self> {
        Ok(EigenspaceSet {
            e10: eigenspace(pair, 1, 0)?,
            e01: eigenspace(pair, 0, 1)?,
            e11: eigenspace(pair, 1, 1)?,
            e00: eigenspace(pair, 0, 0)?,
            et10: dual_eigenspace(pair, 1, 0)?,
            et01: dual_eigenspace(pair, 0, 1)?,
            et11: dual_eigenspace(pair, 1, 1)?,
            et00: dual_eigenspace(pair, 0, 0)?,
        })
    }

    pub fn dims(&self) -> EigenDims {
        EigenDims {
            e10: self.e10.dim(),
            e01: self.e01.dim(),
            e11: self.e11.dim(),
            e00: self.e00.dim(),
            et10: self.et10.dim(),
            et01: self.et01.dim(),
            et11: self.et11.dim(),
            et00: self.et00.dim(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EigenDims {
    pub e10: usize,
    pub e01: usize,
    pub e11: usize,
    pub e00: usize,
    pub et10: usize,
    pub et01: usize,
    pub et11: usize,
    pub et00: usize,
}

/// `tr Mⁿ`.
pub fn trace_power<T: Scalar>(pair: &ProjectionPair<T>, n: u32) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    pair.m().pow(n).trace()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FittingSummary {
    pub k: usize,
    #[serde(rename = "dimF")]
    pub dim_f: usize,
    #[serde(rename = "dimY")]
    pub dim_y: usize,
}

/// Dimensions entering the counting step on `F`, for both orientations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountingValues {
    /// `rank (I - P_F)`
    pub rank_i_minus_pf: usize,
    /// `rank Q_F`
    pub rank_qf: usize,
    /// `dim((I-P)F + Q(F))`
    pub dim_sum: usize,
    /// `dim((I-P)F ∩ Q(F))`
    pub dim_meet: usize,
    /// `rank (I - Q_F)`
    pub rank_i_minus_qf: usize,
    /// `rank P_F`
    pub rank_pf: usize,
    /// `dim((I-Q)F + P(F))`
    pub dim_sum_mirror: usize,
    /// `dim((I-Q)F ∩ P(F))`
    pub dim_meet_mirror: usize,
}

#[derive(Debug, Clone)]
pub struct IndexReport<T: Scalar> {
    pub field: Field,
    pub dim: usize,
    pub ns: Vec<u32>,
    /// `tr Mⁿ`
    pub traces: BTreeMap<u32, T>,
    /// `tr M_Fⁿ`
    pub traces_mf: BTreeMap<u32, T>,
    /// `tr M_Yⁿ`
    pub traces_my: BTreeMap<u32, T>,
    pub trace_mf: T,
    pub trace_pf: T,
    pub trace_qf: T,
    pub dims: EigenDims,
    pub fitting: FittingSummary,
    pub counting: CountingValues,
    /// Named equalities, each expected to hold.
    pub verdicts: BTreeMap<String, bool>,
    /// `tr M` when it is an integer.
    pub index: Option<i64>,
    /// Smallest float rank-decision safety factor; `None` over ℚ.
    pub rank_safety: Option<f64>,
}

impl<T: Scalar> IndexReport<T> {
    pub fn all_verdicts_true(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }

    pub fn failed_verdicts(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|(_, &v)| !v)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Stable JSON with sorted keys; rational values as canonical strings.
    pub fn to_json(&self) -> Value {
        let traces = |m: &BTreeMap<u32, T>| -> Value {
            Value::Object(
                m.iter()
                    .map(|(n, t)| (n.to_string(), t.to_json()))
                    .collect::<Map<_, _>>(),
            )
        };
        let mut v = json!({
            "field": self.field,
            "dim": self.dim,
            "ns": self.ns,
            "traces": traces(&self.traces),
            "tracesMF": traces(&self.traces_mf),
            "tracesMY": traces(&self.traces_my),
            "traceMF": self.trace_mf.to_json(),
            "tracePF": self.trace_pf.to_json(),
            "traceQF": self.trace_qf.to_json(),
            "dims": self.dims,
            "fitting": self.fitting,
            "counting": self.counting,
            "verdicts": self.verdicts,
            "index": self.index,
        });
        if let Some(s) = self.rank_safety {
            v["rankSafety"] = json!(s);
        }
        v
    }
}

fn same<T: Scalar>(a: &T, b: &T, scale: f64, pol: &TolerancePolicy) -> bool {
    (a.clone() - b.clone()).negligible(scale, pol)
}

fn int<T: Scalar>(v: usize) -> T {
    T::from_i64(v as i64)
}

/// Computes all traces, eigenspaces and the Fitting decomposition of `pair`
/// and evaluates every equality of the index argument.
pub fn index_report<T: Scalar>(pair: &ProjectionPair<T>, odd_ns: &[u32]) -> Result<IndexReport<T>> {
    if odd_ns.is_empty() {
        return Err(Error::InvalidArgument("at least one n is required".into()));
    }
    if let Some(&n) = odd_ns.iter().find(|&&n| n % 2 == 0) {
        return Err(Error::EvenPower(n));
    }
    let pol = pair.policy();
    let dim = pair.dim();
    let fd = fitting_decomposition(pair)?;
    let eig = EigenspaceSet::compute(pair)?;
    let dims = eig.dims();
    let m = pair.m();

    let scale = dim as f64;
    let mut verdicts = BTreeMap::new();
    let mut set = |name: &str, ok: bool| {
        let entry = verdicts.entry(name.to_string()).or_insert(true);
        *entry &= ok;
    };

    let mut traces = BTreeMap::new();
    let mut traces_mf = BTreeMap::new();
    let mut traces_my = BTreeMap::new();
    let trace_mf = fd.m_f.trace()?;
    let trace_pf = fd.p_f.trace()?;
    let trace_qf = fd.q_f.trace()?;
    let primal_dual = int::<T>(dims.e10) - int::<T>(dims.et01);
    let dual_primal = int::<T>(dims.et10) - int::<T>(dims.e01);

    for &n in odd_ns {
        let t = m.pow(n).trace()?;
        let tf = fd.m_f.pow(n).trace()?;
        let ty = fd.m_y.pow(n).trace()?;
        set(
            "trace_split",
            same(&t, &(tf.clone() + ty.clone()), scale, pol),
        );
        set("trace_vanishes_on_y", ty.negligible(scale, pol));
        set(
            "trace_f_power_equals_trace_f",
            same(&tf, &trace_mf, scale, pol),
        );
        set(
            "index_equals_e10_minus_dual_e01",
            same(&t, &primal_dual, scale, pol),
        );
        set(
            "index_equals_dual_e10_minus_e01",
            same(&t, &dual_primal, scale, pol),
        );
        set("trace_is_integer", t.as_integer(pol).is_some());
        traces.insert(n, t);
        traces_mf.insert(n, tf);
        traces_my.insert(n, ty);
    }
    let first = traces.values().next().cloned().expect("nonempty ns");
    set(
        "trace_independent_of_n",
        traces.values().all(|t| same(t, &first, scale, pol)),
    );
    set(
        "trace_f_equals_pf_minus_qf",
        same(
            &trace_mf,
            &(trace_pf.clone() - trace_qf.clone()),
            scale,
            pol,
        ),
    );

    // Counting on F: rank(I - P_F) + rank Q_F = dim((I-P)F + QF) + dim((I-P)F ∩ QF),
    // and the intersection is E₀₁.
    let id = pair.identity();
    let id_f = Matrix::<T>::identity(fd.f.dim());
    let i_minus_p = &id - pair.p();
    let i_minus_q = &id - pair.q();
    let range_ip = fd.f.image(&i_minus_p, pol)?;
    let range_q = fd.f.image(pair.q(), pol)?;
    let range_iq = fd.f.image(&i_minus_q, pol)?;
    let range_p = fd.f.image(pair.p(), pol)?;
    let sum = range_ip.sum(&range_q, pol)?;
    let meet = range_ip.intersection(&range_q, pol)?;
    let sum_mirror = range_iq.sum(&range_p, pol)?;
    let meet_mirror = range_iq.intersection(&range_p, pol)?;
    let counting = CountingValues {
        rank_i_minus_pf: rank(&(&id_f - &fd.p_f), pol),
        rank_qf: rank(&fd.q_f, pol),
        dim_sum: sum.dim(),
        dim_meet: meet.dim(),
        rank_i_minus_qf: rank(&(&id_f - &fd.q_f), pol),
        rank_pf: rank(&fd.p_f, pol),
        dim_sum_mirror: sum_mirror.dim(),
        dim_meet_mirror: meet_mirror.dim(),
    };
    let dim_f = fd.f.dim() as i64;
    let c = &counting;

    set(
        "projection_trace_is_rank",
        same(
            &(trace_pf.clone() - trace_qf.clone()),
            &T::from_i64(dim_f - c.rank_i_minus_pf as i64 - c.rank_qf as i64),
            scale,
            pol,
        ),
    );
    set("meet_is_e01", meet.equals(&eig.e01, pol));
    set(
        "counting_identity",
        same(
            &(trace_pf.clone() - trace_qf.clone()),
            &T::from_i64(dim_f - c.dim_sum as i64 - dims.e01 as i64),
            scale,
            pol,
        ),
    );
    set(
        "cokernel_is_dual_e10",
        dim_f - c.dim_sum as i64 == dims.et10 as i64,
    );
    set("mirror_meet_is_e10", meet_mirror.equals(&eig.e10, pol));
    set(
        "mirror_counting_identity",
        same(
            &(trace_qf.clone() - trace_pf.clone()),
            &T::from_i64(dim_f - c.dim_sum_mirror as i64 - dims.e10 as i64),
            scale,
            pol,
        ),
    );
    set(
        "mirror_cokernel_is_dual_e01",
        dim_f - c.dim_sum_mirror as i64 == dims.et01 as i64,
    );
    set(
        "dual_balance",
        dims.e10 as i64 - dims.et01 as i64 == dims.et10 as i64 - dims.e01 as i64,
    );
    set(
        "e10_e01_independent",
        eig.e10.intersection(&eig.e01, pol)?.dim() == 0,
    );
    set(
        "e10_e01_inside_f",
        eig.e10.is_contained_in(&fd.f, pol)? && eig.e01.is_contained_in(&fd.f, pol)?,
    );
    set("fitting_certified", verify_fitting(&fd, pair).all_passed());

    let index = traces.get(&odd_ns[0]).and_then(|t| t.as_integer(pol));
    Ok(IndexReport {
        field: T::FIELD,
        dim,
        ns: odd_ns.to_vec(),
        traces,
        traces_mf,
        traces_my,
        trace_mf,
        trace_pf,
        trace_qf,
        dims,
        fitting: summary(&fd),
        counting,
        verdicts,
        index,
        rank_safety: fd.min_safety_factor(),
    })
}

fn summary<T: Scalar>(fd: &FittingDecomposition<T>) -> FittingSummary {
    FittingSummary {
        k: fd.k,
        dim_f: fd.f.dim(),
        dim_y: fd.y.dim(),
    }
}
