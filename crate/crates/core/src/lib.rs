//! Verification engine for the index of a pair of projections.
//!
//! Given idempotents `P`, `Q` on a finite-dimensional space, the crate
//! computes `tr (P - Q)ⁿ` for odd `n`, the simultaneous eigenspaces
//! `E_ab = {x : Px = ax, Qx = bx}` and their transposed counterparts
//! `Ẽ_ab`, and the Fitting decomposition `X = F ⊕ Y` of `S = I - (P - Q)²`.
//! It then certifies
//!
//! ```text
//! tr (P - Q)ⁿ = dim E₁₀ - dim Ẽ₀₁ = dim Ẽ₁₀ - dim E₀₁
//! ```
//!
//! together with every intermediate equality of the commutator argument,
//! exactly over the rationals and within tolerance over binary64.
//!
//! Everything is finite dimensional: every operator is trace class, the
//! trace is the diagonal sum, the adjoint of a projection is its transpose,
//! and the dual space is identified with column vectors.

pub mod error;
pub mod fitting;
pub mod generators;
pub mod index;
pub mod linalg;
pub mod matrix;
pub mod pair;
pub mod pairfile;
pub mod scalar;
pub mod spectrum;
pub mod symbolic;

pub use error::{Error, Result};
pub use generators::{
    derive_seed, gen_pair_oblique_rational, gen_pair_orthogonal, gen_prescribed, GenericBlock,
    PrescribedSpec,
};
pub use index::{index_report, EigenDims, IndexReport};
pub use linalg::Subspace;
pub use matrix::Matrix;
pub use pair::{make_pair, ProjectionPair};
pub use pairfile::{parse_pair, read_pair, write_pair, AnyPair};
pub use scalar::{Field, Rational, Scalar, TolerancePolicy};
pub use spectrum::{spectrum_symmetry_check, SpectrumReport};
