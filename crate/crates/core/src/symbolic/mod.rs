//! Dimension-free verification of the commutator identities as polynomial
//! identities in the free unital ring on two idempotents.
//!
//! Identities containing `(I - M²)⁻¹` are outside this module; they are
//! checked numerically in [`crate::pair::check_lemma3`].

mod expr;
mod ncpoly;
mod suite;

use thiserror::Error;

pub use expr::{eval_matrix, expand, expand_unreduced, parse_expr, Atom, Expr, RawPoly};
pub use ncpoly::{Gen, NCPoly, Word};
pub use suite::{
    builtin_corpus, lemma_suite, numeric_bridge, parse_corpus, verify_identity, BridgeReport,
    CorpusLine, IdentityCheck, SuiteReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("syntax error at offset {position}: expected one of {expected:?}, found {}", found.map_or("end of input".to_string(), |c| format!("{c:?}")))]
    Syntax {
        position: usize,
        found: Option<char>,
        expected: Vec<String>,
    },

    #[error("negative power {0} has no polynomial expansion")]
    NegativePower(i64),

    #[error("max_n must be odd and at least 3 (got {0})")]
    InvalidMaxN(u32),

    #[error("corpus line {line}: {message}")]
    Corpus { line: usize, message: String },
}
