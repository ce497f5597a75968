//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by validation and construction routines.
///
/// Every variant carries enough context to identify the offending input
/// without re-running the computation.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// An endomorphism matrix entry violates the homomorphism constraint
    /// `n_k | m_{kj} * n_j`.
    #[error("endomorphism entry m[{row}][{col}] = {entry} violates the homomorphism constraint for factors ({row_order}, {col_order})")]
    InvalidEndomorphism {
        row: usize,
        col: usize,
        entry: u64,
        row_order: u64,
        col_order: u64,
    },

    /// An endomorphism has no inverse.
    #[error("endomorphism is not invertible: {reason}")]
    NotInvertible { reason: String },

    /// A claimed group action fails the action laws.
    #[error("invalid action: {reason}")]
    InvalidAction { reason: String },

    /// An input datum fails a named validation predicate.
    #[error("invalid datum: check '{check}' failed: {reason}")]
    InvalidDatum { check: String, reason: String },

    /// An action map of a named group element is not a *-automorphism.
    #[error("action check failed at group element {element:?}: {reason}")]
    ActionCheckFailed { element: Vec<u64>, reason: String },

    /// A Hopf axiom failed during construction or verification.
    #[error("Hopf axiom '{axiom}' failed: {witness}")]
    HopfCheckFailed { axiom: String, witness: String },

    /// A *-algebra axiom failed during construction.
    #[error("algebra axiom '{axiom}' failed: {witness}")]
    AlgebraCheckFailed { axiom: String, witness: String },

    /// A linear map is not equivariant for the given actions.
    #[error("map is not equivariant at group element {element:?}")]
    NotEquivariant { element: Vec<u64> },

    /// A torus element does not map to a group-like basis element.
    #[error("basis element {index} is not group-like: {reason}")]
    NotGroupLike { index: usize, reason: String },

    /// Randomized decomposition failed validation after reseeding.
    #[error("decomposition unstable after {attempts} seeded attempts: {reason}")]
    DecompositionUnstable { attempts: u32, reason: String },

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: {context} (left {left}, right {right})")]
    DimensionMismatch {
        context: String,
        left: usize,
        right: usize,
    },

    /// Requested object is outside the supported range.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A multiplication table or field table fails its axioms.
    #[error("invalid table: {0}")]
    InvalidTable(String),

    /// An embedding is not an injective homomorphism.
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    /// Malformed serialized input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
