//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is numerically singular (|det| = {det:.3e})")]
    SingularMatrix { det: f64 },

    #[error("determinant is negative ({det:.6}); not factorizable as m·(aI) with a > 0")]
    NegativeDeterminant { det: f64 },

    #[error("matrix is not unimodular (det = {det:.6})")]
    NotUnimodular { det: f64 },

    #[error("subspace dimension {got} is outside the supported range {expected}")]
    BadDimension { expected: &'static str, got: usize },

    #[error("subspace has no nonzero generator")]
    ZeroSubspace,

    #[error("subalgebra has no nonzero generator")]
    ZeroAlgebra,

    #[error("rank decision is ambiguous: {detail}")]
    IllConditioned { detail: String },

    #[error(
        "generators are not bracket-closed: [g{i}, g{j}] leaves the span (residual {residual:.3e})"
    )]
    NotClosed { i: usize, j: usize, residual: f64 },

    #[error("generator {index} lies outside the target algebra (residual {residual:.3e})")]
    NotContained { index: usize, residual: f64 },

    #[error("two-dimensional subalgebra matches no normal-form family")]
    UnrecognizedSubalgebra,

    #[error("h does not leave sigma invariant (residual {residual:.3e})")]
    NotInvariant { residual: f64 },

    #[error("sigma has dimension {dim}; only lines and planes are classified")]
    DimensionOutOfScope { dim: usize },

    #[error("bad parameters: {0}")]
    BadParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
