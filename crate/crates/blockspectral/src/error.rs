//! One error type for the whole crate.

use thiserror::Error;

/// Everything that can go wrong when building graphs or running the
/// spectral pipeline on them.
#[derive(Error, Debug)]
pub enum Error {
    #[error("edge ({src}, {dst}) has endpoint out of range for {n} nodes")]
    NodeOutOfRange { src: usize, dst: usize, n: usize },

    #[error("edge ({src}, {dst}) has non-positive weight {weight}")]
    NonPositiveWeight { src: usize, dst: usize, weight: f64 },

    #[error("graph must have at least one node")]
    EmptyGraph,

    #[error("k = {k} out of range, need 2 <= k <= n = {n}")]
    KOutOfRange { k: usize, n: usize },

    #[error("node {node} has zero out-degree; the row-stochastic transition matrix is undefined (the dangling-row variant handles this)")]
    ZeroOutDegree { node: usize },

    #[error("graph is not strongly connected, {context}")]
    NotStronglyConnected { context: String },

    #[error("dense routine got n = {n} nodes, above the cap of {cap}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("eigenvalue {value} is not simple ({count} spectrum points within {tol:e}); the reduced resolvent is undefined")]
    EigenvalueNotSimple { value: String, count: usize, tol: f64 },

    #[error("eigensolver did not converge within {iterations} restarts (reached residual {residual:e}, wanted {tol:e})")]
    NoConvergence { iterations: usize, residual: f64, tol: f64 },

    #[error("power iteration for the stationary vector did not converge within {iterations} iterations")]
    PerronNoConvergence { iterations: usize },

    #[error("spectrum has {have} eigenpairs, need at least {need} for {context}")]
    SpectrumTooSmall { have: usize, need: usize, context: String },

    #[error("labels vector has length {got}, expected {expected}")]
    LabelLengthMismatch { got: usize, expected: usize },

    #[error("label {label} at node {node} is outside 0..{k}")]
    LabelOutOfRange { node: usize, label: usize, k: usize },

    #[error("{context}: {message}")]
    InvalidParameter { context: String, message: String },

    #[error("perturbed graph is not a superset of the base graph: {message}")]
    NotASuperset { message: String },

    #[error("generator could not satisfy its constraints after {attempts} attempts: {message}")]
    GeneratorExhausted { attempts: usize, message: String },

    #[error("linear algebra backend failure: {0}")]
    Backend(String),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Backend(e.to_string())
    }
}
