//! Dense LAPACK-backed reference path.
//!
//! Everything here materializes the operator, so a cap guards against
//! accidentally feeding a web-scale graph into an O(n^3) factorization.
//! The iterative path never calls into this module; acceptance tests lean
//! on that independence when they compare the two.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Inverse, SVD};
use num_complex::Complex64;

use super::{sort_pairs_desc, true_residual, Eigenpair, SpectrumResult};
use crate::graph::TransitionOperator;
use crate::{Error, Result};

/// Default node-count cap for dense routines.
pub const DEFAULT_DENSE_CAP: usize = 2000;

fn materialize(op: &TransitionOperator) -> Array2<f64> {
    let n = op.dim();
    let mut a = Array2::zeros((n, n));
    for i in 0..n {
        for (j, v) in op.dense_row(i).into_iter().enumerate() {
            a[[i, j]] = v;
        }
    }
    a
}

/// Full spectrum of the operator by dense nonsymmetric eigendecomposition.
///
/// All `n` eigenpairs come back sorted by descending modulus, with
/// residuals measured against the sparse operator itself (a cheap
/// end-to-end check that materialization and factorization agree).
pub fn dense_spectrum(op: &TransitionOperator, cap: usize) -> Result<SpectrumResult> {
    let n = op.dim();
    if n > cap {
        return Err(Error::DenseCapExceeded { n, cap });
    }
    let a = materialize(op);
    let (values, vectors): (Array1<Complex64>, Array2<Complex64>) = a.eig()?;
    let mut pairs = Vec::with_capacity(n);
    for (idx, &value) in values.iter().enumerate() {
        let col = vectors.column(idx);
        let nrm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let vector: Vec<Complex64> = col.iter().map(|z| z / nrm).collect();
        let residual = true_residual(op, value, &vector);
        pairs.push(Eigenpair { value, vector, residual });
    }
    sort_pairs_desc(&mut pairs);
    Ok(SpectrumResult { pairs, iterations: 0, converged: true, boundary_tie: false })
}

/// Spectral norm of the reduced resolvent `(lambda I - P)^#`: inverted on
/// the complement of the lambda-eigenspace, zero on it.
///
/// `lambda` must be a simple eigenvalue (no other spectrum point within
/// 1e-8). Uses the full eigendecomposition, so the operator needs to be
/// diagonalizable to working precision.
pub fn drazin_norm(op: &TransitionOperator, lambda: Complex64, cap: usize) -> Result<f64> {
    let n = op.dim();
    if n > cap {
        return Err(Error::DenseCapExceeded { n, cap });
    }
    let a = materialize(op);
    let (values, vectors): (Array1<Complex64>, Array2<Complex64>) = a.eig()?;
    const SIMPLE_TOL: f64 = 1e-8;
    let close: Vec<usize> = (0..n)
        .filter(|&i| (values[i] - lambda).norm() <= SIMPLE_TOL)
        .collect();
    if close.len() != 1 {
        return Err(Error::EigenvalueNotSimple {
            value: format!("{lambda}"),
            count: close.len(),
            tol: SIMPLE_TOL,
        });
    }
    let target = close[0];
    let diag: Array1<Complex64> = (0..n)
        .map(|i| {
            if i == target {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0) / (lambda - values[i])
            }
        })
        .collect();
    let vinv = vectors.inv()?;
    let reduced = vectors.dot(&Array2::from_diag(&diag)).dot(&vinv);
    let (_, singular, _) = reduced.svd(false, false)?;
    Ok(singular.iter().copied().fold(0.0, f64::max))
}
