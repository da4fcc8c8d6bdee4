//! Eigenpair machinery for transition operators.
//!
//! Two routes to the same quantities, kept deliberately separate: a
//! matrix-free Arnoldi iteration ([`top_modulus_eigenpairs`]) used by the
//! detectors, and a dense LAPACK factorization ([`dense_spectrum`]) used as
//! the reference oracle and for small-graph conveniences. Perturbation
//! diagnostics quantify how far appended edges can move the structural
//! eigenvalues.

mod arnoldi;
mod dense;
mod perturb;
mod schur;

pub use arnoldi::top_modulus_eigenpairs;
pub use dense::{dense_spectrum, drazin_norm, DEFAULT_DENSE_CAP};
pub use perturb::{perturbation_diagnostics, perron_vector, PerturbationReport};

use num_complex::Complex64;

use crate::{Error, Result};

/// One approximate eigenpair: value, unit right eigenvector, and the
/// 2-norm of `M v - lambda v` measured against the actual operator.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
    pub residual: f64,
}

/// Eigenpairs sorted by descending modulus, plus solver bookkeeping.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub pairs: Vec<Eigenpair>,
    /// Restart cycles used by the iterative path, 0 for the dense path.
    pub iterations: usize,
    pub converged: bool,
    /// Set when the modulus at the requested cut was a tie (difference
    /// below 1e-10) and the tied pairs were returned as well.
    pub boundary_tie: bool,
}

impl SpectrumResult {
    /// Eigenvalues in result order.
    pub fn values(&self) -> Vec<Complex64> {
        self.pairs.iter().map(|p| p.value).collect()
    }
}

/// Tuning knobs for the Arnoldi iteration.
#[derive(Debug, Clone)]
pub struct ArnoldiOptions {
    /// Residual target, relative to `max(1, |lambda|)`.
    pub tol: f64,
    /// Restart cycles before giving up.
    pub max_restarts: usize,
    /// Seed for the random start vector.
    pub seed: u64,
    /// Krylov subspace size; `None` picks `max(2k + 10, 30)` capped at n.
    pub subspace: Option<usize>,
}

impl Default for ArnoldiOptions {
    fn default() -> Self {
        ArnoldiOptions { tol: 1e-8, max_restarts: 400, seed: 0, subspace: None }
    }
}

/// Anything that can act on a complex vector. The solvers only ever
/// multiply, so graphs stay in sparse form end to end.
pub trait LinearOp {
    fn dim(&self) -> usize;
    /// `y = M x`.
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
    /// Whether the matrix has real entries, which makes the spectrum
    /// closed under conjugation.
    fn is_real(&self) -> bool {
        false
    }
}

impl LinearOp for crate::graph::TransitionOperator<'_> {
    fn dim(&self) -> usize {
        self.dim()
    }
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        crate::graph::TransitionOperator::apply(self, x, y)
    }
    fn is_real(&self) -> bool {
        true
    }
}

pub(crate) fn true_residual<L: LinearOp + ?Sized>(
    op: &L,
    lambda: Complex64,
    v: &[Complex64],
) -> f64 {
    let mut mv = vec![Complex64::new(0.0, 0.0); v.len()];
    op.apply(v, &mut mv);
    mv.iter()
        .zip(v)
        .map(|(a, b)| (a - lambda * b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Distance from `spectrum[l]` to the nearest other spectrum point.
///
/// This is the denominator that controls how far a perturbation can push
/// the eigenvalue; a vanishing gap means the eigenvalue is unprotected.
pub fn eigengap_condition(spectrum: &[Complex64], l: usize) -> Result<f64> {
    if spectrum.len() < 2 {
        return Err(Error::SpectrumTooSmall {
            have: spectrum.len(),
            need: 2,
            context: "eigengap".into(),
        });
    }
    if l >= spectrum.len() {
        return Err(Error::InvalidParameter {
            context: "eigengap".into(),
            message: format!("index {l} out of range for {} eigenvalues", spectrum.len()),
        });
    }
    Ok(spectrum
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != l)
        .map(|(_, mu)| (mu - spectrum[l]).norm())
        .fold(f64::INFINITY, f64::min))
}

/// Deterministic order: descending modulus, then descending real and
/// imaginary parts to break exact ties.
pub(crate) fn sort_pairs_desc(pairs: &mut [Eigenpair]) {
    pairs.sort_by(|a, b| {
        b.value
            .norm()
            .total_cmp(&a.value.norm())
            .then(b.value.re.total_cmp(&a.value.re))
            .then(b.value.im.total_cmp(&a.value.im))
    });
}
