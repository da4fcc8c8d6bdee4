//! Stationary vectors and edge-perturbation diagnostics.
//!
//! Appending edges to a graph moves its structural eigenvalues. How far
//! they can move is controlled by two dimensionless ratios: `sigma`, the
//! worst in-degree to out-degree ratio along perturbed edges, and `rho`,
//! the worst relative out-degree growth. The first-order bound assembled
//! here scales with `sqrt(sigma * rho)` and with the 2-norm of the
//! stationary distribution of the unperturbed walk.

use crate::graph::{DirectedGraph, TransitionOperator};
use crate::{Error, Result};

/// Stationary distribution of the walk, normalized to unit 1-norm.
///
/// Power iteration on the transposed operator, with a half-step of damping
/// (`f <- (Pᵀf + f) / 2`) so that walks with periodic structure, whose
/// plain iterates orbit instead of settling, still converge to the fixed
/// point. The convergence test is on the undamped residual.
pub fn perron_vector(
    op: &TransitionOperator,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let g = op.graph();
    if !g.is_strongly_connected() {
        return Err(Error::NotStronglyConnected {
            context: "the stationary distribution needs an irreducible walk".into(),
        });
    }
    let n = op.dim();
    let mut f = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iter {
        op.apply_transpose_real(&f, &mut next);
        let residual: f64 = next.iter().zip(&f).map(|(a, b)| (a - b).abs()).sum();
        if residual <= tol {
            return Ok(f);
        }
        let mut mass = 0.0;
        for (fi, ni) in f.iter_mut().zip(&next) {
            *fi = 0.5 * (*fi + ni);
            mass += *fi;
        }
        for fi in f.iter_mut() {
            *fi /= mass;
        }
    }
    Err(Error::PerronNoConvergence { iterations: max_iter })
}

/// The ratios and first-order eigenvalue bound for a pair of graphs where
/// `g_hat` extends `g` by appended edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationReport {
    /// Max over edges of `g_hat` of in-degree(dst) / out-degree(src).
    pub sigma: f64,
    /// Max over nodes of relative out-degree growth.
    pub rho: f64,
    /// 2-norm of the stationary distribution of `g`; always between
    /// 1/sqrt(n) and 1.
    pub perron_norm2: f64,
    /// `sqrt(2 n) * perron_norm2 * sqrt(sigma * rho)`; how far any of the
    /// structural eigenvalues can move, up to second-order terms.
    pub bound_first_order: f64,
}

/// Computes the perturbation report for `g_hat` extending `g`.
///
/// `g` must be strongly connected. `g_hat` must keep every edge of `g` at
/// no smaller weight and must not append self-loops; otherwise the pair is
/// rejected.
pub fn perturbation_diagnostics(
    g: &DirectedGraph,
    g_hat: &DirectedGraph,
) -> Result<PerturbationReport> {
    const SLACK: f64 = 1e-12;
    if g.node_count() != g_hat.node_count() {
        return Err(Error::NotASuperset {
            message: format!(
                "node counts differ ({} vs {})",
                g.node_count(),
                g_hat.node_count()
            ),
        });
    }
    for (i, j, w) in g.edges() {
        if g_hat.weight(i, j) < w - SLACK {
            return Err(Error::NotASuperset {
                message: format!("edge ({i}, {j}) shrank from {w}"),
            });
        }
    }
    for (i, j, w) in g_hat.edges() {
        if i == j && w > g.weight(i, i) + SLACK {
            return Err(Error::NotASuperset {
                message: format!("self-loop appended at node {i}"),
            });
        }
    }
    let p = TransitionOperator::row_stochastic(g);
    let f = perron_vector(&p, 1e-13, 200_000)?;
    let perron_norm2 = f.iter().map(|v| v * v).sum::<f64>().sqrt();

    let mut sigma = 0.0f64;
    for (i, j, _) in g_hat.edges() {
        sigma = sigma.max(g_hat.in_degree(j) / g_hat.out_degree(i));
    }
    let mut rho = 0.0f64;
    for i in 0..g.node_count() {
        let base = g.out_degree(i);
        if base <= 0.0 {
            return Err(Error::ZeroOutDegree { node: i });
        }
        rho = rho.max((g_hat.out_degree(i) - base).max(0.0) / base);
    }
    let n = g.node_count() as f64;
    let bound_first_order = (2.0 * n).sqrt() * perron_norm2 * (sigma * rho).sqrt();
    Ok(PerturbationReport { sigma, rho, perron_norm2, bound_first_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stationary_vector_of_two_cycle_is_uniform() {
        let g = DirectedGraph::from_edges(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        let p = TransitionOperator::row_stochastic(&g);
        let f = perron_vector(&p, 1e-13, 10_000).unwrap();
        assert_abs_diff_eq!(f[0], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(f[1], 0.5, epsilon = 1e-10);
    }

    #[test]
    fn stationary_vector_with_self_loop() {
        // P = [[0.5, 0.5], [1, 0]] has stationary distribution (2/3, 1/3)
        let g = DirectedGraph::from_edges(2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        let p = TransitionOperator::row_stochastic(&g);
        let f = perron_vector(&p, 1e-13, 10_000).unwrap();
        assert_abs_diff_eq!(f[0], 2.0 / 3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(f[1], 1.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn stationary_vector_requires_strong_connectivity() {
        let g = DirectedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let p = TransitionOperator::row_stochastic(&g);
        assert!(matches!(
            perron_vector(&p, 1e-13, 1000),
            Err(Error::NotStronglyConnected { .. })
        ));
    }

    #[test]
    fn unperturbed_pair_has_zero_rho_and_zero_bound() {
        let g = DirectedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        let report = perturbation_diagnostics(&g, &g).unwrap();
        assert_abs_diff_eq!(report.rho, 0.0);
        assert_abs_diff_eq!(report.bound_first_order, 0.0);
        assert_abs_diff_eq!(report.sigma, 1.0);
        let n = 3.0f64;
        assert!(report.perron_norm2 >= 1.0 / n.sqrt() - 1e-12);
        assert!(report.perron_norm2 <= 1.0 + 1e-12);
    }

    #[test]
    fn appended_edge_shows_up_in_the_ratios() {
        let g = DirectedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        let g_hat = DirectedGraph::from_edges(
            3,
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (0, 2, 0.5)],
        )
        .unwrap();
        let report = perturbation_diagnostics(&g, &g_hat).unwrap();
        // node 0 grew from out-degree 1 to 1.5
        assert_abs_diff_eq!(report.rho, 0.5, epsilon = 1e-12);
        // worst edge: (1, 2) with in-degree 1.5 over out-degree 1
        assert_abs_diff_eq!(report.sigma, 1.5, epsilon = 1e-12);
        assert!(report.bound_first_order > 0.0);
    }

    #[test]
    fn shrunken_edge_and_appended_self_loop_are_rejected() {
        let g = DirectedGraph::from_edges(2, &[(0, 1, 2.0), (1, 0, 1.0)]).unwrap();
        let smaller = DirectedGraph::from_edges(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert!(matches!(
            perturbation_diagnostics(&g, &smaller),
            Err(Error::NotASuperset { .. })
        ));
        let looped =
            DirectedGraph::from_edges(2, &[(0, 1, 2.0), (1, 0, 1.0), (0, 0, 1.0)]).unwrap();
        assert!(matches!(
            perturbation_diagnostics(&g, &looped),
            Err(Error::NotASuperset { .. })
        ));
    }
}
