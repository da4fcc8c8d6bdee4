//! Reference clusterings that ignore cyclic phase structure.
//!
//! Both baselines work on dense matrices and exist to show what the
//! spectral pipeline buys: they treat the graph through symmetric
//! similarity or low-rank structure and are blind to the rotation that
//! block-cycles imprint on complex eigenvectors.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, SVD, UPLO};

use crate::graph::DirectedGraph;
use crate::kmeans::{kmeans, KmeansOptions};
use crate::{Error, Result};

/// Labels from a baseline run.
#[derive(Debug, Clone)]
pub struct BaselineResult {
    pub labels: Vec<usize>,
    pub k: usize,
    /// SVD only: the requested embedding dimension exceeded the numerical
    /// rank, so fewer singular triplets were used.
    pub truncated: bool,
}

fn dense_weights(g: &DirectedGraph, cap: usize) -> Result<Array2<f64>> {
    let n = g.node_count();
    if n > cap {
        return Err(Error::DenseCapExceeded { n, cap });
    }
    let mut w = Array2::<f64>::zeros((n, n));
    for (i, j, weight) in g.edges() {
        w[(i, j)] = weight;
    }
    Ok(w)
}

/// Bibliometric similarity `S = (1 - alpha) W^T W + alpha W W^T`:
/// co-citation blended with co-reference.
fn bib_similarity(w: &Array2<f64>, alpha: f64) -> Array2<f64> {
    let wt = w.t();
    let mut s = wt.dot(w);
    s *= 1.0 - alpha;
    s.scaled_add(alpha, &w.dot(&wt));
    s
}

/// Normalized Laplacian of the similarity graph. Rows whose similarity
/// degree vanishes stay zero.
fn bib_laplacian(s: &Array2<f64>) -> Array2<f64> {
    let n = s.nrows();
    let degree: Array1<f64> = s.rows().into_iter().map(|r| r.sum()).collect();
    let mut l = Array2::<f64>::zeros((n, n));
    for u in 0..n {
        if degree[u] == 0.0 {
            continue;
        }
        l[(u, u)] = 1.0 - s[(u, u)] / degree[u];
        for v in 0..n {
            if v != u && s[(u, v)] != 0.0 && degree[v] != 0.0 {
                l[(u, v)] = -s[(u, v)] / (degree[u] * degree[v]).sqrt();
            }
        }
    }
    // eigh wants exact symmetry; rounding in the products can break it
    let lt = l.t().to_owned();
    (&l + &lt) * 0.5
}

/// Spectral clustering on bibliometric similarity: build `S`, take its
/// normalized Laplacian, and cluster the rows of the `k` lowest
/// eigenvectors.
pub fn bib_cluster(
    g: &DirectedGraph,
    k: usize,
    alpha: f64,
    opts: &KmeansOptions,
    cap: usize,
) -> Result<BaselineResult> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter {
            context: "bib".into(),
            message: "alpha must lie in [0, 1]".into(),
        });
    }
    let n = g.node_count();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let w = dense_weights(g, cap)?;
    let l = bib_laplacian(&bib_similarity(&w, alpha));
    let (_, vectors) = l.eigh(UPLO::Lower).map_err(Error::from)?;
    let points: Vec<Vec<f64>> = (0..n)
        .map(|u| (0..k).map(|c| vectors[(u, c)]).collect())
        .collect();
    let fit = kmeans(&points, k, opts)?;
    Ok(BaselineResult { labels: fit.labels, k, truncated: false })
}

/// Clustering in a truncated SVD embedding: each node is represented by
/// its scaled row of `U` next to its scaled row of `V`, so outgoing and
/// incoming profiles both contribute. Asking for more dimensions than the
/// numerical rank is not an error; the embedding just uses what exists
/// and the result says so.
pub fn svd_cluster(
    g: &DirectedGraph,
    d: usize,
    k: usize,
    opts: &KmeansOptions,
    cap: usize,
) -> Result<BaselineResult> {
    let n = g.node_count();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if d == 0 {
        return Err(Error::InvalidParameter {
            context: "svd".into(),
            message: "embedding dimension must be positive".into(),
        });
    }
    let w = dense_weights(g, cap)?;
    let (u, s, vt) = w.svd(true, true).map_err(Error::from)?;
    let u = u.expect("requested U");
    let vt = vt.expect("requested V^T");
    let rank_tol = s.get(0).copied().unwrap_or(0.0) * n as f64 * f64::EPSILON;
    let rank = s.iter().filter(|&&x| x > rank_tol).count();
    let available = d.min(rank);
    if available == 0 {
        return Err(Error::InvalidParameter {
            context: "svd".into(),
            message: "graph has no edges to embed".into(),
        });
    }
    let points: Vec<Vec<f64>> = (0..n)
        .map(|node| {
            let mut row = Vec::with_capacity(2 * available);
            for i in 0..available {
                row.push(u[(node, i)] * s[i].sqrt());
            }
            for i in 0..available {
                row.push(vt[(i, node)] * s[i].sqrt());
            }
            row
        })
        .collect();
    let fit = kmeans(&points, k, opts)?;
    Ok(BaselineResult { labels: fit.labels, k, truncated: available < d })
}
