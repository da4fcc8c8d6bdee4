//! Detection pipelines and ordering utilities.
//!
//! [`bcs`] finds block-cyclic structure: it clusters rows of the leading
//! eigenvectors of the row-stochastic transition matrix. [`bas`] is the
//! acyclic variant built on the dangling-completed matrix, so it accepts
//! graphs with sink nodes. Both return a [`BlockAssignment`] whose
//! provenance records seeds, solver behaviour, and any warnings, which is
//! what makes repeated runs comparable.
//!
//! The remaining functions order and score an assignment: [`rank_blocks`]
//! turns raw cluster ids into ranks by net flow, [`acyclicity_score`]
//! measures how well ranks explain edge directions, [`refine_assignment`]
//! greedily nudges single nodes, and [`trophic_levels`] computes continuous
//! per-node heights for food-web style graphs.

use std::collections::BinaryHeap;

use ndarray::{Array1, Array2};
use ndarray_linalg::LeastSquaresSvd;
use serde::{Deserialize, Serialize};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embedding::{build_embedding, cluster_rows, FilterMode};
use crate::graph::{DirectedGraph, TransitionOperator};
use crate::kmeans::KmeansOptions;
use crate::spectral::{top_modulus_eigenpairs, ArnoldiOptions};
use crate::{Error, Result};

/// Knobs shared by [`bcs`] and [`bas`].
#[derive(Debug, Clone)]
pub struct DetectOptions {
    /// Seeds both the eigensolver start vector and the k-means restarts.
    pub seed: u64,
    /// Relative residual target for the eigensolver.
    pub tol: f64,
    /// Which eigenvector columns feed the clustering step.
    pub filter: FilterMode,
    /// K-means restarts; the best inertia wins.
    pub kmeans_restarts: usize,
    /// Krylov subspace dimension override. `None` picks a default from `k`.
    pub subspace: Option<usize>,
    /// Restart budget for the eigensolver.
    pub max_restarts: usize,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            seed: 0,
            tol: 1e-8,
            filter: FilterMode::PositiveImaginary,
            kmeans_restarts: 10,
            subspace: None,
            max_restarts: 400,
        }
    }
}

/// Everything needed to reproduce or audit a detection run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub algorithm: String,
    pub k: usize,
    pub seed: u64,
    /// `None` for algorithms that never touch an eigenvector filter.
    pub filter: Option<FilterMode>,
    /// True when the filter kept nothing and clustering fell back to all
    /// `k` eigenvector columns.
    pub embedding_fallback: bool,
    pub solver_iterations: usize,
    pub solver_converged: bool,
    pub refined: bool,
    pub warnings: Vec<String>,
    /// Block-graph edges dropped to break cycles during ranking, in the
    /// labeling the ranker was given.
    pub deleted_block_edges: Vec<(usize, usize)>,
}

impl Provenance {
    fn new(algorithm: &str, k: usize, seed: u64) -> Self {
        Provenance {
            algorithm: algorithm.into(),
            k,
            seed,
            filter: None,
            embedding_fallback: false,
            solver_iterations: 0,
            solver_converged: true,
            refined: false,
            warnings: Vec::new(),
            deleted_block_edges: Vec::new(),
        }
    }
}

/// A node-to-block map plus the provenance of the run that produced it.
/// After [`rank_blocks`], labels are ranks: block 0 feeds block 1 and so
/// on, and `ranked` is set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockAssignment {
    pub labels: Vec<usize>,
    pub k: usize,
    pub ranked: bool,
    pub provenance: Provenance,
}

fn detect(
    g: &DirectedGraph,
    k: usize,
    opts: &DetectOptions,
    kind: &str,
) -> Result<BlockAssignment> {
    let n = g.node_count();
    if k < 2 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let mut prov = Provenance::new(kind, k, opts.seed);
    prov.filter = Some(opts.filter);

    let op = if kind == "bcs" {
        if let Some(node) = g.first_dangling_node() {
            return Err(Error::ZeroOutDegree { node });
        }
        if !g.is_strongly_connected() {
            prov.warnings.push(
                "graph is not strongly connected; leading eigenvalues may repeat and blur the blocks"
                    .into(),
            );
        }
        TransitionOperator::row_stochastic(g)
    } else {
        TransitionOperator::dangling_uniform(g)
    };

    let spectrum = top_modulus_eigenpairs(
        &op,
        k,
        &ArnoldiOptions {
            tol: opts.tol,
            max_restarts: opts.max_restarts,
            seed: opts.seed,
            subspace: opts.subspace,
        },
    )?;
    prov.solver_iterations = spectrum.iterations;
    prov.solver_converged = spectrum.converged;
    if !spectrum.converged {
        prov.warnings
            .push("eigensolver stopped before reaching tolerance; using best available pairs".into());
    }
    if spectrum.boundary_tie {
        prov.warnings
            .push("eigenvalue moduli tie at the cutoff; the k-th pair is not unique".into());
    }

    let embedding = build_embedding(&spectrum, k, opts.filter)?;
    if embedding.used_fallback {
        prov.embedding_fallback = true;
        prov.warnings.push(
            "no eigenvalue with positive imaginary part in the top k; clustering on all k columns"
                .into(),
        );
    }
    let fit = cluster_rows(
        &embedding,
        k,
        &KmeansOptions {
            restarts: opts.kmeans_restarts,
            max_iter: 300,
            seed: opts.seed,
        },
    )?;
    Ok(BlockAssignment { labels: fit.labels, k, ranked: false, provenance: prov })
}

/// Detects `k` block-cyclic groups. Every node must have at least one
/// out-edge; graphs with sinks belong to [`bas`].
pub fn bcs(g: &DirectedGraph, k: usize, opts: &DetectOptions) -> Result<BlockAssignment> {
    detect(g, k, opts, "bcs")
}

/// Detects `k` block-acyclic groups using the dangling-completed
/// transition matrix, so sink nodes are fine.
pub fn bas(g: &DirectedGraph, k: usize, opts: &DetectOptions) -> Result<BlockAssignment> {
    detect(g, k, opts, "bas")
}

fn validate_labels(labels: &[usize], n: usize, k: usize) -> Result<()> {
    if labels.len() != n {
        return Err(Error::LabelLengthMismatch { got: labels.len(), expected: n });
    }
    for (node, &label) in labels.iter().enumerate() {
        if label >= k {
            return Err(Error::LabelOutOfRange { node, label, k });
        }
    }
    Ok(())
}

/// Net block-to-block weights. `margin[a][b] > 0` means more weight flows
/// a -> b than b -> a.
fn block_margins(g: &DirectedGraph, labels: &[usize], k: usize) -> Vec<Vec<f64>> {
    let mut flow = vec![vec![0.0; k]; k];
    for (u, v, w) in g.edges() {
        flow[labels[u]][labels[v]] += w;
    }
    let mut margin = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in 0..k {
            margin[a][b] = flow[a][b] - flow[b][a];
        }
    }
    margin
}

/// Kahn's algorithm, always popping the smallest ready block so the order
/// is the lexicographically least one. Returns `None` when a cycle blocks
/// completion.
fn min_label_topo(k: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; k];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(a, b) in edges {
        indeg[b] += 1;
        out[a].push(b);
    }
    let mut heap: BinaryHeap<std::cmp::Reverse<usize>> = (0..k)
        .filter(|&b| indeg[b] == 0)
        .map(std::cmp::Reverse)
        .collect();
    let mut order = Vec::with_capacity(k);
    while let Some(std::cmp::Reverse(a)) = heap.pop() {
        order.push(a);
        for &b in &out[a] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                heap.push(std::cmp::Reverse(b));
            }
        }
    }
    (order.len() == k).then_some(order)
}

/// Orders the blocks of an assignment by net flow and relabels nodes so
/// label equals rank. The block graph keeps an edge a -> b whenever the
/// net weight from a to b is positive; if that graph has cycles, the edge
/// with the smallest absolute margin is deleted (recorded in the
/// provenance) until a topological order exists. Among valid orders the
/// lexicographically smallest is chosen, which keeps reruns stable.
pub fn rank_blocks(g: &DirectedGraph, assignment: &BlockAssignment) -> Result<BlockAssignment> {
    let k = assignment.k;
    validate_labels(&assignment.labels, g.node_count(), k)?;
    let margin = block_margins(g, &assignment.labels, k);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if margin[a][b] > 0.0 {
                edges.push((a, b));
            }
        }
    }
    let mut deleted = Vec::new();
    let order = loop {
        if let Some(order) = min_label_topo(k, &edges) {
            break order;
        }
        let (pos, _) = edges
            .iter()
            .enumerate()
            .min_by(|(_, &(a1, b1)), (_, &(a2, b2))| {
                margin[a1][b1]
                    .abs()
                    .total_cmp(&margin[a2][b2].abs())
                    .then((a1, b1).cmp(&(a2, b2)))
            })
            .expect("a cyclic block graph has edges");
        deleted.push(edges.remove(pos));
    };
    let mut rank_of = vec![0usize; k];
    for (rank, &block) in order.iter().enumerate() {
        rank_of[block] = rank;
    }
    let mut out = assignment.clone();
    out.labels = assignment.labels.iter().map(|&l| rank_of[l]).collect();
    out.ranked = true;
    out.provenance.deleted_block_edges.extend(deleted);
    Ok(out)
}

/// Fraction of edges that point from a lower rank to a higher one.
/// Within-block edges and self-loops count against the score; an edgeless
/// graph scores 1.
pub fn acyclicity_score(g: &DirectedGraph, labels: &[usize]) -> Result<f64> {
    validate_labels(labels, g.node_count(), labels.iter().max().map_or(1, |&m| m + 1))?;
    let (mut forward, mut total) = (0usize, 0usize);
    for (u, v, _) in g.edges() {
        total += 1;
        if labels[u] < labels[v] {
            forward += 1;
        }
    }
    if total == 0 {
        return Ok(1.0);
    }
    Ok(forward as f64 / total as f64)
}

/// Like [`acyclicity_score`] but each edge contributes its weight.
pub fn weighted_acyclicity_score(g: &DirectedGraph, labels: &[usize]) -> Result<f64> {
    validate_labels(labels, g.node_count(), labels.iter().max().map_or(1, |&m| m + 1))?;
    let (mut forward, mut total) = (0.0f64, 0.0f64);
    for (u, v, w) in g.edges() {
        total += w;
        if labels[u] < labels[v] {
            forward += w;
        }
    }
    if total == 0.0 {
        return Ok(1.0);
    }
    Ok(forward / total)
}

/// How many forward edges a single relabeling of `node` gains. Counts
/// only edges incident to the node since nothing else changes.
fn forward_delta(
    node: usize,
    to: usize,
    labels: &[usize],
    out: &[(usize, f64)],
    rev: &[(usize, f64)],
) -> i64 {
    let from = labels[node];
    let mut delta = 0i64;
    for &(v, _) in out {
        if v == node {
            continue;
        }
        delta += (to < labels[v]) as i64 - (from < labels[v]) as i64;
    }
    for &(v, _) in rev {
        if v == node {
            continue;
        }
        delta += (labels[v] < to) as i64 - (labels[v] < from) as i64;
    }
    delta
}

/// One greedy pass over the nodes in seeded random order. Each node may
/// shift its rank by one step up or down; the move is taken only when it
/// strictly raises the acyclicity score, and an exact tie between the two
/// directions resolves upward. Later nodes see earlier moves.
pub fn refine_assignment(
    g: &DirectedGraph,
    assignment: &BlockAssignment,
    seed: u64,
) -> Result<BlockAssignment> {
    let n = g.node_count();
    let k = assignment.k;
    validate_labels(&assignment.labels, n, k)?;
    let rev = g.reverse_adjacency();
    let mut labels = assignment.labels.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    for &node in &order {
        let cur = labels[node];
        let out: Vec<(usize, f64)> = g.out_edges(node).collect();
        let up = (cur + 1 < k)
            .then(|| forward_delta(node, cur + 1, &labels, &out, &rev[node]))
            .unwrap_or(0);
        let down = (cur > 0)
            .then(|| forward_delta(node, cur - 1, &labels, &out, &rev[node]))
            .unwrap_or(0);
        if up > 0 && up >= down {
            labels[node] = cur + 1;
        } else if down > 0 {
            labels[node] = cur - 1;
        }
    }
    let mut out = assignment.clone();
    out.labels = labels;
    out.provenance.refined = true;
    Ok(out)
}

/// Which equation [`trophic_levels`] solves and how.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrophicMode {
    /// Fixed-point iteration of `T = 1 + D T` with `D` the diet-fraction
    /// matrix; nodes without prey sit exactly at level 1.
    DietFraction,
    /// Minimum-norm least-squares solve of `(I - D) T = 1`. Defined even
    /// when nothing is basal, in which case levels come out centered.
    TransitionPseudoinverse,
}

/// Per-node heights for food-web style graphs, where an edge u -> v means
/// v consumes u.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrophicLevels {
    pub levels: Vec<f64>,
    pub mode: TrophicMode,
    /// Set when the fixed-point iteration failed to settle and the result
    /// came from the least-squares solve instead.
    pub used_fallback: bool,
}

/// Diet-fraction matrix rows: `diet[i]` lists `(j, W_ji / in_i)`, the
/// share of i's intake coming from j. Empty for basal nodes.
fn diet_rows(g: &DirectedGraph) -> Vec<Vec<(usize, f64)>> {
    let rev = g.reverse_adjacency();
    rev.into_iter()
        .enumerate()
        .map(|(i, preds)| {
            let total = g.in_degree(i);
            if total == 0.0 {
                Vec::new()
            } else {
                preds.into_iter().map(|(j, w)| (j, w / total)).collect()
            }
        })
        .collect()
}

fn trophic_least_squares(diet: &[Vec<(usize, f64)>]) -> Result<Vec<f64>> {
    let n = diet.len();
    let mut a = Array2::<f64>::eye(n);
    for (i, row) in diet.iter().enumerate() {
        for &(j, d) in row {
            a[(i, j)] -= d;
        }
    }
    let b = Array1::<f64>::ones(n);
    let sol = a.least_squares(&b).map_err(Error::from)?;
    Ok(sol.solution.to_vec())
}

/// Continuous trophic levels. The diet-fraction mode iterates
/// `T = 1 + D T` from the all-ones vector; if the graph has cycles that
/// starve the iteration of a fixed point it falls back to the
/// least-squares solve and flags that. The pseudoinverse mode goes to the
/// solver directly.
pub fn trophic_levels(g: &DirectedGraph, mode: TrophicMode) -> Result<TrophicLevels> {
    let n = g.node_count();
    let diet = diet_rows(g);
    match mode {
        TrophicMode::TransitionPseudoinverse => Ok(TrophicLevels {
            levels: trophic_least_squares(&diet)?,
            mode,
            used_fallback: false,
        }),
        TrophicMode::DietFraction => {
            let mut t = vec![1.0f64; n];
            let mut next = vec![0.0f64; n];
            let mut settled = false;
            for _ in 0..n + 50 {
                for (i, row) in diet.iter().enumerate() {
                    next[i] = 1.0 + row.iter().map(|&(j, d)| d * t[j]).sum::<f64>();
                }
                let step = t
                    .iter()
                    .zip(&next)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                std::mem::swap(&mut t, &mut next);
                if step <= 1e-10 {
                    settled = true;
                    break;
                }
            }
            if settled {
                Ok(TrophicLevels { levels: t, mode, used_fallback: false })
            } else {
                Ok(TrophicLevels {
                    levels: trophic_least_squares(&diet)?,
                    mode,
                    used_fallback: true,
                })
            }
        }
    }
}

/// Fraction of node pairs whose rank order and score order disagree, over
/// all unordered pairs. Ties on either side do not count as inversions.
pub fn inversion_error(ranks: &[usize], scores: &[f64]) -> Result<f64> {
    if ranks.len() != scores.len() {
        return Err(Error::LabelLengthMismatch { got: scores.len(), expected: ranks.len() });
    }
    let n = ranks.len();
    if n < 2 {
        return Ok(0.0);
    }
    let mut inverted = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            let dr = ranks[i] as i64 - ranks[j] as i64;
            let ds = scores[i] - scores[j];
            if (dr > 0 && ds < 0.0) || (dr < 0 && ds > 0.0) {
                inverted += 1;
            }
        }
    }
    Ok(inverted as f64 / (n * (n - 1) / 2) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::block_membership_error;
    use approx::assert_abs_diff_eq;

    /// Three blocks of two nodes each, wired block 0 -> 1 -> 2 -> 0 with
    /// every cross pair present.
    fn three_block_cycle() -> (DirectedGraph, Vec<usize>) {
        let blocks = [[0, 1], [2, 3], [4, 5]];
        let mut edges = Vec::new();
        for b in 0..3 {
            for &u in &blocks[b] {
                for &v in &blocks[(b + 1) % 3] {
                    edges.push((u, v, 1.0));
                }
            }
        }
        let labels = vec![0, 0, 1, 1, 2, 2];
        (DirectedGraph::from_edges(6, &edges).unwrap(), labels)
    }

    #[test]
    fn bcs_recovers_a_clean_cycle() {
        let (g, truth) = three_block_cycle();
        let got = bcs(&g, 3, &DetectOptions::default()).unwrap();
        assert_abs_diff_eq!(block_membership_error(&truth, &got.labels, 3).unwrap(), 0.0);
        assert!(!got.provenance.embedding_fallback);
        assert!(got.provenance.solver_converged);
        assert_eq!(got.provenance.algorithm, "bcs");
    }

    #[test]
    fn bcs_rejects_sinks_and_bad_k() {
        let g = DirectedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert!(matches!(
            bcs(&g, 2, &DetectOptions::default()),
            Err(Error::ZeroOutDegree { node: 2 })
        ));
        let (cycle, _) = three_block_cycle();
        assert!(matches!(
            bcs(&cycle, 1, &DetectOptions::default()),
            Err(Error::KOutOfRange { .. })
        ));
        assert!(matches!(
            bcs(&cycle, 7, &DetectOptions::default()),
            Err(Error::KOutOfRange { .. })
        ));
    }

    #[test]
    fn bcs_warns_when_not_strongly_connected() {
        // two disjoint 2-cycles
        let g = DirectedGraph::from_edges(
            4,
            &[(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, 1.0)],
        )
        .unwrap();
        let got = bcs(&g, 2, &DetectOptions::default()).unwrap();
        assert!(got
            .provenance
            .warnings
            .iter()
            .any(|w| w.contains("strongly connected")));
    }

    #[test]
    fn two_block_cycle_uses_the_fallback_embedding() {
        // spectrum of the 2-block cycle is real, so the imaginary filter
        // keeps nothing and the pipeline must fall back
        let blocks = [[0usize, 1], [2, 3]];
        let mut edges = Vec::new();
        for b in 0..2 {
            for &u in &blocks[b] {
                for &v in &blocks[(b + 1) % 2] {
                    edges.push((u, v, 1.0));
                }
            }
        }
        let g = DirectedGraph::from_edges(4, &edges).unwrap();
        let got = bcs(&g, 2, &DetectOptions::default()).unwrap();
        assert!(got.provenance.embedding_fallback);
        let truth = vec![0, 0, 1, 1];
        assert_abs_diff_eq!(block_membership_error(&truth, &got.labels, 2).unwrap(), 0.0);
    }

    /// Complete three-level hierarchy: block 0 feeds 1 and 2, block 1
    /// feeds 2. The last block has no out-edges at all.
    fn three_level_dag() -> (DirectedGraph, Vec<usize>) {
        let blocks = [[0, 1], [2, 3], [4, 5]];
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in a + 1..3 {
                for &u in &blocks[a] {
                    for &v in &blocks[b] {
                        edges.push((u, v, 1.0));
                    }
                }
            }
        }
        (DirectedGraph::from_edges(6, &edges).unwrap(), vec![0, 0, 1, 1, 2, 2])
    }

    #[test]
    fn bas_recovers_a_clean_hierarchy() {
        let (g, truth) = three_level_dag();
        let got = bas(&g, 3, &DetectOptions::default()).unwrap();
        assert_abs_diff_eq!(block_membership_error(&truth, &got.labels, 3).unwrap(), 0.0);
    }

    #[test]
    fn rank_orders_blocks_by_net_flow() {
        // labels deliberately scrambled: block 1 is the source layer,
        // then 2, then 0
        let g = DirectedGraph::from_edges(
            6,
            &[
                (0, 2, 3.0),
                (1, 2, 1.0),
                (0, 4, 2.0),
                (2, 4, 2.0),
                (3, 5, 1.0),
            ],
        )
        .unwrap();
        let labels = vec![1, 1, 2, 2, 0, 0];
        let assignment = BlockAssignment {
            labels,
            k: 3,
            ranked: false,
            provenance: Provenance::new("test", 3, 0),
        };
        let ranked = rank_blocks(&g, &assignment).unwrap();
        assert!(ranked.ranked);
        assert_eq!(ranked.labels, vec![0, 0, 1, 1, 2, 2]);
        assert!(ranked.provenance.deleted_block_edges.is_empty());
        assert_abs_diff_eq!(acyclicity_score(&g, &ranked.labels).unwrap(), 1.0);
    }

    #[test]
    fn rank_breaks_ties_toward_the_smallest_order() {
        // block 0 feeds 1 and 2; 1 and 2 are incomparable, so both
        // (0,1,2) and (0,2,1) are valid and the smaller one must win
        let g = DirectedGraph::from_edges(3, &[(0, 1, 1.0), (0, 2, 1.0)]).unwrap();
        let assignment = BlockAssignment {
            labels: vec![0, 1, 2],
            k: 3,
            ranked: false,
            provenance: Provenance::new("test", 3, 0),
        };
        let ranked = rank_blocks(&g, &assignment).unwrap();
        assert_eq!(ranked.labels, vec![0, 1, 2]);
    }

    #[test]
    fn rank_deletes_the_weakest_edge_of_a_cycle() {
        // block cycle 0 -> 1 -> 2 -> 0 with margins 5, 3, 1
        let g = DirectedGraph::from_edges(
            3,
            &[(0, 1, 5.0), (1, 2, 3.0), (2, 0, 1.0)],
        )
        .unwrap();
        let assignment = BlockAssignment {
            labels: vec![0, 1, 2],
            k: 3,
            ranked: false,
            provenance: Provenance::new("test", 3, 0),
        };
        let ranked = rank_blocks(&g, &assignment).unwrap();
        assert_eq!(ranked.provenance.deleted_block_edges, vec![(2, 0)]);
        assert_eq!(ranked.labels, vec![0, 1, 2]);
    }

    #[test]
    fn acyclicity_counts_forward_fraction() {
        let g = DirectedGraph::from_edges(
            3,
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 4.0)],
        )
        .unwrap();
        let labels = [0, 1, 2];
        assert_abs_diff_eq!(acyclicity_score(&g, &labels).unwrap(), 2.0 / 3.0);
        assert_abs_diff_eq!(weighted_acyclicity_score(&g, &labels).unwrap(), 2.0 / 6.0);
        let empty = DirectedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        assert_abs_diff_eq!(acyclicity_score(&empty, &[1, 0]).unwrap(), 0.0);
    }

    #[test]
    fn refine_fixes_a_planted_mislabel() {
        let (g, truth) = three_level_dag();
        let mut labels = truth.clone();
        labels[0] = 1; // node 0 belongs at rank 0
        let before = acyclicity_score(&g, &labels).unwrap();
        let assignment = BlockAssignment {
            labels,
            k: 3,
            ranked: true,
            provenance: Provenance::new("test", 3, 0),
        };
        for seed in 0..5 {
            let refined = refine_assignment(&g, &assignment, seed).unwrap();
            let after = acyclicity_score(&g, &refined.labels).unwrap();
            assert!(after >= before, "seed {seed} lowered the score");
            assert_eq!(refined.labels, truth, "seed {seed}");
            assert!(refined.provenance.refined);
        }
    }

    #[test]
    fn refine_leaves_an_optimum_alone() {
        let (g, truth) = three_level_dag();
        let assignment = BlockAssignment {
            labels: truth.clone(),
            k: 3,
            ranked: true,
            provenance: Provenance::new("test", 3, 0),
        };
        let refined = refine_assignment(&g, &assignment, 42).unwrap();
        assert_eq!(refined.labels, truth);
    }

    #[test]
    fn trophic_chain_levels() {
        let g = DirectedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        for mode in [TrophicMode::DietFraction, TrophicMode::TransitionPseudoinverse] {
            let t = trophic_levels(&g, mode).unwrap();
            assert!(!t.used_fallback);
            for (got, want) in t.levels.iter().zip([1.0, 2.0, 3.0]) {
                assert_abs_diff_eq!(*got, want, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn trophic_diamond_averages_diets() {
        let g = DirectedGraph::from_edges(
            4,
            &[(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 3.0)],
        )
        .unwrap();
        let t = trophic_levels(&g, TrophicMode::DietFraction).unwrap();
        for (got, want) in t.levels.iter().zip([1.0, 2.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-8);
        }
    }

    #[test]
    fn trophic_cycle_falls_back() {
        let g = DirectedGraph::from_edges(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        let t = trophic_levels(&g, TrophicMode::DietFraction).unwrap();
        assert!(t.used_fallback);
        // with no basal node the minimum-norm answer puts both nodes at
        // the same height
        assert_abs_diff_eq!(t.levels[0], t.levels[1], epsilon = 1e-8);
        let p = trophic_levels(&g, TrophicMode::TransitionPseudoinverse).unwrap();
        assert!(!p.used_fallback);
        assert_abs_diff_eq!(p.levels[0], p.levels[1], epsilon = 1e-8);
    }

    #[test]
    fn inversion_error_counts_disordered_pairs() {
        assert_abs_diff_eq!(inversion_error(&[0, 1, 2], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(inversion_error(&[0, 1, 2], &[3.0, 2.0, 1.0]).unwrap(), 1.0);
        assert_abs_diff_eq!(
            inversion_error(&[0, 1, 2], &[1.0, 3.0, 2.0]).unwrap(),
            1.0 / 3.0
        );
        // ties on the score side are not inversions
        assert_abs_diff_eq!(inversion_error(&[0, 1], &[2.0, 2.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(inversion_error(&[7], &[0.5]).unwrap(), 0.0);
        assert!(inversion_error(&[0, 1], &[1.0]).is_err());
    }
}
