//! Stochastic block model generators for benchmarks.
//!
//! All generators are pure functions of their parameters and a seed:
//! the same call produces the same graph byte for byte. Edges are
//! unweighted (weight 1), self-loops never appear, and ground-truth labels
//! travel with the graph so downstream error rates have something to
//! compare against.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::DirectedGraph;
use crate::{Error, Result};

/// Block count, block probability vector, and the k x k edge probability
/// matrix of a stochastic block model.
#[derive(Debug, Clone, PartialEq)]
pub struct SbmParams {
    pub k: usize,
    pub rho: Vec<f64>,
    pub p: Vec<Vec<f64>>,
}

impl SbmParams {
    pub fn new(k: usize, rho: Vec<f64>, p: Vec<Vec<f64>>) -> Result<Self> {
        if k == 0 {
            return Err(param_err("sbm", "k must be positive"));
        }
        if rho.len() != k {
            return Err(param_err("sbm", format!("rho has length {}, want {k}", rho.len())));
        }
        if rho.iter().any(|&r| !(0.0..=1.0).contains(&r)) {
            return Err(param_err("sbm", "rho entries must lie in [0, 1]"));
        }
        let total: f64 = rho.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(param_err("sbm", format!("rho sums to {total}, want 1")));
        }
        if p.len() != k || p.iter().any(|row| row.len() != k) {
            return Err(param_err("sbm", "p must be k x k"));
        }
        if p.iter().flatten().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(param_err("sbm", "p entries must lie in [0, 1]"));
        }
        Ok(SbmParams { k, rho, p })
    }

    /// Ring connectivity: edges appear with probability `p_edge` from each
    /// block to its successor, wrapping at the end.
    pub fn cycle(k: usize, p_edge: f64, rho: Vec<f64>) -> Result<Self> {
        let mut p = vec![vec![0.0; k]; k];
        for (s, row) in p.iter_mut().enumerate() {
            row[(s + 1) % k] = p_edge;
        }
        Self::new(k, rho, p)
    }

    /// Strict-hierarchy connectivity: edges appear with probability
    /// `p_edge` from every block to every later block.
    pub fn acyclic(k: usize, p_edge: f64, rho: Vec<f64>) -> Result<Self> {
        let mut p = vec![vec![0.0; k]; k];
        for (s, row) in p.iter_mut().enumerate() {
            for (t, v) in row.iter_mut().enumerate() {
                if s < t {
                    *v = p_edge;
                }
            }
        }
        Self::new(k, rho, p)
    }

    /// Unstructured noise: `p = epsilon * Q` with `Q` drawn uniformly from
    /// `[0, 1]` entrywise, diagonal included.
    pub fn random_noise(k: usize, epsilon: f64, rho: Vec<f64>, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(param_err("noise", "epsilon must lie in [0, 1]"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = (0..k)
            .map(|_| (0..k).map(|_| epsilon * rng.random::<f64>()).collect())
            .collect();
        Self::new(k, rho, p)
    }
}

fn param_err(context: &str, message: impl Into<String>) -> Error {
    Error::InvalidParameter { context: context.into(), message: message.into() }
}

/// The unbalanced 8-block probability vector used by the synthetic
/// benchmarks. The raw proportions sum to 1.01, so they are normalized
/// here to make a proper distribution.
pub fn benchmark_rho() -> Vec<f64> {
    let raw = [0.18, 0.2, 0.05, 0.2, 0.14, 0.04, 0.07, 0.13];
    let total: f64 = raw.iter().sum();
    raw.iter().map(|r| r / total).collect()
}

/// Equal block probabilities.
pub fn uniform_rho(k: usize) -> Vec<f64> {
    vec![1.0 / k as f64; k]
}

/// A graph bundled with its ground-truth block labels.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: DirectedGraph,
    pub labels: Vec<usize>,
    pub k: usize,
}

fn draw_labels(
    rng: &mut ChaCha8Rng,
    rho: &[f64],
    n: usize,
    attempts: usize,
) -> Result<Vec<usize>> {
    let k = rho.len();
    for _ in 0..attempts {
        let labels: Vec<usize> = (0..n)
            .map(|_| {
                let x = rng.random::<f64>();
                let mut acc = 0.0;
                for (block, &r) in rho.iter().enumerate() {
                    acc += r;
                    if x < acc {
                        return block;
                    }
                }
                k - 1
            })
            .collect();
        let mut seen = vec![false; k];
        for &l in &labels {
            seen[l] = true;
        }
        if seen.iter().all(|&s| s) {
            return Ok(labels);
        }
    }
    Err(Error::GeneratorExhausted {
        attempts,
        message: format!("could not draw labels covering all {k} blocks for n = {n}"),
    })
}

fn draw_edges(rng: &mut ChaCha8Rng, params: &SbmParams, labels: &[usize]) -> Vec<(usize, usize)> {
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); params.k];
    for (node, &l) in labels.iter().enumerate() {
        blocks[l].push(node);
    }
    let mut edges = Vec::new();
    for s in 0..params.k {
        for t in 0..params.k {
            let prob = params.p[s][t];
            if prob <= 0.0 {
                continue;
            }
            for &u in &blocks[s] {
                for &v in &blocks[t] {
                    if u != v && rng.random::<f64>() < prob {
                        edges.push((u, v));
                    }
                }
            }
        }
    }
    edges
}

/// Draws a graph from the block model. Labels are redrawn until every
/// block is inhabited, so `n >= k` is required.
pub fn sample_sbm(params: &SbmParams, n: usize, seed: u64) -> Result<LabeledGraph> {
    if n < params.k {
        return Err(param_err("sbm", format!("n = {n} below block count {}", params.k)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = draw_labels(&mut rng, &params.rho, n, 10_000)?;
    let edges = draw_edges(&mut rng, params, &labels);
    let graph = DirectedGraph::from_unit_edges(n, &edges)?;
    Ok(LabeledGraph { graph, labels, k: params.k })
}

/// Overlays a noise draw on top of `base`: the result has the union of the
/// edge sets at weight 1 and keeps the base labels as ground truth. The
/// noise law is evaluated on the base partition, so block (s, t) of the
/// noise matrix perturbs block (s, t) of the original graph.
pub fn union_perturb(base: &LabeledGraph, noise: &SbmParams, seed: u64) -> Result<LabeledGraph> {
    if noise.k != base.k {
        return Err(param_err(
            "perturb",
            format!("noise block count {} differs from base {}", noise.k, base.k),
        ));
    }
    let n = base.graph.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let overlay = draw_edges(&mut rng, noise, &base.labels);
    let mut edges: Vec<(usize, usize, f64)> =
        base.graph.edges().map(|(i, j, w)| (i, j, w)).collect();
    for (i, j) in overlay {
        if base.graph.weight(i, j) == 0.0 {
            edges.push((i, j, 1.0));
        }
    }
    Ok(LabeledGraph {
        graph: DirectedGraph::from_edges(n, &edges)?,
        labels: base.labels.clone(),
        k: base.k,
    })
}

/// Two independent draws of the same model on disjoint node sets, plus
/// cross edges that follow the model damped by `alpha`. At `alpha = 0` the
/// halves stay disconnected; at `alpha = 1` the result is one model over
/// both node sets.
pub fn combine_twin_sbm(
    params: &SbmParams,
    n_each: usize,
    alpha: f64,
    seed: u64,
) -> Result<LabeledGraph> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(param_err("twin", "alpha must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seed_a = rng.random::<u64>();
    let seed_b = rng.random::<u64>();
    let a = sample_sbm(params, n_each, seed_a)?;
    let b = sample_sbm(params, n_each, seed_b)?;
    let mut edges: Vec<(usize, usize)> = a.graph.edges().map(|(i, j, _)| (i, j)).collect();
    edges.extend(b.graph.edges().map(|(i, j, _)| (i + n_each, j + n_each)));
    for u in 0..n_each {
        for v in 0..n_each {
            if rng.random::<f64>() < alpha * params.p[a.labels[u]][b.labels[v]] {
                edges.push((u, n_each + v));
            }
        }
    }
    for v in 0..n_each {
        for u in 0..n_each {
            if rng.random::<f64>() < alpha * params.p[b.labels[v]][a.labels[u]] {
                edges.push((n_each + v, u));
            }
        }
    }
    let mut labels = a.labels;
    labels.extend(b.labels);
    Ok(LabeledGraph {
        graph: DirectedGraph::from_unit_edges(2 * n_each, &edges)?,
        labels,
        k: params.k,
    })
}

/// A block-cycle with `extra_edges` appended "downhill" edges: every
/// appended edge runs from a lower-numbered block to a higher one, or out
/// of the top block to anywhere. Appending such edges keeps the nested
/// structure that the detector is supposed to survive.
///
/// The base cycle is redrawn until every node has an out-edge and the
/// graph is strongly connected, since the detector's transition matrix
/// needs live rows; at the sparse edge probabilities this generator is
/// used with, a raw draw misses that often enough to matter. The same
/// seed with a larger `extra_edges` extends the same appended set.
pub fn nested_block_cycle(
    k: usize,
    n: usize,
    p_cycle: f64,
    extra_edges: usize,
    seed: u64,
) -> Result<LabeledGraph> {
    if k < 2 {
        return Err(param_err("nested", "need at least two blocks"));
    }
    let params = SbmParams::cycle(k, p_cycle, uniform_rho(k))?;
    if n < k {
        return Err(param_err("nested", format!("n = {n} below block count {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 1000;
    let mut base = None;
    for _ in 0..ATTEMPTS {
        let labels = draw_labels(&mut rng, &params.rho, n, 10_000)?;
        let edges = draw_edges(&mut rng, &params, &labels);
        let graph = DirectedGraph::from_unit_edges(n, &edges)?;
        if graph.first_dangling_node().is_none() && graph.is_strongly_connected() {
            base = Some(LabeledGraph { graph, labels, k });
            break;
        }
    }
    let base = base.ok_or_else(|| Error::GeneratorExhausted {
        attempts: ATTEMPTS,
        message: format!("no strongly connected block-cycle at p = {p_cycle}, n = {n}, k = {k}"),
    })?;

    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || base.graph.weight(u, v) > 0.0 {
                continue;
            }
            if base.labels[u] < base.labels[v] || base.labels[u] == k - 1 {
                candidates.push((u, v));
            }
        }
    }
    if extra_edges > candidates.len() {
        return Err(param_err(
            "nested",
            format!("asked for {extra_edges} appended edges, only {} legal slots", candidates.len()),
        ));
    }
    candidates.shuffle(&mut rng);
    let mut edges: Vec<(usize, usize)> = base.graph.edges().map(|(i, j, _)| (i, j)).collect();
    edges.extend(candidates.into_iter().take(extra_edges));
    Ok(LabeledGraph {
        graph: DirectedGraph::from_unit_edges(n, &edges)?,
        labels: base.labels,
        k,
    })
}
