//! Sparse directed graphs and their random-walk transition operators.
//!
//! Graphs are immutable once built. The builder merges duplicate edges by
//! summing weights and stores the result in compressed sparse row form with
//! sorted column indices, so weight lookup is a binary search and operator
//! application is a row sweep. Node ids are dense `0..n`; anything with
//! string ids gets interned before it reaches this layer.

use num_complex::Complex64;

use crate::{Error, Result};

/// Weighted directed graph, CSR over out-edges.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    weights: Vec<f64>,
    out_degree: Vec<f64>,
    in_degree: Vec<f64>,
}

impl DirectedGraph {
    /// Builds a graph on `n` nodes from `(src, dst, weight)` triples.
    ///
    /// Duplicate edges merge by summing their weights. Self-loops are
    /// accepted. Weights must be finite and strictly positive; endpoints
    /// must lie in `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        for &(src, dst, w) in edges {
            if src >= n || dst >= n {
                return Err(Error::NodeOutOfRange { src, dst, n });
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::NonPositiveWeight { src, dst, weight: w });
            }
        }
        let mut merged: std::collections::BTreeMap<(usize, usize), f64> =
            std::collections::BTreeMap::new();
        for &(src, dst, w) in edges {
            *merged.entry((src, dst)).or_insert(0.0) += w;
        }
        let mut row_ptr = vec![0usize; n + 1];
        for &(src, _) in merged.keys() {
            row_ptr[src + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut col_idx = Vec::with_capacity(merged.len());
        let mut weights = Vec::with_capacity(merged.len());
        let mut out_degree = vec![0.0; n];
        let mut in_degree = vec![0.0; n];
        for (&(src, dst), &w) in &merged {
            col_idx.push(dst);
            weights.push(w);
            out_degree[src] += w;
            in_degree[dst] += w;
        }
        Ok(DirectedGraph { n, row_ptr, col_idx, weights, out_degree, in_degree })
    }

    /// Builds an unweighted graph (every edge weight 1).
    pub fn from_unit_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let triples: Vec<_> = edges.iter().map(|&(s, d)| (s, d, 1.0)).collect();
        Self::from_edges(n, &triples)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Number of distinct directed edges after merging.
    pub fn edge_count(&self) -> usize {
        self.col_idx.len()
    }

    /// Weighted out-degree of `i`.
    pub fn out_degree(&self, i: usize) -> f64 {
        self.out_degree[i]
    }

    /// Weighted in-degree of `i`.
    pub fn in_degree(&self, i: usize) -> f64 {
        self.in_degree[i]
    }

    /// Weight of edge `(src, dst)`, or 0 when absent.
    pub fn weight(&self, src: usize, dst: usize) -> f64 {
        let lo = self.row_ptr[src];
        let hi = self.row_ptr[src + 1];
        match self.col_idx[lo..hi].binary_search(&dst) {
            Ok(pos) => self.weights[lo + pos],
            Err(_) => 0.0,
        }
    }

    /// Out-edges of `i` as `(dst, weight)`, sorted by destination.
    pub fn out_edges(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        self.col_idx[lo..hi].iter().copied().zip(self.weights[lo..hi].iter().copied())
    }

    /// All edges as `(src, dst, weight)`, sorted by `(src, dst)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.out_edges(i).map(move |(j, w)| (i, j, w)))
    }

    /// First node with zero out-degree, if any.
    pub fn first_dangling_node(&self) -> Option<usize> {
        self.out_degree.iter().position(|&d| d == 0.0)
    }

    /// In-edges per node, `(src, weight)` lists. Built on demand; callers
    /// that sweep predecessors repeatedly should hold on to it.
    pub fn reverse_adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut rev = vec![Vec::new(); self.n];
        for (src, dst, w) in self.edges() {
            rev[dst].push((src, w));
        }
        rev
    }

    /// Keeps, for each ordered pair, the positive part of `W_ij - W_ji`.
    ///
    /// Reciprocal flows cancel: a pair with equal weights in both
    /// directions disappears entirely, and self-loops always cancel against
    /// themselves. Applying the operation twice gives the same graph as
    /// applying it once.
    pub fn asymmetric_part(&self) -> DirectedGraph {
        let mut edges = Vec::new();
        for (i, j, w) in self.edges() {
            let net = w - self.weight(j, i);
            if net > 0.0 {
                edges.push((i, j, net));
            }
        }
        DirectedGraph::from_edges(self.n, &edges).expect("net-positive edges are valid")
    }

    /// True when every node reaches every other node along directed paths.
    ///
    /// Checked by a forward and a backward traversal from node 0; both
    /// covering all nodes is equivalent to strong connectivity. A single
    /// node counts as strongly connected.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n == 1 {
            return true;
        }
        let forward = {
            let mut seen = vec![false; self.n];
            let mut stack = vec![0usize];
            seen[0] = true;
            let mut count = 1;
            while let Some(i) = stack.pop() {
                for (j, _) in self.out_edges(i) {
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        stack.push(j);
                    }
                }
            }
            count
        };
        if forward != self.n {
            return false;
        }
        let rev = self.reverse_adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &(j, _) in &rev[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == self.n
    }
}

/// How rows with zero out-degree are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionKind {
    /// Row i is `W_ij / d_i` when `d_i > 0`, otherwise all zero.
    RowStochastic,
    /// Like `RowStochastic`, but zero-out-degree rows become uniform `1/n`,
    /// so every row sums to one and the walk never stalls.
    DanglingUniform,
}

/// Matrix-free transition operator of a graph.
///
/// Never materialized unless a dense routine asks for it; `apply` costs one
/// sweep over the edges.
#[derive(Debug, Clone)]
pub struct TransitionOperator<'g> {
    graph: &'g DirectedGraph,
    kind: TransitionKind,
    inv_out: Vec<f64>,
}

impl<'g> TransitionOperator<'g> {
    /// Row-stochastic operator; rows of dangling nodes are zero.
    pub fn row_stochastic(graph: &'g DirectedGraph) -> Self {
        Self::new(graph, TransitionKind::RowStochastic)
    }

    /// Operator with dangling rows replaced by the uniform distribution.
    pub fn dangling_uniform(graph: &'g DirectedGraph) -> Self {
        Self::new(graph, TransitionKind::DanglingUniform)
    }

    fn new(graph: &'g DirectedGraph, kind: TransitionKind) -> Self {
        let inv_out = (0..graph.node_count())
            .map(|i| {
                let d = graph.out_degree(i);
                if d > 0.0 {
                    1.0 / d
                } else {
                    0.0
                }
            })
            .collect();
        TransitionOperator { graph, kind, inv_out }
    }

    pub fn kind(&self) -> TransitionKind {
        self.kind
    }

    pub fn graph(&self) -> &'g DirectedGraph {
        self.graph
    }

    pub fn dim(&self) -> usize {
        self.graph.node_count()
    }

    /// `y = M x` over complex vectors.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let n = self.dim();
        debug_assert_eq!(x.len(), n);
        debug_assert_eq!(y.len(), n);
        let uniform = match self.kind {
            TransitionKind::DanglingUniform => {
                x.iter().sum::<Complex64>() / n as f64
            }
            TransitionKind::RowStochastic => Complex64::new(0.0, 0.0),
        };
        for i in 0..n {
            if self.inv_out[i] == 0.0 {
                y[i] = uniform;
            } else {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, w) in self.graph.out_edges(i) {
                    acc += x[j] * w;
                }
                y[i] = acc * self.inv_out[i];
            }
        }
    }

    /// `y = M x` over real vectors.
    pub fn apply_real(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        let uniform = match self.kind {
            TransitionKind::DanglingUniform => x.iter().sum::<f64>() / n as f64,
            TransitionKind::RowStochastic => 0.0,
        };
        for i in 0..n {
            if self.inv_out[i] == 0.0 {
                y[i] = uniform;
            } else {
                let mut acc = 0.0;
                for (j, w) in self.graph.out_edges(i) {
                    acc += x[j] * w;
                }
                y[i] = acc * self.inv_out[i];
            }
        }
    }

    /// `y = Mᵀ x` over real vectors (mass redistribution step).
    pub fn apply_transpose_real(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        y.fill(0.0);
        let mut dangling_mass = 0.0;
        for i in 0..n {
            if self.inv_out[i] == 0.0 {
                dangling_mass += x[i];
            } else {
                let scaled = x[i] * self.inv_out[i];
                for (j, w) in self.graph.out_edges(i) {
                    y[j] += scaled * w;
                }
            }
        }
        if self.kind == TransitionKind::DanglingUniform && dangling_mass != 0.0 {
            let share = dangling_mass / n as f64;
            for v in y.iter_mut() {
                *v += share;
            }
        }
    }

    /// Row `i` as a dense vector.
    pub fn dense_row(&self, i: usize) -> Vec<f64> {
        let n = self.dim();
        let mut row = vec![0.0; n];
        if self.inv_out[i] == 0.0 {
            if self.kind == TransitionKind::DanglingUniform {
                row.fill(1.0 / n as f64);
            }
        } else {
            for (j, w) in self.graph.out_edges(i) {
                row[j] = w * self.inv_out[i];
            }
        }
        row
    }
}
