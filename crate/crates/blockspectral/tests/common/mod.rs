use blockspectral::graph::DirectedGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// A strongly connected block-cycle with the given block sizes. Blocks
/// occupy consecutive node ranges and every edge goes to the next block.
/// A covering spine guarantees each node an out-edge and each node an
/// in-edge; extra next-block edges appear with probability 0.3 and
/// weights are uniform in [0.5, 2). Draws repeat until the result is
/// strongly connected, so the output is a deterministic function of
/// `sizes` and `seed`.
#[allow(dead_code)]
pub fn random_block_cycle(sizes: &[usize], seed: u64) -> (DirectedGraph, Vec<usize>) {
    let k = sizes.len();
    assert!(k >= 2, "need at least two blocks");
    let n: usize = sizes.iter().sum();
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut next = 0;
    for &size in sizes {
        assert!(size >= 1);
        members.push((next..next + size).collect());
        next += size;
    }
    let mut labels = vec![0usize; n];
    for (b, nodes) in members.iter().enumerate() {
        for &u in nodes {
            labels[u] = b;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for b in 0..k {
            let cur = &members[b];
            let nxt = &members[(b + 1) % k];
            for i in 0..cur.len().max(nxt.len()) {
                pairs.insert((cur[i % cur.len()], nxt[i % nxt.len()]));
            }
            for &u in cur {
                for &v in nxt {
                    if rng.random::<f64>() < 0.3 {
                        pairs.insert((u, v));
                    }
                }
            }
        }
        let edges: Vec<(usize, usize, f64)> = pairs
            .into_iter()
            .map(|(u, v)| (u, v, rng.random_range(0.5..2.0)))
            .collect();
        let graph = DirectedGraph::from_edges(n, &edges).expect("valid edges");
        if graph.is_strongly_connected() {
            return (graph, labels);
        }
    }
    panic!("no strongly connected block-cycle for sizes {sizes:?} and seed {seed}");
}

/// Splits `n` nodes into `k` blocks of random sizes, each at least 2.
#[allow(dead_code)]
pub fn random_sizes(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    assert!(n >= 2 * k);
    let mut sizes = vec![2usize; k];
    for _ in 0..n - 2 * k {
        sizes[rng.random_range(0..k)] += 1;
    }
    sizes
}
