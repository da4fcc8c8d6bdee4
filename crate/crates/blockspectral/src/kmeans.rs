//! Lloyd's algorithm with k-means++ seeding on real coordinate vectors.
//!
//! Deliberately plain: the embeddings this clusters have a handful of
//! coordinates and a few thousand rows, so there is nothing to gain from
//! trees or blocking. Restarts use independent RNG streams derived from
//! (seed, restart index), which makes results reproducible no matter how
//! the restarts would be scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct KmeansOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for KmeansOptions {
    fn default() -> Self {
        KmeansOptions { restarts: 10, max_iter: 300, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct KmeansFit {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Sum of squared distances from points to their centroids.
    pub inertia: f64,
    /// Lloyd iterations of the winning restart.
    pub iterations: usize,
    /// Which restart won (first restart wins ties).
    pub best_restart: usize,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn seed_centroids(
    points: &[Vec<f64>],
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..n)].clone());
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                target -= w;
                if target <= 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // every point coincides with a centroid already
            rng.random_range(0..n)
        };
        centroids.push(points[next].clone());
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(p, centroids.last().unwrap()));
        }
    }
    centroids
}

fn assign(points: &[Vec<f64>], centroids: &[Vec<f64>], labels: &mut [usize]) -> f64 {
    let mut inertia = 0.0;
    for (i, p) in points.iter().enumerate() {
        let mut best = 0;
        let mut best_d = sq_dist(p, &centroids[0]);
        for (c, centroid) in centroids.iter().enumerate().skip(1) {
            let d = sq_dist(p, centroid);
            // strict improvement keeps the lowest index on exact ties
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        labels[i] = best;
        inertia += best_d;
    }
    inertia
}

fn run_once(
    points: &[Vec<f64>],
    k: usize,
    max_iter: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, Vec<Vec<f64>>, f64, usize) {
    let n = points.len();
    let dim = points[0].len();
    let mut centroids = seed_centroids(points, k, rng);
    let mut labels = vec![usize::MAX; n];
    let mut inertia = f64::INFINITY;
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        let mut new_labels = vec![0usize; n];
        let mut new_inertia = assign(points, &centroids, &mut new_labels);
        // repair: every empty cluster takes over the point sitting farthest
        // from its assigned centroid (stealing only from clusters that keep
        // at least one member); the moved point then sits exactly on its
        // new centroid, so inertia never goes up
        let mut counts = vec![0usize; k];
        for &l in &new_labels {
            counts[l] += 1;
        }
        loop {
            let empty = match counts.iter().position(|&c| c == 0) {
                Some(e) => e,
                None => break,
            };
            let mut far_point = None;
            let mut far_d = -1.0;
            for (i, p) in points.iter().enumerate() {
                if counts[new_labels[i]] < 2 {
                    continue;
                }
                let d = sq_dist(p, &centroids[new_labels[i]]);
                if d > far_d {
                    far_d = d;
                    far_point = Some(i);
                }
            }
            match far_point {
                Some(i) => {
                    new_inertia -= far_d;
                    counts[new_labels[i]] -= 1;
                    new_labels[i] = empty;
                    counts[empty] = 1;
                    centroids[empty] = points[i].clone();
                }
                None => break,
            }
        }
        debug_assert!(
            new_inertia <= inertia + 1e-9 * (1.0 + new_inertia.min(inertia)),
            "inertia increased: {inertia} -> {new_inertia}"
        );
        let stable = new_labels == labels;
        labels = new_labels;
        inertia = new_inertia;
        if stable {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        for (p, &l) in points.iter().zip(labels.iter()) {
            for (s, v) in sums[l].iter_mut().zip(p) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                for s in sums[c].iter_mut() {
                    *s /= counts[c] as f64;
                }
                centroids[c] = sums[c].clone();
            }
        }
    }
    (labels, centroids, inertia, iterations)
}

/// Clusters `points` into `k` groups, best of several seeded restarts.
///
/// Ties in point-to-centroid distance resolve to the lowest centroid
/// index; ties in final inertia resolve to the earliest restart. With
/// `k <=` number of distinct points, every label appears.
pub fn kmeans(points: &[Vec<f64>], k: usize, opts: &KmeansOptions) -> Result<KmeansFit> {
    let n = points.len();
    if n == 0 || k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidParameter {
            context: "kmeans".into(),
            message: "points have mixed dimensionality".into(),
        });
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter {
            context: "kmeans".into(),
            message: "need at least one restart".into(),
        });
    }
    let mut best: Option<KmeansFit> = None;
    for r in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(r as u64);
        let (labels, centroids, inertia, iterations) =
            run_once(points, k, opts.max_iter, &mut rng);
        if best.as_ref().map_or(true, |b| inertia < b.inertia) {
            best = Some(KmeansFit { labels, centroids, inertia, iterations, best_restart: r });
        }
    }
    Ok(best.expect("at least one restart ran"))
}
