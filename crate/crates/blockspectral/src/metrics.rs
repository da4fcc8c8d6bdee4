//! Permutation-invariant agreement measures between two labelings.
//!
//! Cluster labels are arbitrary names, so any fair comparison must be
//! blind to renaming. The membership error search runs over all label
//! permutations, solved exactly as an assignment problem; mutual
//! information is permutation-invariant by construction.

use std::collections::BTreeMap;

use crate::{Error, Result};

/// Joint label counts, `counts[t][e]` = nodes with truth `t` and estimate
/// `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<usize>>,
    pub n: usize,
}

impl ConfusionMatrix {
    pub fn from_labels(truth: &[usize], estimate: &[usize], k: usize) -> Result<Self> {
        check_labels(truth, estimate, k)?;
        let mut counts = vec![vec![0usize; k]; k];
        for (&t, &e) in truth.iter().zip(estimate) {
            counts[t][e] += 1;
        }
        Ok(ConfusionMatrix { counts, n: truth.len() })
    }
}

fn check_labels(truth: &[usize], estimate: &[usize], k: usize) -> Result<()> {
    if truth.len() != estimate.len() {
        return Err(Error::LabelLengthMismatch { got: estimate.len(), expected: truth.len() });
    }
    if truth.is_empty() {
        return Err(Error::InvalidParameter {
            context: "labels".into(),
            message: "empty label vectors".into(),
        });
    }
    for (node, labels) in truth.iter().zip(estimate).enumerate() {
        let (&t, &e) = labels;
        for label in [t, e] {
            if label >= k {
                return Err(Error::LabelOutOfRange { node, label, k });
            }
        }
    }
    Ok(())
}

/// Exact minimum-cost perfect assignment on a square cost matrix
/// (shortest augmenting paths with potentials). Costs may be negative.
/// Returns the total cost and the column matched to each row.
fn hungarian_min(cost: &[Vec<i64>]) -> (i64, Vec<usize>) {
    let n = cost.len();
    const INF: i64 = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    let mut total = 0i64;
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
            total += cost[p[j] - 1][j - 1];
        }
    }
    (total, assignment)
}

/// Fraction of nodes mislabeled under the best label permutation.
///
/// Zero exactly when the two labelings are identical up to renaming. Both
/// label vectors must use labels in `0..k`.
pub fn block_membership_error(truth: &[usize], estimate: &[usize], k: usize) -> Result<f64> {
    let confusion = ConfusionMatrix::from_labels(truth, estimate, k)?;
    let cost: Vec<Vec<i64>> = confusion
        .counts
        .iter()
        .map(|row| row.iter().map(|&c| -(c as i64)).collect())
        .collect();
    let (neg_agreement, _) = hungarian_min(&cost);
    let mismatches = confusion.n as i64 + neg_agreement;
    Ok(mismatches as f64 / confusion.n as f64)
}

/// Normalized mutual information, `2 I(A; B) / (H(A) + H(B))` in natural
/// log, clamped to [0, 1].
///
/// Degenerate inputs follow the usual conventions: two single-class
/// labelings agree perfectly (1), a single-class labeling against a split
/// one carries no information (0).
pub fn nmi(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LabelLengthMismatch { got: b.len(), expected: a.len() });
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter {
            context: "nmi".into(),
            message: "empty label vectors".into(),
        });
    }
    let n = a.len() as f64;
    let mut joint: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut count_a: BTreeMap<usize, f64> = BTreeMap::new();
    let mut count_b: BTreeMap<usize, f64> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_insert(0.0) += 1.0;
        *count_a.entry(x).or_insert(0.0) += 1.0;
        *count_b.entry(y).or_insert(0.0) += 1.0;
    }
    match (count_a.len() == 1, count_b.len() == 1) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        (false, false) => {}
    }
    let entropy = |counts: &BTreeMap<usize, f64>| -> f64 {
        -counts.values().map(|&c| (c / n) * (c / n).ln()).sum::<f64>()
    };
    let ha = entropy(&count_a);
    let hb = entropy(&count_b);
    let mut info = 0.0;
    for (&(x, y), &c) in &joint {
        let pxy = c / n;
        let px = count_a[&x] / n;
        let py = count_b[&y] / n;
        info += pxy * (pxy / (px * py)).ln();
    }
    Ok((2.0 * info / (ha + hb)).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Reference: try every label permutation explicitly.
    fn brute_force_error(truth: &[usize], estimate: &[usize], k: usize) -> f64 {
        let mut perm: Vec<usize> = (0..k).collect();
        let mut best = usize::MAX;
        permute(&mut perm, 0, &mut |p| {
            let mismatches = truth
                .iter()
                .zip(estimate)
                .filter(|&(&t, &e)| t != p[e])
                .count();
            best = best.min(mismatches);
        });
        best as f64 / truth.len() as f64
    }

    fn permute(perm: &mut Vec<usize>, at: usize, visit: &mut impl FnMut(&[usize])) {
        if at == perm.len() {
            visit(perm);
            return;
        }
        for i in at..perm.len() {
            perm.swap(at, i);
            permute(perm, at + 1, visit);
            perm.swap(at, i);
        }
    }

    #[test]
    fn assignment_solver_matches_brute_force() {
        let cost = vec![vec![4, 1, 3], vec![2, 0, 5], vec![3, 2, 2]];
        let (total, assignment) = hungarian_min(&cost);
        assert_eq!(total, 5);
        let mut sorted = assignment.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
        let negative = vec![vec![-5, -1], vec![-2, -4]];
        assert_eq!(hungarian_min(&negative).0, -9);
    }

    #[test]
    fn relabeled_assignment_has_zero_error() {
        let truth = vec![0, 0, 1, 1, 2, 2];
        let renamed = vec![2, 2, 0, 0, 1, 1];
        assert_abs_diff_eq!(block_membership_error(&truth, &renamed, 3).unwrap(), 0.0);
    }

    #[test]
    fn one_of_four_flipped_costs_a_quarter() {
        let truth = vec![0, 0, 1, 1];
        let est = vec![0, 0, 1, 0];
        assert_abs_diff_eq!(block_membership_error(&truth, &est, 2).unwrap(), 0.25);
    }

    #[test]
    fn membership_error_equals_brute_force_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..60 {
            let k = rng.random_range(2..=6);
            let n = rng.random_range(2..=40);
            let truth: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
            let est: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
            let fast = block_membership_error(&truth, &est, k).unwrap();
            let slow = brute_force_error(&truth, &est, k);
            assert_abs_diff_eq!(fast, slow, epsilon = 1e-12);
        }
    }

    #[test]
    fn membership_error_validates_input() {
        assert!(matches!(
            block_membership_error(&[0, 1], &[0], 2),
            Err(Error::LabelLengthMismatch { .. })
        ));
        assert!(matches!(
            block_membership_error(&[0, 2], &[0, 1], 2),
            Err(Error::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn nmi_of_identical_labelings_is_one() {
        let labels = vec![0, 1, 0, 2, 1];
        assert_abs_diff_eq!(nmi(&labels, &labels).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn nmi_of_independent_split_is_zero() {
        let a = vec![0, 0, 1, 1];
        let b = vec![0, 1, 0, 1];
        assert_abs_diff_eq!(nmi(&a, &b).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn nmi_matches_hand_computed_joint_histogram() {
        // joint counts [[3, 1], [1, 3]] over n = 8
        let a = vec![0, 0, 0, 0, 1, 1, 1, 1];
        let b = vec![0, 0, 0, 1, 0, 1, 1, 1];
        let got = nmi(&a, &b).unwrap();
        let expected = {
            let i = 2.0 * (3.0 / 8.0) * (1.5f64).ln() + 2.0 * (1.0 / 8.0) * (0.5f64).ln();
            let h = 2.0f64.ln();
            i / h
        };
        assert_abs_diff_eq!(got, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(got, 0.18872187554086717, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_single_class_rules() {
        let flat = vec![0, 0, 0, 0];
        let split = vec![0, 1, 0, 1];
        assert_abs_diff_eq!(nmi(&flat, &flat).unwrap(), 1.0);
        assert_abs_diff_eq!(nmi(&flat, &split).unwrap(), 0.0);
        assert_abs_diff_eq!(nmi(&split, &flat).unwrap(), 0.0);
    }

    #[test]
    fn confusion_matrix_counts_sum_to_n() {
        let truth = vec![0, 1, 1, 2];
        let est = vec![2, 1, 1, 0];
        let cm = ConfusionMatrix::from_labels(&truth, &est, 3).unwrap();
        let total: usize = cm.counts.iter().flatten().sum();
        assert_eq!(total, 4);
        assert_eq!(cm.counts[1][1], 2);
    }
}
