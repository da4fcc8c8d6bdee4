//! From eigenpairs to clusterable points.
//!
//! Each node becomes the row it occupies across the selected eigenvectors.
//! For graphs with k-block ring structure the rows of the clean spectrum
//! land on k distinct points, so any reasonable clustering of the rows
//! reads off the blocks. Complex coordinates are handed to the clustering
//! step as interleaved real pairs, which preserves Euclidean geometry.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::kmeans::{kmeans, KmeansOptions};
use crate::spectral::SpectrumResult;
use crate::{Error, Result};

/// Which of the top-k eigenvectors become embedding columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterMode {
    /// Keep only eigenvalues with positive imaginary part. Drops the
    /// trivial eigenvalue 1 and one member of every conjugate pair, which
    /// halves the embedding without losing information on real graphs.
    PositiveImaginary,
    /// Keep all k.
    AllK,
}

/// Node embedding: one row per node, one complex column per kept
/// eigenvector.
#[derive(Debug, Clone)]
pub struct EmbeddingMatrix {
    /// Row-major, `n` rows of `c` coordinates.
    pub coords: Vec<Vec<Complex64>>,
    /// Eigenvalue behind each column.
    pub source_eigenvalues: Vec<Complex64>,
    /// Set when the positive-imaginary filter matched nothing and the
    /// builder fell back to keeping all k columns.
    pub used_fallback: bool,
}

impl EmbeddingMatrix {
    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn column_count(&self) -> usize {
        self.source_eigenvalues.len()
    }

    /// Rows as real vectors, each complex coordinate split into (re, im).
    pub fn real_rows(&self) -> Vec<Vec<f64>> {
        self.coords
            .iter()
            .map(|row| row.iter().flat_map(|z| [z.re, z.im]).collect())
            .collect()
    }
}

/// Selects embedding columns from the `k` largest-modulus eigenpairs.
///
/// The spectrum must hold at least `k` pairs. Under
/// [`FilterMode::PositiveImaginary`] an empty selection (which happens for
/// k = 2, where the spectrum is real) falls back to all k columns and
/// marks the result.
pub fn build_embedding(
    spectrum: &SpectrumResult,
    k: usize,
    filter: FilterMode,
) -> Result<EmbeddingMatrix> {
    if spectrum.pairs.len() < k {
        return Err(Error::SpectrumTooSmall {
            have: spectrum.pairs.len(),
            need: k,
            context: "embedding".into(),
        });
    }
    if k == 0 {
        return Err(Error::InvalidParameter {
            context: "embedding".into(),
            message: "k must be positive".into(),
        });
    }
    const IMAG_TOL: f64 = 1e-9;
    let top = &spectrum.pairs[..k];
    let mut keep: Vec<usize> = match filter {
        FilterMode::AllK => (0..k).collect(),
        FilterMode::PositiveImaginary => {
            (0..k).filter(|&i| top[i].value.im > IMAG_TOL).collect()
        }
    };
    let mut used_fallback = false;
    if keep.is_empty() {
        keep = (0..k).collect();
        used_fallback = true;
    }
    let n = top[0].vector.len();
    let source_eigenvalues: Vec<Complex64> = keep.iter().map(|&i| top[i].value).collect();
    let coords: Vec<Vec<Complex64>> = (0..n)
        .map(|row| keep.iter().map(|&i| top[i].vector[row]).collect())
        .collect();
    Ok(EmbeddingMatrix { coords, source_eigenvalues, used_fallback })
}

/// Clustering of embedding rows with complex centroids.
#[derive(Debug, Clone)]
pub struct RowClustering {
    pub labels: Vec<usize>,
    /// One complex `c`-vector per cluster.
    pub centroids: Vec<Vec<Complex64>>,
    pub inertia: f64,
    pub iterations: usize,
}

/// K-means over the rows of the embedding, viewed as real vectors.
pub fn cluster_rows(
    embedding: &EmbeddingMatrix,
    k: usize,
    opts: &KmeansOptions,
) -> Result<RowClustering> {
    let fit = kmeans(&embedding.real_rows(), k, opts)?;
    let centroids = fit
        .centroids
        .iter()
        .map(|c| {
            c.chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect()
        })
        .collect();
    Ok(RowClustering {
        labels: fit.labels,
        centroids,
        inertia: fit.inertia,
        iterations: fit.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Eigenpair, SpectrumResult};
    use approx::assert_abs_diff_eq;

    fn spectrum_from(values: &[Complex64], n: usize) -> SpectrumResult {
        let pairs = values
            .iter()
            .enumerate()
            .map(|(idx, &value)| Eigenpair {
                value,
                vector: (0..n)
                    .map(|i| Complex64::new((i + idx) as f64, (i * idx) as f64))
                    .collect(),
                residual: 0.0,
            })
            .collect();
        SpectrumResult { pairs, iterations: 0, converged: true, boundary_tie: false }
    }

    #[test]
    fn positive_imaginary_keeps_upper_half_plane_only() {
        let values = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        let s = spectrum_from(&values, 5);
        let em = build_embedding(&s, 4, FilterMode::PositiveImaginary).unwrap();
        assert_eq!(em.column_count(), 1);
        assert!(!em.used_fallback);
        assert_abs_diff_eq!(em.source_eigenvalues[0].im, 1.0);
        let all = build_embedding(&s, 4, FilterMode::AllK).unwrap();
        assert_eq!(all.column_count(), 4);
    }

    #[test]
    fn real_spectrum_falls_back_to_all_k() {
        let values = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        let s = spectrum_from(&values, 4);
        let em = build_embedding(&s, 2, FilterMode::PositiveImaginary).unwrap();
        assert!(em.used_fallback);
        assert_eq!(em.column_count(), 2);
    }

    #[test]
    fn too_small_spectrum_is_rejected() {
        let values = [Complex64::new(1.0, 0.0)];
        let s = spectrum_from(&values, 4);
        assert!(matches!(
            build_embedding(&s, 2, FilterMode::AllK),
            Err(Error::SpectrumTooSmall { .. })
        ));
    }

    #[test]
    fn real_rows_interleave_re_and_im() {
        let values = [Complex64::new(0.0, 1.0)];
        let s = spectrum_from(&values, 3);
        let em = build_embedding(&s, 1, FilterMode::AllK).unwrap();
        let rows = em.real_rows();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1].len(), 2);
        assert_abs_diff_eq!(rows[1][0], em.coords[1][0].re);
        assert_abs_diff_eq!(rows[1][1], em.coords[1][0].im);
    }

    #[test]
    fn column_phase_rotation_leaves_clustering_invariant() {
        // rotating one column by a global phase is an isometry of the rows
        let n = 12;
        let mut coords: Vec<Vec<Complex64>> = Vec::new();
        for i in 0..n {
            let angle = 2.0 * std::f64::consts::PI * ((i % 3) as f64) / 3.0;
            coords.push(vec![
                Complex64::from_polar(1.0, angle),
                Complex64::from_polar(1.0, 2.0 * angle),
            ]);
        }
        let em = EmbeddingMatrix {
            coords: coords.clone(),
            source_eigenvalues: vec![Complex64::new(0.0, 1.0); 2],
            used_fallback: false,
        };
        let phase = Complex64::from_polar(1.0, 0.83);
        let rotated = EmbeddingMatrix {
            coords: coords
                .iter()
                .map(|row| vec![row[0] * phase, row[1]])
                .collect(),
            source_eigenvalues: em.source_eigenvalues.clone(),
            used_fallback: false,
        };
        let opts = KmeansOptions { seed: 7, ..Default::default() };
        let a = cluster_rows(&em, 3, &opts).unwrap();
        let b = cluster_rows(&rotated, 3, &opts).unwrap();
        assert_abs_diff_eq!(a.inertia, b.inertia, epsilon = 1e-9);
        assert_eq!(a.labels, b.labels);
    }
}
