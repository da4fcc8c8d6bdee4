//! Dense eigensolver for small complex Hessenberg matrices.
//!
//! The Arnoldi outer loop projects the transition operator onto a Krylov
//! subspace of a few dozen dimensions; this module diagonalizes that
//! projection. Shifted QR with complex Givens rotations drives the matrix
//! to triangular form, eigenvectors come out by back-substitution, and
//! nothing here calls LAPACK, which keeps the iterative path independent of
//! the dense reference path used to cross-check it.

use num_complex::Complex64;

use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Minimal row-major complex matrix for solver internals.
#[derive(Debug, Clone)]
pub(crate) struct CMat {
    rows: usize,
    cols: usize,
    a: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, a: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    #[cfg(test)]
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    /// Leading square block as its own matrix.
    pub fn leading(&self, n: usize) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self[(i, j)];
            }
        }
        m
    }

    fn max_abs(&self) -> f64 {
        self.a.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.a[i * self.cols + j]
    }
}

/// Complex Givens rotation: returns `(c, s)` with `c` real so that
/// `[c s; -conj(s) c] [f; g] = [r; 0]`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let fa = f.norm();
    let ga = g.norm();
    if ga == 0.0 {
        return (1.0, ZERO);
    }
    if fa == 0.0 {
        return (0.0, g.conj() / ga);
    }
    let h = fa.hypot(ga);
    let phase = f / fa;
    (fa / h, phase * g.conj() / h)
}

/// Rows `i` and `i+1` of `m`, columns `from..`, hit by the rotation.
fn rotate_rows(m: &mut CMat, i: usize, c: f64, s: Complex64, from: usize) {
    for col in from..m.cols {
        let a = m[(i, col)];
        let b = m[(i + 1, col)];
        m[(i, col)] = a * c + b * s;
        m[(i + 1, col)] = b * c - a * s.conj();
    }
}

/// Columns `j` and `j+1` of `m`, rows `..to`, hit by the adjoint rotation.
fn rotate_cols(m: &mut CMat, j: usize, c: f64, s: Complex64, to: usize) {
    for row in 0..to {
        let a = m[(row, j)];
        let b = m[(row, j + 1)];
        m[(row, j)] = a * c + b * s.conj();
        m[(row, j + 1)] = b * c - a * s;
    }
}

/// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
fn wilkinson_shift(h: &CMat, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let t = (a - d) * 0.5;
    let disc = (t * t + b * c).sqrt();
    let s1 = t + disc;
    let s2 = t - disc;
    let s = if s1.norm() >= s2.norm() { s1 } else { s2 };
    if s.norm() == 0.0 {
        d
    } else {
        d - b * c / s
    }
}

fn subdiag_negligible(h: &CMat, i: usize) -> bool {
    let scale = h[(i - 1, i - 1)].norm() + h[(i, i)].norm();
    let scale = if scale == 0.0 { h.max_abs() } else { scale };
    h[(i, i - 1)].norm() <= f64::EPSILON * scale
}

/// Triangularizes an upper Hessenberg matrix in place by shifted QR.
///
/// On success `h` is upper triangular with the eigenvalues on its diagonal
/// and `q` holds the accumulated unitary similarity, `h_out = qᴴ h_in q`.
fn triangularize(h: &mut CMat, q: &mut CMat) -> Result<()> {
    let n = h.rows();
    if n <= 1 {
        return Ok(());
    }
    let mut hi = n - 1;
    let mut stall = 0usize;
    let mut total = 0usize;
    let limit = 80 * n;
    while hi > 0 {
        if subdiag_negligible(h, hi) {
            h[(hi, hi - 1)] = ZERO;
            hi -= 1;
            stall = 0;
            continue;
        }
        let mut lo = hi;
        while lo > 0 && !subdiag_negligible(h, lo) {
            lo -= 1;
        }
        if lo > 0 {
            h[(lo, lo - 1)] = ZERO;
        }
        total += 1;
        stall += 1;
        if total > limit {
            return Err(Error::Backend(format!(
                "hessenberg qr stalled after {total} sweeps at block size {}",
                hi - lo + 1
            )));
        }
        let shift = if stall % 12 == 0 {
            // exceptional shift to break symmetric limit cycles
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h, hi)
        };
        for j in lo..=hi {
            h[(j, j)] -= shift;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for j in lo..hi {
            let (c, s) = givens(h[(j, j)], h[(j + 1, j)]);
            rotate_rows(h, j, c, s, j);
            rots.push((c, s));
        }
        for (offset, &(c, s)) in rots.iter().enumerate() {
            let j = lo + offset;
            rotate_cols(h, j, c, s, (j + 2).min(n));
            rotate_cols(q, j, c, s, n);
        }
        for j in lo..=hi {
            h[(j, j)] += shift;
        }
    }
    Ok(())
}

/// Eigenvalues and unit-norm right eigenvectors (matrix columns) of a small
/// complex upper Hessenberg matrix.
pub(crate) fn eig_hessenberg(h: &CMat) -> Result<(Vec<Complex64>, CMat)> {
    let n = h.rows();
    debug_assert_eq!(h.cols(), n);
    if n == 0 {
        return Ok((Vec::new(), CMat::zeros(0, 0)));
    }
    let mut t = h.clone();
    let mut q = CMat::identity(n);
    triangularize(&mut t, &mut q)?;
    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();

    // Back-substitute in the triangular factor, then map through q. The
    // guard keeps the division alive when eigenvalues (nearly) repeat.
    let smallnum = (t.max_abs() * n as f64 * f64::EPSILON).max(1e-300);
    let mut vectors = CMat::zeros(n, n);
    for (idx, &lambda) in values.iter().enumerate() {
        let mut x = vec![ZERO; idx + 1];
        x[idx] = Complex64::new(1.0, 0.0);
        for j in (0..idx).rev() {
            let mut num = ZERO;
            for (l, xv) in x.iter().enumerate().take(idx + 1).skip(j + 1) {
                num += t[(j, l)] * xv;
            }
            let mut den = t[(j, j)] - lambda;
            if den.norm() < smallnum {
                den = Complex64::new(smallnum, 0.0);
            }
            x[j] = -num / den;
            let mag = x[j].norm();
            if mag > 1e250 {
                for xv in x.iter_mut() {
                    *xv /= mag;
                }
            }
        }
        let mut v = vec![ZERO; n];
        for (l, xv) in x.iter().enumerate() {
            if xv.norm() == 0.0 {
                continue;
            }
            for row in 0..n {
                v[row] += q[(row, l)] * xv;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (row, value) in v.into_iter().enumerate() {
            vectors[(row, idx)] = value / norm;
        }
    }
    Ok((values, vectors))
}
