//! Restarted Arnoldi iteration for the few largest-modulus eigenpairs.
//!
//! The operator is only ever applied to vectors, so the cost per restart is
//! a handful of edge sweeps plus Gram-Schmidt work on a basis of a few
//! dozen columns. Restarts are explicit: the next start vector is the sum
//! of the current wanted Ritz vectors. When the Krylov space goes invariant
//! early (common on graphs whose transition matrix has tiny rank, where the
//! exact eigenpairs fall out after a few steps), the factorization
//! continues from a fresh random direction orthogonal to everything found
//! so far; the projected matrix then holds several independent chunks and
//! duplicate Ritz copies of one eigenvalue are collapsed during selection.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::schur::{eig_hessenberg, CMat};
use super::{sort_pairs_desc, true_residual, ArnoldiOptions, Eigenpair, LinearOp, SpectrumResult};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn scale_into(v: &mut [Complex64], factor: f64) {
    for z in v.iter_mut() {
        *z *= factor;
    }
}

fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

/// Random unit vector orthogonal to every column in `basis`.
fn fresh_direction(
    n: usize,
    basis: &[Vec<Complex64>],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Complex64>> {
    for _ in 0..64 {
        let mut v = random_vector(n, rng);
        for _ in 0..2 {
            for b in basis {
                let c = dot(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let nv = norm(&v);
        if nv > 1e-8 * (n as f64).sqrt() {
            scale_into(&mut v, 1.0 / nv);
            return Ok(v);
        }
    }
    Err(Error::Backend("could not draw a direction outside the current basis".into()))
}

struct Factorization {
    basis: Vec<Vec<Complex64>>,
    h: CMat,
    size: usize,
}

/// Arnoldi factorization `A V = V H + beta v_next e_lastᵀ` with modified
/// Gram-Schmidt and one reorthogonalization pass when cancellation bites.
fn factorize<L: LinearOp + ?Sized>(
    op: &L,
    v0: &[Complex64],
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Factorization> {
    let n = v0.len();
    let mut basis = Vec::with_capacity(m + 1);
    basis.push(v0.to_vec());
    let mut h = CMat::zeros(m + 1, m);
    let mut j = 0;
    while j < m {
        let mut w = vec![ZERO; n];
        op.apply(&basis[j], &mut w);
        let before = norm(&w);
        for i in 0..=j {
            let c = dot(&basis[i], &w);
            h[(i, j)] += c;
            for (wi, bi) in w.iter_mut().zip(&basis[i]) {
                *wi -= c * bi;
            }
        }
        if norm(&w) < std::f64::consts::FRAC_1_SQRT_2 * before {
            for i in 0..=j {
                let c = dot(&basis[i], &w);
                h[(i, j)] += c;
                for (wi, bi) in w.iter_mut().zip(&basis[i]) {
                    *wi -= c * bi;
                }
            }
        }
        let beta = norm(&w);
        if beta <= before * 1e-12 + 1e-300 {
            // invariant subspace: the pairs inside it are exact
            h[(j + 1, j)] = ZERO;
            if j + 1 == n {
                return Ok(Factorization { basis, h, size: j + 1 });
            }
            basis.push(fresh_direction(n, &basis, rng)?);
        } else {
            h[(j + 1, j)] = Complex64::new(beta, 0.0);
            scale_into(&mut w, 1.0 / beta);
            basis.push(w);
        }
        j += 1;
    }
    Ok(Factorization { basis, h, size: m })
}

/// `x = V z` over the first `len(z)` basis columns.
fn combine(basis: &[Vec<Complex64>], z: &[Complex64]) -> Vec<Complex64> {
    let n = basis[0].len();
    let mut x = vec![ZERO; n];
    for (zi, b) in z.iter().zip(basis) {
        if zi.norm() == 0.0 {
            continue;
        }
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi += zi * bi;
        }
    }
    x
}

/// Ritz indices sorted by descending modulus with near-duplicate values
/// collapsed; duplicates arise from restarted invariant-subspace chunks.
fn select_ritz(theta: &[Complex64], want: usize, tol: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..theta.len()).collect();
    order.sort_by(|&a, &b| {
        theta[b]
            .norm()
            .total_cmp(&theta[a].norm())
            .then(theta[b].re.total_cmp(&theta[a].re))
            .then(theta[b].im.total_cmp(&theta[a].im))
    });
    let dtol = |z: Complex64| (100.0 * tol).max(1e-7) * z.norm().max(1.0);
    let mut picked: Vec<usize> = Vec::with_capacity(want);
    let mut skipped: Vec<usize> = Vec::new();
    for &i in &order {
        if picked.iter().any(|&p| (theta[p] - theta[i]).norm() < dtol(theta[i])) {
            skipped.push(i);
        } else {
            picked.push(i);
        }
    }
    if picked.len() < want {
        // genuinely multiple eigenvalues: refill from the collapsed copies
        for i in skipped {
            if picked.len() >= want {
                break;
            }
            picked.push(i);
        }
        picked.sort_by(|&a, &b| theta[b].norm().total_cmp(&theta[a].norm()));
    }
    picked
}

/// Largest-modulus eigenpairs of `op` by restarted Arnoldi iteration.
///
/// Returns at least `k` pairs sorted by descending modulus; when the
/// modulus at the cut is tied within 1e-10 the tied pairs come along too
/// and the result carries `boundary_tie`. For real operators the returned
/// set is closed under conjugation. Residuals are measured against the
/// actual operator, never estimated. Non-convergence after the restart
/// budget returns the best pairs found with `converged` cleared.
pub fn top_modulus_eigenpairs<L: LinearOp + ?Sized>(
    op: &L,
    k: usize,
    opts: &ArnoldiOptions,
) -> Result<SpectrumResult> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let m = opts
        .subspace
        .unwrap_or_else(|| (2 * k + 10).max(30))
        .max(k + 2)
        .min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v0 = random_vector(n, &mut rng);
    let nv = norm(&v0);
    scale_into(&mut v0, 1.0 / nv);

    let mut best: Option<(f64, Vec<Eigenpair>)> = None;
    let mut restart = 0usize;
    loop {
        let fact = factorize(op, &v0, m, &mut rng)?;
        let msz = fact.size;
        let (theta, y) = eig_hessenberg(&fact.h.leading(msz))?;
        let beta = fact.h[(msz, msz - 1)].norm();
        let want = k.min(msz);
        let picked = select_ritz(&theta, want, opts.tol);

        let est_ok = picked.iter().take(want).all(|&i| {
            beta * y[(msz - 1, i)].norm() <= opts.tol * theta[i].norm().max(1.0)
        });
        let last_chance = restart >= opts.max_restarts;

        if est_ok || last_chance {
            // boundary ties ride along before truncation happens later
            let mut take = want;
            while take < picked.len()
                && (theta[picked[take - 1]].norm() - theta[picked[take]].norm()).abs() < 1e-10
            {
                take += 1;
            }
            let mut pairs = Vec::with_capacity(take);
            for &i in picked.iter().take(take) {
                let mut x = combine(&fact.basis, &y.col(i)[..msz]);
                let nx = norm(&x);
                scale_into(&mut x, 1.0 / nx);
                let r = true_residual(op, theta[i], &x);
                pairs.push(Eigenpair { value: theta[i], vector: x, residual: r });
            }
            let worst = pairs
                .iter()
                .map(|p| p.residual / p.value.norm().max(1.0))
                .fold(0.0, f64::max);
            if best.as_ref().map_or(true, |(w, _)| worst < *w) {
                best = Some((worst, pairs));
            }
            let (best_worst, _) = best.as_ref().unwrap();
            if *best_worst <= opts.tol || last_chance {
                let (w, pairs) = best.unwrap();
                return Ok(finalize(op, pairs, k, restart, w <= opts.tol, opts.tol));
            }
        }

        restart += 1;
        let mut z = vec![ZERO; msz];
        for &i in picked.iter().take(want) {
            for (zj, zv) in z.iter_mut().enumerate() {
                *zv += y[(zj, i)];
            }
        }
        let mut v = combine(&fact.basis, &z);
        if norm(&v) < 1e-12 {
            v = combine(&fact.basis, &y.col(picked[0])[..msz]);
        }
        let nv = norm(&v);
        scale_into(&mut v, 1.0 / nv);
        v0 = v;
    }
}

fn finalize<L: LinearOp + ?Sized>(
    op: &L,
    mut pairs: Vec<Eigenpair>,
    k: usize,
    iterations: usize,
    converged: bool,
    tol: f64,
) -> SpectrumResult {
    if op.is_real() {
        // a real operator has a conjugation-closed spectrum; add partners
        // the Krylov run happened to miss (conjugating an eigenvector gives
        // the partner's eigenvector with the identical residual)
        let ptol = |z: Complex64| (10.0 * tol).max(1e-12) * z.norm().max(1.0);
        let mut additions = Vec::new();
        for p in &pairs {
            if p.value.im.abs() <= ptol(p.value) {
                continue;
            }
            let target = p.value.conj();
            let present = pairs
                .iter()
                .chain(additions.iter())
                .any(|q| (q.value - target).norm() < ptol(p.value));
            if !present {
                additions.push(Eigenpair {
                    value: target,
                    vector: p.vector.iter().map(|z| z.conj()).collect(),
                    residual: p.residual,
                });
            }
        }
        pairs.extend(additions);
    }
    sort_pairs_desc(&mut pairs);
    let mut cut = k.min(pairs.len());
    let mut boundary_tie = false;
    while cut < pairs.len()
        && (pairs[cut - 1].value.norm() - pairs[cut].value.norm()).abs() < 1e-10
    {
        cut += 1;
        boundary_tie = true;
    }
    pairs.truncate(cut);
    SpectrumResult { pairs, iterations, converged, boundary_tie }
}
