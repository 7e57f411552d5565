//! Dense Hermitian eigen-solver for the small matrices met in this crate.
//!
//! A d×d Hermitian matrix `A + iB` is embedded as the 2d×2d real symmetric
//! matrix `[[A, -B], [B, A]]`, which is diagonalized by cyclic Jacobi rotations.
//! Every eigenvalue of the Hermitian matrix appears twice in the embedding.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::math::{c, sqrt};

const MAX_SWEEPS: usize = 64;

struct SymmetricEigen {
    n: usize,
    values: Vec<f64>,
    /// Column-major eigenvectors.
    vectors: Vec<f64>,
}

fn jacobi(mut a: Vec<f64>, n: usize) -> SymmetricEigen {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= 1e-32 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / sqrt(t * t + 1.0);
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = cs * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + cs * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    // row-major v holds eigenvectors in its columns; transpose to column-major
    let mut vectors = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            vectors[j * n + i] = v[i * n + j];
        }
    }
    SymmetricEigen { n, values, vectors }
}

fn embed(h: &[Complex64], d: usize) -> Vec<f64> {
    let n = 2 * d;
    let mut m = vec![0.0; n * n];
    for i in 0..d {
        for j in 0..d {
            let z = h[i * d + j];
            m[i * n + j] = z.re;
            m[(i + d) * n + (j + d)] = z.re;
            m[i * n + (j + d)] = -z.im;
            m[(i + d) * n + j] = z.im;
        }
    }
    m
}

/// Eigenvalues of a row-major Hermitian matrix, ascending.
pub(crate) fn hermitian_eigenvalues(h: &[Complex64], d: usize) -> Vec<f64> {
    let eig = jacobi(embed(h, d), 2 * d);
    let mut vals = eig.values;
    vals.sort_by(|a, b| a.total_cmp(b));
    vals.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Applies `f` to the spectrum of a row-major Hermitian matrix.
pub(crate) fn hermitian_map(h: &[Complex64], d: usize, f: impl Fn(f64) -> f64) -> Vec<Complex64> {
    let eig = jacobi(embed(h, d), 2 * d);
    let n = eig.n;
    let mut out = vec![0.0; n * n];
    for k in 0..n {
        let fk = f(eig.values[k]);
        let col = &eig.vectors[k * n..(k + 1) * n];
        for i in 0..n {
            let s = fk * col[i];
            for j in 0..n {
                out[i * n + j] += s * col[j];
            }
        }
    }
    let mut res = vec![Complex64::default(); d * d];
    for i in 0..d {
        for j in 0..d {
            res[i * d + j] = c(out[i * n + j], out[(i + d) * n + j]);
        }
    }
    res
}

pub(crate) fn matmul(a: &[Complex64], b: &[Complex64], d: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == Complex64::default() {
                continue;
            }
            for j in 0..d {
                out[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    out
}
