//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `h_pq` with a diagonal
//! unitary, then applies the real symmetric Jacobi rotation of the resulting
//! 2×2 block. Pivots are visited in row-major order, so the result is a pure
//! function of the input bits.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Iteration cap for [`eigh_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JacobiConfig {
    pub max_sweeps: usize,
}

impl Default for JacobiConfig {
    fn default() -> Self {
        Self { max_sweeps: 100 }
    }
}

/// Real eigenvalues (ascending) and the unitary matrix whose columns are the
/// corresponding eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Largest |λ|, which is the operator norm of the decomposed matrix.
    pub fn spectral_radius(&self) -> f64 {
        self.min_eigenvalue().abs().max(self.max_eigenvalue().abs())
    }

    /// U diag(values) U*, for `values` indexed like the eigenvalues.
    pub fn synthesize(&self, values: &[f64]) -> HermitianMatrix {
        weighted_outer_sum(&self.eigenvectors, values)
    }

    /// U Λ U*.
    pub fn reconstruct(&self) -> HermitianMatrix {
        self.synthesize(&self.eigenvalues)
    }
}

/// Σ_k w_k · col_k(V) col_k(V)*, computed on the upper triangle and mirrored.
pub(crate) fn weighted_outer_sum(v: &ComplexMatrix, weights: &[f64]) -> HermitianMatrix {
    let n = v.dim();
    assert_eq!(weights.len(), n, "one weight per column");
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &w) in weights.iter().enumerate() {
                acc += v[(i, k)] * v[(j, k)].conj() * w;
            }
            out[(i, j)] = acc;
        }
    }
    HermitianMatrix::from_upper(out)
}

/// Eigendecomposition with the default sweep cap of 100.
pub fn eigh(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    eigh_with(h, JacobiConfig::default())
}

pub fn eigh_with(h: &HermitianMatrix, cfg: JacobiConfig) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let mut a = h.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);

    let mut converged = n <= 1;
    for sweep in 0..cfg.max_sweeps {
        if converged {
            break;
        }
        let off: f64 = upper_pairs(n).map(|(p, q)| a[(p, q)].norm_sqr()).sum();
        if off == 0.0 {
            converged = true;
            break;
        }
        // Early sweeps only rotate pivots above a fraction of the mean off-diagonal size.
        let threshold = if sweep < 3 {
            0.2 * off.sqrt() / (n * n) as f64
        } else {
            0.0
        };
        for (p, q) in upper_pairs(n) {
            let apq = a[(p, q)];
            let r = apq.norm();
            let app = a[(p, p)].re;
            let aqq = a[(q, q)].re;
            if sweep > 3 && app.abs() + 100.0 * r == app.abs() && aqq.abs() + 100.0 * r == aqq.abs() {
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                continue;
            }
            if r == 0.0 || r <= threshold {
                continue;
            }
            rotate(&mut a, &mut v, p, q, apq / r, r, app, aqq);
        }
    }
    if !converged {
        let off: f64 = upper_pairs(n).map(|(p, q)| a[(p, q)].norm_sqr()).sum();
        if off != 0.0 {
            return Err(Error::NoConvergence {
                what: "Jacobi eigensolver",
                iterations: cfg.max_sweeps,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |p| ((p + 1)..n).map(move |q| (p, q)))
}

/// Applies G = diag(1, e^{−iφ}) · [[c, s], [−s, c]] on coordinates (p, q):
/// A ← G* A G and V ← V G, then pins the annihilated pivot to zero.
#[allow(clippy::too_many_arguments)]
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, phase: Complex64, r: f64, app: f64, aqq: f64) {
    let n = a.dim();
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ph_conj = phase.conj();

    // G entries: g_pp = c, g_pq = s, g_qp = −s e^{−iφ}, g_qq = c e^{−iφ}.
    let g_qp = -ph_conj * s;
    let g_qq = ph_conj * c;

    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * c + aiq * g_qp;
        a[(i, q)] = aip * s + aiq * g_qq;

        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c + viq * g_qp;
        v[(i, q)] = vip * s + viq * g_qq;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj * c + aqj * g_qp.conj();
        a[(q, j)] = apj * s + aqj * g_qq.conj();
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}
