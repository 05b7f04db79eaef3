//! Cross-checks the Jacobi eigensolver and the spectral functions against
//! nalgebra's Hermitian eigendecomposition.

use gruss_core::linalg::{eigh, logm, sqrtm};
use gruss_core::random::{gen_complex, gen_pd};
use gruss_core::{ComplexMatrix, HermitianMatrix, InstanceConfig};
use nalgebra::{Complex, DMatrix};

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex<f64>> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m[(i, j)])
}

fn hermitian_from(seed: u64, dim: usize) -> HermitianMatrix {
    let g = gen_complex(dim, seed, 1.0).unwrap();
    let h = &g + &g.adjoint();
    HermitianMatrix::new(h.scale(0.5)).unwrap()
}

fn oracle_eigenvalues(h: &HermitianMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = to_nalgebra(h.as_matrix()).symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

#[test]
fn eigenvalues_match_nalgebra() {
    for dim in [1, 2, 3, 5, 8, 16] {
        for seed in 0..20 {
            let h = hermitian_from(seed, dim);
            let ours = eigh(&h).unwrap();
            let theirs = oracle_eigenvalues(&h);
            let scale = 1.0 + theirs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (a, b) in ours.eigenvalues().iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-12 * scale, "dim {dim} seed {seed}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn eigenvectors_reconstruct_the_matrix() {
    for seed in 0..20 {
        let h = hermitian_from(seed, 7);
        let d = eigh(&h).unwrap();
        let err = h.sub(&d.reconstruct()).frobenius_norm();
        assert!(err < 1e-12 * (1.0 + h.frobenius_norm()), "seed {seed}: {err}");
    }
}

#[test]
fn matrix_functions_match_nalgebra() {
    for seed in 0..10 {
        let cfg = InstanceConfig {
            dim: 5,
            seed,
            ..InstanceConfig::default()
        };
        let (h, _) = gen_pd(&cfg).unwrap();
        let eig = to_nalgebra(h.as_matrix()).symmetric_eigen();
        let apply = |f: fn(f64) -> f64| {
            let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| Complex::new(f(v), 0.0)));
            &eig.eigenvectors * d * eig.eigenvectors.adjoint()
        };
        for (ours, theirs) in [(sqrtm(&h).unwrap(), apply(f64::sqrt)), (logm(&h).unwrap(), apply(f64::ln))] {
            let diff = (to_nalgebra(ours.as_matrix()) - &theirs).norm();
            assert!(diff < 1e-11 * (1.0 + theirs.norm()), "seed {seed}: {diff}");
        }
    }
}
