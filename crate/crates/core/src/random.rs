//! Seeded random instances: Haar unitaries, positive definite matrices with
//! prescribed spectra, commuting pairs and unit vectors.
//!
//! The generator is SplitMix64 with Box–Muller normals through `libm`, so a
//! seed reproduces the same instance on every platform.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, vector_norm, ComplexMatrix, HermitianMatrix, UnitVector};
use crate::opmeans::PositivePair;

pub const PRNG_VERSION: &str = "splitmix64-v1";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const BASIS_STREAM: u64 = 1;
const SPECTRUM_STREAM: u64 = 2;
const VECTOR_STREAM: u64 = 3;
const MATRIX_STREAM: u64 = 4;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// An independent stream keyed by `tag`.
    pub fn stream(seed: u64, tag: u64) -> Self {
        Self::new(mix64(seed.wrapping_add(mix64(tag))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// A pair of independent standard normals.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let phi = 2.0 * std::f64::consts::PI * u2;
        (r * libm::cos(phi), r * libm::sin(phi))
    }

    /// Standard complex normal: real and imaginary parts N(0, 1/2).
    pub fn complex_normal(&mut self) -> Complex64 {
        let (re, im) = self.normal_pair();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Seed of trial `trial` in a run seeded with `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ trial
}

pub const MAX_DIM: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceConfig {
    pub dim: usize,
    pub seed: u64,
    pub spectrum_lo: f64,
    pub spectrum_hi: f64,
    /// Pin the smallest and largest eigenvalues to the range ends.
    pub include_endpoints: bool,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        Self {
            dim: 4,
            seed: 0,
            spectrum_lo: 0.1,
            spectrum_hi: 10.0,
            include_endpoints: false,
        }
    }
}

impl InstanceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_DIM).contains(&self.dim) {
            return Err(Error::InvalidConfig(format!("dimension must be in [1, {MAX_DIM}], got {}", self.dim)));
        }
        let (lo, hi) = (self.spectrum_lo, self.spectrum_hi);
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::InvalidConfig(format!("spectrum range must satisfy 0 < lo <= hi < inf, got [{lo}, {hi}]")));
        }
        Ok(())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if !(1..=MAX_DIM).contains(&dim) {
        return Err(Error::InvalidConfig(format!("dimension must be in [1, {MAX_DIM}], got {dim}")));
    }
    Ok(())
}

/// Haar-distributed unitary: modified Gram–Schmidt on a complex Gaussian
/// matrix, column by column.
pub fn gen_unitary(rng: &mut SplitMix64, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| rng.complex_normal()).collect();
        for q in &cols {
            let proj = inner(&v, q);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = vector_norm(&v);
        // A nearly dependent draw is discarded and redrawn.
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

fn gen_spectrum(cfg: &InstanceConfig) -> Vec<f64> {
    let mut rng = SplitMix64::stream(cfg.seed, SPECTRUM_STREAM);
    let pin = cfg.include_endpoints && cfg.dim >= 2;
    (0..cfg.dim)
        .map(|k| match k {
            0 if pin => cfg.spectrum_lo,
            1 if pin => cfg.spectrum_hi,
            _ => rng.uniform_in(cfg.spectrum_lo, cfg.spectrum_hi),
        })
        .collect()
}

fn basis(cfg: &InstanceConfig) -> ComplexMatrix {
    gen_unitary(&mut SplitMix64::stream(cfg.seed, BASIS_STREAM), cfg.dim)
}

fn compose(u: &ComplexMatrix, values: &[f64]) -> HermitianMatrix {
    let d = ComplexMatrix::from_real_diag(values);
    HermitianMatrix::symmetrize(&(u * &d) * &u.adjoint())
}

/// U diag(λ) U* with λ uniform in the spectrum range; returns the sorted
/// spectrum too.
pub fn gen_pd(cfg: &InstanceConfig) -> Result<(HermitianMatrix, Vec<f64>)> {
    cfg.validate()?;
    let mut values = gen_spectrum(cfg);
    let h = compose(&basis(cfg), &values);
    values.sort_by(f64::total_cmp);
    Ok((h, values))
}

/// A from `cfg_a`, and B with the spectrum drawn from `cfg_b` but diagonal in
/// the basis of A. Eigenvalues are returned paired by eigenvector, unsorted.
pub fn gen_commuting_pair(cfg_a: &InstanceConfig, cfg_b: &InstanceConfig) -> Result<(PositivePair, Vec<f64>, Vec<f64>)> {
    cfg_a.validate()?;
    cfg_b.validate()?;
    if cfg_a.dim != cfg_b.dim {
        return Err(Error::DimensionMismatch {
            left: cfg_a.dim,
            right: cfg_b.dim,
        });
    }
    let u = basis(cfg_a);
    let (la, lb) = (gen_spectrum(cfg_a), gen_spectrum(cfg_b));
    let pair = PositivePair::new(compose(&u, &la), compose(&u, &lb))?;
    Ok((pair, la, lb))
}

/// Uniform on the complex unit sphere.
pub fn gen_unit_vector(dim: usize, seed: u64) -> Result<UnitVector> {
    check_dim(dim)?;
    let mut rng = SplitMix64::stream(seed, VECTOR_STREAM);
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| rng.complex_normal()).collect();
        if vector_norm(&v) > 1e-12 {
            return UnitVector::normalize(v);
        }
    }
}

/// Entries i.i.d. standard complex normal times `scale`.
pub fn gen_complex(dim: usize, seed: u64, scale: f64) -> Result<ComplexMatrix> {
    check_dim(dim)?;
    let mut rng = SplitMix64::stream(seed, MATRIX_STREAM);
    Ok(ComplexMatrix::from_fn(dim, |_, _| rng.complex_normal() * scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigh;

    #[test]
    fn splitmix_reference_sequence() {
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn uniform_range() {
        let mut r = SplitMix64::new(7);
        for _ in 0..10_000 {
            let u = r.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn unitary_is_unitary() {
        let mut r = SplitMix64::new(3);
        let u = gen_unitary(&mut r, 5);
        let p = &u.adjoint() * &u;
        let err = (&p - &ComplexMatrix::identity(5)).frobenius_norm();
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn pd_has_requested_spectrum() {
        let cfg = InstanceConfig {
            dim: 6,
            seed: 11,
            spectrum_lo: 0.5,
            spectrum_hi: 4.0,
            include_endpoints: true,
        };
        let (h, values) = gen_pd(&cfg).unwrap();
        assert_eq!(values[0], 0.5);
        assert_eq!(values[5], 4.0);
        let computed = eigh(&h).unwrap();
        for (a, b) in computed.eigenvalues().iter().zip(&values) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(h, gen_pd(&cfg).unwrap().0);
    }

    #[test]
    fn one_by_one_instance() {
        let cfg = InstanceConfig { dim: 1, ..InstanceConfig::default() };
        let (h, values) = gen_pd(&cfg).unwrap();
        assert_eq!(values.len(), 1);
        assert!((h[(0, 0)].re - values[0]).abs() < 1e-15);
        assert!((0.1..=10.0).contains(&values[0]));
    }

    #[test]
    fn commuting_pair_commutes() {
        let cfg_a = InstanceConfig { seed: 5, ..InstanceConfig::default() };
        let cfg_b = InstanceConfig { seed: 6, ..cfg_a };
        let (pair, la, lb) = gen_commuting_pair(&cfg_a, &cfg_b).unwrap();
        let ab = pair.a().as_matrix() * pair.b().as_matrix();
        let ba = pair.b().as_matrix() * pair.a().as_matrix();
        assert!((&ab - &ba).frobenius_norm() < 1e-11 * 100.0);
        assert_ne!(la, lb);
        let (same, _, _) = gen_commuting_pair(&cfg_a, &cfg_a).unwrap();
        assert_eq!(same.a(), same.b());
    }

    #[test]
    fn vectors_and_matrices_are_seeded() {
        let x = gen_unit_vector(5, 9).unwrap();
        assert!((vector_norm(x.as_slice()) - 1.0).abs() < 1e-12);
        assert_eq!(x, gen_unit_vector(5, 9).unwrap());
        assert_ne!(x, gen_unit_vector(5, 10).unwrap());
        assert_eq!(gen_complex(3, 1, 2.0).unwrap(), gen_complex(3, 1, 2.0).unwrap());
        assert_ne!(gen_complex(3, 1, 2.0).unwrap(), gen_complex(3, 2, 2.0).unwrap());
        assert!(gen_unit_vector(0, 1).is_err());
    }

    #[test]
    fn invalid_config() {
        let swapped = InstanceConfig {
            spectrum_lo: 2.0,
            spectrum_hi: 1.0,
            ..InstanceConfig::default()
        };
        assert!(gen_pd(&swapped).is_err());
        assert!(gen_pd(&InstanceConfig { dim: 0, ..InstanceConfig::default() }).is_err());
        assert!(gen_pd(&InstanceConfig { dim: 65, ..InstanceConfig::default() }).is_err());
        let flat = InstanceConfig {
            spectrum_lo: 2.0,
            spectrum_hi: 2.0,
            ..InstanceConfig::default()
        };
        assert!(gen_pd(&flat).is_ok());
    }
}
