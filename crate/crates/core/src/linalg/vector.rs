use num_complex::Complex64;

use super::matrix::vector_norm;
use crate::error::{Error, Result};

/// Complex vector of Euclidean norm one (within 1e-12).
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector {
    entries: Vec<Complex64>,
}

impl UnitVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        let norm = vector_norm(&entries);
        if entries.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!("vector norm {norm} is not 1")));
        }
        Ok(Self { entries })
    }

    /// Scales a non-zero vector to unit length.
    pub fn normalize(mut entries: Vec<Complex64>) -> Result<Self> {
        let norm = vector_norm(&entries);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParams("cannot normalize a zero or non-finite vector".into()));
        }
        for z in &mut entries {
            *z /= norm;
        }
        Self::new(entries)
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::normalize(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Standard basis vector e_k in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim];
        entries[k] = Complex64::new(1.0, 0.0);
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }
}
