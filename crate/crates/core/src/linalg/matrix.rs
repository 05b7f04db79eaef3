use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance accepted by [`HermitianMatrix::new`].
pub const DEFAULT_HERMITIAN_TOL: f64 = 1e-12;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from row-major entries, rejecting non-square or non-finite input.
    pub fn from_vec(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::NotSquare {
                rows: n,
                cols: if n == 0 { data.len() } else { data.len() / n },
            });
        }
        let m = Self { n, data };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::from_vec(n, data)
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "vector length must match matrix dimension");
        self.data
            .chunks_exact(self.n.max(1))
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// ⟨Mx, x⟩ = x* M x.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Complex64 {
        inner(&self.mul_vec(x), x)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_dim(rhs)?;
        Ok(self * rhs)
    }

    pub(crate) fn same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Parses the `{"n", "re", "im"}` JSON layout.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: MatrixJson = serde_json::from_str(s).map_err(|e| Error::MatrixJson(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from(self)
    }
}

/// ⟨u, w⟩ = Σ u_i conj(w_i).
pub fn inner(u: &[Complex64], w: &[Complex64]) -> Complex64 {
    u.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

pub fn vector_norm(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimensions must agree");
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimensions must agree");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimensions must agree");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Serialized matrix layout. A missing `im` means a real matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(raw: MatrixJson) -> Result<Self> {
        let n = raw.n;
        if n == 0 {
            return Err(Error::MatrixJson("n must be positive".into()));
        }
        let check = |name: &str, rows: &[Vec<f64>]| -> Result<()> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::MatrixJson(format!("\"{name}\" must be an {n}×{n} array")));
            }
            Ok(())
        };
        check("re", &raw.re)?;
        if let Some(im) = &raw.im {
            check("im", im)?;
        }
        let data = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let im = raw.im.as_ref().map_or(0.0, |m| m[i][j]);
                Complex64::new(raw.re[i][j], im)
            })
            .collect();
        ComplexMatrix::from_vec(n, data)
    }
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let re = (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect();
        let has_im = m.as_slice().iter().any(|z| z.im != 0.0);
        let im = has_im.then(|| (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect());
        MatrixJson { n, re, im }
    }
}

/// Complex self-adjoint matrix stored in exactly symmetrized form:
/// entry (i, j) is bit-for-bit the conjugate of entry (j, i).
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    /// Accepts `m` when ‖M − M*‖_F ≤ 1e-12·(1 + ‖M‖_F).
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, DEFAULT_HERMITIAN_TOL)
    }

    pub fn with_tolerance(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let residual = (&m - &m.adjoint()).frobenius_norm();
        let allowed = tol * (1.0 + m.frobenius_norm());
        if residual > allowed {
            return Err(Error::NotHermitian { residual, allowed });
        }
        Ok(Self::symmetrize(m))
    }

    /// Replaces `m` by (M + M*)/2 with the lower triangle mirrored from the upper.
    /// Used for products that are Hermitian in exact arithmetic.
    pub(crate) fn symmetrize(mut m: ComplexMatrix) -> Self {
        let n = m.dim();
        for i in 0..n {
            m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        Self { inner: m }
    }

    /// Keeps the upper triangle (real diagonal) and mirrors it into the lower one.
    pub(crate) fn from_upper(mut m: ComplexMatrix) -> Self {
        let n = m.dim();
        for i in 0..n {
            m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                m[(j, i)] = m[(i, j)].conj();
            }
        }
        Self { inner: m }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self {
            inner: ComplexMatrix::from_real_diag(diag),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: ComplexMatrix::identity(n),
        }
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        Self::from_real_diag(&vec![s; n])
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows)?)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    /// Real part of ⟨Hx, x⟩ (the imaginary part vanishes up to rounding).
    pub fn expectation(&self, x: &[Complex64]) -> f64 {
        self.inner.quadratic_form(x).re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            inner: self.inner.scale(s),
        }
    }

    /// X* H X, symmetrized.
    pub fn congruence(&self, x: &ComplexMatrix) -> Self {
        Self::symmetrize(&(&x.adjoint() * &self.inner) * x)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self {
            inner: &self.inner + &rhs.inner,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            inner: &self.inner - &rhs.inner,
        }
    }

    /// (1 − w)·self + w·rhs, entrywise.
    pub fn lerp(&self, rhs: &Self, w: f64) -> Self {
        Self {
            inner: &self.inner.scale(1.0 - w) + &rhs.inner.scale(w),
        }
    }

    pub fn shift(&self, s: f64) -> Self {
        let mut m = self.inner.clone();
        for i in 0..m.dim() {
            m[(i, i)].re += s;
        }
        Self { inner: m }
    }

    /// Square of a Hermitian matrix (Hermitian again).
    pub fn square(&self) -> Self {
        Self::symmetrize(&self.inner * &self.inner)
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex64] {
        self.inner.data_mut()
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.inner[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_storage_is_exactly_conjugate_symmetric() {
        let eps = 1e-15;
        let m = ComplexMatrix::from_vec(2, vec![c(1.0, 1e-16), c(2.0, 3.0), c(2.0 + eps, -3.0), c(4.0, 0.0)]).unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h[(0, 1)], h[(1, 0)].conj());
        assert_eq!(h[(0, 0)].im, 0.0);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_non_finite_and_non_square() {
        assert_eq!(
            ComplexMatrix::from_vec(2, vec![c(f64::NAN, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::NonFinite)
        );
        assert!(matches!(
            ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![1.0]]),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn json_missing_im_is_real() {
        let m = ComplexMatrix::from_json_str(r#"{"n":2,"re":[[1,2],[3,4]]}"#).unwrap();
        assert_eq!(m[(1, 0)], c(3.0, 0.0));
        let back = serde_json::to_string(&m.to_json()).unwrap();
        assert_eq!(back, r#"{"n":2,"re":[[1.0,2.0],[3.0,4.0]]}"#);
    }

    #[test]
    fn json_with_im_round_trips() {
        let src = r#"{"n":2,"re":[[0,1],[0,0]],"im":[[0,-1],[1,0]]}"#;
        let m = ComplexMatrix::from_json_str(src).unwrap();
        assert_eq!(m[(0, 1)], c(1.0, -1.0));
        let again = ComplexMatrix::try_from(m.to_json()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn json_shape_errors() {
        assert!(ComplexMatrix::from_json_str(r#"{"n":2,"re":[[1,2]]}"#).is_err());
        assert!(ComplexMatrix::from_json_str(r#"{"n":1,"re":[[1]],"im":[[1,2]]}"#).is_err());
        assert!(ComplexMatrix::from_json_str(r#"{"n":0,"re":[]}"#).is_err());
        assert!(ComplexMatrix::from_json_str("not json").is_err());
    }

    #[test]
    fn quadratic_form_matches_definition() {
        let m = ComplexMatrix::from_vec(2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]).unwrap();
        let x = [c(1.0, 0.0), c(0.0, 1.0)];
        // M x = (0, i), and ⟨(0, i), x⟩ = i·conj(i) = 1.
        assert_eq!(m.quadratic_form(&x), c(1.0, 0.0));
    }
}
