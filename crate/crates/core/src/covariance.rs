//! Covariance-type inequalities for quadratic forms ⟨·x, x⟩ at a unit
//! vector x, and the numerical radius.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{abs_op, eigh, gram, inner, operator_norm, vector_norm, ComplexMatrix, HermitianMatrix, UnitVector};
use crate::suites::{InequalityReport, Link, SuiteId};

pub const DEFAULT_THETA_GRID: usize = 720;
pub const DEFAULT_REFINE_TOL: f64 = 1e-10;

/// Relative slack of the links in this module.
pub const COVARIANCE_REL_TOL: f64 = 1e-10;

/// Grid candidates within this relative distance of the best are refined too.
const CANDIDATE_BAND: f64 = 1e-3;

fn hermitian_part_max(t: &ComplexMatrix, theta: f64) -> Result<f64> {
    let phase = Complex64::from_polar(1.0, theta);
    let n = t.dim();
    let h = ComplexMatrix::from_fn(n, |i, j| (phase * t[(i, j)] + (phase * t[(j, i)]).conj()) * 0.5);
    Ok(eigh(&HermitianMatrix::symmetrize(h))?.max_eigenvalue())
}

/// ω(T) = max_θ λ_max(Re(e^{iθ} T)), by a θ grid plus golden-section
/// refinement around every grid maximum close to the best one.
pub fn numerical_radius(t: &ComplexMatrix, theta_grid: usize, refine_tol: f64) -> Result<f64> {
    if theta_grid < 8 {
        return Err(Error::InvalidParams(format!("theta grid needs at least 8 points, got {theta_grid}")));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let step = 2.0 * PI / theta_grid as f64;
    let values = (0..theta_grid)
        .map(|k| hermitian_part_max(t, step * k as f64))
        .collect::<Result<Vec<f64>>>()?;
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let band = CANDIDATE_BAND * best.abs().max(f64::MIN_POSITIVE);
    let mut result = best;
    for k in 0..theta_grid {
        let prev = values[(k + theta_grid - 1) % theta_grid];
        let next = values[(k + 1) % theta_grid];
        let here = values[k];
        if here < prev || here < next || here < best - band {
            continue;
        }
        let centre = step * k as f64;
        result = result.max(golden_max(|th| hermitian_part_max(t, th), centre - step, centre + step, refine_tol)?);
    }
    Ok(result)
}

fn golden_max(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(fc.max(fd))
}

/// Spectral bounds mI ⪯ A ⪯ MI and nI ⪯ B ⪯ NI.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumBounds {
    /// m
    pub a_min: f64,
    /// M
    pub a_max: f64,
    /// n
    pub b_min: f64,
    /// N
    pub b_max: f64,
}

impl SpectrumBounds {
    pub fn new(a_min: f64, a_max: f64, b_min: f64, b_max: f64) -> Result<Self> {
        let ok = |lo: f64, hi: f64| lo > 0.0 && lo <= hi && hi.is_finite();
        if !(ok(a_min, a_max) && ok(b_min, b_max)) {
            return Err(Error::InvalidParams(format!(
                "need 0 < m <= M and 0 < n <= N, got ({a_min}, {a_max}, {b_min}, {b_max})"
            )));
        }
        Ok(Self {
            a_min,
            a_max,
            b_min,
            b_max,
        })
    }

    /// The exact extreme eigenvalues of A and B.
    pub fn measured(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Self> {
        let (ea, eb) = (eigh(a)?, eigh(b)?);
        Self::new(ea.min_eigenvalue(), ea.max_eigenvalue(), eb.min_eigenvalue(), eb.max_eigenvalue())
    }

    pub fn a_width(&self) -> f64 {
        self.a_max - self.a_min
    }

    pub fn b_width(&self) -> f64 {
        self.b_max - self.b_min
    }

    /// (M − m)(N − n)/4.
    pub fn gruss_bound(&self) -> f64 {
        self.a_width() * self.b_width() / 4.0
    }

    /// Fails unless both spectral sandwiches hold up to `psd_rel·(1 + bound)`.
    pub fn verify(&self, a: &HermitianMatrix, b: &HermitianMatrix, psd_rel: f64) -> Result<()> {
        for (name, h, lo, hi) in [("A", a, self.a_min, self.a_max), ("B", b, self.b_min, self.b_max)] {
            let d = eigh(h)?;
            let tol = psd_rel * (1.0 + hi.abs());
            if d.min_eigenvalue() < lo - tol || d.max_eigenvalue() > hi + tol {
                return Err(Error::BoundsViolated(format!(
                    "spectrum of {name} is [{}, {}], outside [{lo}, {hi}]",
                    d.min_eigenvalue(),
                    d.max_eigenvalue()
                )));
            }
        }
        Ok(())
    }
}

/// 𝒞(A, x) = ⟨(M − A)(A − m)x, x⟩ and 𝒞(B, x).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CovarianceTerms {
    pub c_a: f64,
    pub c_b: f64,
}

impl CovarianceTerms {
    pub fn compute(a: &HermitianMatrix, b: &HermitianMatrix, bounds: &SpectrumBounds, x: &UnitVector) -> Result<Self> {
        Ok(Self {
            c_a: kantorovich_term(a, bounds.a_min, bounds.a_max, x)?,
            c_b: kantorovich_term(b, bounds.b_min, bounds.b_max, x)?,
        })
    }
}

/// ⟨(hi − H)(H − lo)x, x⟩ = Re⟨(H − lo)x, (hi − H)x⟩, with roundoff negatives clamped to 0.
fn kantorovich_term(h: &HermitianMatrix, lo: f64, hi: f64, x: &UnitVector) -> Result<f64> {
    let xs = x.as_slice();
    let hx = h.as_matrix().mul_vec(xs);
    let low: Vec<Complex64> = hx.iter().zip(xs).map(|(y, x)| y - x * lo).collect();
    let high: Vec<Complex64> = hx.iter().zip(xs).map(|(y, x)| x * hi - y).collect();
    let c = inner(&high, &low).re;
    let slack = 1e-12 * (1.0 + hi * hi);
    if c >= 0.0 {
        Ok(c)
    } else if c >= -slack {
        Ok(0.0)
    } else {
        Err(Error::BoundsViolated(format!("covariance term {c:e} is negative beyond roundoff")))
    }
}

fn check_dims(n: usize, x: &UnitVector) -> Result<()> {
    if x.dim() != n {
        return Err(Error::DimensionMismatch { left: n, right: x.dim() });
    }
    Ok(())
}

/// Quadratic forms of a Hermitian pair at x.
struct Moments {
    /// ⟨Ax, x⟩
    a: f64,
    b: f64,
    /// ⟨A²x, x⟩ = ‖Ax‖²
    a2: f64,
    b2: f64,
    /// ⟨ABx, x⟩ = ⟨Bx, Ax⟩
    ab: Complex64,
}

impl Moments {
    fn new(a: &ComplexMatrix, b: &ComplexMatrix, x: &UnitVector) -> Self {
        let xs = x.as_slice();
        let ax = a.mul_vec(xs);
        let bx = b.mul_vec(xs);
        Self {
            a: inner(&ax, xs).re,
            b: inner(&bx, xs).re,
            a2: vector_norm(&ax).powi(2),
            b2: vector_norm(&bx).powi(2),
            ab: inner(&bx, &ax),
        }
    }

    /// |⟨ABx, x⟩ − ⟨Ax, x⟩⟨Bx, x⟩|.
    fn covariance(&self) -> f64 {
        (self.ab - self.a * self.b).norm()
    }
}

fn rel_tol(scale: f64) -> f64 {
    COVARIANCE_REL_TOL * (1.0 + scale.abs())
}

/// |⟨|T||T*|x, x⟩ − ⟨|T|x, x⟩⟨|T*|x, x⟩| ≤ ‖|T|x‖‖|T*|x‖ − |⟨Tx, x⟩|².
pub fn check_thm51(t: &ComplexMatrix, x: &UnitVector) -> Result<InequalityReport> {
    check_dims(t.dim(), x)?;
    let abs_t = abs_op(t)?;
    let abs_t_star = abs_op(&t.adjoint())?;
    let m = Moments::new(abs_t.as_matrix(), abs_t_star.as_matrix(), x);
    let tx = t.quadratic_form(x.as_slice());
    let lhs = m.covariance();
    let rhs = (m.a2 * m.b2).sqrt() - tx.norm_sqr();
    let norm = operator_norm(t)?;
    Ok(InequalityReport::new(SuiteId::Thm51)
        .input("dim", t.dim())
        .link(Link::scalar("covariance <= norm product - |<Tx,x>|^2", lhs, rhs, rel_tol(norm * norm)))
        .gain(rhs - lhs))
}

/// Pointwise certificate of the numerical-radius refinement at each sample.
pub fn check_kittaneh_refinement(t: &ComplexMatrix, samples: &[UnitVector]) -> Result<InequalityReport> {
    check_kittaneh_with(t, samples, DEFAULT_THETA_GRID)
}

/// As [`check_kittaneh_refinement`] with an explicit θ grid for the
/// informational numerical radius.
pub fn check_kittaneh_with(t: &ComplexMatrix, samples: &[UnitVector], theta_grid: usize) -> Result<InequalityReport> {
    if samples.is_empty() {
        return Err(Error::InvalidParams("at least one unit vector is required".into()));
    }
    let abs_t = abs_op(t)?;
    let abs_t_star = abs_op(&t.adjoint())?;
    let sum = gram(t).add(&gram(&t.adjoint()));
    let rhs = eigh(&sum)?.spectral_radius() / 2.0;
    let tol = rel_tol(rhs);

    let mut worst: Option<(usize, f64)> = None;
    let mut min_cov = f64::INFINITY;
    let mut report = InequalityReport::new(SuiteId::Kittaneh).input("dim", t.dim()).input("samples", samples.len());
    for (i, x) in samples.iter().enumerate() {
        check_dims(t.dim(), x)?;
        let m = Moments::new(abs_t.as_matrix(), abs_t_star.as_matrix(), x);
        let cov = m.covariance();
        min_cov = min_cov.min(cov);
        let lhs = t.quadratic_form(x.as_slice()).norm_sqr() + cov;
        if worst.map_or(true, |(_, w)| lhs > w) {
            worst = Some((i, lhs));
        }
    }
    let (index, lhs) = worst.expect("samples is non-empty");
    let omega = numerical_radius(t, theta_grid, DEFAULT_REFINE_TOL)?;
    report = report
        .link(Link::scalar("max over samples of |<Tx,x>|^2 + covariance <= half norm", lhs, rhs, tol))
        .gain(rhs - lhs)
        .note("worst_sample", index as f64)
        .note("numerical_radius", omega)
        .note("aggregate_estimate", omega * omega + min_cov)
        .note("half_norm", rhs);
    Ok(report)
}

/// The (x3) inequality and the three-link chain derived from it.
pub fn check_x3_and_rem11(a: &HermitianMatrix, b: &HermitianMatrix, x: &UnitVector) -> Result<InequalityReport> {
    check_dims(a.dim(), x)?;
    check_dims(b.dim(), x)?;
    for h in [a, b] {
        let low = eigh(h)?.min_eigenvalue();
        if !(low > 0.0) {
            return Err(Error::NonPositiveInput {
                operation: "check_x3_and_rem11",
                value: low,
            });
        }
    }
    let m = Moments::new(a.as_matrix(), b.as_matrix(), x);
    let prod = m.a * m.b;
    let root = (m.a2 * m.b2).sqrt();
    let ab = m.ab.norm();
    let c1 = ((root + ab) / 2.0).powi(2);
    let c2 = (m.a2 * m.b2 + ab * ab) / 2.0;
    let c3 = m.a2 * m.b2;
    Ok(InequalityReport::new(SuiteId::X3Rem11)
        .input("dim", a.dim())
        .link(Link::scalar("x3", prod + m.covariance(), root, rel_tol(root)))
        .link(Link::scalar("covariance form", prod - ab, root - prod, rel_tol(root)))
        .link(Link::scalar("chain 1", prod * prod, c1, rel_tol(c1)))
        .link(Link::scalar("chain 2", c1, c2, rel_tol(c2)))
        .link(Link::scalar("chain 3", c2, c3, rel_tol(c3)))
        .gain(c3 - prod * prod))
}

/// ½(a²d² − b²c²)²/(a²d² + b²c²) + (a² − b²)(c² − d²) ≤ (ac − bd)².
pub fn lemma_y1(a: f64, b: f64, c: f64, d: f64) -> Result<InequalityReport> {
    if let Some(&bad) = [a, b, c, d].iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::NonPositiveInput {
            operation: "lemma_y1",
            value: bad,
        });
    }
    let (ad, bc) = ((a * d).powi(2), (b * c).powi(2));
    let quotient = 0.5 * (ad - bc).powi(2) / (ad + bc);
    let cross = (a * a - b * b) * (c * c - d * d);
    let rhs = (a * c - b * d).powi(2);
    let tol = COVARIANCE_REL_TOL * (1.0 + rhs.abs() + cross.abs() + quotient);
    Ok(InequalityReport::new(SuiteId::LemmaY1)
        .input("a", a)
        .input("b", b)
        .input("c", c)
        .input("d", d)
        .link(Link::scalar("lemma", quotient + cross, rhs, tol))
        .gain(quotient))
}

/// The refined Grüss bound (M−m)(N−n)/4 − (√(c_A c_B) + Q) with
/// Q = ((M−m)²c_B − (N−n)²c_A)² / (8((M−m)²c_B + (N−n)²c_A)).
///
/// The report also carries, as notes, the bound X − Y/(2X) that the
/// variance estimate and the scalar lemma give directly, where
/// X = αβ − √(c_A c_B), Y = ½(α²c_B − β²c_A)²/(α²c_B + β²c_A),
/// α = (M−m)/2 and β = (N−n)/2. It coincides with the checked bound
/// only when X = ½ and is always valid.
pub fn check_thm13(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    bounds: &SpectrumBounds,
    x: &UnitVector,
    psd_rel: f64,
) -> Result<InequalityReport> {
    check_dims(a.dim(), x)?;
    check_dims(b.dim(), x)?;
    bounds.verify(a, b, psd_rel)?;
    let terms = CovarianceTerms::compute(a, b, bounds, x)?;
    let m = Moments::new(a.as_matrix(), b.as_matrix(), x);
    let (wa, wb) = (bounds.a_width(), bounds.b_width());
    let (ca, cb) = (terms.c_a, terms.c_b);

    let denom = 8.0 * (wa * wa * cb + wb * wb * ca);
    let scale = 1.0 + (wa * wb).powi(2);
    let quotient = if denom < 1e-14 * scale {
        0.0
    } else {
        (wa * wa * cb - wb * wb * ca).powi(2) / denom
    };
    let plain = bounds.gruss_bound();
    let correction = (ca * cb).sqrt() + quotient;
    let bound = plain - correction;
    let lhs = m.covariance();
    let tol = rel_tol(plain);

    let (alpha, beta) = (wa / 2.0, wb / 2.0);
    let big_x = alpha * beta - (ca * cb).sqrt();
    let y_den = alpha * alpha * cb + beta * beta * ca;
    let big_y = if y_den < 1e-14 * scale {
        0.0
    } else {
        0.5 * (alpha * alpha * cb - beta * beta * ca).powi(2) / y_den
    };
    let derived = if big_x > 0.0 { big_x - big_y / (2.0 * big_x) } else { 0.0 };

    let var_a = m.a2 - m.a * m.a;
    let var_b = m.b2 - m.b * m.b;
    Ok(InequalityReport::new(SuiteId::Thm13)
        .input("dim", a.dim())
        .input("bounds", format!("[{}, {}] x [{}, {}]", bounds.a_min, bounds.a_max, bounds.b_min, bounds.b_max))
        .link(Link::scalar("variance of A <= ((M-m)/2)^2 - C(A,x)", var_a, alpha * alpha - ca, rel_tol(alpha * alpha)))
        .link(Link::scalar("variance of B <= ((N-n)/2)^2 - C(B,x)", var_b, beta * beta - cb, rel_tol(beta * beta)))
        .link(Link::scalar("covariance <= refined bound", lhs, bound, tol))
        .gain(correction)
        .note("c_a", ca)
        .note("c_b", cb)
        .note("plain_bound", plain)
        .note("correction_nonnegative", if correction >= 0.0 { 1.0 } else { 0.0 })
        .note("derived_bound", derived)
        .note("derived_margin", derived - lhs))
}

/// |⟨ABx,x⟩ − ⟨Ax,x⟩⟨Bx,x⟩| ≤ ‖A − (M+m)/2‖‖B − (N+n)/2‖ ≤ (M−m)(N−n)/4.
pub fn check_gruss_operator(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    bounds: &SpectrumBounds,
    x: &UnitVector,
    psd_rel: f64,
) -> Result<InequalityReport> {
    check_dims(a.dim(), x)?;
    check_dims(b.dim(), x)?;
    bounds.verify(a, b, psd_rel)?;
    let m = Moments::new(a.as_matrix(), b.as_matrix(), x);
    let da = eigh(&a.shift(-(bounds.a_max + bounds.a_min) / 2.0))?.spectral_radius();
    let db = eigh(&b.shift(-(bounds.b_max + bounds.b_min) / 2.0))?.spectral_radius();
    let (ha, hb) = (bounds.a_width() / 2.0, bounds.b_width() / 2.0);
    let plain = bounds.gruss_bound();
    let lhs = m.covariance();
    Ok(InequalityReport::new(SuiteId::GrussOp)
        .input("dim", a.dim())
        .link(Link::scalar("covariance <= norm product", lhs, da * db, rel_tol(da * db)))
        .link(Link::scalar("norm product <= (M-m)(N-n)/4", da * db, plain, rel_tol(plain)))
        .link(Link::scalar("centred norm of A <= (M-m)/2", da, ha, rel_tol(ha)))
        .link(Link::scalar("centred norm of B <= (N-n)/2", db, hb, rel_tol(hb)))
        .gain(plain - da * db))
}
