//! Composite Gauss–Legendre quadrature with panel doubling.
//!
//! The panel count starts at `initial_panels` and doubles until two
//! successive results differ by at most `atol + rtol·‖result‖`. The finer
//! result is returned together with that difference as the error estimate.
//! Panels and nodes are summed in a fixed order, so results are
//! bit-reproducible.

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureConfig {
    pub nodes_per_panel: usize,
    pub initial_panels: usize,
    pub max_doublings: usize,
    pub atol: f64,
    pub rtol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            nodes_per_panel: 16,
            initial_panels: 4,
            max_doublings: 12,
            atol: 1e-11,
            rtol: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_panel == 0 || self.initial_panels == 0 || self.max_doublings == 0 {
            return Err(Error::InvalidConfig("quadrature counts must be positive".into()));
        }
        if !(self.atol > 0.0 && self.rtol > 0.0) {
            return Err(Error::InvalidConfig("quadrature tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Values that can be integrated: a vector space with a norm.
pub trait QuadValue: Clone {
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, w: f64, other: &Self);
    fn distance(&self, other: &Self) -> f64;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }

    fn add_scaled(&mut self, w: f64, other: &Self) {
        *self += w * other;
    }

    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

/// Frobenius-norm metric; sums of real multiples stay exactly Hermitian.
impl QuadValue for HermitianMatrix {
    fn zero_like(&self) -> Self {
        HermitianMatrix::from_real_diag(&vec![0.0; self.dim()])
    }

    fn add_scaled(&mut self, w: f64, other: &Self) {
        for (d, s) in self.data_mut().iter_mut().zip(other.as_matrix().as_slice()) {
            *d += s * w;
        }
    }

    fn distance(&self, other: &Self) -> f64 {
        self.sub(other).frobenius_norm()
    }

    fn magnitude(&self) -> f64 {
        self.frobenius_norm()
    }
}

/// Integrand with optional exact values at the interval ends, for
/// removable singularities where the formula itself is undefined.
pub struct Integrand<V, F> {
    eval: F,
    lo_value: Option<V>,
    hi_value: Option<V>,
}

impl<V, F: Fn(f64) -> Result<V>> Integrand<V, F> {
    pub fn new(eval: F) -> Self {
        Self {
            eval,
            lo_value: None,
            hi_value: None,
        }
    }

    pub fn with_lo_value(mut self, value: V) -> Self {
        self.lo_value = Some(value);
        self
    }

    pub fn with_hi_value(mut self, value: V) -> Self {
        self.hi_value = Some(value);
        self
    }

    fn value(&self, t: f64, lo: f64, hi: f64) -> Result<V>
    where
        V: Clone,
    {
        match (&self.lo_value, &self.hi_value) {
            (Some(v), _) if t == lo => Ok(v.clone()),
            (_, Some(v)) if t == hi => Ok(v.clone()),
            _ => (self.eval)(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature<V> {
    pub value: V,
    /// Difference between the last two refinement levels.
    pub error: f64,
    pub panels: usize,
    pub evaluations: usize,
}

/// Gauss–Legendre nodes and weights on [−1, 1].
#[derive(Clone, Debug)]
struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on P_n from Chebyshev starting guesses.
    fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }
}

/// (P_n(z), P_n'(z)) via the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Reusable integrator holding a precomputed rule.
#[derive(Clone, Debug)]
pub struct Integrator {
    cfg: QuadratureConfig,
    rule: GaussLegendre,
}

impl Default for Integrator {
    fn default() -> Self {
        Self::new(QuadratureConfig::default()).expect("default config is valid")
    }
}

impl Integrator {
    pub fn new(cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            rule: GaussLegendre::new(cfg.nodes_per_panel),
        })
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    /// Composite rule with a fixed number of equal panels.
    pub fn composite<V, F>(&self, f: &Integrand<V, F>, lo: f64, hi: f64, panels: usize) -> Result<V>
    where
        V: QuadValue,
        F: Fn(f64) -> Result<V>,
    {
        let h = (hi - lo) / panels as f64;
        let mut acc: Option<V> = None;
        for p in 0..panels {
            let a = lo + h * p as f64;
            let mid = a + 0.5 * h;
            let mut panel: Option<V> = None;
            for (x, w) in self.rule.nodes.iter().zip(&self.rule.weights) {
                let t = mid + 0.5 * h * x;
                let y = f.value(t, lo, hi)?;
                match panel.as_mut() {
                    Some(sum) => sum.add_scaled(*w, &y),
                    None => {
                        let mut sum = y.zero_like();
                        sum.add_scaled(*w, &y);
                        panel = Some(sum);
                    }
                }
            }
            let panel = panel.expect("rule has at least one node");
            match acc.as_mut() {
                Some(sum) => sum.add_scaled(0.5 * h, &panel),
                None => {
                    let mut sum = panel.zero_like();
                    sum.add_scaled(0.5 * h, &panel);
                    acc = Some(sum);
                }
            }
        }
        Ok(acc.expect("at least one panel"))
    }

    pub fn integrate<V, F>(&self, f: &Integrand<V, F>, lo: f64, hi: f64) -> Result<Quadrature<V>>
    where
        V: QuadValue,
        F: Fn(f64) -> Result<V>,
    {
        if !(lo < hi) {
            return Err(Error::InvalidParams(format!("integration interval [{lo}, {hi}] is empty")));
        }
        let mut panels = self.cfg.initial_panels;
        let mut evaluations = panels * self.cfg.nodes_per_panel;
        let mut previous = self.composite(f, lo, hi, panels)?;
        for _ in 0..self.cfg.max_doublings {
            panels *= 2;
            evaluations += panels * self.cfg.nodes_per_panel;
            let current = self.composite(f, lo, hi, panels)?;
            let error = current.distance(&previous);
            if error <= self.cfg.atol + self.cfg.rtol * current.magnitude() {
                return Ok(Quadrature {
                    value: current,
                    error,
                    panels,
                    evaluations,
                });
            }
            previous = current;
        }
        Err(Error::NoConvergence {
            what: "adaptive quadrature",
            iterations: self.cfg.max_doublings,
        })
    }
}

/// One-shot integration with a freshly built rule.
pub fn integrate<V, F>(f: &Integrand<V, F>, lo: f64, hi: f64, cfg: QuadratureConfig) -> Result<Quadrature<V>>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V>,
{
    Integrator::new(cfg)?.integrate(f, lo, hi)
}

/// Convenience for plain scalar integrands that cannot fail.
pub fn integrate_scalar(quad: &Integrator, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Result<Quadrature<f64>> {
    quad.integrate(&Integrand::new(|t| Ok(f(t))), lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_weights_sum_to_two_and_nodes_are_symmetric() {
        for n in [1, 2, 5, 16, 33] {
            let r = GaussLegendre::new(n);
            assert_relative_eq!(r.weights.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
            for i in 0..n {
                assert_eq!(r.nodes[i], -r.nodes[n - 1 - i]);
            }
        }
    }

    #[test]
    fn linear_integrand() {
        let q = integrate_scalar(&Integrator::default(), 0.0, 1.0, |t| t).unwrap();
        assert_relative_eq!(q.value, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn centered_quadratic() {
        let q = integrate_scalar(&Integrator::default(), 0.0, 1.0, |t| (t - 0.5) * t).unwrap();
        assert_relative_eq!(q.value, 1.0 / 12.0, max_relative = 1e-14);
    }

    #[test]
    fn heinz_kernel_at_e() {
        let x = std::f64::consts::E;
        let q = integrate_scalar(&Integrator::default(), 0.5, 1.0, |t| (x.powf(t) + x.powf(1.0 - t)) / 2.0).unwrap();
        assert_relative_eq!(q.value, (x - 1.0) / 2.0, max_relative = 1e-14);
        assert_relative_eq!(q.value, 0.859_140_914_229_522_6, max_relative = 1e-14);
    }

    #[test]
    fn degree_31_is_exact_on_one_panel() {
        let quad = Integrator::default();
        let f = Integrand::new(|t: f64| Ok(t.powi(31) + 3.0 * t.powi(30)));
        let v = quad.composite(&f, 0.0, 1.0, 1).unwrap();
        let exact = 1.0 / 32.0 + 3.0 / 31.0;
        assert!((v - exact).abs() <= 1e-13 * exact);
    }

    #[test]
    fn endpoint_values_are_used_only_at_the_ends() {
        let f = Integrand::new(|t: f64| Ok(t.sin() / t)).with_lo_value(1.0);
        assert_eq!(f.value(0.0, 0.0, 1.0).unwrap(), 1.0);
        let q = Integrator::default().integrate(&f, 0.0, 1.0).unwrap();
        assert_relative_eq!(q.value, 0.946_083_070_367_183, max_relative = 1e-14);
    }

    #[test]
    fn rough_integrand_exhausts_doublings() {
        let cfg = QuadratureConfig {
            max_doublings: 2,
            ..QuadratureConfig::default()
        };
        let quad = Integrator::new(cfg).unwrap();
        let err = integrate_scalar(&quad, 0.0, 1.0, |t| (200.0 * t).sin().signum()).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn diagonal_matrix_matches_entrywise() {
        let quad = Integrator::default();
        let f = Integrand::new(|t: f64| Ok(HermitianMatrix::from_real_diag(&[t.exp(), t * t, 1.0])));
        let m = quad.integrate(&f, 0.0, 2.0).unwrap();
        let expected = [
            integrate_scalar(&quad, 0.0, 2.0, f64::exp).unwrap().value,
            integrate_scalar(&quad, 0.0, 2.0, |t| t * t).unwrap().value,
            2.0,
        ];
        for (i, e) in expected.iter().enumerate() {
            assert!((m.value[(i, i)].re - e).abs() <= 1e-11);
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(integrate_scalar(&Integrator::default(), 1.0, 1.0, |t| t).is_err());
        assert!(Integrator::new(QuadratureConfig {
            atol: 0.0,
            ..QuadratureConfig::default()
        })
        .is_err());
    }
}
