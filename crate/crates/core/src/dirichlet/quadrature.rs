//! Gauss–Legendre rules and the node-count settings used by the area-integral oracle.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Node counts for the polar-coordinate area integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes in the graded radial variable.
    pub radial_nodes: usize,
    /// Trapezoid nodes in the angle.
    pub angular_nodes: usize,
    /// Exponent `q` of the substitution `r = R u^q`; clusters nodes at the atom.
    pub radial_grading_exponent: f64,
    /// Allowed relative gap between the result at these counts and at doubled
    /// counts. `None` picks 1e-6 for interior atoms and 1e-4 on the circle.
    pub tolerance: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial_nodes: 64,
            angular_nodes: 256,
            radial_grading_exponent: 2.0,
            tolerance: None,
        }
    }
}

impl QuadratureSpec {
    pub fn new(radial_nodes: usize, angular_nodes: usize, radial_grading_exponent: f64) -> Result<Self> {
        let spec = Self {
            radial_nodes,
            angular_nodes,
            radial_grading_exponent,
            tolerance: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = Some(tolerance);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 8 {
            return Err(Error::InvalidArgument(format!(
                "radial_nodes must be >= 8, got {}",
                self.radial_nodes
            )));
        }
        if self.angular_nodes < 16 {
            return Err(Error::InvalidArgument(format!(
                "angular_nodes must be >= 16, got {}",
                self.angular_nodes
            )));
        }
        if !(self.radial_grading_exponent >= 1.0 && self.radial_grading_exponent.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "radial_grading_exponent must be >= 1, got {}",
                self.radial_grading_exponent
            )));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidArgument(format!("tolerance must be > 0, got {t}")));
            }
        }
        Ok(())
    }

    pub(crate) fn refined(&self) -> Self {
        Self {
            radial_nodes: 2 * self.radial_nodes,
            angular_nodes: 2 * self.angular_nodes,
            ..*self
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let prev = if n == 0 { 0.0 } else { p0 };
    let d = n as f64 * (x * p - prev) / (x * x - 1.0);
    (p, d)
}

/// Gauss–Legendre rule mapped to `(0, 1)`.
pub(crate) fn unit_interval_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (
        x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        w.iter().map(|t| 0.5 * t).collect(),
    )
}
