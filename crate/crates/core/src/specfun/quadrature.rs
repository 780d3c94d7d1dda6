use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    PeriodicTrapezoid,
    GaussLegendre,
}

/// Nodes and weights on `[a, b]`.
///
/// Periodic-trapezoid rules sample `[a, b)` at `N` equispaced nodes and treat the
/// interval as one period.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: QuadratureKind,
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

pub const MIN_NODES: usize = 4;

impl QuadratureRule {
    pub fn periodic_trapezoid(a: f64, period: f64, n: usize) -> Result<Self> {
        check_rule(a, a + period, n)?;
        let w = period / n as f64;
        Ok(Self {
            kind: QuadratureKind::PeriodicTrapezoid,
            a,
            b: a + period,
            nodes: (0..n).map(|j| a + j as f64 * w).collect(),
            weights: vec![w; n],
        })
    }

    pub fn gauss_legendre(a: f64, b: f64, n: usize) -> Result<Self> {
        check_rule(a, b, n)?;
        let (x, w) = legendre_nodes(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        Ok(Self {
            kind: QuadratureKind::GaussLegendre,
            a,
            b,
            nodes: x.iter().map(|t| mid + half * t).collect(),
            weights: w.iter().map(|w| half * w).collect(),
        })
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weighted sum of samples taken at [`nodes`](Self::nodes).
    pub fn integrate_samples(&self, samples: &[f64]) -> Result<f64> {
        if samples.len() != self.nodes.len() {
            return Err(Error::SizeMismatch {
                expected: self.nodes.len(),
                got: samples.len(),
            });
        }
        Ok(samples.iter().zip(&self.weights).map(|(f, w)| f * w).sum())
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, w)| f(x) * w).sum()
    }
}

fn check_rule(a: f64, b: f64, n: usize) -> Result<()> {
    if n < MIN_NODES {
        return Err(Error::InvalidParameter(format!(
            "quadrature needs at least {MIN_NODES} nodes, got {n}"
        )));
    }
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::InvalidParameter(format!("bad interval [{a}, {b}]")));
    }
    Ok(())
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        dp = if d != 0.0 { d } else { dp };
        let weight = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_integrates_sin_squared_over_a_period() {
        let rule = QuadratureRule::periodic_trapezoid(0.0, 2.0 * PI, 16).unwrap();
        assert!((rule.integrate(|x| x.sin().powi(2)) - PI).abs() < 1e-12);
        assert!(rule.integrate(|x| x.sin().powi(3)).abs() < 1e-12);
    }

    #[test]
    fn two_point_gauss_is_exact_for_cubics() {
        // public rules need four nodes; check the raw 2-node rule directly
        let (x, w) = legendre_nodes(2);
        let val: f64 = x.iter().zip(&w).map(|(t, w)| 0.5 * w * (0.5 * (t + 1.0)).powi(3)).sum();
        assert!((val - 0.25).abs() < 1e-15);
        let rule = QuadratureRule::gauss_legendre(0.0, 1.0, 4).unwrap();
        assert!((rule.integrate(|x| x.powi(3)) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn gauss_exactness_degree() {
        for n in [4usize, 7, 20, 64] {
            let rule = QuadratureRule::gauss_legendre(-1.0, 2.0, n).unwrap();
            let d = 2 * n - 1;
            let exact = (2f64.powi(d as i32 + 1) - (-1f64).powi(d as i32 + 1)) / (d as f64 + 1.0);
            let got = rule.integrate(|x| x.powi(d as i32));
            assert!(((got - exact) / exact).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn trapezoid_exact_below_half_grid() {
        let n = 32;
        let rule = QuadratureRule::periodic_trapezoid(0.0, 2.0 * PI, n).unwrap();
        for m in 1..(n / 2) {
            let v = rule.integrate(|x| (m as f64 * x).cos() + (m as f64 * x).sin());
            assert!(v.abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn rejects_bad_rules() {
        assert!(QuadratureRule::gauss_legendre(0.0, 1.0, 3).is_err());
        assert!(QuadratureRule::gauss_legendre(1.0, 0.0, 8).is_err());
        let rule = QuadratureRule::periodic_trapezoid(0.0, 1.0, 8).unwrap();
        assert!(matches!(
            rule.integrate_samples(&[1.0; 7]),
            Err(Error::SizeMismatch { expected: 8, got: 7 })
        ));
    }
}
