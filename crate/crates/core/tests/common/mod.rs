//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use srl_core::models::{evaluate, EigenfunctionSpec, ModelId, QuantumNumbers};
use srl_core::specfun::QuadratureRule;

/// `J_n(x)` by Miller backward recurrence normalized with `J_0 + 2 sum J_2k = 1`.
pub fn miller_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let top = (n as f64).max(x);
    let mut m = (top + 30.0 + (50.0 * top).sqrt()) as usize;
    m += m % 2;
    let (mut next, mut cur) = (0.0f64, 1e-300f64);
    let mut sum = 0.0;
    let mut want = 0.0;
    for j in (0..m).rev() {
        // cur = J_{j+1}, next = J_{j+2}; produce J_j
        let prev = 2.0 * (j + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if j == n as usize {
            want = cur;
        }
        if j % 2 == 0 {
            sum += if j == 0 { cur } else { 2.0 * cur };
        }
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            sum *= 1e-250;
            want *= 1e-250;
        }
    }
    want / sum
}

/// Composite Gauss-Legendre nodes and weights on `[a, b]`.
pub fn panels(a: f64, b: f64, count: usize, nodes: usize) -> Vec<(f64, f64)> {
    let w = (b - a) / count as f64;
    (0..count)
        .flat_map(|p| {
            let rule = QuadratureRule::gauss_legendre(a + p as f64 * w, a + (p + 1) as f64 * w, nodes).unwrap();
            rule.nodes()
                .iter()
                .copied()
                .zip(rule.weights().iter().copied())
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `int_M |phi|^2` by tensor quadrature on the model chart.
pub fn norm_squared_2d(spec: &EigenfunctionSpec) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let trap = |count: usize| -> Vec<(f64, f64)> {
        (0..count)
            .map(|j| (two_pi * j as f64 / count as f64, two_pi / count as f64))
            .collect()
    };
    match (spec.model, spec.quantum) {
        (ModelId::Disc, QuantumNumbers::Disc { n, .. }) => {
            let radial = panels(0.0, 1.0, (spec.lambda / 2.0).ceil() as usize + 4, 24);
            let angular = trap(2 * n as usize + 8);
            integrate(spec, &radial, &angular, |r, _| r)
        }
        (ModelId::Sphere, QuantumNumbers::Sphere { k }) => {
            let polar = panels(0.0, std::f64::consts::PI, k as usize / 4 + 6, 32);
            let angular = trap(2 * k as usize + 8);
            integrate(spec, &polar, &angular, |phi, _| phi.sin())
        }
        (ModelId::Torus, QuantumNumbers::Torus { m1, m2 }) => {
            let a = trap(2 * m1.unsigned_abs() as usize + 8);
            let b = trap(2 * m2.unsigned_abs() as usize + 8);
            integrate(spec, &a, &b, |_, _| 1.0)
        }
        _ => panic!("inconsistent spec"),
    }
}

fn integrate(
    spec: &EigenfunctionSpec,
    first: &[(f64, f64)],
    second: &[(f64, f64)],
    jac: impl Fn(f64, f64) -> f64,
) -> f64 {
    let mut total = 0.0;
    for &(x, wx) in first {
        for &(y, wy) in second {
            total += wx * wy * jac(x, y) * evaluate(spec, [x, y]).unwrap().norm_sqr();
        }
    }
    total
}
