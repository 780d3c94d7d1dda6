//! Boundary energy balance and the Green's-formula commutator identity.
//!
//! For `P = -h^2 Delta - 1`, a collar cutoff `chi_c(x_n)` around `H` and the
//! normal derivative taken outward from `M_-`,
//!
//! ```text
//! (i/h) int_{M_-} [P, chi_c h D_n] phi . conj(phi)
//!     = int_H ((h D_n)^2 phi) conj(phi) + int_H |h D_n phi|^2 .
//! ```
//!
//! On eigenfunctions `(h D_n)^2 phi = (1 + h^2 Delta_H) phi + kappa h^2 d_n phi`
//! along a curve of geodesic curvature `kappa`, so the first boundary term is
//! the tangential energy plus a curvature correction.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{EigenfunctionSpec, QuantumNumbers};
use crate::specfun::{jn, jn_deriv, jn_second_deriv, QuadratureRule};
use crate::traces::{Data, NormMethod, Surface, Trace};
use crate::windows::{paired_energy, smooth_step, tangential_energy};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RellichReport {
    pub h: f64,
    pub delta: f64,
    /// Tangential energy of the full Dirichlet trace.
    pub t_tan: f64,
    /// `||h d_nu phi||^2` on `H`.
    pub t_neu: f64,
    pub t_in: f64,
    pub t_tan_mid: f64,
    pub t_out: f64,
    /// `kappa h Re <h d_nu phi, phi>`; zero on geodesics.
    pub curvature_correction: f64,
    /// `int_H ((h D_n)^2 phi) conj(phi)` from the closed-form second normal derivative, disc only.
    pub normal_second: Option<f64>,
    pub commutator_lhs: Option<f64>,
    pub closure_residual: Option<f64>,
}

impl RellichReport {
    pub fn balance(&self) -> f64 {
        self.t_tan + self.t_neu
    }

    /// Tolerance scale used by the closure check.
    pub fn scale(&self) -> f64 {
        self.t_tan.abs() + self.t_neu + 1.0
    }

    pub fn closes(&self, rel: f64) -> bool {
        self.closure_residual.is_none_or(|r| r <= rel * self.scale())
    }
}

pub fn energy_balance(trace: &Trace, delta: f64) -> Result<RellichReport> {
    let h = trace.h;
    let t_tan = tangential_energy(&trace.dirichlet_series, h);
    let t_neu = crate::traces::norm_l2(trace, Data::Neumann, NormMethod::Parseval)?.powi(2);
    let split = paired_energy(&trace.dirichlet_series, h, delta)?;
    let len = trace.circumference();
    let pairing: f64 = len
        * trace
            .neumann_series
            .modes()
            .map(|(m, a)| (a * trace.dirichlet_series.coefficient(m).conj()).re)
            .sum::<f64>();
    let curvature_correction = trace.surface.geodesic_curvature() * h * pairing;
    let normal_second = match (trace.spec.quantum, trace.surface.surface) {
        (QuantumNumbers::Disc { .. }, Surface::DiscCircle { r0 }) => Some(normal_second_disc(&trace.spec, r0)?),
        _ => None,
    };
    Ok(RellichReport {
        h,
        delta,
        t_tan,
        t_neu,
        t_in: split.inner,
        t_tan_mid: split.tan,
        t_out: split.out,
        curvature_correction,
        normal_second,
        commutator_lhs: None,
        closure_residual: None,
    })
}

/// Energy balance plus the volume side of the identity over the collar `r0 - eps < r < r0`.
pub fn rellich_disc(trace: &Trace, delta: f64, eps: f64) -> Result<RellichReport> {
    let r0 = match trace.surface.surface {
        Surface::DiscCircle { r0 } => r0,
        _ => {
            return Err(Error::InvalidParameter(
                "the commutator side is only available on a disc circle".into(),
            ))
        }
    };
    let mut report = energy_balance(trace, delta)?;
    let lhs = commutator_lhs_disc(&trace.spec, r0, Collar::Bump { eps })?;
    report.commutator_lhs = Some(lhs);
    report.closure_residual = Some((lhs - (report.t_tan + report.curvature_correction + report.t_neu)).abs());
    Ok(report)
}

fn disc_numbers(spec: &EigenfunctionSpec) -> Result<u32> {
    match spec.quantum {
        QuantumNumbers::Disc { n, .. } => Ok(n),
        _ => Err(Error::InvalidParameter(format!(
            "expected a disc eigenfunction, got {}",
            spec.model.name()
        ))),
    }
}

/// `int_H ((h D_r)^2 phi) conj(phi)` on `r = r0`.
pub fn normal_second_disc(spec: &EigenfunctionSpec, r0: f64) -> Result<f64> {
    let n = disc_numbers(spec)?;
    let x = spec.lambda * r0;
    let c2 = spec.norm_const.powi(2);
    Ok(-2.0 * PI * r0 * c2 * jn_second_deriv(n, x) * jn(n, x))
}

/// `int_H ((h D_r)^2 phi) conj(phi) - T_tan` from the polar form of the Laplacian.
pub fn curvature_correction_disc(spec: &EigenfunctionSpec, r0: f64) -> Result<f64> {
    let n = disc_numbers(spec)?;
    let x = spec.lambda * r0;
    let c2 = spec.norm_const.powi(2);
    // 2 pi r0 c^2 h^2 (1/r0) lambda J J'
    Ok(2.0 * PI * c2 * spec.h * jn(n, x) * jn_deriv(n, x))
}

/// Boundary side `int_H ((h D_n)^2 phi) conj(phi) + int_H |h D_n phi|^2` on the disc circle.
pub fn boundary_side_disc(spec: &EigenfunctionSpec, r0: f64) -> Result<f64> {
    let n = disc_numbers(spec)?;
    let x = spec.lambda * r0;
    let c2 = spec.norm_const.powi(2);
    let (j, jp, jpp) = (jn(n, x), jn_deriv(n, x), jn_second_deriv(n, x));
    Ok(2.0 * PI * r0 * c2 * (jp * jp - jpp * j))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Collar {
    /// `chi_c(t) = chi(t / eps)` with the glancing bump.
    Bump {
        eps: f64,
    },
    Vanishing,
}

/// Second-order jet `(f, f', f'')`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Jet2(f64, f64, f64);

impl Jet2 {
    fn var(t: f64) -> Self {
        Jet2(t, 1.0, 0.0)
    }

    fn constant(c: f64) -> Self {
        Jet2(c, 0.0, 0.0)
    }

    fn exp(self) -> Self {
        let e = self.0.exp();
        Jet2(e, e * self.1, e * (self.2 + self.1 * self.1))
    }

    fn recip(self) -> Self {
        let v = 1.0 / self.0;
        Jet2(v, -self.1 * v * v, (2.0 * self.1 * self.1 * v - self.2) * v * v)
    }

    fn mul(self, o: Self) -> Self {
        Jet2(
            self.0 * o.0,
            self.1 * o.0 + self.0 * o.1,
            self.2 * o.0 + 2.0 * self.1 * o.1 + self.0 * o.2,
        )
    }

    fn add(self, o: Self) -> Self {
        Jet2(self.0 + o.0, self.1 + o.1, self.2 + o.2)
    }

    fn scale(self, c: f64) -> Self {
        Jet2(c * self.0, c * self.1, c * self.2)
    }
}

fn s_jet(t: Jet2) -> Jet2 {
    if t.0 > 0.0 {
        t.recip().scale(-1.0).exp()
    } else {
        Jet2::constant(0.0)
    }
}

/// Jet of `t -> chi(t / eps)` for `t <= 0`.
fn collar_jet(t: f64, eps: f64) -> Jet2 {
    // 2|t|/eps - 1 with |t| = -t
    let w = Jet2::var(t).scale(-2.0 / eps).add(Jet2::constant(-1.0));
    if w.0 <= 0.0 {
        return Jet2::constant(1.0);
    }
    if w.0 >= 1.0 {
        return Jet2::constant(0.0);
    }
    let a = s_jet(w);
    let b = s_jet(Jet2::constant(1.0).add(w.scale(-1.0)));
    let g = a.mul(a.add(b).recip());
    debug_assert!((g.0 - smooth_step(w.0)).abs() < 1e-14);
    Jet2::constant(1.0).add(g.scale(-1.0))
}

const START_NODES: usize = 64;
const MAX_NODES: usize = 4096;

/// `(i/h) int_{r < r0} [P, chi_c h D_r] phi . conj(phi)` by Gauss-Legendre in `r`.
pub fn commutator_lhs_disc(spec: &EigenfunctionSpec, r0: f64, collar: Collar) -> Result<f64> {
    let n = disc_numbers(spec)?;
    let eps = match collar {
        Collar::Vanishing => return Ok(0.0),
        Collar::Bump { eps } => eps,
    };
    if !(eps > 0.0 && eps < r0.min(1.0 - r0)) {
        return Err(Error::InvalidParameter(format!(
            "collar half-width eps = {eps} must lie in (0, {})",
            r0.min(1.0 - r0)
        )));
    }
    let lam = spec.lambda;
    let h = spec.h;
    let nf = n as f64;
    let integrand = |r: f64| {
        let chi = collar_jet(r - r0, eps);
        let x = lam * r;
        let (j, jp, jpp) = (jn(n, x), jn_deriv(n, x), jn_second_deriv(n, x));
        let body = chi.2 * lam * jp * j
            + 2.0 * chi.1 * lam * lam * jpp * j
            + chi.1 / r * lam * jp * j
            + chi.0 / (r * r) * lam * jp * j
            - 2.0 * nf * nf * chi.0 * j * j / (r * r * r);
        body * r
    };
    let pieces = [(r0 - eps, r0 - 0.5 * eps), (r0 - 0.5 * eps, r0)];
    let evaluate = |nodes: usize| -> Result<f64> {
        let mut total = 0.0;
        for (a, b) in pieces {
            total += QuadratureRule::gauss_legendre(a, b, nodes)?.integrate(integrand);
        }
        Ok(total)
    };
    let mut nodes = START_NODES;
    let mut prev = evaluate(nodes)?;
    while nodes < MAX_NODES {
        nodes *= 2;
        let next = evaluate(nodes)?;
        if (next - prev).abs() <= 1e-8 * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(-h * h * 2.0 * PI * spec.norm_const.powi(2) * next);
        }
        prev = next;
    }
    Err(Error::NoConvergence {
        what: "collar quadrature",
        detail: format!("n = {n}, lambda = {lam}, r0 = {r0}, eps = {eps}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{disc_eigenfunction, sphere_highest_weight, torus_plane_wave};
    use crate::traces::{restrict, Hypersurface};

    #[test]
    fn jet_matches_finite_differences() {
        let eps = 0.2;
        for t in [-0.18, -0.15, -0.12] {
            let j = collar_jet(t, eps);
            let d = 1e-5;
            let fp = collar_jet(t + d, eps).0;
            let fm = collar_jet(t - d, eps).0;
            assert!((j.1 - (fp - fm) / (2.0 * d)).abs() < 1e-6);
            assert!((j.2 - (fp - 2.0 * j.0 + fm) / (d * d)).abs() < 1e-3);
        }
        assert_eq!(collar_jet(0.0, eps), Jet2::constant(1.0));
        assert_eq!(collar_jet(-0.2, eps), Jet2::constant(0.0));
    }

    #[test]
    fn torus_balance() {
        let spec = torus_plane_wave(3, 4).unwrap();
        let tr = restrict(&spec, &Hypersurface::torus_line(0.0).unwrap(), None).unwrap();
        let rep = energy_balance(&tr, 0.6).unwrap();
        let e = 0.64 / (2.0 * PI);
        assert!((rep.t_tan - e).abs() < 1e-14);
        assert!((rep.t_neu - e).abs() < 1e-14);
        assert_eq!(rep.curvature_correction, 0.0);
    }

    #[test]
    fn equator_balance() {
        let spec = sphere_highest_weight(6).unwrap();
        let tr = restrict(&spec, &Hypersurface::sphere_equator(), None).unwrap();
        let rep = energy_balance(&tr, 0.6).unwrap();
        assert_eq!(rep.t_neu, 0.0);
        let expected = (1.0 - 36.0 / 42.0) * 2.0 * PI * spec.norm_const.powi(2);
        assert!((rep.t_tan - expected).abs() < 1e-13);
    }

    #[test]
    fn disc_closed_form_balance() {
        let spec = disc_eigenfunction(7, 3).unwrap();
        let tr = restrict(&spec, &Hypersurface::disc_circle(0.5).unwrap(), None).unwrap();
        let rep = energy_balance(&tr, 0.6).unwrap();
        let x = spec.lambda * 0.5;
        let h = spec.h;
        let expected =
            PI * spec.norm_const.powi(2) * ((1.0 - (14.0 * h).powi(2)) * jn(7, x).powi(2) + jn_deriv(7, x).powi(2));
        assert!((rep.balance() - expected).abs() < 1e-12 * expected.abs());
        let corr = curvature_correction_disc(&spec, 0.5).unwrap();
        assert!((rep.curvature_correction - corr).abs() < 1e-12 * corr.abs());
        // polar identity: second normal derivative term = T_tan + correction
        let second = rep.normal_second.unwrap();
        assert!((second - (rep.t_tan + corr)).abs() < 1e-10 * second.abs().max(1.0));
    }

    #[test]
    fn ground_state_closure() {
        let spec = disc_eigenfunction(0, 1).unwrap();
        let tr = restrict(&spec, &Hypersurface::disc_circle(0.5).unwrap(), None).unwrap();
        let rep = rellich_disc(&tr, 0.6, 0.2).unwrap();
        let rhs = boundary_side_disc(&spec, 0.5).unwrap();
        let lhs = rep.commutator_lhs.unwrap();
        assert!((lhs - rhs).abs() <= 1e-6 * rhs.abs(), "{lhs} vs {rhs}");
        assert!(rep.closes(1e-6));
        assert_eq!(commutator_lhs_disc(&spec, 0.5, Collar::Vanishing).unwrap(), 0.0);
    }

    #[test]
    fn collar_width_is_checked() {
        let spec = disc_eigenfunction(2, 1).unwrap();
        assert!(commutator_lhs_disc(&spec, 0.5, Collar::Bump { eps: 0.6 }).is_err());
        assert!(commutator_lhs_disc(&spec, 0.9, Collar::Bump { eps: 0.2 }).is_err());
    }
}
