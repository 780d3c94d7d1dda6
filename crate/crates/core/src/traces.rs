//! Dirichlet and normalized Neumann traces on closed curves.
//!
//! Every curve here is a flat circle of length `L` parametrized by arclength
//! (or a fixed multiple of it), so tangential frequencies are exactly the
//! Fourier modes `e^{2 pi i m t / L}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{EigenfunctionSpec, ModelId, QuantumNumbers};
use crate::specfun::{jn, jn_deriv, FourierSeries, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Surface {
    /// `r = r0`, normal `d_r`.
    DiscCircle { r0: f64 },
    /// `theta = 0` with `phi` running over `[0, 2 pi)`; normal `(sin phi)^{-1} d_theta`.
    SphereMeridian,
    /// `phi = pi / 2`; normal `d_phi`.
    SphereEquator,
    /// `x2 = c`; normal `d_2`.
    TorusLine { c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hypersurface {
    pub model: ModelId,
    pub surface: Surface,
    pub circumference: f64,
}

impl Hypersurface {
    pub fn disc_circle(r0: f64) -> Result<Self> {
        if !(r0 > 0.0 && r0 < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "disc circle radius r0 = {r0} must lie in (0, 1)"
            )));
        }
        Ok(Self {
            model: ModelId::Disc,
            surface: Surface::DiscCircle { r0 },
            circumference: 2.0 * PI * r0,
        })
    }

    pub fn sphere_meridian() -> Self {
        Self {
            model: ModelId::Sphere,
            surface: Surface::SphereMeridian,
            circumference: 2.0 * PI,
        }
    }

    pub fn sphere_equator() -> Self {
        Self {
            model: ModelId::Sphere,
            surface: Surface::SphereEquator,
            circumference: 2.0 * PI,
        }
    }

    pub fn torus_line(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!("torus line offset {c} must be finite")));
        }
        Ok(Self {
            model: ModelId::Torus,
            surface: Surface::TorusLine { c },
            circumference: 2.0 * PI,
        })
    }

    /// Geodesic curvature of the curve, signed with respect to its normal.
    pub fn geodesic_curvature(&self) -> f64 {
        match self.surface {
            Surface::DiscCircle { r0 } => 1.0 / r0,
            _ => 0.0,
        }
    }

    pub fn name(&self) -> String {
        match self.surface {
            Surface::DiscCircle { r0 } => format!("disc-circle(r0={r0})"),
            Surface::SphereMeridian => "sphere-meridian".into(),
            Surface::SphereEquator => "sphere-equator".into(),
            Surface::TorusLine { c } => format!("torus-line(x2={c})"),
        }
    }

    /// Largest `|m|` carried by the trace of `spec`.
    pub fn band_limit(&self, spec: &EigenfunctionSpec) -> Result<usize> {
        self.check_model(spec)?;
        Ok(match spec.quantum {
            QuantumNumbers::Disc { n, .. } => n as usize,
            QuantumNumbers::Sphere { k } => k as usize,
            QuantumNumbers::Torus { m1, .. } => m1.unsigned_abs() as usize,
        })
    }

    pub fn check_model(&self, spec: &EigenfunctionSpec) -> Result<()> {
        if self.model != spec.model {
            return Err(Error::ModelMismatch {
                model: spec.model.name(),
                surface: self.model.name(),
            });
        }
        Ok(())
    }
}

/// Smallest admissible grid for a band limit.
pub fn min_grid(band: usize) -> usize {
    4 * band + 8
}

pub fn default_grid(band: usize) -> usize {
    4 * band + 16
}

/// Samples come from the closed forms; the attached series carry the exact
/// Fourier coefficients of the same closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub surface: Hypersurface,
    pub spec: EigenfunctionSpec,
    pub h: f64,
    pub grid: usize,
    pub dirichlet: Vec<Complex64>,
    /// `h d_nu phi` along the curve.
    pub neumann: Vec<Complex64>,
    pub dirichlet_series: FourierSeries,
    pub neumann_series: FourierSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Data {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMethod {
    Quadrature,
    Parseval,
}

/// Restrict `spec` to `surface` on a grid of `grid` points (default `4 band + 16`).
pub fn restrict(spec: &EigenfunctionSpec, surface: &Hypersurface, grid: Option<usize>) -> Result<Trace> {
    let band = surface.band_limit(spec)?;
    let grid = grid.unwrap_or_else(|| default_grid(band));
    let needed = min_grid(band);
    if grid < needed || !grid.is_multiple_of(2) {
        return Err(Error::BandLimit { grid, band, needed });
    }
    let len = surface.circumference;
    let c = spec.norm_const;
    let h = spec.h;
    let t = |j: usize| len * j as f64 / grid as f64;
    let zero = Complex64::new(0.0, 0.0);
    let mut dirichlet_coeffs = vec![zero; grid];
    let mut neumann_coeffs = vec![zero; grid];
    let half = (grid / 2) as i64;
    let mut put = |m: i64, d: Complex64, n: Complex64| {
        dirichlet_coeffs[(m + half) as usize] = d;
        neumann_coeffs[(m + half) as usize] = n;
    };
    let (dirichlet, neumann): (Vec<Complex64>, Vec<Complex64>) = match (spec.quantum, surface.surface) {
        (QuantumNumbers::Disc { n, .. }, Surface::DiscCircle { r0 }) => {
            let x = spec.lambda * r0;
            let d = c * jn(n, x);
            let nm = c * h * spec.lambda * jn_deriv(n, x);
            put(n as i64, d.into(), nm.into());
            (0..grid)
                .map(|j| {
                    let phase = Complex64::from_polar(1.0, n as f64 * t(j) / r0);
                    (d * phase, nm * phase)
                })
                .unzip()
        }
        (QuantumNumbers::Sphere { k }, Surface::SphereMeridian) => {
            // i^k sin^k = i^k (e^{i phi} - e^{-i phi})^k / (2i)^k
            let kf = k as f64;
            for (j, b) in binomial_halves(k).into_iter().enumerate() {
                put(k as i64 - 2 * j as i64, (c * sign(j) * b).into(), zero);
            }
            for (j, b) in binomial_halves(k - 1).into_iter().enumerate() {
                let m = k as i64 - 1 - 2 * j as i64;
                neumann_coeffs[(m + half) as usize] = (c * h * kf * sign(j) * b).into();
            }
            let ik = i_pow(k as i64);
            let ik1 = i_pow(k as i64 - 1);
            (0..grid)
                .map(|j| {
                    let s = t(j).sin();
                    let d = ik * (c * s.powi(k as i32));
                    let nm = ik1 * (c * h * kf * s.powi(k as i32 - 1));
                    (d, nm)
                })
                .unzip()
        }
        (QuantumNumbers::Sphere { k }, Surface::SphereEquator) => {
            let ik = i_pow(k as i64);
            put(-(k as i64), ik * c, zero);
            (0..grid)
                .map(|j| (ik * Complex64::from_polar(c, -(k as f64) * t(j)), zero))
                .unzip()
        }
        (QuantumNumbers::Torus { m1, m2 }, Surface::TorusLine { c: x2 }) => {
            let i = Complex64::new(0.0, 1.0);
            let a = Complex64::from_polar(c, m2 as f64 * x2);
            put(m1, a, i * (m2 as f64 * h) * a);
            (0..grid)
                .map(|j| {
                    let d = Complex64::from_polar(c, m1 as f64 * t(j) + m2 as f64 * x2);
                    (d, i * (m2 as f64 * h) * d)
                })
                .unzip()
        }
        _ => {
            return Err(Error::ModelMismatch {
                model: spec.model.name(),
                surface: surface.model.name(),
            })
        }
    };
    let dirichlet_series = FourierSeries::from_coefficients(len, dirichlet_coeffs)?;
    let neumann_series = FourierSeries::from_coefficients(len, neumann_coeffs)?;
    Ok(Trace {
        surface: *surface,
        spec: *spec,
        h,
        grid,
        dirichlet,
        neumann,
        dirichlet_series,
        neumann_series,
    })
}

fn sign(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `C(k, j) / 2^k` for `j = 0..=k`, through logarithms so large `k` stays finite.
fn binomial_halves(k: u32) -> Vec<f64> {
    let base = -(k as f64) * std::f64::consts::LN_2;
    let mut ln_c = 0.0;
    let mut out = Vec::with_capacity(k as usize + 1);
    out.push(base.exp());
    for j in 1..=k {
        ln_c += ((k - j + 1) as f64 / j as f64).ln();
        out.push((ln_c + base).exp());
    }
    out
}

fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl Trace {
    pub fn circumference(&self) -> f64 {
        self.surface.circumference
    }

    pub fn samples(&self, which: Data) -> &[Complex64] {
        match which {
            Data::Dirichlet => &self.dirichlet,
            Data::Neumann => &self.neumann,
        }
    }

    pub fn series(&self, which: Data) -> &FourierSeries {
        match which {
            Data::Dirichlet => &self.dirichlet_series,
            Data::Neumann => &self.neumann_series,
        }
    }

    /// Grid parameter of sample `j` (arclength on the disc circle, the chart angle elsewhere).
    pub fn parameter(&self, j: usize) -> f64 {
        self.circumference() * j as f64 / self.grid as f64
    }

    /// `R(m) = (2 pi m h / L)^2`.
    pub fn symbol(&self, m: i64) -> f64 {
        mode_symbol(m, self.h, self.circumference())
    }

    /// CSV with columns `t, re_dirichlet, im_dirichlet, re_neumann, im_neumann`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re_dirichlet,im_dirichlet,re_neumann,im_neumann\n");
        for (j, (d, n)) in self.dirichlet.iter().zip(&self.neumann).enumerate() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                self.parameter(j),
                d.re,
                d.im,
                n.re,
                n.im
            ));
        }
        out
    }
}

pub fn mode_symbol(m: i64, h: f64, circumference: f64) -> f64 {
    (2.0 * PI * m as f64 * h / circumference).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSymbol {
    pub m: i64,
    pub r: f64,
}

pub fn mode_symbols(trace: &Trace) -> Vec<ModeSymbol> {
    trace
        .dirichlet_series
        .modes()
        .map(|(m, _)| ModeSymbol { m, r: trace.symbol(m) })
        .collect()
}

pub fn norm_l2(trace: &Trace, which: Data, method: NormMethod) -> Result<f64> {
    let sq = match method {
        NormMethod::Parseval => trace.series(which).norm_squared(),
        NormMethod::Quadrature => {
            let rule = QuadratureRule::periodic_trapezoid(0.0, trace.circumference(), trace.grid)?;
            let abs_sq: Vec<f64> = trace.samples(which).iter().map(|u| u.norm_sqr()).collect();
            rule.integrate_samples(&abs_sq)?
        }
    };
    Ok(sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{disc_eigenfunction, sphere_highest_weight, torus_plane_wave};

    #[test]
    fn torus_norms() {
        let spec = torus_plane_wave(3, 4).unwrap();
        let tr = restrict(&spec, &Hypersurface::torus_line(0.0).unwrap(), Some(64)).unwrap();
        let d = norm_l2(&tr, Data::Dirichlet, NormMethod::Quadrature).unwrap();
        let n = norm_l2(&tr, Data::Neumann, NormMethod::Parseval).unwrap();
        assert!((d * d - 1.0 / (2.0 * PI)).abs() < 1e-14);
        assert!((n * n - 0.64 / (2.0 * PI)).abs() < 1e-14);
        assert!((tr.symbol(3) - 0.36).abs() < 1e-15);
    }

    #[test]
    fn equator_neumann_vanishes() {
        let spec = sphere_highest_weight(7).unwrap();
        let tr = restrict(&spec, &Hypersurface::sphere_equator(), None).unwrap();
        assert!(tr.neumann.iter().all(|v| *v == Complex64::new(0.0, 0.0)));
        let d = norm_l2(&tr, Data::Dirichlet, NormMethod::Quadrature).unwrap();
        assert!((d - (2.0 * PI).sqrt() * spec.norm_const).abs() < 1e-14);
    }

    #[test]
    fn meridian_neumann_quadrature_k3() {
        let spec = sphere_highest_weight(3).unwrap();
        let tr = restrict(&spec, &Hypersurface::sphere_meridian(), None).unwrap();
        let n = norm_l2(&tr, Data::Neumann, NormMethod::Quadrature).unwrap();
        let unnormalized = (n / (spec.norm_const * spec.h)).powi(2);
        assert!((unnormalized - 27.0 * PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn disc_single_mode_norm() {
        let spec = disc_eigenfunction(5, 3).unwrap();
        let tr = restrict(&spec, &Hypersurface::disc_circle(0.5).unwrap(), None).unwrap();
        let expected = (spec.norm_const * jn(5, spec.lambda * 0.5)).abs() * (PI).sqrt();
        for method in [NormMethod::Quadrature, NormMethod::Parseval] {
            let d = norm_l2(&tr, Data::Dirichlet, method).unwrap();
            assert!((d - expected).abs() < 1e-12 * expected);
        }
        let syms = mode_symbols(&tr);
        let r5 = syms.iter().find(|s| s.m == 5).unwrap().r;
        assert!((r5 - (2.0 * 5.0 * spec.h).powi(2)).abs() < 1e-15);
        assert_eq!(syms.iter().find(|s| s.m == 0).unwrap().r, 0.0);
    }

    #[test]
    fn exact_coefficients_match_fft() {
        use crate::specfun::analyze_fourier;
        let cases = [
            (
                disc_eigenfunction(9, 4).unwrap(),
                Hypersurface::disc_circle(0.3).unwrap(),
            ),
            (sphere_highest_weight(1).unwrap(), Hypersurface::sphere_meridian()),
            (sphere_highest_weight(40).unwrap(), Hypersurface::sphere_meridian()),
            (sphere_highest_weight(40).unwrap(), Hypersurface::sphere_equator()),
            (torus_plane_wave(-7, 2).unwrap(), Hypersurface::torus_line(0.4).unwrap()),
        ];
        for (spec, surface) in cases {
            let tr = restrict(&spec, &surface, None).unwrap();
            for which in [Data::Dirichlet, Data::Neumann] {
                let fft = analyze_fourier(tr.samples(which), tr.circumference()).unwrap();
                let exact = tr.series(which);
                let peak = exact.peak().max(1e-300);
                for (m, a) in exact.modes() {
                    assert!(
                        (a - fft.coefficient(m)).norm() <= 1e-12 * peak,
                        "{} m={m}",
                        surface.name()
                    );
                }
                let q = norm_l2(&tr, which, NormMethod::Quadrature).unwrap();
                let p = norm_l2(&tr, which, NormMethod::Parseval).unwrap();
                assert!((q - p).abs() <= 1e-10 * p.max(1e-300));
            }
        }
    }

    #[test]
    fn rejections() {
        let spec = disc_eigenfunction(10, 2).unwrap();
        let circle = Hypersurface::disc_circle(0.5).unwrap();
        assert!(matches!(
            restrict(&spec, &circle, Some(40)),
            Err(Error::BandLimit { needed: 48, .. })
        ));
        assert!(matches!(
            restrict(&spec, &Hypersurface::sphere_equator(), None),
            Err(Error::ModelMismatch { .. })
        ));
        assert!(Hypersurface::disc_circle(1.0).is_err());
    }
}
