//! Rescaled frequency windows on a trace, applied as exact Fourier multipliers.
//!
//! A mode `m` sits at `u = (R(m) - 1) / h^delta`. The glancing cutoff `chi`
//! equals 1 on `|u| <= 1/2` and vanishes for `|u| >= 1`; the interior and
//! exterior cutoffs take up `1 - chi` on either side of zero.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{synthesize, FourierSeries};
use crate::traces::{mode_symbol, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    In,
    Tan,
    Out,
}

impl Window {
    pub const ALL: [Window; 3] = [Window::In, Window::Tan, Window::Out];
}

fn s(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth step: 0 for `t <= 0`, 1 for `t >= 1`.
pub fn smooth_step(t: f64) -> f64 {
    let a = s(t);
    let b = s(1.0 - t);
    a / (a + b)
}

/// The glancing bump `chi(u) = 1 - g(2|u| - 1)`.
pub fn bump(u: f64) -> f64 {
    1.0 - smooth_step(2.0 * u.abs() - 1.0)
}

pub fn cutoff_eval(kind: Window, u: f64) -> f64 {
    match kind {
        Window::Tan => bump(u),
        Window::In if u < 0.0 => 1.0 - bump(u),
        Window::Out if u > 0.0 => 1.0 - bump(u),
        _ => 0.0,
    }
}

/// Window scale exponent `delta` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffProfile {
    pub delta: f64,
}

impl CutoffProfile {
    pub fn new(delta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!("delta = {delta} must lie in [0, 1)")));
        }
        Ok(Self { delta })
    }

    /// Rescaled argument of mode symbol `r` at semiclassical parameter `h`.
    pub fn argument(&self, r: f64, h: f64) -> f64 {
        (r - 1.0) / h.powf(self.delta)
    }

    pub fn weight(&self, kind: Window, r: f64, h: f64) -> f64 {
        cutoff_eval(kind, self.argument(r, h))
    }
}

/// One value per window, serialized as `{in, tan, out}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerWindow {
    #[serde(rename = "in")]
    pub inner: f64,
    pub tan: f64,
    pub out: f64,
}

impl PerWindow {
    pub fn get(&self, w: Window) -> f64 {
        match w {
            Window::In => self.inner,
            Window::Tan => self.tan,
            Window::Out => self.out,
        }
    }

    fn from_fn(mut f: impl FnMut(Window) -> f64) -> Self {
        Self {
            inner: f(Window::In),
            tan: f(Window::Tan),
            out: f(Window::Out),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub delta: f64,
    pub norms: PerWindow,
    pub energies: PerWindow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowDecomposition {
    pub profile: CutoffProfile,
    pub h: f64,
    /// Filtered coefficient series, indexed like [`Window::ALL`].
    pub series: [FourierSeries; 3],
    pub samples: [Vec<Complex64>; 3],
    pub norms: PerWindow,
    pub energies: PerWindow,
}

impl WindowDecomposition {
    pub fn component(&self, w: Window) -> &[Complex64] {
        &self.samples[w as usize]
    }

    pub fn component_series(&self, w: Window) -> &FourierSeries {
        &self.series[w as usize]
    }

    pub fn report(&self) -> WindowReport {
        WindowReport {
            delta: self.profile.delta,
            norms: self.norms,
            energies: self.energies,
        }
    }
}

/// Split the Dirichlet trace into interior, glancing and exterior components.
pub fn window_decompose(trace: &Trace, delta: f64) -> Result<WindowDecomposition> {
    let profile = CutoffProfile::new(delta)?;
    let base = &trace.dirichlet_series;
    let len = trace.circumference();
    let h = trace.h;
    let filter = |w: Window| base.filtered(|m| profile.weight(w, mode_symbol(m, h, len), h));
    let series = [filter(Window::In), filter(Window::Tan), filter(Window::Out)];
    let samples = [
        synthesize(&series[0], trace.grid)?,
        synthesize(&series[1], trace.grid)?,
        synthesize(&series[2], trace.grid)?,
    ];
    let norms = PerWindow::from_fn(|w| series[w as usize].norm_squared().sqrt());
    let energies = PerWindow::from_fn(|w| tangential_energy(&series[w as usize], h));
    Ok(WindowDecomposition {
        profile,
        h,
        series,
        samples,
        norms,
        energies,
    })
}

/// `L sum_m (1 - R(m)) |a_m|^2`.
pub fn tangential_energy(series: &FourierSeries, h: f64) -> f64 {
    let len = series.period();
    len * series
        .modes()
        .map(|(m, a)| (1.0 - mode_symbol(m, h, len)) * a.norm_sqr())
        .sum::<f64>()
}

/// `L sum_m (1 - R(m)) chi_w(m) |a_m|^2`; the three windows add up to the full tangential energy.
pub fn paired_energy(series: &FourierSeries, h: f64, delta: f64) -> Result<PerWindow> {
    let profile = CutoffProfile::new(delta)?;
    let len = series.period();
    Ok(PerWindow::from_fn(|w| {
        len * series
            .modes()
            .map(|(m, a)| {
                let r = mode_symbol(m, h, len);
                (1.0 - r) * profile.weight(w, r, h) * a.norm_sqr()
            })
            .sum::<f64>()
    }))
}

/// `L^2(H)` norm of the exterior component of the Dirichlet trace.
pub fn exterior_mass(trace: &Trace, delta: f64) -> Result<f64> {
    let profile = CutoffProfile::new(delta)?;
    let len = trace.circumference();
    let h = trace.h;
    let sq: f64 = trace
        .dirichlet_series
        .modes()
        .map(|(m, a)| (profile.weight(Window::Out, mode_symbol(m, h, len), h) * a.norm()).powi(2))
        .sum();
    Ok((len * sq).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{sphere_highest_weight, torus_plane_wave};
    use crate::traces::{restrict, Hypersurface};
    use std::f64::consts::PI;

    #[test]
    fn cutoff_values() {
        assert_eq!(cutoff_eval(Window::Tan, 0.0), 1.0);
        assert_eq!(cutoff_eval(Window::Out, 2.0), 1.0);
        assert_eq!(cutoff_eval(Window::In, 2.0), 0.0);
        assert_eq!(cutoff_eval(Window::In, -1.0), 1.0);
        assert_eq!(cutoff_eval(Window::Tan, 0.5), 1.0);
        for u in [-3.0, -0.7, 0.0, 0.7, 3.0] {
            let sum: f64 = Window::ALL.iter().map(|w| cutoff_eval(*w, u)).sum();
            assert!((sum - 1.0).abs() <= f64::EPSILON);
        }
    }

    #[test]
    fn torus_interior_mode() {
        let spec = torus_plane_wave(3, 4).unwrap();
        let tr = restrict(&spec, &Hypersurface::torus_line(0.0).unwrap(), None).unwrap();
        let profile = CutoffProfile::new(0.5).unwrap();
        assert!((profile.argument(0.36, 0.2) + 1.4310835055998654).abs() < 1e-12);
        let dec = window_decompose(&tr, 0.5).unwrap();
        assert!(dec.norms.tan < 1e-14);
        assert!(dec.norms.out < 1e-14);
        assert!((dec.energies.inner - 0.64 / (2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn torus_glancing_mode() {
        let spec = torus_plane_wave(5, 0).unwrap();
        let tr = restrict(&spec, &Hypersurface::torus_line(0.0).unwrap(), None).unwrap();
        for delta in [0.0, 0.3, 0.9] {
            let dec = window_decompose(&tr, delta).unwrap();
            assert!(dec.norms.inner < 1e-14);
            assert!(dec.norms.out < 1e-14);
            assert!(tangential_energy(&tr.dirichlet_series, tr.h).abs() < 1e-15);
        }
    }

    #[test]
    fn meridian_partition_is_exact() {
        let spec = sphere_highest_weight(20).unwrap();
        let tr = restrict(&spec, &Hypersurface::sphere_meridian(), None).unwrap();
        let dec = window_decompose(&tr, 0.51).unwrap();
        let peak = tr.dirichlet.iter().map(|u| u.norm()).fold(0.0, f64::max);
        for j in 0..tr.grid {
            let sum = dec.component(Window::In)[j] + dec.component(Window::Tan)[j] + dec.component(Window::Out)[j];
            assert!((sum - tr.dirichlet[j]).norm() <= 1e-12 * peak);
        }
    }

    #[test]
    fn paired_energies_sum_to_total() {
        let spec = sphere_highest_weight(30).unwrap();
        let tr = restrict(&spec, &Hypersurface::sphere_meridian(), None).unwrap();
        let total = tangential_energy(&tr.dirichlet_series, tr.h);
        let split = paired_energy(&tr.dirichlet_series, tr.h, 0.6).unwrap();
        assert!((split.inner + split.tan + split.out - total).abs() < 1e-14);
        assert!(split.inner >= 0.0);
    }

    #[test]
    fn rejects_delta_outside_unit_interval() {
        assert!(CutoffProfile::new(1.0).is_err());
        assert!(CutoffProfile::new(-0.1).is_err());
    }
}
