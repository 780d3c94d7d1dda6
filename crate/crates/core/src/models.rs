//! Closed-form eigenfunctions of the three model geometries.
//!
//! | model  | chart            | volume form          | eigenfunction                          |
//! |--------|------------------|----------------------|----------------------------------------|
//! | disc   | `(r, theta)`     | `r dr dtheta`        | `c e^{i n theta} J_n(lambda r)`        |
//! | sphere | `(phi, theta)`   | `sin phi dphi dtheta`| `c i^k sin^k phi e^{-i k theta}`       |
//! | torus  | `(x1, x2)`       | `dx1 dx2`            | `(2 pi)^{-1} e^{i (m1 x1 + m2 x2)}`    |
//!
//! `lambda^2` is the Laplace eigenvalue and `h = 1 / lambda` the semiclassical
//! parameter. The disc carries a Dirichlet condition at `r = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{bessel_zero, jn, jn_deriv, jn_second_deriv, zero_index, MAX_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelId {
    Disc,
    Sphere,
    Torus,
}

impl ModelId {
    pub const ALL: [ModelId; 3] = [ModelId::Disc, ModelId::Sphere, ModelId::Torus];

    pub fn name(self) -> &'static str {
        match self {
            ModelId::Disc => "disc",
            ModelId::Sphere => "sphere",
            ModelId::Torus => "torus",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ModelId::Disc => "unit disc, Dirichlet boundary; chart (r, theta), volume r dr dtheta",
            ModelId::Sphere => "round 2-sphere; chart (phi, theta), volume sin(phi) dphi dtheta",
            ModelId::Torus => "flat square torus of side 2 pi; chart (x1, x2), volume dx1 dx2",
        }
    }

    /// Total volume of the model manifold.
    pub fn volume(self) -> f64 {
        match self {
            ModelId::Disc => PI,
            ModelId::Sphere => 4.0 * PI,
            ModelId::Torus => 4.0 * PI * PI,
        }
    }
}

impl std::str::FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disc" => Ok(ModelId::Disc),
            "sphere" => Ok(ModelId::Sphere),
            "torus" => Ok(ModelId::Torus),
            other => Err(Error::InvalidParameter(format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum QuantumNumbers {
    /// Angular order `n` and radial index `k`.
    Disc {
        n: u32,
        k: u32,
    },
    /// Degree of the highest weight harmonic.
    Sphere {
        k: u32,
    },
    Torus {
        m1: i64,
        m2: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenfunctionSpec {
    pub model: ModelId,
    pub quantum: QuantumNumbers,
    pub lambda: f64,
    pub h: f64,
    /// Multiplier making the `L^2(M)` norm one.
    pub norm_const: f64,
}

pub const MAX_SPHERE_DEGREE: u32 = 500;

/// `c e^{i n theta} J_n(j_{n,k} r)` on the unit disc.
pub fn disc_eigenfunction(n: u32, k: u32) -> Result<EigenfunctionSpec> {
    let lambda = bessel_zero(n, k)?;
    Ok(disc_from_zero(n, k, lambda))
}

fn disc_from_zero(n: u32, k: u32, lambda: f64) -> EigenfunctionSpec {
    // int_0^1 J_n(j r)^2 r dr = J_{n+1}(j)^2 / 2
    let norm_const = 1.0 / (PI.sqrt() * jn(n + 1, lambda).abs());
    EigenfunctionSpec {
        model: ModelId::Disc,
        quantum: QuantumNumbers::Disc { n, k },
        lambda,
        h: 1.0 / lambda,
        norm_const,
    }
}

/// `ln(||u_k||^2 / (4 pi)) = sum_{j=1}^k ln(2j / (2j + 1))`.
pub(crate) fn ln_sphere_norm_ratio(k: u32) -> f64 {
    (1..=k).map(|j| (2.0 * j as f64 / (2.0 * j as f64 + 1.0)).ln()).sum()
}

/// `||u_k||^2_{L^2(S^2)}` for `u_k = i^k sin^k(phi) e^{-i k theta}`.
pub fn sphere_norm_squared(k: u32) -> f64 {
    4.0 * PI * ln_sphere_norm_ratio(k).exp()
}

/// The highest weight harmonic `u_k = (x_2 + i x_1)^k` restricted to the sphere.
pub fn sphere_highest_weight(k: u32) -> Result<EigenfunctionSpec> {
    if k == 0 || k > MAX_SPHERE_DEGREE {
        return Err(Error::domain(
            "sphere_highest_weight",
            format!("degree {k} outside 1..={MAX_SPHERE_DEGREE}"),
        ));
    }
    let kf = k as f64;
    let lambda = (kf * (kf + 1.0)).sqrt();
    let norm_const = (-0.5 * (ln_sphere_norm_ratio(k) + (4.0 * PI).ln())).exp();
    Ok(EigenfunctionSpec {
        model: ModelId::Sphere,
        quantum: QuantumNumbers::Sphere { k },
        lambda,
        h: 1.0 / lambda,
        norm_const,
    })
}

pub fn torus_plane_wave(m1: i64, m2: i64) -> Result<EigenfunctionSpec> {
    if m1 == 0 && m2 == 0 {
        return Err(Error::InvalidParameter("torus frequency vector must be nonzero".into()));
    }
    let lambda = ((m1 * m1 + m2 * m2) as f64).sqrt();
    Ok(EigenfunctionSpec {
        model: ModelId::Torus,
        quantum: QuantumNumbers::Torus { m1, m2 },
        lambda,
        h: 1.0 / lambda,
        norm_const: 1.0 / (2.0 * PI),
    })
}

fn outside_chart(detail: String) -> Error {
    Error::domain("evaluate", detail)
}

fn check_point(spec: &EigenfunctionSpec, point: [f64; 2], need_interior: bool) -> Result<()> {
    let [a, b] = point;
    if !a.is_finite() || !b.is_finite() {
        return Err(outside_chart(format!("non-finite point {point:?}")));
    }
    match spec.model {
        ModelId::Disc => {
            if !(0.0..=1.0).contains(&a) || (need_interior && a == 0.0) {
                return Err(outside_chart(format!("r = {a} outside the disc chart")));
            }
        }
        ModelId::Sphere => {
            // the meridian chart runs phi over [0, 2 pi) at theta = 0
            if !(0.0..=2.0 * PI).contains(&a) || (need_interior && a.sin() == 0.0) {
                return Err(outside_chart(format!("phi = {a} outside the sphere chart")));
            }
        }
        ModelId::Torus => {}
    }
    Ok(())
}

fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Value of the normalized eigenfunction at a chart point.
pub fn evaluate(spec: &EigenfunctionSpec, point: [f64; 2]) -> Result<Complex64> {
    check_point(spec, point, false)?;
    let c = spec.norm_const;
    Ok(match spec.quantum {
        QuantumNumbers::Disc { n, .. } => {
            let [r, theta] = point;
            Complex64::from_polar(c * jn(n, spec.lambda * r), n as f64 * theta)
        }
        QuantumNumbers::Sphere { k } => {
            let [phi, theta] = point;
            i_pow(k as i64) * Complex64::from_polar(c * phi.sin().powi(k as i32), -(k as f64) * theta)
        }
        QuantumNumbers::Torus { m1, m2 } => {
            let [x1, x2] = point;
            Complex64::from_polar(c, m1 as f64 * x1 + m2 as f64 * x2)
        }
    })
}

/// Gradient in the orthonormal frame of the metric:
/// disc `(d_r, r^{-1} d_theta)`, sphere `(d_phi, (sin phi)^{-1} d_theta)`, torus `(d_1, d_2)`.
pub fn evaluate_gradient(spec: &EigenfunctionSpec, point: [f64; 2]) -> Result<[Complex64; 2]> {
    check_point(spec, point, true)?;
    let c = spec.norm_const;
    let i = Complex64::new(0.0, 1.0);
    Ok(match spec.quantum {
        QuantumNumbers::Disc { n, .. } => {
            let [r, theta] = point;
            let phase = Complex64::from_polar(1.0, n as f64 * theta);
            let x = spec.lambda * r;
            let radial = c * spec.lambda * jn_deriv(n, x) * phase;
            let angular = i * (n as f64 / r) * c * jn(n, x) * phase;
            [radial, angular]
        }
        QuantumNumbers::Sphere { k } => {
            let [phi, theta] = point;
            let kf = k as f64;
            let phase = i_pow(k as i64) * Complex64::from_polar(c, -kf * theta);
            let s = phi.sin();
            let d_phi = phase * (kf * s.powi(k as i32 - 1) * phi.cos());
            // X u_k = i^{k-1} k sin^{k-1}(phi) e^{-i k theta}
            let d_x = -i * kf * s.powi(k as i32 - 1) * phase;
            [d_phi, d_x]
        }
        QuantumNumbers::Torus { m1, m2 } => {
            let u = evaluate(spec, point)?;
            [i * m1 as f64 * u, i * m2 as f64 * u]
        }
    })
}

/// `Delta phi` at a chart point assembled from closed-form second derivatives.
///
/// Independent of the eigenvalue equation, so `laplacian + lambda^2 phi` measures
/// how well the closed forms satisfy it.
pub fn laplacian(spec: &EigenfunctionSpec, point: [f64; 2]) -> Result<Complex64> {
    check_point(spec, point, true)?;
    let value = evaluate(spec, point)?;
    Ok(match spec.quantum {
        QuantumNumbers::Disc { n, .. } => {
            let [r, theta] = point;
            let lam = spec.lambda;
            let x = lam * r;
            let phase = Complex64::from_polar(spec.norm_const, n as f64 * theta);
            let f_rr = lam * lam * jn_second_deriv(n, x);
            let f_r = lam * jn_deriv(n, x);
            let f = jn(n, x);
            phase * (f_rr + f_r / r - (n as f64).powi(2) / (r * r) * f)
        }
        QuantumNumbers::Sphere { k } => {
            let [phi, theta] = point;
            let kf = k as f64;
            let (s, co) = phi.sin_cos();
            let phase = i_pow(k as i64) * Complex64::from_polar(spec.norm_const, -kf * theta);
            let f = s.powi(k as i32);
            let f_p = kf * s.powi(k as i32 - 1) * co;
            let f_pp = if k >= 2 {
                kf * (kf - 1.0) * s.powi(k as i32 - 2) * co * co - kf * f
            } else {
                -f
            };
            phase * (f_pp + co / s * f_p - kf * kf / (s * s) * f)
        }
        QuantumNumbers::Torus { m1, m2 } => -((m1 * m1 + m2 * m2) as f64) * value,
    })
}

/// Eigenfunction family selectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyKind {
    /// Disc modes whose tangential frequency on `r = r0` is `1 + z h^{offset_exponent}`.
    DiscWhispering {
        r0: f64,
        offset_exponent: f64,
        offset: f64,
    },
    /// Disc modes with `n / lambda` as close as possible to `fraction`.
    DiscFixedAngularFraction {
        fraction: f64,
    },
    SphereHighestWeight,
    /// `m = offset + t * step`.
    TorusDirection {
        step: (i64, i64),
        offset: (i64, i64),
    },
}

/// Inclusive index range with a positive stride.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRange {
    pub start: i64,
    pub end: i64,
    pub stride: i64,
}

impl IndexRange {
    pub fn new(start: i64, end: i64) -> Self {
        Self { start, end, stride: 1 }
    }

    pub fn with_stride(mut self, stride: i64) -> Self {
        self.stride = stride;
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        (self.start..=self.end).step_by(self.stride.max(1) as usize)
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.start > self.end
    }
}

impl std::fmt::Display for IndexRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.stride == 1 {
            write!(f, "{}:{}", self.start, self.end)
        } else {
            write!(f, "{}:{}:{}", self.start, self.end, self.stride)
        }
    }
}

impl std::str::FromStr for IndexRange {
    type Err = Error;

    /// `a:b` or `a:b:stride`, inclusive; a single integer is a one-element range.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad index range `{s}`"));
        let parts: Vec<i64> = s
            .split(':')
            .map(|p| p.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let range = match parts.as_slice() {
            [a] => IndexRange::new(*a, *a),
            [a, b] => IndexRange::new(*a, *b),
            [a, b, c] => IndexRange::new(*a, *b).with_stride(*c),
            _ => return Err(bad()),
        };
        if range.is_empty() || range.stride < 1 {
            return Err(bad());
        }
        Ok(range)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub range: IndexRange,
}

/// One selected family member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub index: i64,
    pub spec: EigenfunctionSpec,
    /// Achieved offset `z_eff` for whispering families.
    pub z_eff: Option<f64>,
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        if self.range.is_empty() || self.range.stride < 1 {
            return Err(Error::InvalidParameter(format!("empty index range {}", self.range)));
        }
        match self.kind {
            FamilyKind::DiscWhispering {
                r0,
                offset_exponent,
                offset,
            } => {
                check_open_unit("r0", r0)?;
                check_open_unit("offset exponent", offset_exponent)?;
                if !(offset > 0.0 && offset.is_finite()) {
                    return Err(Error::InvalidParameter(format!("offset z = {offset} must be positive")));
                }
                if self.range.start < 1 {
                    return Err(Error::InvalidParameter("angular orders must be positive".into()));
                }
            }
            FamilyKind::DiscFixedAngularFraction { fraction } => {
                check_open_unit("angular fraction", fraction)?;
                if self.range.start < 1 {
                    return Err(Error::InvalidParameter("angular orders must be positive".into()));
                }
            }
            FamilyKind::SphereHighestWeight => {
                if self.range.start < 1 || self.range.end > MAX_SPHERE_DEGREE as i64 {
                    return Err(Error::InvalidParameter(format!(
                        "sphere degrees must lie in 1..={MAX_SPHERE_DEGREE}"
                    )));
                }
            }
            FamilyKind::TorusDirection { .. } => {}
        }
        Ok(())
    }

    /// Members in index order; per-member failures are returned, not raised.
    pub fn members(&self) -> Result<Vec<(i64, Result<FamilyMember>)>> {
        use rayon::prelude::*;
        self.validate()?;
        let indices: Vec<i64> = self.range.iter().collect();
        Ok(indices
            .into_par_iter()
            .map(|index| (index, self.member(index)))
            .collect())
    }

    pub fn member(&self, index: i64) -> Result<FamilyMember> {
        match self.kind {
            FamilyKind::DiscWhispering {
                r0,
                offset_exponent,
                offset,
            } => {
                let n = order(index)?;
                let (spec, z_eff) = whispering_member(r0, offset_exponent, offset, n)?;
                Ok(FamilyMember {
                    index,
                    spec,
                    z_eff: Some(z_eff),
                })
            }
            FamilyKind::DiscFixedAngularFraction { fraction } => {
                let n = order(index)?;
                let spec = nearest_disc_zero(n, n as f64 / fraction)?;
                Ok(FamilyMember {
                    index,
                    spec,
                    z_eff: None,
                })
            }
            FamilyKind::SphereHighestWeight => {
                let k = u32::try_from(index).map_err(|_| Error::InvalidParameter(format!("bad degree {index}")))?;
                Ok(FamilyMember {
                    index,
                    spec: sphere_highest_weight(k)?,
                    z_eff: None,
                })
            }
            FamilyKind::TorusDirection { step, offset } => Ok(FamilyMember {
                index,
                spec: torus_plane_wave(offset.0 + index * step.0, offset.1 + index * step.1)?,
                z_eff: None,
            }),
        }
    }
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::InvalidParameter(format!("{name} = {v} must lie in (0, 1)")));
    }
    Ok(())
}

fn order(index: i64) -> Result<u32> {
    u32::try_from(index)
        .ok()
        .filter(|n| *n <= MAX_ORDER)
        .ok_or_else(|| Error::InvalidParameter(format!("angular order {index} out of range")))
}

/// Disc eigenfunction of order `n` whose eigenvalue is the zero of `J_n` nearest `target`.
fn nearest_disc_zero(n: u32, target: f64) -> Result<EigenfunctionSpec> {
    let k0 = zero_index(n, target).round().max(1.0) as u32;
    let mut best: Option<(u32, f64)> = None;
    for k in k0.saturating_sub(1).max(1)..=k0 + 1 {
        let z = bessel_zero(n, k)?;
        if best.is_none_or(|(_, b)| (z - target).abs() < (b - target).abs()) {
            best = Some((k, z));
        }
    }
    let (k, lambda) = best.expect("at least one candidate");
    Ok(disc_from_zero(n, k, lambda))
}

/// Solve `lambda = (n / r0) / (1 + z lambda^{-offset_exponent})` by fixed-point iteration.
pub fn whispering_target(r0: f64, offset_exponent: f64, z: f64, n: u32) -> Result<f64> {
    let base = n as f64 / r0;
    let mut lambda = base;
    for _ in 0..50 {
        let next = base / (1.0 + z * lambda.powf(-offset_exponent));
        if (next - lambda).abs() <= 1e-10 * next {
            return Ok(next);
        }
        lambda = next;
    }
    Err(Error::NoConvergence {
        what: "whispering target iteration",
        detail: format!("n = {n}, r0 = {r0}, z = {z}"),
    })
}

/// `(n h / r0 - 1) / h^{offset_exponent}`.
pub fn achieved_offset(spec: &EigenfunctionSpec, r0: f64, offset_exponent: f64) -> f64 {
    let n = match spec.quantum {
        QuantumNumbers::Disc { n, .. } => n as f64,
        _ => return f64::NAN,
    };
    (n * spec.h / r0 - 1.0) / spec.h.powf(offset_exponent)
}

fn whispering_member(r0: f64, offset_exponent: f64, z: f64, n: u32) -> Result<(EigenfunctionSpec, f64)> {
    let target = whispering_target(r0, offset_exponent, z, n)?;
    let spec = nearest_disc_zero(n, target)?;
    let z_eff = achieved_offset(&spec, r0, offset_exponent);
    let slack = 4.0 / (spec.lambda * spec.h.powf(offset_exponent) * r0);
    if (z_eff - z).abs() > slack {
        return Err(Error::NoAdmissibleZero { n, target });
    }
    Ok((spec, z_eff))
}

/// Disc whispering-gallery family: for each order `n`, the mode whose tangential
/// frequency on `r = r0` is closest to `1 + z h^{offset_exponent}`.
pub fn whispering_family(
    r0: f64,
    offset_exponent: f64,
    z: f64,
    range: IndexRange,
) -> Result<Vec<(i64, Result<FamilyMember>)>> {
    FamilySpec {
        kind: FamilyKind::DiscWhispering {
            r0,
            offset_exponent,
            offset: z,
        },
        range,
    }
    .members()
}
