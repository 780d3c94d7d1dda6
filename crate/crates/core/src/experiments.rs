//! Family sweeps, log-log regressions and verdicts.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{sphere_highest_weight, whispering_family, FamilyKind, FamilySpec, IndexRange, MAX_SPHERE_DEGREE};
use crate::rellich::energy_balance;
use crate::specfun::QuadratureRule;
use crate::traces::{norm_l2, restrict, Data, Hypersurface, NormMethod, Trace};
use crate::windows::exterior_mass;

pub const MIN_FIT_POINTS: usize = 5;
/// `|slope|` allowed for a bounded verdict.
pub const BOUNDED_SLOPE: f64 = 0.05;
pub const BOUNDED_MIN_POINTS: usize = 12;
pub const BOUNDED_MIN_DECADES: f64 = 1.0;
/// Local order above which decay counts as superpolynomial.
pub const SUPERPOLYNOMIAL_ORDER: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub max_residual: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InsufficientData(format!("{} points for a line", x.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite data in fit".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = x.iter().zip(y).map(|(a, b)| b - (slope * a + intercept));
    let max_residual = residuals.clone().fold(0.0_f64, |m, r| m.max(r.abs()));
    let ss_res: f64 = residuals.map(|r| r * r).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        max_residual,
        x: x.to_vec(),
        y: y.to_vec(),
    })
}

/// Fit of `log v` against `log h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub h: Vec<f64>,
    pub values: Vec<f64>,
    /// Points dropped because the value was exactly zero.
    pub excluded_zeros: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub max_residual: f64,
}

impl ScalingFit {
    /// Ratio of the largest to smallest `h`, in decades.
    pub fn decades(&self) -> f64 {
        let max = self.h.iter().cloned().fold(f64::MIN, f64::max);
        let min = self.h.iter().cloned().fold(f64::MAX, f64::min);
        (max / min).log10()
    }

    pub fn predict(&self, h: f64) -> f64 {
        (self.intercept + self.slope * h.ln()).exp()
    }
}

pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if let Some(p) = points
        .iter()
        .find(|(h, v)| !(h.is_finite() && *h > 0.0 && v.is_finite() && *v >= 0.0))
    {
        return Err(Error::InvalidParameter(format!(
            "point {p:?} is not positive and finite"
        )));
    }
    let kept: Vec<(f64, f64)> = points.iter().copied().filter(|(_, v)| *v > 0.0).collect();
    if kept.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} positive points, need {MIN_FIT_POINTS}",
            kept.len()
        )));
    }
    let lx: Vec<f64> = kept.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = kept.iter().map(|p| p.1.ln()).collect();
    let line = linear_fit(&lx, &ly)?;
    Ok(ScalingFit {
        h: kept.iter().map(|p| p.0).collect(),
        values: kept.iter().map(|p| p.1).collect(),
        excluded_zeros: points.len() - kept.len(),
        slope: line.slope,
        intercept: line.intercept,
        r_squared: line.r_squared,
        max_residual: line.max_residual,
    })
}

/// Finite-difference slope of `log v` over `log h` across the third of the
/// points with the smallest `h`.
pub fn local_order(points: &[(f64, f64)]) -> Result<f64> {
    let mut kept: Vec<(f64, f64)> = points.iter().copied().filter(|(_, v)| *v > 0.0).collect();
    if kept.len() < 3 {
        return Err(Error::InsufficientData(format!("{} positive points", kept.len())));
    }
    kept.sort_by(|a, b| b.0.total_cmp(&a.0));
    let top = &kept[kept.len() - kept.len().div_ceil(3)..];
    let (first, last) = (top[0], top[top.len() - 1]);
    Ok((last.1.ln() - first.1.ln()) / (last.0.ln() - first.0.ln()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Classification {
    Bounded,
    PowerLaw { exponent: f64 },
    SuperpolynomialDecay { local_order: f64 },
    ExactZeros { crossover: Option<i64> },
    Identity,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub classification: Classification,
    pub passed: bool,
    pub detail: String,
}

/// Bounded iff `|slope| <= 0.05` over at least 12 points spanning a decade in `h`.
pub fn bounded_verdict(check: &str, fit: &ScalingFit) -> Verdict {
    let enough = fit.h.len() >= BOUNDED_MIN_POINTS && fit.decades() >= BOUNDED_MIN_DECADES;
    let flat = fit.slope.abs() <= BOUNDED_SLOPE;
    let classification = if !enough {
        Classification::Inconclusive
    } else if flat {
        Classification::Bounded
    } else {
        Classification::PowerLaw { exponent: fit.slope }
    };
    Verdict {
        check: check.into(),
        passed: enough && flat,
        detail: format!(
            "slope {:.6} over {} points spanning {:.3} decades (bounded needs |slope| <= {BOUNDED_SLOPE})",
            fit.slope,
            fit.h.len(),
            fit.decades()
        ),
        classification,
    }
}

pub fn exponent_verdict(check: &str, fit: &ScalingFit, target: f64, tol: f64) -> Verdict {
    Verdict {
        check: check.into(),
        classification: Classification::PowerLaw { exponent: fit.slope },
        passed: (fit.slope - target).abs() <= tol,
        detail: format!("slope {:.6}, expected {target:.6} +/- {tol}", fit.slope),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: i64,
    pub lambda: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberFailure {
    pub index: i64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: String,
    pub columns: Vec<String>,
    /// Sorted by `lambda`.
    pub rows: Vec<SweepRow>,
    pub fits: BTreeMap<String, ScalingFit>,
    pub linear_fits: BTreeMap<String, LinearFit>,
    pub summary: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdict>,
    pub failures: Vec<MemberFailure>,
}

impl SweepReport {
    fn new(family: String, columns: &[&str]) -> Self {
        Self {
            family,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            fits: BTreeMap::new(),
            linear_fits: BTreeMap::new(),
            summary: BTreeMap::new(),
            verdicts: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// `(h, value)` pairs of one column.
    pub fn column(&self, name: &str) -> Result<Vec<(f64, f64)>> {
        let i = self
            .column_index(name)
            .ok_or_else(|| Error::InvalidParameter(format!("no column `{name}`")))?;
        Ok(self.rows.iter().map(|r| (r.h, r.values[i])).collect())
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    /// One row per member: `index, lambda, h` then the report columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,lambda,h");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{:.16e},{:.16e}", r.index, r.lambda, r.h));
            for v in &r.values {
                out.push_str(&format!(",{v:.16e}"));
            }
            out.push('\n');
        }
        out
    }

    fn push_rows(&mut self, results: Vec<(i64, Result<SweepRow>)>) {
        for (index, r) in results {
            match r {
                Ok(row) => self.rows.push(row),
                Err(e) => self.failures.push(MemberFailure {
                    index,
                    error: e.to_string(),
                }),
            }
        }
        self.rows
            .sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.index.cmp(&b.index)));
    }

    fn add_fit(&mut self, name: &str) -> Option<ScalingFit> {
        let points = self.column(name).ok()?;
        match fit_exponent(&points) {
            Ok(fit) => {
                self.fits.insert(name.into(), fit.clone());
                Some(fit)
            }
            Err(e) => {
                self.verdicts.push(Verdict {
                    check: format!("fit-{name}"),
                    classification: Classification::Inconclusive,
                    passed: false,
                    detail: e.to_string(),
                });
                None
            }
        }
    }

    fn column_max(&self, name: &str) -> f64 {
        self.column(name)
            .map(|c| c.iter().map(|p| p.1).fold(f64::MIN, f64::max))
            .unwrap_or(f64::NAN)
    }
}

fn describe_family(family: &FamilySpec) -> String {
    match &family.kind {
        FamilyKind::DiscWhispering {
            r0,
            offset_exponent,
            offset,
        } => format!(
            "disc-whispering r0={r0} dprime={offset_exponent} z={offset} n={}",
            family.range
        ),
        FamilyKind::DiscFixedAngularFraction { fraction } => {
            format!("disc-fixed-angular-fraction fraction={fraction} n={}", family.range)
        }
        FamilyKind::SphereHighestWeight => format!("sphere-highest-weight k={}", family.range),
        FamilyKind::TorusDirection { step, offset } => format!(
            "torus-direction m=({}+{}t, {}+{}t) t={}",
            offset.0, step.0, offset.1, step.1, family.range
        ),
    }
}

const NEUMANN_COLUMNS: [&str; 9] = [
    "dirichlet_norm",
    "neumann_norm",
    "t_tan",
    "t_neu",
    "balance",
    "t_in",
    "t_tan_mid",
    "t_out",
    "exterior_mass",
];

/// Neumann (or Dirichlet, via `measure`) trace norms with the energy balance along a family.
pub fn sweep_neumann(family: &FamilySpec, surface: &Hypersurface, delta: f64, measure: Data) -> Result<SweepReport> {
    crate::windows::CutoffProfile::new(delta)?;
    let members = family.members()?;
    let results: Vec<(i64, Result<SweepRow>)> = members
        .into_par_iter()
        .map(|(index, member)| {
            let row = member.and_then(|m| {
                let trace = restrict(&m.spec, surface, None)?;
                let bal = energy_balance(&trace, delta)?;
                let values = vec![
                    norm_l2(&trace, Data::Dirichlet, NormMethod::Parseval)?,
                    norm_l2(&trace, Data::Neumann, NormMethod::Parseval)?,
                    bal.t_tan,
                    bal.t_neu,
                    bal.balance(),
                    bal.t_in,
                    bal.t_tan_mid,
                    bal.t_out,
                    exterior_mass(&trace, delta)?,
                ];
                Ok(SweepRow {
                    index,
                    lambda: m.spec.lambda,
                    h: m.spec.h,
                    values,
                })
            });
            (index, row)
        })
        .collect();
    let mut report = SweepReport::new(
        format!("{} on {} delta={delta}", describe_family(family), surface.name()),
        &NEUMANN_COLUMNS,
    );
    report.push_rows(results);
    let measured = match measure {
        Data::Neumann => "neumann_norm",
        Data::Dirichlet => "dirichlet_norm",
    };
    report
        .summary
        .insert(format!("sup_{measured}"), report.column_max(measured));
    report
        .summary
        .insert("sup_balance".into(), report.column_max("balance"));
    if let Some(fit) = report.add_fit(measured) {
        report
            .verdicts
            .push(bounded_verdict(&format!("bounded-{measured}"), &fit));
    }
    let min_t_in = report.column("t_in")?.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    report.summary.insert("min_t_in".into(), min_t_in);
    report.verdicts.push(Verdict {
        check: "garding-t-in".into(),
        classification: Classification::Identity,
        passed: report.rows.is_empty() || min_t_in >= 0.0,
        detail: format!("min T_in = {min_t_in:e}"),
    });
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessRatio {
    pub k: u32,
    /// `||X u_k||^2_{L^2(H)} / (k^2 ||u_k||^2)` from the product formulas in log space.
    pub exact: f64,
    /// The same ratio in exact rational arithmetic, as `numerator/denominator`.
    pub exact_rational: String,
    pub quadrature: f64,
    /// `exact k^2 / (k (k+1))`, the squared normalized Neumann norm.
    pub normalized_neumann_sq: f64,
}

fn check_degree(k: u32) -> Result<()> {
    if k == 0 || k > MAX_SPHERE_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "degree {k} outside 1..={MAX_SPHERE_DEGREE}"
        )));
    }
    Ok(())
}

/// `(1/2) prod_{j<k} (2j-1)/(2j) prod_{j<=k} (2j+1)/(2j)` exactly.
pub fn sharpness_exact_rational(k: u32) -> Result<BigRational> {
    check_degree(k)?;
    let mut numer = BigInt::from(1);
    let mut denom = BigInt::from(2);
    for j in 1..k as u64 {
        numer *= 2 * j - 1;
        denom *= 2 * j;
    }
    for j in 1..=k as u64 {
        numer *= 2 * j + 1;
        denom *= 2 * j;
    }
    Ok(BigRational::new(numer, denom))
}

pub fn sharpness_exact(k: u32) -> Result<f64> {
    check_degree(k)?;
    let mut log = -std::f64::consts::LN_2;
    for j in 1..k {
        let j = j as f64;
        log += ((2.0 * j - 1.0) / (2.0 * j)).ln();
    }
    for j in 1..=k {
        let j = j as f64;
        log += ((2.0 * j + 1.0) / (2.0 * j)).ln();
    }
    Ok(log.exp())
}

/// `||X u_k||^2_{L^2(H)}` on the meridian and `||u_k||^2` on the sphere by numerical quadrature.
pub fn sharpness_quadrature_parts(k: u32) -> Result<(f64, f64)> {
    check_degree(k)?;
    let kf = k as f64;
    let meridian = QuadratureRule::periodic_trapezoid(0.0, 2.0 * PI, 4 * k as usize + 16)?
        .integrate(|phi| (kf * phi.sin().powi(k as i32 - 1)).powi(2));
    // int_0^pi sin^{2k+1} = int_{-1}^{1} (1 - x^2)^k dx
    let polar = QuadratureRule::gauss_legendre(-1.0, 1.0, k as usize + 8)?.integrate(|x| (1.0 - x * x).powi(k as i32));
    Ok((meridian, 2.0 * PI * polar))
}

impl SharpnessRatio {
    /// The rational ratio rounded to the nearest `f64`.
    pub fn rational_value(&self) -> Result<f64> {
        self.exact_rational
            .parse::<BigRational>()
            .ok()
            .and_then(|r| r.to_f64())
            .ok_or_else(|| Error::InvalidParameter(format!("bad rational `{}`", self.exact_rational)))
    }
}

pub fn sharpness_ratio(k: u32) -> Result<SharpnessRatio> {
    let exact = sharpness_exact(k)?;
    let rational = sharpness_exact_rational(k)?;
    let (meridian, sphere) = sharpness_quadrature_parts(k)?;
    let kf = k as f64;
    Ok(SharpnessRatio {
        k,
        exact,
        exact_rational: format!("{}/{}", rational.numer(), rational.denom()),
        quadrature: meridian / (kf * kf * sphere),
        normalized_neumann_sq: exact * kf / (kf + 1.0),
    })
}

/// Sharpness ratios over a degree range, with agreement and lower-bound verdicts.
pub fn sweep_sharpness(range: IndexRange) -> Result<SweepReport> {
    let ks = sphere_degrees(range)?;
    let results: Vec<(i64, Result<SweepRow>)> = ks
        .into_par_iter()
        .map(|k| {
            let row = sharpness_ratio(k).and_then(|s| {
                let rational = s.rational_value()?;
                let spec = sphere_highest_weight(k)?;
                Ok(SweepRow {
                    index: k as i64,
                    lambda: spec.lambda,
                    h: spec.h,
                    values: vec![
                        s.exact,
                        rational,
                        s.quadrature,
                        ((s.exact - s.quadrature) / s.exact).abs(),
                        s.normalized_neumann_sq,
                    ],
                })
            });
            (k as i64, row)
        })
        .collect();
    let mut report = SweepReport::new(
        format!("sphere-highest-weight sharpness k={range}"),
        &[
            "exact",
            "exact_rational",
            "quadrature",
            "relative_difference",
            "normalized_neumann_sq",
        ],
    );
    report.push_rows(results);
    let agreement = report
        .rows
        .iter()
        .filter(|r| r.index <= 100)
        .map(|r| r.values[3])
        .fold(0.0, f64::max);
    let min_exact = report.rows.iter().map(|r| r.values[0]).fold(f64::INFINITY, f64::min);
    report
        .summary
        .insert("max_relative_difference_k_le_100".into(), agreement);
    report.summary.insert("min_exact".into(), min_exact);
    report.verdicts.push(Verdict {
        check: "exact-matches-quadrature".into(),
        classification: Classification::Identity,
        passed: agreement <= 1e-8,
        detail: format!("max relative difference {agreement:e} for k <= 100"),
    });
    report.verdicts.push(Verdict {
        check: "bounded-below".into(),
        classification: Classification::Bounded,
        passed: min_exact >= 0.25,
        detail: format!("min exact ratio {min_exact} (needs >= 0.25)"),
    });
    Ok(report)
}

fn sphere_degrees(range: IndexRange) -> Result<Vec<u32>> {
    if range.is_empty() || range.start < 1 || range.end > MAX_SPHERE_DEGREE as i64 || range.stride < 1 {
        return Err(Error::InvalidParameter(format!(
            "degree range {range} must lie in 1..={MAX_SPHERE_DEGREE}"
        )));
    }
    Ok(range.iter().map(|k| k as u32).collect())
}

/// Dirichlet and Neumann norms on the equator, where the Dirichlet data saturates `h^{-1/4}`.
pub fn sweep_dirichlet_equator(range: IndexRange) -> Result<SweepReport> {
    let ks = sphere_degrees(range)?;
    let equator = Hypersurface::sphere_equator();
    let results: Vec<(i64, Result<SweepRow>)> = ks
        .into_par_iter()
        .map(|k| {
            let row = sphere_highest_weight(k).and_then(|spec| {
                let trace = restrict(&spec, &equator, None)?;
                Ok(SweepRow {
                    index: k as i64,
                    lambda: spec.lambda,
                    h: spec.h,
                    values: vec![
                        norm_l2(&trace, Data::Dirichlet, NormMethod::Parseval)?,
                        norm_l2(&trace, Data::Neumann, NormMethod::Quadrature)?,
                    ],
                })
            });
            (k as i64, row)
        })
        .collect();
    let mut report = SweepReport::new(
        format!("sphere-highest-weight on sphere-equator k={range}"),
        &["dirichlet_norm", "neumann_norm"],
    );
    report.push_rows(results);
    let max_neumann = report.column_max("neumann_norm");
    report
        .summary
        .insert("sup_dirichlet_norm".into(), report.column_max("dirichlet_norm"));
    report.summary.insert("sup_neumann_norm".into(), max_neumann);
    if let Some(fit) = report.add_fit("dirichlet_norm") {
        report
            .verdicts
            .push(exponent_verdict("dirichlet-exponent", &fit, -0.25, 0.02));
    }
    report.verdicts.push(Verdict {
        check: "neumann-vanishes".into(),
        classification: Classification::Identity,
        passed: max_neumann < 1e-12,
        detail: format!("max Neumann norm {max_neumann:e}"),
    });
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExteriorParams {
    pub r0: f64,
    /// Offset exponent of the family.
    pub dprime: f64,
    pub z: f64,
    pub delta_window: f64,
    pub range: IndexRange,
}

const CRITICAL: f64 = 2.0 / 3.0;

fn near_critical(dprime: f64) -> bool {
    (dprime - CRITICAL).abs() <= 1e-3
}

/// `R - 1 <= h^delta / 2`, the exterior cutoff vanishes identically on the mode.
pub fn support_predicts_zero(z_eff: f64, h: f64, dprime: f64, delta_window: f64) -> bool {
    let freq = 1.0 + z_eff * h.powf(dprime);
    freq * freq - 1.0 <= 0.5 * h.powf(delta_window)
}

/// Exterior mass along a whispering family.
pub fn sweep_exterior_mass(params: ExteriorParams) -> Result<SweepReport> {
    let ExteriorParams {
        r0,
        dprime,
        z,
        delta_window,
        range,
    } = params;
    crate::windows::CutoffProfile::new(delta_window)?;
    let surface = Hypersurface::disc_circle(r0)?;
    let members = whispering_family(r0, dprime, z, range)?;
    let results: Vec<(i64, Result<SweepRow>)> = members
        .into_par_iter()
        .map(|(index, member)| {
            let row = member.and_then(|m| {
                let z_eff = m.z_eff.unwrap_or(f64::NAN);
                let trace = restrict(&m.spec, &surface, None)?;
                let d = norm_l2(&trace, Data::Dirichlet, NormMethod::Parseval)?;
                let mass = exterior_mass(&trace, delta_window)?;
                Ok(SweepRow {
                    index,
                    lambda: m.spec.lambda,
                    h: m.spec.h,
                    values: vec![
                        z_eff,
                        d,
                        norm_l2(&trace, Data::Neumann, NormMethod::Parseval)?,
                        mass,
                        if d > 0.0 { mass / d } else { 0.0 },
                        support_predicts_zero(z_eff, m.spec.h, dprime, delta_window) as u8 as f64,
                    ],
                })
            });
            (index, row)
        })
        .collect();
    let mut report = SweepReport::new(
        format!("disc-whispering r0={r0} dprime={dprime} z={z} n={range} window delta={delta_window}"),
        &[
            "z_eff",
            "dirichlet_norm",
            "neumann_norm",
            "exterior_mass",
            "exterior_fraction",
            "support_zero_predicted",
        ],
    );
    report.push_rows(results);
    let dirichlet = report.add_fit("dirichlet_norm");
    let neumann = report.add_fit("neumann_norm");
    let mass_points = report.column("exterior_mass")?;
    let zeros = mass_points.iter().filter(|p| p.1 == 0.0).count();
    report.summary.insert("exact_zero_count".into(), zeros as f64);
    if mass_points.iter().filter(|p| p.1 > 0.0).count() >= MIN_FIT_POINTS {
        report.add_fit("exterior_mass");
    }

    if near_critical(dprime) {
        if let Some(fit) = &neumann {
            report
                .verdicts
                .push(exponent_verdict("trace-norm-exponent", fit, 1.0 / 6.0, 0.03));
        }
        if let Some(fit) = &dirichlet {
            report.summary.insert("dirichlet_exponent".into(), fit.slope);
        }
        if delta_window < CRITICAL {
            report
                .verdicts
                .push(window_zero_verdict(&mut report.summary, &report.rows));
        }
    } else if dprime < CRITICAL && delta_window > dprime && delta_window < CRITICAL {
        let verdict = superpolynomial_verdict(&mut report, dprime);
        report.verdicts.push(verdict);
    }
    Ok(report)
}

/// Exact zeros past the first index after which every member is predicted zero.
fn window_zero_verdict(summary: &mut BTreeMap<String, f64>, rows: &[SweepRow]) -> Verdict {
    // rows are sorted by lambda, which is increasing in n along a whispering family
    let mut by_index: Vec<&SweepRow> = rows.iter().collect();
    by_index.sort_by_key(|r| r.index);
    let predicted = |r: &SweepRow| r.values[5] == 1.0;
    let mass = |r: &SweepRow| r.values[3];
    let crossover_pos = by_index
        .iter()
        .rposition(|r| !predicted(r))
        .map_or(Some(0), |p| (p + 1 < by_index.len()).then_some(p + 1));
    let crossover = crossover_pos.map(|p| by_index[p].index);
    if let Some(c) = crossover {
        summary.insert("crossover".into(), c as f64);
    }
    let violations: Vec<i64> = by_index
        .iter()
        .filter(|r| predicted(r) && mass(r) != 0.0)
        .map(|r| r.index)
        .collect();
    // the smooth step underflows slightly outside the support edge
    let underflow = by_index.iter().filter(|r| !predicted(r) && mass(r) == 0.0).count();
    summary.insert("underflow_zero_count".into(), underflow as f64);
    let past_ok = crossover_pos.is_some_and(|p| by_index[p..].iter().all(|r| mass(r) == 0.0));
    let genuine = crossover_pos.is_some_and(|p| p > 0);
    Verdict {
        check: "window-support-zeros".into(),
        classification: Classification::ExactZeros { crossover },
        passed: past_ok && genuine && violations.is_empty(),
        detail: match crossover {
            Some(c) => format!(
                "crossover at n = {c}; {} predicted zeros carry mass{}",
                violations.len(),
                if genuine {
                    ""
                } else {
                    "; no transition inside the range"
                }
            ),
            None => "no crossover inside the range".into(),
        },
    }
}

fn superpolynomial_verdict(report: &mut SweepReport, dprime: f64) -> Verdict {
    let power = 1.0 - 1.5 * dprime;
    let points: Vec<(f64, f64)> = report
        .rows
        .iter()
        .map(|r| (r.index as f64, r.values[3]))
        .filter(|p| p.1 > 0.0)
        .collect();
    let x: Vec<f64> = points.iter().map(|p| p.0.powf(power)).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let line = linear_fit(&x, &y);
    let order = local_order(&report.column("exterior_mass").unwrap_or_default());
    let (Ok(line), Ok(order)) = (line, order) else {
        return Verdict {
            check: "superpolynomial-decay".into(),
            classification: Classification::Inconclusive,
            passed: false,
            detail: "not enough nonzero exterior masses".into(),
        };
    };
    report.summary.insert("local_order".into(), order);
    report.summary.insert("log_mass_slope".into(), line.slope);
    report.summary.insert("log_mass_r_squared".into(), line.r_squared);
    let passed = order > SUPERPOLYNOMIAL_ORDER && line.r_squared >= 0.99 && line.slope < 0.0;
    let detail = format!(
        "local order {order:.3} (needs > {SUPERPOLYNOMIAL_ORDER}); log mass vs n^{power} slope {:.4}, R^2 {:.5}",
        line.slope, line.r_squared
    );
    report.linear_fits.insert("log_exterior_mass_vs_n_power".into(), line);
    Verdict {
        check: "superpolynomial-decay".into(),
        classification: if passed {
            Classification::SuperpolynomialDecay { local_order: order }
        } else {
            Classification::PowerLaw { exponent: order }
        },
        passed,
        detail,
    }
}

/// Meridian exterior mass at several window scales, against the equator.
pub fn verify_totally_geodesic_contrast(range: IndexRange, deltas: &[f64]) -> Result<SweepReport> {
    if deltas.is_empty() {
        return Err(Error::InvalidParameter("at least one window scale is needed".into()));
    }
    for d in deltas {
        crate::windows::CutoffProfile::new(*d)?;
    }
    let ks = sphere_degrees(range)?;
    let meridian = Hypersurface::sphere_meridian();
    let equator = Hypersurface::sphere_equator();
    let results: Vec<(i64, Result<SweepRow>)> = ks
        .into_par_iter()
        .map(|k| {
            let row = sphere_highest_weight(k).and_then(|spec| {
                let tm = restrict(&spec, &meridian, None)?;
                let te = restrict(&spec, &equator, None)?;
                let norm = norm_l2(&tm, Data::Dirichlet, NormMethod::Parseval)?;
                let mut values = vec![norm];
                let mut worst: f64 = 0.0;
                for d in deltas {
                    let m = exterior_mass(&tm, *d)?;
                    worst = worst.max(m / norm);
                    values.push(m);
                }
                values.push(worst);
                for d in deltas {
                    values.push(exterior_mass(&te, *d)?);
                }
                values.push(top_mode_offset(&tm));
                Ok(SweepRow {
                    index: k as i64,
                    lambda: spec.lambda,
                    h: spec.h,
                    values,
                })
            });
            (k as i64, row)
        })
        .collect();
    let mut columns = vec!["meridian_norm".to_string()];
    columns.extend(deltas.iter().map(|d| format!("meridian_exterior_{d}")));
    columns.push("meridian_worst_fraction".into());
    columns.extend(deltas.iter().map(|d| format!("equator_exterior_{d}")));
    columns.push("meridian_top_offset".into());
    let column_refs: Vec<&str> = columns.iter().map(|s| s.as_str()).collect();
    let mut report = SweepReport::new(
        format!("sphere-highest-weight k={range} meridian vs equator deltas={deltas:?}"),
        &column_refs,
    );
    report.push_rows(results);
    let worst = report.column_max("meridian_worst_fraction");
    report.summary.insert("max_meridian_fraction".into(), worst);
    report.verdicts.push(Verdict {
        check: "geodesic-exterior-vanishes".into(),
        classification: Classification::ExactZeros { crossover: None },
        passed: worst <= 1e-12,
        detail: format!(
            "max meridian exterior fraction {worst:e}; on a geodesic every mode has R < 1, \
             while the curved disc circle needs window delta below the family offset exponent"
        ),
    });
    Ok(report)
}

/// `1 - R(m)` at the highest active mode.
fn top_mode_offset(trace: &Trace) -> f64 {
    let peak = trace.dirichlet_series.peak();
    trace
        .dirichlet_series
        .modes()
        .filter(|(_, a)| a.norm() > 0.0 && a.norm() >= 1e-300 * peak)
        .map(|(m, _)| 1.0 - trace.symbol(m))
        .fold(f64::INFINITY, f64::min)
}
