//! Discrete Fourier analysis of periodic samples.
//!
//! Samples `u_j = u(j L / N)` and coefficients `a_m`, `m in [-N/2, N/2)`, are
//! related by `u_j = sum_m a_m exp(2 pi i m j / N)`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_GRID: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSeries {
    period: f64,
    /// `coefficients[i]` holds `a_{i - N/2}`.
    coefficients: Vec<Complex64>,
}

fn check_grid(n: usize) -> Result<()> {
    if n < MIN_GRID || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "grid size must be even and at least {MIN_GRID}, got {n}"
        )));
    }
    Ok(())
}

pub fn analyze_fourier(samples: &[Complex64], period: f64) -> Result<FourierSeries> {
    let n = samples.len();
    check_grid(n)?;
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "period must be positive, got {period}"
        )));
    }
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let half = n / 2;
    // FFT output index j holds mode j for j < N/2 and mode j - N for j >= N/2.
    let coefficients = (0..n)
        .map(|i| {
            let j = (i + half) % n;
            buf[j] * scale
        })
        .collect();
    Ok(FourierSeries { period, coefficients })
}

pub fn synthesize(series: &FourierSeries, grid: usize) -> Result<Vec<Complex64>> {
    check_grid(grid)?;
    let len = series.coefficients.len();
    if grid < len {
        return Err(Error::SizeMismatch {
            expected: len,
            got: grid,
        });
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); grid];
    for (m, a) in series.modes() {
        let idx = m.rem_euclid(grid as i64) as usize;
        buf[idx] += a;
    }
    FftPlanner::new().plan_fft_inverse(grid).process(&mut buf);
    Ok(buf)
}

impl FourierSeries {
    pub fn from_coefficients(period: f64, coefficients: Vec<Complex64>) -> Result<Self> {
        check_grid(coefficients.len())?;
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "period must be positive, got {period}"
            )));
        }
        Ok(Self { period, coefficients })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn min_mode(&self) -> i64 {
        -((self.coefficients.len() / 2) as i64)
    }

    /// Coefficient of mode `m`; zero outside the stored band.
    pub fn coefficient(&self, m: i64) -> Complex64 {
        let idx = m - self.min_mode();
        if idx < 0 || idx as usize >= self.coefficients.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[idx as usize]
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `(m, a_m)` pairs in increasing `m`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let lo = self.min_mode();
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(i, a)| (lo + i as i64, *a))
    }

    /// Multiply each coefficient by `weight(m)`.
    pub fn filtered(&self, weight: impl Fn(i64) -> f64) -> FourierSeries {
        let coefficients = self.modes().map(|(m, a)| a * weight(m)).collect();
        FourierSeries {
            period: self.period,
            coefficients,
        }
    }

    /// `L sum |a_m|^2`, the squared `L^2` norm over one period.
    pub fn norm_squared(&self) -> f64 {
        self.period * self.coefficients.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }

    /// Largest coefficient modulus.
    pub fn peak(&self) -> f64 {
        self.coefficients.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect()
    }

    #[test]
    fn pure_mode() {
        let s = analyze_fourier(&grid(32, |x| Complex64::from_polar(1.0, 3.0 * x)), 2.0 * PI).unwrap();
        for (m, a) in s.modes() {
            let expected = if m == 3 { 1.0 } else { 0.0 };
            assert!((a - expected).norm() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn constant() {
        let s = analyze_fourier(&grid(16, |_| Complex64::new(1.0, 0.0)), 2.0 * PI).unwrap();
        assert!((s.coefficient(0) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn sin_cubed_against_binomial_expansion() {
        // (e^{ix} - e^{-ix})^3 / (2i)^3 = sum_j C(3,j) (-1)^j e^{i(3-2j)x} / (2i)^3
        let denom = Complex64::new(0.0, 2.0).powi(3);
        let mut expected = std::collections::BTreeMap::new();
        let binom = [1.0, 3.0, 3.0, 1.0];
        for (j, c) in binom.iter().enumerate() {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            expected.insert(3 - 2 * j as i64, Complex64::new(sign * c, 0.0) / denom);
        }
        let s = analyze_fourier(&grid(32, |x| Complex64::new(x.sin().powi(3), 0.0)), 2.0 * PI).unwrap();
        for (m, a) in s.modes() {
            let e = expected.get(&m).copied().unwrap_or_default();
            assert!((a - e).norm() < 1e-12, "m={m}: {a} vs {e}");
        }
        assert!((s.coefficient(1) - Complex64::new(0.0, -3.0 / 8.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_odd_or_small_grids() {
        assert!(analyze_fourier(&[Complex64::default(); 7], 1.0).is_err());
        assert!(analyze_fourier(&[Complex64::default(); 6], 1.0).is_err());
        assert!(analyze_fourier(&[Complex64::default(); 8], 0.0).is_err());
    }

    #[test]
    fn synthesis_zero_pads() {
        let s = analyze_fourier(&grid(16, |x| Complex64::from_polar(1.0, -2.0 * x)), 2.0 * PI).unwrap();
        let fine = synthesize(&s, 64).unwrap();
        let direct = grid(64, |x| Complex64::from_polar(1.0, -2.0 * x));
        for (a, b) in fine.iter().zip(&direct) {
            assert!((a - b).norm() < 1e-13);
        }
        assert!(synthesize(&s, 8).is_err());
    }
}
