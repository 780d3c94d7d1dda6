//! Integer-order Bessel functions of the first kind and their zeros.
//!
//! Three evaluation paths cover the envelope `n <= 2000`, `0 <= x <= 10 (n + 1)`:
//!
//! * the power series when `x^2 <= 2 (n + 1)` (no cancellation to speak of),
//! * the trapezoid rule applied to Bessel's integral
//!   `J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt` when `x >= n`,
//! * for `x < n`, the trapezoid value at the anchor order `ceil(x)` carried up to
//!   order `n` with ratios `J_k / J_{k-1}` from the backward continued fraction.
//!
//! The last path keeps relative accuracy deep in the evanescent region where the
//! integral is dominated by cancellation.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported order.
pub const MAX_ORDER: u32 = 2000;

fn check_envelope(function: &'static str, n: u32, x: f64) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::domain(function, format!("order {n} > {MAX_ORDER}")));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(function, format!("x = {x} is not a nonnegative real")));
    }
    let cap = 10.0 * (n as f64 + 1.0);
    if x > cap {
        return Err(Error::domain(function, format!("x = {x} exceeds 10 (n + 1) = {cap}")));
    }
    Ok(())
}

/// `J_n(x)` for integer `n >= 0` and real `x >= 0`.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    check_envelope("bessel_j", n, x)?;
    Ok(jn(n, x))
}

/// `J_n'(x)`, from `(J_{n-1} - J_{n+1}) / 2` (and `-J_1` at `n = 0`).
pub fn bessel_j_deriv(n: u32, x: f64) -> Result<f64> {
    check_envelope("bessel_j_deriv", n, x)?;
    Ok(jn_deriv(n, x))
}

/// `J_m(x)` for any integer order, using `J_{-m} = (-1)^m J_m`.
pub(crate) fn jn_signed(m: i64, x: f64) -> f64 {
    let v = jn(m.unsigned_abs() as u32, x);
    if m < 0 && m % 2 != 0 {
        -v
    } else {
        v
    }
}

pub(crate) fn jn_deriv(n: u32, x: f64) -> f64 {
    if n == 0 {
        -jn(1, x)
    } else {
        0.5 * (jn(n - 1, x) - jn(n + 1, x))
    }
}

/// `J_n''(x) = (J_{n-2} - 2 J_n + J_{n+2}) / 4`.
pub(crate) fn jn_second_deriv(n: u32, x: f64) -> f64 {
    let n = n as i64;
    0.25 * (jn_signed(n - 2, x) - 2.0 * jn_signed(n, x) + jn_signed(n + 2, x))
}

/// Unchecked evaluation; callers guarantee a sensible `(n, x)`.
pub(crate) fn jn(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    if x * x <= 2.0 * (nf + 1.0) {
        return series(n, x);
    }
    if x >= nf {
        return trapezoid(n, x);
    }
    let anchor = x.ceil() as u32;
    if anchor >= n {
        return trapezoid(n, x);
    }
    let base = trapezoid(anchor, x);
    base * ratio_product(anchor, n, x).exp()
}

fn ln_factorial(n: u32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(MAX_ORDER as usize + 8);
        let mut acc = 0.0_f64;
        t.push(0.0);
        for k in 1..=(MAX_ORDER as usize + 6) {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    });
    table[n as usize]
}

fn series(n: u32, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for m in 1..200 {
        let mf = m as f64;
        term *= q / (mf * (mf + n as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    let log_prefactor = n as f64 * (0.5 * x).ln() - ln_factorial(n);
    sum * log_prefactor.exp()
}

fn trapezoid(n: u32, x: f64) -> f64 {
    // Aliasing error is a sum of J_{2M-n}(x) terms; they are below 1e-17 once
    // 2M - n clears x by a few turning-point widths x^{1/3}.
    let intervals = (0.5 * (n as f64 + x + 12.0 * x.cbrt() + 48.0)).max(64.0).ceil() as u64;
    let step = PI / intervals as f64;
    let period = 2 * intervals;
    let n = n as u64;
    // n * tau_j is reduced exactly: n j pi / M = ((n j) mod 2M) pi / M.
    let mut sum = 0.5 * (1.0 + if n.is_multiple_of(2) { 1.0 } else { -1.0 });
    for j in 1..intervals {
        let reduced = (n * j) % period;
        let tau = j as f64 * step;
        sum += (reduced as f64 * step - x * tau.sin()).cos();
    }
    sum / intervals as f64
}

/// `ln(J_n / J_anchor)` as a sum of logarithms of `J_k / J_{k-1}`.
fn ratio_product(anchor: u32, n: u32, x: f64) -> f64 {
    let top = n as f64 + 30.0 + 25.0 * (n as f64).cbrt();
    let top = top.ceil() as u32;
    let mut ratio = 0.0_f64;
    let mut log_sum = 0.0_f64;
    for k in (anchor + 1..=top).rev() {
        ratio = 1.0 / (2.0 * k as f64 / x - ratio);
        if k <= n {
            log_sum += ratio.ln();
        }
    }
    log_sum
}

/// Negative zeros of Ai from the large-k expansion, accurate to ~1e-4 at k = 1.
fn airy_zero_estimate(k: u32) -> f64 {
    let t = 3.0 * PI * (4.0 * k as f64 - 1.0) / 8.0;
    let t2 = t.powi(-2);
    -t.powf(2.0 / 3.0) * (1.0 + t2 * (5.0 / 48.0 - t2 * (5.0 / 36.0 - t2 * 77125.0 / 82944.0)))
}

/// `sqrt(x^2 - n^2) - n arccos(n / x)`, the Debye phase past the turning point.
fn debye_phase(n: f64, x: f64) -> f64 {
    if x <= n {
        return 0.0;
    }
    (x * x - n * n).sqrt() - n * (n / x).acos()
}

/// Initial estimate of `j_{n,k}`.
pub(crate) fn zero_guess(n: u32, k: u32) -> f64 {
    let nf = n as f64;
    if k > n {
        // McMahon
        let beta = (k as f64 + 0.5 * nf - 0.25) * PI;
        let mu = 4.0 * nf * nf;
        let b8 = 8.0 * beta;
        return beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3));
    }
    // Uniform (Airy-type) estimate: solve debye_phase(n, x) = (2/3) |a_k|^{3/2}.
    let target = 2.0 / 3.0 * (-airy_zero_estimate(k)).powf(1.5);
    let mut lo = nf;
    let mut hi = nf + target + 0.5 * PI * nf + 10.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if debye_phase(nf, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Approximate zero counting index at `x`: `j_{n,k}` sits near `zero_index(n, x) = k`.
pub(crate) fn zero_index(n: u32, x: f64) -> f64 {
    debye_phase(n as f64, x) / PI + 0.25
}

/// Local spacing between consecutive zeros of `J_n` near `x`.
fn zero_spacing(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    let ratio = (nf / x).min(1.0);
    let far = PI / (1.0 - ratio * ratio).sqrt().max(1e-3);
    // Near the turning point the spacing scales as n^{1/3}.
    far.min(2.5 * nf.cbrt().max(1.0)).max(1.0)
}

/// The `k`-th positive zero `j_{n,k}` of `J_n`.
pub fn bessel_zero(n: u32, k: u32) -> Result<f64> {
    if n > MAX_ORDER {
        return Err(Error::domain("bessel_zero", format!("order {n} > {MAX_ORDER}")));
    }
    if k == 0 {
        return Err(Error::domain("bessel_zero", "zero index must be positive"));
    }
    let guess = zero_guess(n, k);
    check_envelope("bessel_zero", n, guess * 1.1)?;

    // Walk outward from the guess to the nearest sign change.
    let spacing = zero_spacing(n, guess);
    let step = spacing / 8.0;
    let f_guess = jn(n, guess);
    if f_guess == 0.0 {
        return Ok(guess);
    }
    let mut bracket = None;
    for i in 1..=48 {
        let right = guess + i as f64 * step;
        let prev_right = guess + (i - 1) as f64 * step;
        let fr = jn(n, right);
        let fpr = if i == 1 { f_guess } else { jn(n, prev_right) };
        if fr.signum() != fpr.signum() {
            bracket = Some((prev_right, right, fpr));
            break;
        }
        let left = guess - i as f64 * step;
        if left > 0.0 {
            let prev_left = guess - (i - 1) as f64 * step;
            let fl = jn(n, left);
            let fpl = if i == 1 { f_guess } else { jn(n, prev_left) };
            if fl.signum() != fpl.signum() {
                bracket = Some((left, prev_left, fl));
                break;
            }
        }
    }
    let (lo, hi, f_lo) = bracket.ok_or(Error::ZeroBracket { n, k })?;
    refine_zero(n, lo, hi, f_lo).ok_or(Error::ZeroBracket { n, k })
}

/// Safeguarded Newton inside a sign-change bracket.
fn refine_zero(n: u32, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Option<f64> {
    let nf = n as f64;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let f = jn(n, x);
        if f == 0.0 {
            return Some(x);
        }
        if f.signum() == f_lo.signum() {
            lo = x;
            f_lo = f;
        } else {
            hi = x;
        }
        let slope = if n == 0 { -jn(1, x) } else { jn(n - 1, x) - nf / x * f };
        let newton = x - f / slope;
        let next = if slope != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Some(next);
        }
        x = next;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Power series in plain f64; adequate for small arguments only.
    fn series_oracle(n: u32, x: f64) -> f64 {
        let mut term = (0.5 * x).powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
        let mut sum = term;
        for m in 1..80 {
            term *= -0.25 * x * x / (m as f64 * (m + n) as f64);
            sum += term;
        }
        sum
    }

    fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let fa = f(a);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(m).signum() == fa.signum() {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_deriv(0, 0.0).unwrap(), 0.0);
        assert!((bessel_j_deriv(1, 0.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn first_zero_of_j0_from_series_bisection() {
        let root = bisect(|x| series_oracle(0, x), 2.0, 3.0);
        assert!((root - 2.404825557695773).abs() < 1e-13);
        assert!(bessel_j(0, 2.404825557695773).unwrap().abs() < 1e-10);
        let root1 = bisect(|x| series_oracle(1, x), 3.5, 4.0);
        assert!((bessel_zero(0, 1).unwrap() - root).abs() < 1e-12);
        assert!((bessel_zero(1, 1).unwrap() - root1).abs() < 1e-12);
        assert!((bessel_zero(1, 1).unwrap() - 3.8317059702075125).abs() < 1e-12);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let step = 1e-5;
        let fd = (bessel_j(5, 7.0 + step).unwrap() - bessel_j(5, 7.0 - step).unwrap()) / (2.0 * step);
        assert!((bessel_j_deriv(5, 7.0).unwrap() - fd).abs() < 1e-7);
    }

    #[test]
    fn envelope_is_enforced() {
        assert!(bessel_j(2001, 1.0).is_err());
        assert!(bessel_j(3, 40.5).is_err());
        assert!(bessel_j(3, -1.0).is_err());
        assert!(bessel_j(3, f64::NAN).is_err());
        assert!(bessel_zero(3, 0).is_err());
    }

    #[test]
    fn paths_agree_across_switchovers() {
        // series vs trapezoid vs ratio path around their boundaries
        for &(n, x) in &[(10u32, 4.6), (10, 4.7), (30, 7.8), (30, 8.0), (50, 49.5), (50, 50.5)] {
            let s = series(n, x);
            let t = trapezoid(n, x);
            let r = jn(n, x);
            // the trapezoid loses relative accuracy once J is tiny; the series is the reference there
            let reference = if t.abs() > 1e-6 { t } else { s };
            if x * x <= 4.0 * (n as f64 + 1.0) {
                assert!(
                    ((s - reference) / reference).abs() < 1e-11,
                    "n={n} x={x} s={s} ref={reference}"
                );
            }
            assert!(
                ((r - reference) / reference).abs() < 1e-10,
                "n={n} x={x} r={r} ref={reference}"
            );
        }
    }

    #[test]
    fn zeros_near_twice_the_order() {
        for n in [40u32, 150, 400] {
            let k = zero_index(n, 2.0 * n as f64).round() as u32;
            let z = bessel_zero(n, k).unwrap();
            assert!(jn(n, z).abs() <= 1e-10);
            assert!((z - 2.0 * n as f64).abs() < 4.0);
        }
    }
}
