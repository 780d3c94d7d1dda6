//! Airy function `Ai` on the real line, `|z| <= 30`.
//!
//! * `-6 <= z <= 2`: Maclaurin series.
//! * `z > 2`: `Ai(z) = (1/pi) sqrt(z/3) K_{1/3}(zeta)` with
//!   `K_nu(zeta) = int_0^inf exp(-zeta cosh t) cosh(nu t) dt`, trapezoid rule.
//!   Every term is positive so relative accuracy survives the exponential decay.
//! * `z < -6`: Taylor stepping of `y'' = z y` from the series values at `z = -4`.
//!   The oscillatory side is stable under forward integration.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = -0.258_819_403_792_806_8;

pub const AIRY_RANGE: f64 = 30.0;

pub fn airy_ai(z: f64) -> Result<f64> {
    if !z.is_finite() || z.abs() > AIRY_RANGE {
        return Err(Error::domain("airy_ai", format!("|z| = {} > {AIRY_RANGE}", z.abs())));
    }
    Ok(ai(z))
}

pub(crate) fn ai(z: f64) -> f64 {
    if z > 2.0 {
        ai_integral(z)
    } else if z >= -6.0 {
        maclaurin(z).0
    } else {
        march(-4.0, z).0
    }
}

/// `(Ai(z), Ai'(z))` from the Maclaurin series.
pub(crate) fn maclaurin(z: f64) -> (f64, f64) {
    let z3 = z * z * z;
    // f = sum t_k, g = sum s_k; Ai = AI0 f + AIP0 g
    let mut t = 1.0_f64;
    let mut s = z;
    let mut f = t;
    let mut g = s;
    // derivatives: f' = sum p_k (k >= 1), g' = sum q_k
    let mut p = 0.5 * z * z;
    let mut q = 1.0_f64;
    let mut fp = p;
    let mut gp = q;
    for k in 1..200 {
        let kf = k as f64;
        t *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        s *= z3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        q *= z3 / ((3.0 * kf - 2.0) * (3.0 * kf));
        if k >= 2 {
            p *= z3 / ((3.0 * kf - 3.0) * (3.0 * kf - 1.0));
            fp += p;
        }
        f += t;
        g += s;
        gp += q;
        let scale = f.abs() + g.abs() + 1.0;
        if t.abs() + s.abs() + p.abs() + q.abs() < 1e-18 * scale {
            break;
        }
    }
    (AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp)
}

fn ai_integral(z: f64) -> f64 {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let t_max = (1.0 + 745.0 / zeta).acosh();
    let step = 0.05;
    let count = (t_max / step).ceil() as usize;
    let mut sum = 0.5;
    for j in 1..=count {
        let t = j as f64 * step;
        sum += (-zeta * (t.cosh() - 1.0)).exp() * (t / 3.0).cosh();
    }
    let k13 = sum * step * (-zeta).exp();
    (z / 3.0).sqrt() * k13 / PI
}

/// Integrate `y'' = z y` from `start` (series initial data) to `end`.
pub(crate) fn march(start: f64, end: f64) -> (f64, f64) {
    let (mut y, mut yp) = maclaurin(start);
    let span = end - start;
    let steps = (span.abs() / 0.25).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let mut z0 = start;
    let mut c = [0.0_f64; 64];
    for _ in 0..steps {
        c[0] = y;
        c[1] = yp;
        c[2] = 0.5 * z0 * y;
        for k in 1..62 {
            c[k + 2] = (z0 * c[k] + c[k - 1]) / ((k + 2) as f64 * (k + 1) as f64);
        }
        let mut val = 0.0;
        let mut der = 0.0;
        for k in (0..64).rev() {
            val = val * h + c[k];
        }
        for k in (1..64).rev() {
            der = der * h + k as f64 * c[k];
        }
        y = val;
        yp = der;
        z0 += h;
    }
    (y, yp)
}
