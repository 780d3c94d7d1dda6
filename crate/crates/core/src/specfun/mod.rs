//! Special functions and numerical primitives.

mod airy;
mod bessel;
mod fourier;
mod quadrature;

pub use airy::{airy_ai, AIRY_RANGE};
pub use bessel::{bessel_j, bessel_j_deriv, bessel_zero, MAX_ORDER};
pub use fourier::{analyze_fourier, synthesize, FourierSeries, MIN_GRID};
pub use quadrature::{QuadratureKind, QuadratureRule, MIN_NODES};

pub(crate) use bessel::{jn, jn_deriv, jn_second_deriv, zero_index};
