//! The oscillator frequency `Ω²(t)` defined by the Hamiltonian coefficients.
//!
//! `Ω²` may be negative (parametrically unstable regions); nothing here assumes positivity.

use std::fmt;
use std::sync::Arc;

use crate::coeffs::{CoeffPoint, CoefficientSet};
use crate::error::{Error, Result};
use crate::waveguide::WaveguideParams;

/// `Ω² = 4ac + 2(ȧ/a)b + ä/(2a) − 3ȧ²/(4a²) − 4b² − 2ḃ` at an evaluated coefficient point.
pub fn omega_squared_at(p: &CoeffPoint) -> f64 {
    let ratio = p.da / p.a;
    4.0 * p.a * p.c + 2.0 * ratio * p.b + p.dda / (2.0 * p.a) - 0.75 * ratio * ratio - 4.0 * p.b * p.b - 2.0 * p.db
}

pub fn omega_squared_general(coeffs: &CoefficientSet, t: f64) -> Result<f64> {
    coeffs.at(t).map(|p| omega_squared_at(&p))
}

/// Waveguide coefficients together with their analytic derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub da: f64,
    pub dda: f64,
    pub db: f64,
}

/// `a = 1/2 − (s/ω) cos 2ωt`, `b = −s sin 2ωt`, `c = ω²/2 + sω cos 2ωt`.
pub fn waveguide_coefficients(params: &WaveguideParams, t: f64) -> WaveguideCoefficients {
    let (w, s) = (params.omega(), params.s());
    let (sin, cos) = (2.0 * w * t).sin_cos();
    WaveguideCoefficients {
        a: 0.5 - (s / w) * cos,
        b: -s * sin,
        c: 0.5 * w * w + s * w * cos,
        da: 2.0 * s * sin,
        dda: 4.0 * s * w * cos,
        db: -2.0 * s * w * cos,
    }
}

/// The waveguide frequency written out in closed form, term by term.
pub fn waveguide_omega_squared(params: &WaveguideParams, t: f64) -> Result<f64> {
    let (w, s) = (params.omega(), params.s());
    let (sin, cos) = (2.0 * w * t).sin_cos();
    let denom = w - 2.0 * s * cos;
    if !(denom > 0.0) {
        return Err(Error::Domain {
            what: "ω − 2s cos(2ωt)",
            t,
        });
    }
    let sin2 = sin * sin;
    Ok(
        w * w - 4.0 * s * s + 4.0 * s * w * cos + (4.0 * s * w * w * cos - 8.0 * s * s * w * sin2) / denom
            - 12.0 * s * s * w * w * sin2 / (denom * denom),
    )
}

/// An evaluable `Ω²(t)`.
#[derive(Clone)]
pub struct FrequencyProfile {
    omega2: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl FrequencyProfile {
    pub fn new(omega2: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            omega2: Arc::new(omega2),
        }
    }

    pub fn constant(omega2: f64) -> Self {
        Self::new(move |_| omega2)
    }

    /// `Ω²` from arbitrary coefficients. Points outside the domain evaluate to NaN,
    /// which integrators report as a non-finite state.
    pub fn from_coefficients(coeffs: CoefficientSet) -> Self {
        Self::new(move |t| omega_squared_general(&coeffs, t).unwrap_or(f64::NAN))
    }

    pub fn waveguide(params: WaveguideParams) -> Self {
        Self::new(move |t| waveguide_omega_squared(&params, t).unwrap_or(f64::NAN))
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.omega2)(t)
    }

    /// Ensures the profile is finite at every given time.
    pub fn check_finite(&self, times: &[f64]) -> Result<()> {
        match times.iter().find(|&&t| !self.eval(t).is_finite()) {
            Some(&t) => Err(Error::NonFinite { t }),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for FrequencyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrequencyProfile").finish_non_exhaustive()
    }
}
