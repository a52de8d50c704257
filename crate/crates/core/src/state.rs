//! Classical oscillator states and their polar representation `ε = ρ e^{iφ}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sampled;

/// Complex solution `ε` of `ε̈ + Ω²(t) ε = 0` and its time derivative at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorState {
    pub t: f64,
    pub eps: Complex64,
    pub deps: Complex64,
}

impl OscillatorState {
    pub fn new(t: f64, eps: Complex64, deps: Complex64) -> Self {
        Self { t, eps, deps }
    }

    /// `W = ε̇ ε* − ε ε̇*`; equals `2i` for a normalized solution.
    pub fn wronskian(&self) -> Complex64 {
        self.deps * self.eps.conj() - self.eps * self.deps.conj()
    }

    pub fn rho(&self) -> f64 {
        self.eps.norm()
    }

    /// `ρ̇ = Re(ε̇ ε*) / ρ`, taken from the state rather than by differentiating samples.
    pub fn drho(&self) -> f64 {
        (self.deps * self.eps.conj()).re / self.rho()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            t: self.t,
            eps: self.eps * factor,
            deps: self.deps * factor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarForm {
    pub t: f64,
    pub rho: f64,
    pub drho: f64,
    /// Continuous (unwrapped) argument of `ε`.
    pub phase: f64,
}

impl PolarForm {
    pub fn eps(&self) -> Complex64 {
        Complex64::from_polar(self.rho, self.phase)
    }

    /// Rebuild the full state assuming Wronskian normalization, i.e. `φ̇ = 1/ρ²`.
    pub fn to_state(&self) -> OscillatorState {
        let rotation = Complex64::from_polar(1.0, self.phase);
        OscillatorState {
            t: self.t,
            eps: self.eps(),
            deps: Complex64::new(self.drho, 1.0 / self.rho) * rotation,
        }
    }
}

/// Polar decomposition of a series. The phase starts at the principal argument of the
/// first sample and is unwrapped across samples, so jumps larger than `π` are removed.
pub fn to_polar(series: &[OscillatorState]) -> Result<Vec<PolarForm>> {
    let mut out = Vec::with_capacity(series.len());
    let mut previous: Option<(f64, f64)> = None;
    for state in series {
        let rho = state.rho();
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Domain {
                what: "|ε|",
                t: state.t,
            });
        }
        let raw = state.eps.arg();
        let phase = match previous {
            None => raw,
            Some((prev_raw, prev_phase)) => {
                let mut delta = raw - prev_raw;
                while delta > PI {
                    delta -= 2.0 * PI;
                }
                while delta <= -PI {
                    delta += 2.0 * PI;
                }
                prev_phase + delta
            }
        };
        previous = Some((raw, phase));
        out.push(PolarForm {
            t: state.t,
            rho,
            drho: state.drho(),
            phase,
        });
    }
    Ok(out)
}

pub fn from_polar(series: &[PolarForm]) -> Vec<OscillatorState> {
    series.iter().map(PolarForm::to_state).collect()
}

/// Largest deviation between the unwrapped phase increment and the running quadrature
/// `∫ dτ / ρ²(τ)` over the samples. Small for normalized solutions sampled finely enough.
pub fn phase_quadrature_deviation(series: &[PolarForm]) -> Result<f64> {
    let t: Vec<f64> = series.iter().map(|p| p.t).collect();
    let rate: Vec<f64> = series.iter().map(|p| 1.0 / (p.rho * p.rho)).collect();
    let integral = sampled::cumulative_integral(&t, &rate)?;
    let origin = series[0].phase;
    Ok(series
        .iter()
        .zip(&integral)
        .map(|(p, q)| (p.phase - origin - q).abs())
        .fold(0.0, f64::max))
}
