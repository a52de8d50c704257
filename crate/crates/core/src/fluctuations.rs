//! Second moments of `q̂`, `p̂` in eigenstates of the linear invariant, expressed through the
//! amplitude `ρ = |ε|`, and first moments through the invariant eigenvalue `z`.

use num_complex::Complex64;

use crate::coeffs::{CoeffPoint, CoefficientSet};
use crate::error::{Error, Result};
use crate::state::OscillatorState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationRecord {
    pub t: f64,
    pub sigma_q2: f64,
    pub sigma_p2: f64,
    pub c_qp2: f64,
    /// Signed cofluctuation. Only its square follows from the uncertainty relation; the sign
    /// here is the one that makes `Π = c_qp / σ` in the `(σ, Π)` Hamilton pair.
    pub c_qp: f64,
    /// `σ_q² σ_p² − c_qp² − ħ²/4`.
    pub saturation_residual: f64,
}

impl FluctuationRecord {
    pub fn new(t: f64, sigma_q2: f64, sigma_p2: f64, c_qp: f64, hbar: f64) -> Self {
        let c_qp2 = c_qp * c_qp;
        Self {
            t,
            sigma_q2,
            sigma_p2,
            c_qp2,
            c_qp,
            saturation_residual: saturation_residual_of(sigma_q2, sigma_p2, c_qp2, hbar),
        }
    }
}

pub(crate) fn saturation_residual_of(sigma_q2: f64, sigma_p2: f64, c_qp2: f64, hbar: f64) -> f64 {
    sigma_q2 * sigma_p2 - c_qp2 - 0.25 * hbar * hbar
}

/// `bρ − ρ̇/2 − (ȧ/4a)ρ`, the bracket shared by `σ_p²`, `c_qp` and the Hamilton-pair momentum.
pub fn amplitude_bracket(p: &CoeffPoint, rho: f64, drho: f64) -> f64 {
    p.b * rho - 0.5 * drho - p.log_rate_quarter() * rho
}

/// `σ_q² = ħaρ²`, `σ_p² = (ħ/a)[1/(4ρ²) + B²]`, `c_qp² = ħ²ρ²B²` with `B` the amplitude bracket.
pub fn fluctuations_from_rho(
    coeffs: &CoefficientSet,
    rho: f64,
    drho: f64,
    hbar: f64,
    t: f64,
) -> Result<FluctuationRecord> {
    fluctuations_at(&coeffs.at(t)?, rho, drho, hbar)
}

pub fn fluctuations_at(p: &CoeffPoint, rho: f64, drho: f64, hbar: f64) -> Result<FluctuationRecord> {
    if !(rho > 0.0) {
        return Err(Error::Domain { what: "ρ", t: p.t });
    }
    if !(hbar > 0.0) {
        return Err(Error::InvalidParameter(format!("ħ must be positive, got {hbar}")));
    }
    let bracket = amplitude_bracket(p, rho, drho);
    let sigma_q2 = hbar * p.a * rho * rho;
    let sigma_p2 = (hbar / p.a) * (0.25 / (rho * rho) + bracket * bracket);
    let c_qp = -hbar * rho * bracket;
    Ok(FluctuationRecord::new(p.t, sigma_q2, sigma_p2, c_qp, hbar))
}

/// Fluctuations from an integrated state, with `ρ̇` read off the state.
pub fn fluctuations_from_state(
    coeffs: &CoefficientSet,
    state: &OscillatorState,
    hbar: f64,
) -> Result<FluctuationRecord> {
    fluctuations_from_rho(coeffs, state.rho(), state.drho(), hbar, state.t)
}

/// Means `q = √(ħa)·2Re(zε*)`, `p = −√(ħ/a)·2Re[z·(bε − ε̇/2 − (ȧ/4a)ε)*]` in the invariant
/// eigenstate with eigenvalue `z`.
pub fn first_moments(coeffs: &CoefficientSet, state: &OscillatorState, z: Complex64, hbar: f64) -> Result<(f64, f64)> {
    let p = coeffs.at(state.t)?;
    let bracket = p.b * state.eps - 0.5 * state.deps - p.log_rate_quarter() * state.eps;
    let q_mean = (hbar * p.a).sqrt() * 2.0 * (z * state.eps.conj()).re;
    let p_mean = -(hbar / p.a).sqrt() * 2.0 * (z * bracket.conj()).re;
    Ok((q_mean, p_mean))
}
