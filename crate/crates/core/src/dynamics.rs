//! Integration of the equation forms tied to the classical oscillator: the complex
//! oscillator itself, the Ermakov–Pinney amplitude equation, the Riccati equation with its
//! running integrals, the `(σ, Π)` Hamilton pair and classical phase-space trajectories.

use num_complex::Complex64;

use crate::coeffs::CoefficientSet;
use crate::error::{Error, Result};
use crate::frequency::FrequencyProfile;
use crate::grid::TimeGrid;
use crate::integrator::{integrate, IntegratorConfig};
use crate::state::OscillatorState;

/// Amplitude or width below which the `1/ρ³` barrier is treated as a singularity.
const SINGULAR_THRESHOLD: f64 = 1e-8;

/// `|c1|` beyond which a Riccati solution is declared to have hit a pole.
pub const RICCATI_POLE_MAGNITUDE: f64 = 1e8;

/// A normalized state is one whose Wronskian is `2i` within this distance.
const NORMALIZED_WRONSKIAN: f64 = 1e-12;

fn no_guard<const N: usize>(_: f64, _: &[f64; N], _: f64) -> Result<()> {
    Ok(())
}

fn check_start(grid: &TimeGrid, t: f64) -> Result<()> {
    if t != grid.t_start() {
        return Err(Error::TimeMismatch {
            left: t,
            right: grid.t_start(),
        });
    }
    Ok(())
}

/// `ε(0) = ρ₀`, `ε̇(0) = ρ̇₀ + i/ρ₀`, so that `W = 2i` exactly.
pub fn normalized_initial_state(rho0: f64, drho0: f64) -> Result<OscillatorState> {
    normalized_initial_state_at(0.0, rho0, drho0)
}

pub fn normalized_initial_state_at(t: f64, rho0: f64, drho0: f64) -> Result<OscillatorState> {
    if !(rho0 > 0.0) || !rho0.is_finite() || !drho0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "initial amplitude must be positive and finite, got ρ₀ = {rho0}, ρ̇₀ = {drho0}"
        )));
    }
    Ok(OscillatorState::new(
        t,
        Complex64::new(rho0, 0.0),
        Complex64::new(drho0, 1.0 / rho0),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorRun {
    pub states: Vec<OscillatorState>,
    /// `|W(t) − 2i|` per sample; present only when the initial state was normalized.
    pub wronskian_drift: Option<Vec<f64>>,
}

impl OscillatorRun {
    pub fn max_wronskian_drift(&self) -> Option<f64> {
        self.wronskian_drift
            .as_ref()
            .map(|d| d.iter().copied().fold(0.0, f64::max))
    }
}

/// Solve `ε̈ + Ω²(t) ε = 0` as four real components `(Re ε, Im ε, Re ε̇, Im ε̇)`.
pub fn integrate_oscillator(
    freq: &FrequencyProfile,
    init: OscillatorState,
    grid: &TimeGrid,
    cfg: &IntegratorConfig,
) -> Result<OscillatorRun> {
    check_start(grid, init.t)?;
    integrate_oscillator_at(freq, init, &grid.points(), cfg)
}

/// Same as [`integrate_oscillator`] at arbitrary non-decreasing output times starting at `init.t`.
pub fn integrate_oscillator_at(
    freq: &FrequencyProfile,
    init: OscillatorState,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<OscillatorRun> {
    if let Some(&t0) = times.first() {
        if t0 != init.t {
            return Err(Error::TimeMismatch {
                left: init.t,
                right: t0,
            });
        }
    }
    let y0 = [init.eps.re, init.eps.im, init.deps.re, init.deps.im];
    let rhs = |t: f64, y: &[f64; 4]| {
        let w2 = freq.eval(t);
        [y[2], y[3], -w2 * y[0], -w2 * y[1]]
    };
    let raw = integrate(rhs, y0, times, cfg, no_guard)?;
    let states: Vec<OscillatorState> = times
        .iter()
        .zip(raw)
        .map(|(&t, y)| OscillatorState::new(t, Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3])))
        .collect();
    let two_i = Complex64::new(0.0, 2.0);
    let normalized = (init.wronskian() - two_i).norm() <= NORMALIZED_WRONSKIAN;
    let wronskian_drift = normalized.then(|| states.iter().map(|s| (s.wronskian() - two_i).norm()).collect());
    Ok(OscillatorRun {
        states,
        wronskian_drift,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSample {
    pub t: f64,
    pub rho: f64,
    pub drho: f64,
}

/// Solve `ρ̈ − 1/ρ³ + Ω²(t) ρ = 0`.
pub fn integrate_ermakov(
    freq: &FrequencyProfile,
    rho0: f64,
    drho0: f64,
    grid: &TimeGrid,
    cfg: &IntegratorConfig,
) -> Result<Vec<AmplitudeSample>> {
    if !(rho0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "initial amplitude must be positive, got {rho0}"
        )));
    }
    let times = grid.points();
    let rhs = |t: f64, y: &[f64; 2]| [y[1], 1.0 / y[0].powi(3) - freq.eval(t) * y[0]];
    let guard = |t: f64, y: &[f64; 2], _h: f64| {
        if y[0] <= SINGULAR_THRESHOLD {
            Err(Error::Singularity { what: "ρ", t })
        } else {
            Ok(())
        }
    };
    let raw = integrate(rhs, [rho0, drho0], &times, cfg, guard)?;
    Ok(times
        .iter()
        .zip(raw)
        .map(|(&t, y)| AmplitudeSample {
            t,
            rho: y[0],
            drho: y[1],
        })
        .collect())
}

/// One sample of a Riccati run.
///
/// `c2`, `c3` are the running integrals `∫(a₂′ + a₃′c₁)` and `∫a₃′e^{c₂}`. The pair
/// `lin_exponent = ∫(a₂′ + 2a₃′c₁)`, `lin_integral = ∫a₃′e^{lin_exponent}` is what
/// actually linearizes the Riccati equation (see [`crate::transforms::riccati_to_epsilon`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiSample {
    pub t: f64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
    pub lin_exponent: Complex64,
    pub lin_integral: Complex64,
    pub a3p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiSeries {
    pub samples: Vec<RiccatiSample>,
}

/// Solve `ċ₁ = a₁′ + a₂′c₁ + a₃′c₁²` and accumulate its integrals in the same pass.
pub fn integrate_riccati<F1, F2, F3>(
    a1p: F1,
    a2p: F2,
    a3p: F3,
    c1_0: Complex64,
    grid: &TimeGrid,
    cfg: &IntegratorConfig,
) -> Result<RiccatiSeries>
where
    F1: Fn(f64) -> f64,
    F2: Fn(f64) -> f64,
    F3: Fn(f64) -> f64,
{
    let times = grid.points();
    let rhs = |t: f64, y: &[f64; 10]| {
        let (r1, r2, r3) = (a1p(t), a2p(t), a3p(t));
        let c1 = Complex64::new(y[0], y[1]);
        let c2 = Complex64::new(y[2], y[3]);
        let g = Complex64::new(y[6], y[7]);
        let dc1 = r1 + r2 * c1 + r3 * c1 * c1;
        let dc2 = r2 + r3 * c1;
        let dc3 = r3 * c2.exp();
        let dg = r2 + 2.0 * r3 * c1;
        let dh = r3 * g.exp();
        [
            dc1.re, dc1.im, dc2.re, dc2.im, dc3.re, dc3.im, dg.re, dg.im, dh.re, dh.im,
        ]
    };
    let mut last = (grid.t_start(), c1_0.norm());
    let guard = |t: f64, y: &[f64; 10], _h: f64| {
        let magnitude = y[0].hypot(y[1]);
        last = (t, magnitude);
        if magnitude > RICCATI_POLE_MAGNITUDE {
            Err(Error::RiccatiPole {
                t_estimate: t,
                magnitude,
            })
        } else {
            Ok(())
        }
    };
    let y0 = [c1_0.re, c1_0.im, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let raw = match integrate(rhs, y0, &times, cfg, guard) {
        Ok(raw) => raw,
        // Shrinking steps or overflow while |c1| is already large: a pole just ahead.
        Err(Error::StepSizeUnderflow { t, .. } | Error::NonFinite { t } | Error::StepLimit { t, .. })
            if last.1 > 1e3 =>
        {
            return Err(Error::RiccatiPole {
                t_estimate: t,
                magnitude: last.1,
            })
        }
        Err(e) => return Err(e),
    };
    let c = |y: &[f64; 10], i: usize| Complex64::new(y[i], y[i + 1]);
    Ok(RiccatiSeries {
        samples: times
            .iter()
            .zip(raw)
            .map(|(&t, y)| RiccatiSample {
                t,
                c1: c(&y, 0),
                c2: c(&y, 2),
                c3: c(&y, 4),
                lin_exponent: c(&y, 6),
                lin_integral: c(&y, 8),
                a3p: a3p(t),
            })
            .collect(),
    })
}

/// Width `σ` and conjugate momentum `Π` of a minimum-uncertainty wave packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonPairState {
    pub t: f64,
    pub sigma: f64,
    pub pi: f64,
}

/// Solve `σ̇ = 2bσ + 2aΠ`, `Π̇ = −2cσ − 2bΠ + (ħ²a/2)/σ³`.
pub fn integrate_hamilton_pair(
    coeffs: &CoefficientSet,
    init: HamiltonPairState,
    hbar: f64,
    grid: &TimeGrid,
    cfg: &IntegratorConfig,
) -> Result<Vec<HamiltonPairState>> {
    check_start(grid, init.t)?;
    if !(init.sigma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "initial width must be positive, got {}",
            init.sigma
        )));
    }
    let times = grid.points();
    let rhs = |t: f64, y: &[f64; 2]| {
        let (a, b, c) = (coeffs.a(t), coeffs.b(t), coeffs.c(t));
        let (sigma, pi) = (y[0], y[1]);
        [
            2.0 * b * sigma + 2.0 * a * pi,
            -2.0 * c * sigma - 2.0 * b * pi + 0.5 * hbar * hbar * a / sigma.powi(3),
        ]
    };
    let guard = |t: f64, y: &[f64; 2], _h: f64| {
        if y[0] <= SINGULAR_THRESHOLD {
            Err(Error::Singularity { what: "σ", t })
        } else {
            Ok(())
        }
    };
    let raw = integrate(rhs, [init.sigma, init.pi], &times, cfg, guard)?;
    Ok(times
        .iter()
        .zip(raw)
        .map(|(&t, y)| HamiltonPairState {
            t,
            sigma: y[0],
            pi: y[1],
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    pub t: f64,
    pub q: f64,
    pub p: f64,
}

/// Hamilton's equations `q̇ = 2ap + 2bq`, `ṗ = −2cq − 2bp` of the quadratic Hamiltonian.
pub fn integrate_classical_trajectory(
    coeffs: &CoefficientSet,
    q0: f64,
    p0: f64,
    grid: &TimeGrid,
    cfg: &IntegratorConfig,
) -> Result<Vec<TrajectoryState>> {
    let times = grid.points();
    let rhs = |t: f64, y: &[f64; 2]| {
        let (a, b, c) = (coeffs.a(t), coeffs.b(t), coeffs.c(t));
        [2.0 * a * y[1] + 2.0 * b * y[0], -2.0 * c * y[0] - 2.0 * b * y[1]]
    };
    let raw = integrate(rhs, [q0, p0], &times, cfg, no_guard)?;
    Ok(times
        .iter()
        .zip(raw)
        .map(|(&t, y)| TrajectoryState { t, q: y[0], p: y[1] })
        .collect())
}
