//! End-to-end runs: integrate the oscillator for a scenario and tabulate everything derived
//! from it, one row per output time.

use num_complex::Complex64;

use crate::coeffs::CoefficientSet;
use crate::dynamics::{integrate_oscillator, normalized_initial_state_at};
use crate::error::Result;
use crate::fluctuations::fluctuations_from_state;
use crate::frequency::FrequencyProfile;
use crate::grid::TimeGrid;
use crate::integrator::IntegratorConfig;
use crate::state::{to_polar, OscillatorState};
use crate::waveguide::{closed_form_epsilon, WaveguideParams, DEFAULT_QUAD_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// `a = 1/2, b = 0, c = ω²/2`, started in the ground-state normalization `ρ = 1/√ω`.
    Stationary { omega: f64, hbar: f64 },
    /// The waveguide, started from its closed form at the grid start.
    Waveguide(WaveguideParams),
}

impl Scenario {
    pub fn stationary(omega: f64, hbar: f64) -> Result<Self> {
        // Same validation as the waveguide with no squeezing.
        WaveguideParams::new(omega, 0.0, hbar)?;
        Ok(Scenario::Stationary { omega, hbar })
    }

    pub fn hbar(&self) -> f64 {
        match *self {
            Scenario::Stationary { hbar, .. } => hbar,
            Scenario::Waveguide(p) => p.hbar(),
        }
    }

    pub fn coefficients(&self) -> CoefficientSet {
        match *self {
            Scenario::Stationary { omega, .. } => CoefficientSet::stationary(omega),
            Scenario::Waveguide(p) => p.coefficient_set(),
        }
    }

    pub fn frequency(&self) -> FrequencyProfile {
        match *self {
            Scenario::Stationary { omega, .. } => FrequencyProfile::constant(omega * omega),
            Scenario::Waveguide(p) => p.frequency(),
        }
    }

    pub fn initial_state(&self, t: f64) -> Result<OscillatorState> {
        match *self {
            Scenario::Stationary { omega, .. } => {
                let state = normalized_initial_state_at(t, 1.0 / omega.sqrt(), 0.0)?;
                // Rotate so that the run continues e^{iωt}/√ω rather than restarting its phase.
                Ok(state.scaled(Complex64::from_polar(1.0, omega * t)))
            }
            Scenario::Waveguide(p) => closed_form_epsilon(&p, t, DEFAULT_QUAD_TOL),
        }
    }
}

/// One output row; field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationRow {
    pub t: f64,
    pub eps_re: f64,
    pub eps_im: f64,
    pub deps_re: f64,
    pub deps_im: f64,
    pub rho: f64,
    pub phase: f64,
    pub omega2: f64,
    pub sigma_q2: f64,
    pub sigma_p2: f64,
    pub c_qp2: f64,
    pub wronskian_drift: f64,
    pub saturation_residual: f64,
}

impl SimulationRow {
    pub const COLUMNS: [&'static str; 13] = [
        "t",
        "eps_re",
        "eps_im",
        "deps_re",
        "deps_im",
        "rho",
        "phase",
        "omega2",
        "sigma_q2",
        "sigma_p2",
        "c_qp2",
        "wronskian_drift",
        "saturation_residual",
    ];

    pub fn values(&self) -> [f64; 13] {
        [
            self.t,
            self.eps_re,
            self.eps_im,
            self.deps_re,
            self.deps_im,
            self.rho,
            self.phase,
            self.omega2,
            self.sigma_q2,
            self.sigma_p2,
            self.c_qp2,
            self.wronskian_drift,
            self.saturation_residual,
        ]
    }
}

pub fn simulate(scenario: &Scenario, grid: &TimeGrid, cfg: &IntegratorConfig) -> Result<Vec<SimulationRow>> {
    cfg.validate()?;
    let freq = scenario.frequency();
    let coeffs = scenario.coefficients();
    let hbar = scenario.hbar();
    let run = integrate_oscillator(&freq, scenario.initial_state(grid.t_start())?, grid, cfg)?;
    let polar = to_polar(&run.states)?;
    let two_i = Complex64::new(0.0, 2.0);
    run.states
        .iter()
        .zip(&polar)
        .map(|(s, p)| {
            let rec = fluctuations_from_state(&coeffs, s, hbar)?;
            Ok(SimulationRow {
                t: s.t,
                eps_re: s.eps.re,
                eps_im: s.eps.im,
                deps_re: s.deps.re,
                deps_im: s.deps.im,
                rho: p.rho,
                phase: p.phase,
                omega2: freq.eval(s.t),
                sigma_q2: rec.sigma_q2,
                sigma_p2: rec.sigma_p2,
                c_qp2: rec.c_qp2,
                wronskian_drift: (s.wronskian() - two_i).norm(),
                saturation_residual: rec.saturation_residual,
            })
        })
        .collect()
}
