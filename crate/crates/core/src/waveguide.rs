//! The degenerate down-conversion waveguide: coefficients, the closed-form oscillator
//! solution, closed-form fluctuations and the cross-validation of both against the general
//! pipeline (frequency → integration → fluctuations).

use num_complex::Complex64;

use crate::coeffs::CoefficientSet;
use crate::dynamics::integrate_oscillator;
use crate::error::{Error, Result};
use crate::fluctuations::{fluctuations_from_state, FluctuationRecord};
use crate::frequency::{omega_squared_general, waveguide_coefficients, waveguide_omega_squared, FrequencyProfile};
use crate::grid::TimeGrid;
use crate::integrator::IntegratorConfig;
use crate::parallel::{self, Execution};
use crate::quadrature;
use crate::state::OscillatorState;

/// Phase quadrature tolerance used when callers do not choose one.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideParams {
    omega: f64,
    s: f64,
    hbar: f64,
}

impl WaveguideParams {
    /// Requires `ω > 0`, `s ≥ 0`, `ħ > 0` and `2s < ω`, which keeps `a(t) > 0`.
    pub fn new(omega: f64, s: f64, hbar: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!("ω must be positive, got {omega}")));
        }
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::InvalidParameter(format!("s must be non-negative, got {s}")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(format!("ħ must be positive, got {hbar}")));
        }
        if !(2.0 * s < omega) {
            return Err(Error::InvalidParameter(format!(
                "stability requires 2s < ω, got s = {s}, ω = {omega}"
            )));
        }
        Ok(Self { omega, s, hbar })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// The coefficient set with analytic derivatives.
    pub fn coefficient_set(&self) -> CoefficientSet {
        let p = *self;
        CoefficientSet::numeric(
            move |t| waveguide_coefficients(&p, t).a,
            move |t| waveguide_coefficients(&p, t).b,
            move |t| waveguide_coefficients(&p, t).c,
        )
        .with_derivatives(
            move |t| waveguide_coefficients(&p, t).da,
            move |t| waveguide_coefficients(&p, t).dda,
            move |t| waveguide_coefficients(&p, t).db,
        )
    }

    pub fn frequency(&self) -> FrequencyProfile {
        FrequencyProfile::waveguide(*self)
    }

    /// `N(t) = 1 + 2sinh²(st) − sinh(2st) sin(2ωt)` and its derivative.
    ///
    /// Evaluated as `cosh x [(1 − tanh x) + 2 tanh x sin²(π/4 − θ/2)]` with `x = 2st`, `θ = 2ωt`,
    /// which is the same function without the cancellation between the `O(e^{x})` terms.
    pub fn numerator(&self, t: f64) -> (f64, f64) {
        let (w, s) = (self.omega, self.s);
        let theta = (2.0 * w * t).rem_euclid(2.0 * std::f64::consts::PI);
        let cos = theta.cos();
        let x = 2.0 * s * t;
        let (ch, th) = (x.cosh(), x.tanh());
        let one_minus_th = 2.0 / ((2.0 * x).exp() + 1.0);
        let gap = (std::f64::consts::FRAC_PI_4 - 0.5 * theta).sin();
        let one_minus_sin = 2.0 * gap * gap;
        let n = ch * (one_minus_th + th * one_minus_sin);
        // N′ = 2s cosh x (tanh x − sin θ) − 2ω sinh x cos θ.
        let dn = 2.0 * s * ch * (one_minus_sin - one_minus_th) - 2.0 * w * x.sinh() * cos;
        (n, dn)
    }

    /// `D(t) = ω − 2s cos(2ωt)` and its derivative.
    pub fn denominator(&self, t: f64) -> (f64, f64) {
        let (w, s) = (self.omega, self.s);
        let (sin, cos) = (2.0 * w * t).sin_cos();
        (w - 2.0 * s * cos, 4.0 * s * w * sin)
    }
}

/// `ρ`, `ρ̇` of the closed form at `t`.
fn closed_form_amplitude(params: &WaveguideParams, t: f64) -> Result<(f64, f64)> {
    let (n, dn) = params.numerator(t);
    let (d, dd) = params.denominator(t);
    if !(n > 0.0) || !(d > 0.0) {
        return Err(Error::Domain { what: "ρ² = N/D", t });
    }
    let rho = (n / d).sqrt();
    let drho = (dn * d - n * dd) / (d * d) / (2.0 * rho);
    Ok((rho, drho))
}

fn phase_rate(params: &WaveguideParams) -> impl Fn(f64) -> f64 + '_ {
    move |t| params.denominator(t).0 / params.numerator(t).0
}

fn state_from(t: f64, rho: f64, drho: f64, phase: f64) -> OscillatorState {
    let rotation = Complex64::from_polar(1.0, phase);
    OscillatorState::new(t, rho * rotation, Complex64::new(drho, 1.0 / rho) * rotation)
}

/// `ε(t) = ρ e^{iφ}` with `ρ² = N/D` and `φ = ∫₀ᵗ D/N`, the phase by adaptive quadrature.
pub fn closed_form_epsilon(params: &WaveguideParams, t: f64, quad_tol: f64) -> Result<OscillatorState> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("closed form needs t ≥ 0, got {t}")));
    }
    let (rho, drho) = closed_form_amplitude(params, t)?;
    let (phase, _) = quadrature::integrate(phase_rate(params), 0.0, t, quad_tol)?;
    Ok(state_from(t, rho, drho, phase))
}

/// The closed form on non-decreasing times `≥ 0`, accumulating the phase interval by interval.
/// Each interval gets an equal share of `quad_tol`.
pub fn closed_form_series(params: &WaveguideParams, times: &[f64], quad_tol: f64) -> Result<Vec<OscillatorState>> {
    let Some(&first) = times.first() else {
        return Ok(Vec::new());
    };
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("times must be non-decreasing".into()));
    }
    let share = quad_tol / times.len() as f64;
    let rate = phase_rate(params);
    let mut out = Vec::with_capacity(times.len());
    if !(first >= 0.0) {
        return Err(Error::InvalidParameter(format!("closed form needs t ≥ 0, got {first}")));
    }
    // Accumulated (not principal) phase at the first sample.
    let mut phase = quadrature::integrate(&rate, 0.0, first, quad_tol)?.0;
    let (rho, drho) = closed_form_amplitude(params, first)?;
    out.push(state_from(first, rho, drho, phase));
    for w in times.windows(2) {
        phase += quadrature::integrate(&rate, w[0], w[1], share)?.0;
        let (rho, drho) = closed_form_amplitude(params, w[1])?;
        out.push(state_from(w[1], rho, drho, phase));
    }
    Ok(out)
}

/// `σ_q² = (ħ/2ω)(N)`, `σ_p² = (ħω/2)(1 + 2sinh²(st) + sinh(2st) sin 2ωt)`,
/// `c_qp² = (ħ²/4) sinh²(2st) cos²(2ωt)`.
pub fn waveguide_fluctuations_closed_form(params: &WaveguideParams, t: f64) -> FluctuationRecord {
    let (w, s, hbar) = (params.omega, params.s, params.hbar);
    let theta = (2.0 * w * t).rem_euclid(2.0 * std::f64::consts::PI);
    let x = 2.0 * s * t;
    let (n, _) = params.numerator(t);
    // Companion of N with the sign of the sine flipped, in the same cancellation-free form.
    let gap = (std::f64::consts::FRAC_PI_4 + 0.5 * theta).sin();
    let n_plus = x.cosh() * (2.0 / ((2.0 * x).exp() + 1.0) + x.tanh() * 2.0 * gap * gap);
    let sigma_q2 = hbar / (2.0 * w) * n;
    let sigma_p2 = hbar * w / 2.0 * n_plus;
    // Only the square is given in closed form; the sign follows from the −sinh·cos structure
    // of the cofluctuation so that it can be compared with the signed ρ-derived value.
    let c_qp = -0.5 * hbar * x.sinh() * theta.cos();
    FluctuationRecord::new(t, sigma_q2, sigma_p2, c_qp, hbar)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationTolerances {
    pub ode: f64,
    pub wronskian: f64,
    pub fluct: f64,
    pub omega: f64,
    pub saturation: f64,
    /// `a(t)/D(t) − 1/(2ω)`, an exact identity up to roundoff.
    pub width_identity: f64,
}

impl Default for ValidationTolerances {
    fn default() -> Self {
        Self {
            ode: 1e-6,
            wronskian: 1e-8,
            fluct: 1e-6,
            omega: 1e-10,
            saturation: 1e-12,
            width_identity: 1e-12,
        }
    }
}

impl ValidationTolerances {
    /// Every tolerance ×0.01.
    pub fn strict(self) -> Self {
        Self {
            ode: self.ode * 0.01,
            wronskian: self.wronskian * 0.01,
            fluct: self.fluct * 0.01,
            omega: self.omega * 0.01,
            saturation: self.saturation * 0.01,
            width_identity: self.width_identity * 0.01,
        }
    }
}

/// Where a residual peaks and where it first leaves its tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualTrace {
    pub max: f64,
    pub at: f64,
    pub first_violation: Option<f64>,
    pub tolerance: f64,
}

impl ResidualTrace {
    fn from_samples(samples: impl IntoIterator<Item = (f64, f64)>, tolerance: f64) -> Self {
        let mut trace = Self {
            max: 0.0,
            at: f64::NAN,
            first_violation: None,
            tolerance,
        };
        for (t, r) in samples {
            // NaN latches as the maximum so that it can never pass.
            if trace.at.is_nan() || r > trace.max || (r.is_nan() && !trace.max.is_nan()) {
                trace.max = r;
                trace.at = t;
            }
            if trace.first_violation.is_none() && !(r < tolerance) {
                trace.first_violation = Some(t);
            }
        }
        trace
    }

    pub fn passed(&self) -> bool {
        self.max < self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub params: WaveguideParams,
    /// Pointwise `|ε_num − ε_closed| / |ε_closed|`.
    pub ode: ResidualTrace,
    /// `|W(t) − 2i|` along the integration.
    pub wronskian: ResidualTrace,
    /// Relative mismatch of ρ-derived vs closed-form fluctuations; `c_qp²` is measured
    /// against `σ_q²σ_p²`, the natural bound on it.
    pub fluct: ResidualTrace,
    /// `|σ_q²σ_p² − c_qp² − ħ²/4| / (ħ²/4)` over both fluctuation sources.
    pub saturation: ResidualTrace,
    /// `|Ω²_general − Ω²_closed| / max(1, ω²)`.
    pub omega: ResidualTrace,
    pub width_identity: ResidualTrace,
    pub tolerances: ValidationTolerances,
    pub passed: bool,
}

impl ValidationReport {
    pub fn max_ode_residual(&self) -> f64 {
        self.ode.max
    }

    pub fn max_wronskian_drift(&self) -> f64 {
        self.wronskian.max
    }

    pub fn max_fluct_mismatch(&self) -> f64 {
        self.fluct.max
    }

    pub fn max_saturation_residual(&self) -> f64 {
        self.saturation.max
    }

    pub fn max_omega_consistency(&self) -> f64 {
        self.omega.max
    }

    pub fn checks(&self) -> [(&'static str, &ResidualTrace); 6] {
        [
            ("ode_residual", &self.ode),
            ("wronskian_drift", &self.wronskian),
            ("fluct_mismatch", &self.fluct),
            ("saturation_residual", &self.saturation),
            ("omega_consistency", &self.omega),
            ("width_identity", &self.width_identity),
        ]
    }
}

fn relative(x: f64, reference: f64, scale: f64) -> f64 {
    (x - reference).abs() / reference.abs().max(scale)
}

/// Relative mismatch of two fluctuation records as used by the report.
pub fn fluctuation_mismatch(derived: &FluctuationRecord, closed: &FluctuationRecord) -> f64 {
    let bound = closed.sigma_q2 * closed.sigma_p2;
    relative(derived.sigma_q2, closed.sigma_q2, 0.0)
        .max(relative(derived.sigma_p2, closed.sigma_p2, 0.0))
        .max((derived.c_qp2 - closed.c_qp2).abs() / bound)
}

/// The four checks: integrated vs closed-form `ε`, Wronskian drift, `ρ`-derived vs
/// closed-form fluctuations, and the two frequency formulas. Initial data comes from the
/// closed form at the grid start.
pub fn cross_validate(
    params: &WaveguideParams,
    grid: &TimeGrid,
    cfg: &IntegratorConfig,
    tols: &ValidationTolerances,
) -> Result<ValidationReport> {
    cross_validate_with(params, grid, cfg, tols, Execution::default())
}

pub fn cross_validate_with(
    params: &WaveguideParams,
    grid: &TimeGrid,
    cfg: &IntegratorConfig,
    tols: &ValidationTolerances,
    exec: Execution,
) -> Result<ValidationReport> {
    cfg.validate()?;
    let times = grid.points();
    let coeffs = params.coefficient_set();
    let hbar = params.hbar();
    let quarter = 0.25 * hbar * hbar;

    let (numeric, closed) = parallel::join(
        exec,
        || -> Result<_> {
            let init = closed_form_epsilon(params, grid.t_start(), DEFAULT_QUAD_TOL)?;
            integrate_oscillator(&params.frequency(), init, grid, cfg)
        },
        || closed_form_series(params, &times, DEFAULT_QUAD_TOL),
    );
    let (numeric, closed) = (numeric?, closed?);

    let trajectory_checks = || {
        let ode = ResidualTrace::from_samples(
            numeric
                .states
                .iter()
                .zip(&closed)
                .map(|(n, c)| (n.t, (n.eps - c.eps).norm() / c.eps.norm())),
            tols.ode,
        );
        let two_i = Complex64::new(0.0, 2.0);
        let wronskian = ResidualTrace::from_samples(
            numeric.states.iter().map(|s| (s.t, (s.wronskian() - two_i).norm())),
            tols.wronskian,
        );
        (ode, wronskian)
    };
    let fluctuation_checks = || -> Result<(ResidualTrace, ResidualTrace)> {
        let mut mismatch = Vec::with_capacity(times.len());
        let mut saturation = Vec::with_capacity(times.len());
        for state in &numeric.states {
            let derived = fluctuations_from_state(&coeffs, state, hbar)?;
            let reference = waveguide_fluctuations_closed_form(params, state.t);
            mismatch.push((state.t, fluctuation_mismatch(&derived, &reference)));
            let worst = derived
                .saturation_residual
                .abs()
                .max(reference.saturation_residual.abs());
            saturation.push((state.t, worst / quarter));
        }
        Ok((
            ResidualTrace::from_samples(mismatch, tols.fluct),
            ResidualTrace::from_samples(saturation, tols.saturation),
        ))
    };
    let frequency_checks = || -> Result<(ResidualTrace, ResidualTrace)> {
        let scale = params.omega().powi(2).max(1.0);
        let mut omega = Vec::with_capacity(times.len());
        let mut identity = Vec::with_capacity(times.len());
        for &t in &times {
            let general = omega_squared_general(&coeffs, t)?;
            omega.push((t, (general - waveguide_omega_squared(params, t)?).abs() / scale));
            let a = waveguide_coefficients(params, t).a;
            identity.push((t, (a / params.denominator(t).0 - 0.5 / params.omega()).abs()));
        }
        Ok((
            ResidualTrace::from_samples(omega, tols.omega),
            ResidualTrace::from_samples(identity, tols.width_identity),
        ))
    };
    let ((ode, wronskian), (fluct, freq)) = parallel::join(exec, trajectory_checks, || {
        parallel::join(exec, fluctuation_checks, frequency_checks)
    });
    let ((fluct, saturation), (omega, width_identity)) = (fluct?, freq?);
    let passed = [&ode, &wronskian, &fluct, &saturation, &omega, &width_identity]
        .iter()
        .all(|c| c.passed());
    Ok(ValidationReport {
        params: *params,
        ode,
        wronskian,
        fluct,
        saturation,
        omega,
        width_identity,
        tolerances: *tols,
        passed,
    })
}
