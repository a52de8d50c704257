//! Squeeze-parameter sweeps: one independent cross-validation per `s`, run concurrently.

use crate::dynamics::integrate_oscillator;
use crate::error::{Error, Result};
use crate::fluctuations::fluctuations_from_state;
use crate::grid::TimeGrid;
use crate::integrator::IntegratorConfig;
use crate::parallel::{self, Execution};
use crate::waveguide::{closed_form_epsilon, DEFAULT_QUAD_TOL};
use crate::waveguide::{
    cross_validate_with, waveguide_fluctuations_closed_form, ValidationTolerances, WaveguideParams,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub s: f64,
    /// `min_t 2ωσ_q²/ħ` from the closed-form fluctuations.
    pub min_squeeze_ratio: f64,
    /// The same minimum from `ρ`-derived fluctuations of the integrated solution.
    pub min_squeeze_ratio_integrated: f64,
    pub max_ode_residual: f64,
    pub max_wronskian_drift: f64,
    pub max_fluct_mismatch: f64,
    pub max_saturation_residual: f64,
    pub max_omega_consistency: f64,
    pub passed: bool,
}

/// `lo, lo + step, …, hi` (inclusive up to a 1e-9 relative slack). `lo == hi` gives one point.
pub fn s_values(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
        return Err(Error::InvalidParameter("s-range bounds must be finite".into()));
    }
    if hi < lo {
        return Err(Error::InvalidParameter(format!("s-range is reversed: {lo} > {hi}")));
    }
    if lo == hi {
        return Ok(vec![lo]);
    }
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "s-range step must be positive, got {step}"
        )));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

/// Parses `lo:hi:step`.
pub fn parse_s_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(Error::InvalidParameter(format!(
            "s-range must look like lo:hi:step, got {spec:?}"
        )));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidParameter(format!("not a number in s-range: {s:?}")))
    };
    s_values(num(lo)?, num(hi)?, num(step)?)
}

pub fn sweep_row(
    omega: f64,
    s: f64,
    hbar: f64,
    grid: &TimeGrid,
    cfg: &IntegratorConfig,
    tols: &ValidationTolerances,
) -> Result<SweepRow> {
    let params = WaveguideParams::new(omega, s, hbar)?;
    // The row itself runs sequentially; concurrency is across rows.
    let report = cross_validate_with(&params, grid, cfg, tols, Execution::Sequential)?;
    let scale = 2.0 * omega / hbar;
    let min_squeeze_ratio = grid
        .points()
        .iter()
        .map(|&t| scale * waveguide_fluctuations_closed_form(&params, t).sigma_q2)
        .fold(f64::INFINITY, f64::min);
    let init = closed_form_epsilon(&params, grid.t_start(), DEFAULT_QUAD_TOL)?;
    let run = integrate_oscillator(&params.frequency(), init, grid, cfg)?;
    let coeffs = params.coefficient_set();
    let mut min_integrated = f64::INFINITY;
    for state in &run.states {
        min_integrated = min_integrated.min(scale * fluctuations_from_state(&coeffs, state, hbar)?.sigma_q2);
    }
    Ok(SweepRow {
        s,
        min_squeeze_ratio,
        min_squeeze_ratio_integrated: min_integrated,
        max_ode_residual: report.max_ode_residual(),
        max_wronskian_drift: report.max_wronskian_drift(),
        max_fluct_mismatch: report.max_fluct_mismatch(),
        max_saturation_residual: report.max_saturation_residual(),
        max_omega_consistency: report.max_omega_consistency(),
        passed: report.passed,
    })
}

/// One row per `s`; rows are independent and computed concurrently under `exec`.
pub fn sweep(
    omega: f64,
    s_values: &[f64],
    hbar: f64,
    grid: &TimeGrid,
    cfg: &IntegratorConfig,
    tols: &ValidationTolerances,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    // Reject bad parameters before spending time on any row.
    for &s in s_values {
        WaveguideParams::new(omega, s, hbar)?;
    }
    parallel::try_map(exec, s_values, |&s| sweep_row(omega, s, hbar, grid, cfg, tols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn ranges() {
        assert_eq!(parse_s_range("0:0:1").unwrap(), vec![0.0]);
        assert_eq!(parse_s_range("0:0.4:0.1").unwrap().len(), 5);
        assert!(parse_s_range("0:0.4:0").is_err());
        assert!(parse_s_range("0.4:0:0.1").is_err());
        assert!(parse_s_range("0:1").is_err());
        assert!(parse_s_range("a:1:0.1").is_err());
        assert_eq!(parse_s_range("0.1:0.1:0").unwrap(), vec![0.1]);
    }

    #[test]
    fn unsqueezed_row() {
        let grid = make_grid(0.0, 5.0, 0.05).unwrap();
        let rows = sweep(
            1.0,
            &[0.0],
            1.0,
            &grid,
            &IntegratorConfig::default(),
            &ValidationTolerances::default(),
            Execution::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].min_squeeze_ratio - 1.0).abs() < 1e-15);
        assert!((rows[0].min_squeeze_ratio_integrated - 1.0).abs() < 1e-9);
    }

    #[test]
    fn squeezing_deepens_with_s() {
        let grid = make_grid(0.0, 10.0, 0.01).unwrap();
        let s = parse_s_range("0:0.4:0.1").unwrap();
        let rows = sweep(
            1.0,
            &s,
            1.0,
            &grid,
            &IntegratorConfig::default(),
            &ValidationTolerances::default(),
            Execution::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 5);
        for w in rows.windows(2) {
            assert!(w[1].min_squeeze_ratio < w[0].min_squeeze_ratio);
        }
        let seq = sweep(
            1.0,
            &s,
            1.0,
            &grid,
            &IntegratorConfig::default(),
            &ValidationTolerances::default(),
            Execution::Sequential,
        )
        .unwrap();
        assert_eq!(rows, seq);
    }

    #[test]
    fn unstable_s_is_rejected() {
        let grid = make_grid(0.0, 1.0, 0.1).unwrap();
        assert!(sweep(
            1.0,
            &[0.1, 0.5],
            1.0,
            &grid,
            &IntegratorConfig::default(),
            &ValidationTolerances::default(),
            Execution::default()
        )
        .is_err());
    }
}
