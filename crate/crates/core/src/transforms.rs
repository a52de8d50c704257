//! Maps between the complex oscillator and the other equation forms it is equivalent to:
//! the Riccati equation, the time-dependent-mass oscillator, the `(σ, Π)` Hamilton pair and
//! the Ermakov–Pinney amplitude. Each map comes with a residual of its target equation,
//! evaluated on samples through local stencils.

use num_complex::Complex64;

use crate::coeffs::CoefficientSet;
use crate::dynamics::{AmplitudeSample, HamiltonPairState, RiccatiSample, RiccatiSeries};
use crate::error::{Error, Result};
use crate::fluctuations::amplitude_bracket;
use crate::invariants::ermakov_residual;
use crate::sampled;
use crate::state::OscillatorState;

/// `(a₁′, a₂′, a₃′) = (−2c, −4b, −2a)`.
pub fn coeffs_to_riccati(coeffs: &CoefficientSet, t: f64) -> (f64, f64, f64) {
    (-2.0 * coeffs.c(t), -4.0 * coeffs.b(t), -2.0 * coeffs.a(t))
}

/// `ε = −e^{−G/2} (m₀ω₀ H + i) / √(m₀ω₀ a₃′)` with `G = ∫(a₂′ + 2a₃′c₁)` and
/// `H = ∫a₃′e^{G}` (the sample's `lin_exponent`, `lin_integral`). Principal square root.
///
/// The running integrals `c₂ = ∫(a₂′ + a₃′c₁)`, `c₃ = ∫a₃′e^{c₂}` are carried in the series
/// as well, but only satisfy the oscillator equation when `a₃′c₁` vanishes; `G`, `H` are the
/// integrals that linearize the Riccati equation in general.
pub fn riccati_to_epsilon(series: &RiccatiSeries, m0omega0: f64) -> Result<Vec<Complex64>> {
    check_m0omega0(m0omega0)?;
    series
        .samples
        .iter()
        .map(|s| Ok(riccati_parts(s, m0omega0)?.0))
        .collect()
}

fn check_m0omega0(m0omega0: f64) -> Result<()> {
    if !(m0omega0.is_finite() && m0omega0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "m₀ω₀ must be positive, got {m0omega0}"
        )));
    }
    Ok(())
}

/// `(ε, e^{−G/2}/√(m₀ω₀a₃′))` at one sample.
fn riccati_parts(s: &RiccatiSample, m0omega0: f64) -> Result<(Complex64, Complex64)> {
    if s.a3p == 0.0 || !s.a3p.is_finite() {
        return Err(Error::DegenerateTransform(format!("a₃′ = {} at t = {}", s.a3p, s.t)));
    }
    let root = Complex64::new(m0omega0 * s.a3p, 0.0).sqrt();
    let prefactor = (-0.5 * s.lin_exponent).exp() / root;
    let eps = -prefactor * (m0omega0 * s.lin_integral + Complex64::i());
    Ok((eps, prefactor))
}

/// [`riccati_to_epsilon`] with `ε̇` as well; needs the coefficients for `a₂′` and `ȧ₃′ = −2ȧ`.
pub fn riccati_to_states(
    series: &RiccatiSeries,
    coeffs: &CoefficientSet,
    m0omega0: f64,
) -> Result<Vec<OscillatorState>> {
    check_m0omega0(m0omega0)?;
    series
        .samples
        .iter()
        .map(|s| {
            let (eps, prefactor) = riccati_parts(s, m0omega0)?;
            let (_, a2p, _) = coeffs_to_riccati(coeffs, s.t);
            let da3p = -2.0 * coeffs.da(s.t)?;
            let dg = a2p + 2.0 * s.a3p * s.c1;
            let dh = s.a3p * s.lin_exponent.exp();
            let deps = eps * (-0.5 * dg - 0.5 * da3p / s.a3p) - prefactor * m0omega0 * dh;
            Ok(OscillatorState::new(s.t, eps, deps))
        })
        .collect()
}

/// The Riccati variable of an oscillator state: `c₁ = (ε̇/ε + ȧ/(2a) − 2b)/(2a)`.
pub fn epsilon_to_riccati(coeffs: &CoefficientSet, state: &OscillatorState) -> Result<Complex64> {
    let p = coeffs.at(state.t)?;
    if state.eps.norm() == 0.0 {
        return Err(Error::DegenerateTransform(format!("ε = 0 at t = {}", state.t)));
    }
    Ok((state.deps / state.eps + p.da / (2.0 * p.a) - 2.0 * p.b) / (2.0 * p.a))
}

fn complex_parts(values: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    values.iter().map(|z| (z.re, z.im)).unzip()
}

fn complex_derivative(t: &[f64], values: &[Complex64]) -> Result<Vec<Complex64>> {
    let (re, im) = complex_parts(values);
    let (dre, dim) = (sampled::derivative(t, &re, 1)?, sampled::derivative(t, &im, 1)?);
    Ok(dre.into_iter().zip(dim).map(|(r, i)| Complex64::new(r, i)).collect())
}

fn complex_cumulative(t: &[f64], values: &[Complex64]) -> Result<Vec<Complex64>> {
    let (re, im) = complex_parts(values);
    let (ire, iim) = (
        sampled::cumulative_integral(t, &re)?,
        sampled::cumulative_integral(t, &im)?,
    );
    Ok(ire.into_iter().zip(iim).map(|(r, i)| Complex64::new(r, i)).collect())
}

/// A Riccati series rebuilt from sampled `c₁`, with the running integrals accumulated by
/// stencil quadrature instead of alongside the integration.
pub fn riccati_series_from_samples(times: &[f64], c1: &[Complex64], coeffs: &CoefficientSet) -> Result<RiccatiSeries> {
    if times.len() != c1.len() {
        return Err(Error::InvalidParameter("times and c1 differ in length".into()));
    }
    let rates: Vec<(f64, f64)> = times
        .iter()
        .map(|&t| {
            let (_, a2p, a3p) = coeffs_to_riccati(coeffs, t);
            (a2p, a3p)
        })
        .collect();
    let c2_rate: Vec<Complex64> = rates.iter().zip(c1).map(|(r, c)| r.0 + r.1 * c).collect();
    let g_rate: Vec<Complex64> = rates.iter().zip(c1).map(|(r, c)| r.0 + 2.0 * r.1 * c).collect();
    let c2 = complex_cumulative(times, &c2_rate)?;
    let g = complex_cumulative(times, &g_rate)?;
    let c3_rate: Vec<Complex64> = rates.iter().zip(&c2).map(|(r, c)| r.1 * c.exp()).collect();
    let h_rate: Vec<Complex64> = rates.iter().zip(&g).map(|(r, c)| r.1 * c.exp()).collect();
    let c3 = complex_cumulative(times, &c3_rate)?;
    let h = complex_cumulative(times, &h_rate)?;
    Ok(RiccatiSeries {
        samples: (0..times.len())
            .map(|i| RiccatiSample {
                t: times[i],
                c1: c1[i],
                c2: c2[i],
                c3: c3[i],
                lin_exponent: g[i],
                lin_integral: h[i],
                a3p: rates[i].1,
            })
            .collect(),
    })
}

/// `ε = f √m`, `ε̇ = √m (ḟ + f ṁ/(2m))`.
pub fn mass_to_epsilon(f: f64, df: f64, m: f64, dm: f64, t: f64) -> Result<(f64, f64)> {
    check_mass(m, t)?;
    let root = m.sqrt();
    Ok((f * root, root * (df + f * dm / (2.0 * m))))
}

/// Inverse of [`mass_to_epsilon`].
pub fn epsilon_to_mass(eps: f64, deps: f64, m: f64, dm: f64, t: f64) -> Result<(f64, f64)> {
    check_mass(m, t)?;
    let root = m.sqrt();
    let f = eps / root;
    Ok((f, deps / root - f * dm / (2.0 * m)))
}

fn check_mass(m: f64, t: f64) -> Result<()> {
    if !(m > 0.0) {
        return Err(Error::DegenerateTransform(format!("mass m = {m} ≤ 0 at t = {t}")));
    }
    Ok(())
}

/// `ω² + ¼(ṁ/m)² − ½ m̈/m`, the frequency seen by `ε = f√m`.
pub fn effective_frequency_from_mass(omega2: f64, m: f64, dm: f64, ddm: f64) -> Result<f64> {
    check_mass(m, f64::NAN)?;
    let rate = dm / m;
    Ok(omega2 + 0.25 * rate * rate - 0.5 * ddm / m)
}

/// `Ω_eff²` per sample, with `m̈` from the stencil derivative of the `ṁ` samples.
pub fn effective_frequency_series(times: &[f64], m: &[f64], dm: &[f64], omega2: &[f64]) -> Result<Vec<f64>> {
    if m.len() != times.len() || dm.len() != times.len() || omega2.len() != times.len() {
        return Err(Error::InvalidParameter("mass columns differ in length".into()));
    }
    let ddm = sampled::derivative(times, dm, 1)?;
    (0..times.len())
        .map(|i| {
            check_mass(m[i], times[i])?;
            effective_frequency_from_mass(omega2[i], m[i], dm[i], ddm[i])
        })
        .collect()
}

/// `|f̈ + (ṁ/m)ḟ + ω²f|` per sample, `f̈` by stencil from the `ḟ` samples.
pub fn mass_residual(
    times: &[f64],
    f: &[Complex64],
    df: &[Complex64],
    m: &[f64],
    dm: &[f64],
    omega2: &[f64],
) -> Result<Vec<f64>> {
    let n = times.len();
    if [f.len(), df.len(), m.len(), dm.len(), omega2.len()]
        .iter()
        .any(|&l| l != n)
    {
        return Err(Error::InvalidParameter("mass columns differ in length".into()));
    }
    let ddf = complex_derivative(times, df)?;
    (0..n)
        .map(|i| {
            check_mass(m[i], times[i])?;
            Ok((ddf[i] + dm[i] / m[i] * df[i] + omega2[i] * f[i]).norm())
        })
        .collect()
}

/// `σ = √(ħa) ρ`, `Π = −√(ħ/a)(bρ − ρ̇/2 − (ȧ/4a)ρ)`, so that `σΠ` is the signed cofluctuation.
pub fn hamilton_pair_from_epsilon(
    coeffs: &CoefficientSet,
    state: &OscillatorState,
    hbar: f64,
) -> Result<HamiltonPairState> {
    let p = coeffs.at(state.t)?;
    let rho = state.rho();
    if !(rho > 0.0) {
        return Err(Error::Domain {
            what: "|ε|",
            t: state.t,
        });
    }
    if !(hbar > 0.0) {
        return Err(Error::InvalidParameter(format!("ħ must be positive, got {hbar}")));
    }
    Ok(HamiltonPairState {
        t: state.t,
        sigma: (hbar * p.a).sqrt() * rho,
        pi: -(hbar / p.a).sqrt() * amplitude_bracket(&p, rho, state.drho()),
    })
}

/// Normalized states from amplitudes, with `φ = ∫dτ/ρ²` accumulated from zero at the first sample.
pub fn epsilon_from_amplitude(samples: &[AmplitudeSample]) -> Result<Vec<OscillatorState>> {
    if let Some(bad) = samples.iter().find(|s| !(s.rho > 0.0)) {
        return Err(Error::Domain { what: "ρ", t: bad.t });
    }
    let times: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let rate: Vec<f64> = samples.iter().map(|s| 1.0 / (s.rho * s.rho)).collect();
    let phase = if samples.len() >= 2 {
        sampled::cumulative_integral(&times, &rate)?
    } else {
        vec![0.0; samples.len()]
    };
    Ok(samples
        .iter()
        .zip(phase)
        .map(|(s, phi)| {
            let rotation = Complex64::from_polar(1.0, phi);
            OscillatorState::new(s.t, s.rho * rotation, Complex64::new(s.drho, 1.0 / s.rho) * rotation)
        })
        .collect())
}

/// `(ρ, ρ̇)` of each state.
pub fn epsilon_to_amplitude(states: &[OscillatorState]) -> Vec<AmplitudeSample> {
    states
        .iter()
        .map(|s| AmplitudeSample {
            t: s.t,
            rho: s.rho(),
            drho: s.drho(),
        })
        .collect()
}

/// Inverts [`hamilton_pair_from_epsilon`]: `ρ = σ/√(ħa)`, `ρ̇` from `Π`, phase by stencil quadrature.
pub fn epsilon_from_hamilton_pair(
    coeffs: &CoefficientSet,
    pairs: &[HamiltonPairState],
    hbar: f64,
) -> Result<Vec<OscillatorState>> {
    if !(hbar > 0.0) {
        return Err(Error::InvalidParameter(format!("ħ must be positive, got {hbar}")));
    }
    let amplitudes = pairs
        .iter()
        .map(|h| {
            let p = coeffs.at(h.t)?;
            if !(h.sigma > 0.0) {
                return Err(Error::Domain { what: "σ", t: h.t });
            }
            let rho = h.sigma / (hbar * p.a).sqrt();
            // Π = −√(ħ/a)(bρ − ρ̇/2 − (ȧ/4a)ρ) solved for ρ̇.
            let drho = 2.0 * (p.b * rho - p.log_rate_quarter() * rho + h.pi * (p.a / hbar).sqrt());
            Ok(AmplitudeSample { t: h.t, rho, drho })
        })
        .collect::<Result<Vec<_>>>()?;
    epsilon_from_amplitude(&amplitudes)
}

/// `|ε̈ + Ω²ε|` per sample, with `ε̈` from the stencil derivative of the `ε̇` samples.
pub fn oscillator_residual(states: &[OscillatorState], omega2: &[f64]) -> Result<Vec<f64>> {
    if states.len() != omega2.len() {
        return Err(Error::InvalidParameter("states and Ω² differ in length".into()));
    }
    let times: Vec<f64> = states.iter().map(|s| s.t).collect();
    let deps: Vec<Complex64> = states.iter().map(|s| s.deps).collect();
    let ddeps = complex_derivative(&times, &deps)?;
    Ok(ddeps
        .iter()
        .zip(states)
        .zip(omega2)
        .map(|((dd, s), w2)| (dd + w2 * s.eps).norm())
        .collect())
}

/// `|ċ₁ − (a₁′ + a₂′c₁ + a₃′c₁²)|` per sample.
pub fn riccati_residual(times: &[f64], c1: &[Complex64], coeffs: &CoefficientSet) -> Result<Vec<f64>> {
    let dc1 = complex_derivative(times, c1)?;
    Ok(times
        .iter()
        .zip(c1)
        .zip(dc1)
        .map(|((&t, &c), d)| {
            let (r1, r2, r3) = coeffs_to_riccati(coeffs, t);
            (d - (r1 + r2 * c + r3 * c * c)).norm()
        })
        .collect())
}

/// Hamilton-pair residual `max(|σ̇ − ∂H₁/∂Π|, |Π̇ + ∂H₁/∂σ|)` per sample.
pub fn hamilton_pair_residual(pairs: &[HamiltonPairState], coeffs: &CoefficientSet, hbar: f64) -> Result<Vec<f64>> {
    let times: Vec<f64> = pairs.iter().map(|h| h.t).collect();
    let sigma: Vec<f64> = pairs.iter().map(|h| h.sigma).collect();
    let pi: Vec<f64> = pairs.iter().map(|h| h.pi).collect();
    let dsigma = sampled::derivative(&times, &sigma, 1)?;
    let dpi = sampled::derivative(&times, &pi, 1)?;
    Ok((0..pairs.len())
        .map(|i| {
            let t = times[i];
            let (a, b, c) = (coeffs.a(t), coeffs.b(t), coeffs.c(t));
            let (s, p) = (sigma[i], pi[i]);
            let r1 = dsigma[i] - (2.0 * b * s + 2.0 * a * p);
            let r2 = dpi[i] - (-2.0 * c * s - 2.0 * b * p + 0.5 * hbar * hbar * a / s.powi(3));
            r1.abs().max(r2.abs())
        })
        .collect())
}

/// `|ρ̈ − 1/ρ³ + Ω²ρ|` per sample, `ρ̈` from the stencil derivative of the `ρ̇` samples.
pub fn ermakov_series_residual(samples: &[AmplitudeSample], omega2: &[f64]) -> Result<Vec<f64>> {
    if samples.len() != omega2.len() {
        return Err(Error::InvalidParameter("samples and Ω² differ in length".into()));
    }
    let times: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let drho: Vec<f64> = samples.iter().map(|s| s.drho).collect();
    let ddrho = sampled::derivative(&times, &drho, 1)?;
    samples
        .iter()
        .zip(ddrho)
        .zip(omega2)
        .map(|((s, dd), &w2)| ermakov_residual(s.rho, s.drho, dd, w2).map(f64::abs))
        .collect()
}
