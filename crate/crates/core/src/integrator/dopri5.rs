//! Dormand–Prince 5(4) with FSAL, elementary step control and the 4th-order continuous
//! extension for output between accepted steps.

use super::IntegratorConfig;
use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Dense output.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

/// Called after every accepted step with the new time, state and the step just taken.
/// Returning an error aborts the integration.
pub trait StepGuard<const N: usize> {
    fn check(&mut self, t: f64, y: &[f64; N], h: f64) -> Result<()>;
}

impl<const N: usize, F> StepGuard<N> for F
where
    F: FnMut(f64, &[f64; N], f64) -> Result<()>,
{
    fn check(&mut self, t: f64, y: &[f64; N], h: f64) -> Result<()> {
        self(t, y, h)
    }
}

#[inline]
fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (coef, k) in terms {
        let ch = coef * h;
        for i in 0..N {
            out[i] += ch * k[i];
        }
    }
    out
}

/// Steps are held to a tenth of the requested tolerance so that the accumulated error over many
/// periods stays near the request rather than a few times above it.
const LOCAL_TARGET: f64 = 0.1;

fn error_norm<const N: usize>(y: &[f64; N], y_new: &[f64; N], err: &[f64; N], cfg: &IntegratorConfig) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| {
            let scale = LOCAL_TARGET * (cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs()));
            (err[i] / scale).powi(2)
        })
        .sum();
    (sum / N as f64).sqrt()
}

fn scaled_norm<const N: usize>(v: &[f64; N], y: &[f64; N], cfg: &IntegratorConfig) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| (v[i] / (cfg.abs_tol + cfg.rel_tol * y[i].abs())).powi(2))
        .sum();
    (sum / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(
    rhs: &F,
    t0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    cfg: &IntegratorConfig,
    span: f64,
) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let d0 = scaled_norm(y0, y0, cfg);
    let d1 = scaled_norm(f0, y0, cfg);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let y1 = combine(y0, h0, &[(1.0, f0)]);
    let f1 = rhs(t0 + h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = scaled_norm(&diff, y0, cfg) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(cfg.max_step).min(span)
}

/// Integrate `y' = rhs(t, y)` from `times[0]` (where `y = y0`) and return the state at
/// every entry of `times`, which must be non-decreasing.
pub fn integrate<const N: usize, F, G>(
    rhs: F,
    y0: [f64; N],
    times: &[f64],
    cfg: &IntegratorConfig,
    mut guard: G,
) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    G: StepGuard<N>,
{
    cfg.validate()?;
    let Some(&t0) = times.first() else {
        return Ok(Vec::new());
    };
    if times.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::InvalidParameter("output times must be non-decreasing".into()));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t: t0 });
    }
    let t_final = *times.last().unwrap();
    let mut out = Vec::with_capacity(times.len());
    let mut next = 0;
    while next < times.len() && times[next] <= t0 {
        out.push(y0);
        next += 1;
    }
    if next == times.len() {
        return Ok(out);
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    if k1.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t });
    }
    let span = t_final - t0;
    let mut h = match cfg.fixed_step {
        Some(step) => step,
        None => initial_step(&rhs, t, &y, &k1, cfg, span),
    };
    let mut steps = 0usize;
    let mut last_rejected = false;

    while next < times.len() {
        if steps >= cfg.max_steps {
            return Err(Error::StepLimit {
                t,
                max_steps: cfg.max_steps,
            });
        }
        steps += 1;

        let remaining = t_final - t;
        h = h.min(cfg.max_step);
        // Stretch the last step rather than leave a sliver.
        if h >= remaining || remaining - h <= 1e-12 * remaining.abs().max(t.abs()) {
            h = remaining;
        }

        let k2 = rhs(t + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * h,
            &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &combine(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = combine(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = rhs(t + h, &y_new);

        let mut err = [0.0; N];
        for i in 0..N {
            err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let norm = if cfg.fixed_step.is_some() {
            0.0
        } else {
            error_norm(&y, &y_new, &err, cfg)
        };
        let accept = norm <= 1.0 && norm.is_finite();

        if !accept {
            if !norm.is_finite() && h <= f64::EPSILON * t.abs().max(1.0) * 16.0 {
                return Err(Error::NonFinite { t });
            }
            let factor = if norm.is_finite() {
                (SAFETY * norm.powf(-0.2)).max(FAC_MIN)
            } else {
                FAC_MIN
            };
            h *= factor;
            last_rejected = true;
            if h <= f64::EPSILON * t.abs().max(1.0) * 16.0 {
                return Err(Error::StepSizeUnderflow { t, h });
            }
            continue;
        }

        if y_new.iter().chain(k7.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: t + h });
        }

        let t_new = if h == remaining { t_final } else { t + h };
        if next < times.len() && times[next] <= t_new {
            let mut r2 = [0.0; N];
            let mut r3 = [0.0; N];
            let mut r4 = [0.0; N];
            let mut r5 = [0.0; N];
            for i in 0..N {
                r2[i] = y_new[i] - y[i];
                r3[i] = h * k1[i] - r2[i];
                r4[i] = r2[i] - h * k7[i] - r3[i];
                r5[i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            while next < times.len() && times[next] <= t_new {
                let theta = ((times[next] - t) / h).clamp(0.0, 1.0);
                let one_minus = 1.0 - theta;
                let mut sample = [0.0; N];
                for i in 0..N {
                    sample[i] = y[i] + theta * (r2[i] + one_minus * (r3[i] + theta * (r4[i] + one_minus * r5[i])));
                }
                if theta == 1.0 {
                    sample = y_new;
                }
                out.push(sample);
                next += 1;
            }
        }

        guard.check(t_new, &y_new, h)?;

        t = t_new;
        y = y_new;
        k1 = k7;

        if cfg.fixed_step.is_none() {
            let mut factor = if norm == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * norm.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
            };
            if last_rejected {
                factor = factor.min(1.0);
            }
            h *= factor;
        }
        last_rejected = false;
    }
    Ok(out)
}
