//! Differentiation, integration and interpolation of sampled series through local
//! polynomial stencils. Works on non-uniform abscissae; used to evaluate equation
//! residuals of transformed series and to accumulate running integrals of samples.

use crate::error::{Error, Result};

/// Points per derivative stencil. Nine points give an 8th-order central second derivative.
pub const DERIVATIVE_STENCIL: usize = 9;

/// Points per interpolation / integration stencil.
pub const INTEGRATION_STENCIL: usize = 6;

/// Finite-difference weights at `x0` for derivatives `0..=max_order` on nodes `xs`.
///
/// `weights[k][j]` multiplies `f(xs[j])` in the estimate of the `k`-th derivative.
pub fn fornberg_weights(x0: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut weights = vec![vec![0.0; n]; max_order + 1];
    if n == 0 {
        return weights;
    }
    weights[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    weights[k][i] = c1 * (k as f64 * weights[k - 1][i - 1] - c5 * weights[k][i - 1]) / c2;
                }
                weights[0][i] = -c1 * c5 * weights[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                weights[k][j] = (c4 * weights[k][j] - k as f64 * weights[k - 1][j]) / c3;
            }
            weights[0][j] = c4 * weights[0][j] / c3;
        }
        c1 = c2;
    }
    weights
}

/// Index range of a `width`-point window centred on `i` and clamped to `0..n`.
fn window(i: usize, width: usize, n: usize) -> std::ops::Range<usize> {
    let width = width.min(n);
    let half = width / 2;
    let start = i.saturating_sub(half).min(n - width);
    start..start + width
}

fn check_lengths(t: &[f64], values: &[f64], min_len: usize) -> Result<()> {
    if t.len() != values.len() {
        return Err(Error::InvalidParameter(format!(
            "sample length mismatch: {} times vs {} values",
            t.len(),
            values.len()
        )));
    }
    if t.len() < min_len {
        return Err(Error::InvalidParameter(format!(
            "need at least {min_len} samples, got {}",
            t.len()
        )));
    }
    if t.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(
            "sample times must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// `order`-th derivative of the sampled function at every sample.
pub fn derivative(t: &[f64], values: &[f64], order: usize) -> Result<Vec<f64>> {
    check_lengths(t, values, order + 1)?;
    let n = t.len();
    Ok((0..n)
        .map(|i| {
            let range = window(i, DERIVATIVE_STENCIL, n);
            let w = fornberg_weights(t[i], &t[range.clone()], order);
            w[order].iter().zip(&values[range]).map(|(w, v)| w * v).sum()
        })
        .collect())
}

/// Local polynomial interpolation at `x` (must lie within the sample span).
pub fn interpolate(t: &[f64], values: &[f64], x: f64) -> Result<f64> {
    check_lengths(t, values, 1)?;
    let n = t.len();
    if x < t[0] || x > t[n - 1] {
        return Err(Error::InvalidParameter(format!(
            "interpolation point {x} outside [{}, {}]",
            t[0],
            t[n - 1]
        )));
    }
    let i = t.partition_point(|&s| s <= x).saturating_sub(1);
    let range = window(i, INTEGRATION_STENCIL, n);
    let w = fornberg_weights(x, &t[range.clone()], 0);
    Ok(w[0].iter().zip(&values[range]).map(|(w, v)| w * v).sum())
}

/// Exact integrals over `[lo, hi]` of the Lagrange basis polynomials on `nodes`.
fn lagrange_integral_weights(nodes: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    // Work in u = (x - lo) / scale to keep the monomial expansion well conditioned.
    let scale = (hi - lo).abs().max(f64::MIN_POSITIVE);
    let us: Vec<f64> = nodes.iter().map(|x| (x - lo) / scale).collect();
    let upper = (hi - lo) / scale;
    (0..us.len())
        .map(|j| {
            // Coefficients of prod_{k != j} (u - u_k) / (u_j - u_k), lowest degree first.
            let mut poly = vec![1.0];
            for (k, &uk) in us.iter().enumerate() {
                if k == j {
                    continue;
                }
                let denom = us[j] - uk;
                let mut next = vec![0.0; poly.len() + 1];
                for (d, &coef) in poly.iter().enumerate() {
                    next[d + 1] += coef / denom;
                    next[d] -= coef * uk / denom;
                }
                poly = next;
            }
            let integral: f64 = poly
                .iter()
                .enumerate()
                .map(|(d, &coef)| coef * upper.powi(d as i32 + 1) / (d as f64 + 1.0))
                .sum();
            integral * scale
        })
        .collect()
}

/// Running integral `∫_{t[0]}^{t[i]} f` of the sampled function, starting at zero.
pub fn cumulative_integral(t: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    check_lengths(t, values, 2)?;
    let n = t.len();
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    out.push(acc);
    for i in 0..n - 1 {
        // Window centred on the interval [t_i, t_{i+1}].
        let width = INTEGRATION_STENCIL.min(n);
        let start = (i + 1).saturating_sub(width / 2).min(n - width);
        let range = start..start + width;
        let w = lagrange_integral_weights(&t[range.clone()], t[i], t[i + 1]);
        acc += w.iter().zip(&values[range]).map(|(w, v)| w * v).sum::<f64>();
        out.push(acc);
    }
    Ok(out)
}
