//! Globally adaptive Gauss–Kronrod (7/15-point) quadrature.

// Nodes and weights are kept at their published precision.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_INTERVALS: usize = 2000;

/// One Kronrod panel: `(integral, error estimate)`. The estimate never drops below the
/// rounding level of the panel sum, so noisy integrands cannot demand the impossible.
fn kronrod15(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut magnitude = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        kronrod += WGK[j] * (f1 + f2);
        magnitude += WGK[j] * (f1.abs() + f2.abs());
        // Gauss nodes are the odd-indexed Kronrod nodes.
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let error = ((kronrod - gauss) * half).abs();
    let rounding = 50.0 * f64::EPSILON * magnitude * half.abs();
    (kronrod * half, error.max(rounding))
}

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// `∫_lo^hi f` to absolute tolerance `abs_tol`, or to the rounding level of `∫|f|` when that
/// is larger. Returns `(value, estimated error)`.
pub fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, abs_tol: f64) -> Result<(f64, f64)> {
    if !(abs_tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "quadrature tolerance must be positive, got {abs_tol}"
        )));
    }
    if lo == hi {
        return Ok((0.0, 0.0));
    }
    if hi < lo {
        let (v, e) = integrate(f, hi, lo, abs_tol)?;
        return Ok((-v, e));
    }
    let (value, error) = kronrod15(&f, lo, hi);
    if !value.is_finite() {
        return Err(Error::NonFinite { t: lo });
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel { lo, hi, value, error });
    let (mut total, mut total_err) = (value, error);
    let floor = |heap: &BinaryHeap<Panel>| 100.0 * f64::EPSILON * heap.iter().map(|p| p.value.abs()).sum::<f64>();
    while total_err > abs_tol && total_err > floor(&heap) {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                lo,
                hi,
                error: total_err,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Cannot bisect further in double precision.
            return Err(Error::Quadrature {
                lo,
                hi,
                error: total_err,
            });
        }
        let (v1, e1) = kronrod15(&f, worst.lo, mid);
        let (v2, e2) = kronrod15(&f, mid, worst.hi);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Error::NonFinite { t: mid });
        }
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            lo: worst.lo,
            hi: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            lo: mid,
            hi: worst.hi,
            value: v2,
            error: e2,
        });
        // Refresh the running sums to contain cancellation drift.
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok((total, total_err))
}
