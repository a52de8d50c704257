//! Time-dependent coefficients of the one-mode quadratic Hamiltonian
//! `H = a(t) p² + b(t) (pq + qp) + c(t) q² + d(t) p + e(t) q + f(t)` (mass fixed to 1).
//!
//! Only the homogeneous case `d = e = f = 0` is supported downstream; the drive
//! terms are carried so that evaluation can reject them explicitly.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A real function of time, shareable across threads.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Central-difference estimates of the first and second derivative of `func` at `t`.
///
/// Both estimates carry an `O(h²)` truncation error.
pub fn finite_difference_derivatives(func: impl Fn(f64) -> f64, t: f64, h: f64) -> Result<(f64, f64)> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let fm = func(t - h);
    let f0 = func(t);
    let fp = func(t + h);
    if !(fm.is_finite() && f0.is_finite() && fp.is_finite()) {
        return Err(Error::NonFinite { t });
    }
    let first = (fp - fm) / (2.0 * h);
    let second = (fp - 2.0 * f0 + fm) / (h * h);
    Ok((first, second))
}

/// Step for first derivatives, `max(1e-6, 1e-6 |t|)`.
pub fn first_derivative_step(t: f64) -> f64 {
    1e-6 * t.abs().max(1.0)
}

/// Step for second derivatives. Roundoff in the three-point second difference scales
/// like `ε/h²`, so this step is larger than the first-derivative one.
pub fn second_derivative_step(t: f64) -> f64 {
    1e-4 * t.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference,
}

#[derive(Clone)]
struct AnalyticDerivatives {
    da: ScalarFn,
    dda: ScalarFn,
    db: ScalarFn,
}

/// Values of the coefficients and the derivatives entering the oscillator frequency at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffPoint {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub da: f64,
    pub dda: f64,
    pub db: f64,
}

impl CoeffPoint {
    /// `ȧ / (4a)`, the coefficient that appears in every bracket built from `ε`.
    pub fn log_rate_quarter(&self) -> f64 {
        self.da / (4.0 * self.a)
    }
}

#[derive(Clone)]
pub struct CoefficientSet {
    a: ScalarFn,
    b: ScalarFn,
    c: ScalarFn,
    d: ScalarFn,
    e: ScalarFn,
    f: ScalarFn,
    analytic: Option<AnalyticDerivatives>,
}

fn constant_fn(value: f64) -> ScalarFn {
    Arc::new(move |_| value)
}

impl CoefficientSet {
    /// Coefficients given as closures; derivatives are taken by central differences.
    pub fn numeric<A, B, C>(a: A, b: B, c: C) -> Self
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64) -> f64 + Send + Sync + 'static,
        C: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            a: Arc::new(a),
            b: Arc::new(b),
            c: Arc::new(c),
            d: constant_fn(0.0),
            e: constant_fn(0.0),
            f: constant_fn(0.0),
            analytic: None,
        }
    }

    /// Time-independent coefficients (all derivatives vanish, analytic mode).
    pub fn constant(a: f64, b: f64, c: f64) -> Self {
        Self::numeric(move |_| a, move |_| b, move |_| c).with_derivatives(|_| 0.0, |_| 0.0, |_| 0.0)
    }

    /// The stationary oscillator `a = 1/2, b = 0, c = ω²/2`.
    pub fn stationary(omega: f64) -> Self {
        Self::constant(0.5, 0.0, 0.5 * omega * omega)
    }

    /// Supply closed-form `ȧ`, `ä`, `ḃ`; switches to analytic mode.
    pub fn with_derivatives<DA, DDA, DB>(mut self, da: DA, dda: DDA, db: DB) -> Self
    where
        DA: Fn(f64) -> f64 + Send + Sync + 'static,
        DDA: Fn(f64) -> f64 + Send + Sync + 'static,
        DB: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.analytic = Some(AnalyticDerivatives {
            da: Arc::new(da),
            dda: Arc::new(dda),
            db: Arc::new(db),
        });
        self
    }

    /// Attach drive terms. Evaluation rejects any nonzero value.
    pub fn with_drives<D, E, F>(mut self, d: D, e: E, f: F) -> Self
    where
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        E: Fn(f64) -> f64 + Send + Sync + 'static,
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.d = Arc::new(d);
        self.e = Arc::new(e);
        self.f = Arc::new(f);
        self
    }

    pub fn derivative_mode(&self) -> DerivativeMode {
        if self.analytic.is_some() {
            DerivativeMode::Analytic
        } else {
            DerivativeMode::FiniteDifference
        }
    }

    pub fn a(&self, t: f64) -> f64 {
        (self.a)(t)
    }

    pub fn b(&self, t: f64) -> f64 {
        (self.b)(t)
    }

    pub fn c(&self, t: f64) -> f64 {
        (self.c)(t)
    }

    pub fn d(&self, t: f64) -> f64 {
        (self.d)(t)
    }

    pub fn e(&self, t: f64) -> f64 {
        (self.e)(t)
    }

    pub fn f(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn da(&self, t: f64) -> Result<f64> {
        match &self.analytic {
            Some(d) => Ok((d.da)(t)),
            None => finite_difference_derivatives(&*self.a, t, first_derivative_step(t)).map(|d| d.0),
        }
    }

    pub fn dda(&self, t: f64) -> Result<f64> {
        match &self.analytic {
            Some(d) => Ok((d.dda)(t)),
            None => finite_difference_derivatives(&*self.a, t, second_derivative_step(t)).map(|d| d.1),
        }
    }

    pub fn db(&self, t: f64) -> Result<f64> {
        match &self.analytic {
            Some(d) => Ok((d.db)(t)),
            None => finite_difference_derivatives(&*self.b, t, first_derivative_step(t)).map(|d| d.0),
        }
    }

    /// Evaluate everything needed downstream, checking `a > 0`, `d = e = f = 0` and finiteness.
    pub fn at(&self, t: f64) -> Result<CoeffPoint> {
        for (which, func) in [('d', &self.d), ('e', &self.e), ('f', &self.f)] {
            let value = func(t);
            if value != 0.0 {
                return Err(Error::UnsupportedDrive { which, t, value });
            }
        }
        let a = self.a(t);
        if !a.is_finite() {
            return Err(Error::NonFinite { t });
        }
        if a <= 0.0 {
            return Err(Error::Domain { what: "a(t)", t });
        }
        let point = CoeffPoint {
            t,
            a,
            b: self.b(t),
            c: self.c(t),
            da: self.da(t)?,
            dda: self.dda(t)?,
            db: self.db(t)?,
        };
        let values = [point.b, point.c, point.da, point.dda, point.db];
        if values.iter().all(|v| v.is_finite()) {
            Ok(point)
        } else {
            Err(Error::NonFinite { t })
        }
    }
}

impl fmt::Debug for CoefficientSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientSet")
            .field("derivative_mode", &self.derivative_mode())
            .finish_non_exhaustive()
    }
}
