use thiserror::Error;

/// Errors raised by grid construction, coefficient evaluation, integration and transforms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} outside its domain at t = {t}")]
    Domain { what: &'static str, t: f64 },

    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("nonzero drive term {which}(t) = {value} at t = {t}; only d = e = f = 0 is supported")]
    UnsupportedDrive { which: char, t: f64, value: f64 },

    #[error("step limit of {max_steps} exhausted at t = {t}")]
    StepLimit { t: f64, max_steps: usize },

    #[error("step size underflow at t = {t} (h = {h})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("{what} approached zero near t = {t}")]
    Singularity { what: &'static str, t: f64 },

    #[error("Riccati solution blows up near t = {t_estimate} (|c1| = {magnitude:e}); restart past the pole")]
    RiccatiPole { t_estimate: f64, magnitude: f64 },

    #[error("quadrature did not converge on [{lo}, {hi}] (estimated error {error:e})")]
    Quadrature { lo: f64, hi: f64, error: f64 },

    #[error("time mismatch: {left} vs {right}")]
    TimeMismatch { left: f64, right: f64 },

    #[error("degenerate transform: {0}")]
    DegenerateTransform(String),
}

pub type Result<T> = std::result::Result<T, Error>;
