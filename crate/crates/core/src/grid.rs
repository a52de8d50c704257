//! Uniform output grids. Internal integration steps are adaptive and do not depend on the grid.

use crate::error::{Error, Result};

/// Slack applied before flooring the point count so that e.g. `0.3 / 0.1` yields 4 points.
const COUNT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    output_step: f64,
    len: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, output_step: f64) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) {
            return Err(Error::InvalidGrid("interval bounds must be finite".into()));
        }
        if !output_step.is_finite() || output_step <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "output step must be positive and finite, got {output_step}"
            )));
        }
        if t_end <= t_start {
            return Err(Error::InvalidGrid(format!(
                "t_end ({t_end}) must exceed t_start ({t_start})"
            )));
        }
        let len = ((t_end - t_start) / output_step + COUNT_SLACK).floor() as usize + 1;
        Ok(Self {
            t_start,
            t_end,
            output_step,
            len,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn output_step(&self) -> f64 {
        self.output_step
    }

    /// Number of output points, `t_start` included.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        self.t_start + i as f64 * self.output_step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.point(i)).collect()
    }
}

pub fn make_grid(t_start: f64, t_end: f64, output_step: f64) -> Result<TimeGrid> {
    TimeGrid::new(t_start, t_end, output_step)
}
