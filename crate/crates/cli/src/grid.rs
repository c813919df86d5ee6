use std::fmt;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Sampling times `t_min = t_0 < t_1 < ... < t_{steps-1} = t_max`.
///
/// A single step yields just `[t_min]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
    pub spacing: Spacing,
}

pub const DEFAULT_T_MIN: f64 = 1e-2;
pub const DEFAULT_STEPS: usize = 400;
/// Default horizon in units of the relaxation time `1/|λ_1|`.
pub const DEFAULT_HORIZON: f64 = 100.0;

impl TimeGrid {
    pub fn new(t_min: f64, t_max: f64, steps: usize, spacing: Spacing) -> Result<Self, CliError> {
        if !(t_min.is_finite() && t_min >= 0.0) {
            return Err(CliError::Usage(format!("t_min must be >= 0, got {t_min}")));
        }
        if !(t_max.is_finite() && t_max > t_min) {
            return Err(CliError::Usage(format!(
                "t_max must exceed t_min ({t_max} <= {t_min})"
            )));
        }
        if steps == 0 {
            return Err(CliError::Usage("steps must be >= 1".into()));
        }
        if spacing == Spacing::Log && t_min <= 0.0 {
            return Err(CliError::Usage("log spacing needs t_min > 0".into()));
        }
        Ok(Self {
            t_min,
            t_max,
            steps,
            spacing,
        })
    }

    /// Log grid from `1e-2` to `ceil(100 / fiedler)`, 400 points.
    pub fn default_for(fiedler: f64) -> Self {
        let t_max = (DEFAULT_HORIZON / fiedler).ceil().max(1.0);
        Self {
            t_min: DEFAULT_T_MIN,
            t_max,
            steps: DEFAULT_STEPS,
            spacing: Spacing::Log,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.t_min];
        }
        let last = (self.steps - 1) as f64;
        let mut out: Vec<f64> = match self.spacing {
            Spacing::Linear => (0..self.steps)
                .map(|i| self.t_min + (self.t_max - self.t_min) * i as f64 / last)
                .collect(),
            Spacing::Log => {
                let (a, b) = (self.t_min.ln(), self.t_max.ln());
                (0..self.steps)
                    .map(|i| (a + (b - a) * i as f64 / last).exp())
                    .collect()
            }
        };
        out[0] = self.t_min;
        out[self.steps - 1] = self.t_max;
        out
    }
}

impl fmt::Display for TimeGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.spacing {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        };
        write!(f, "{kind}[{}, {}; {}]", self.t_min, self.t_max, self.steps)
    }
}
