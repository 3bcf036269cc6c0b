//! Temperature and epsilon schedules. Both are evaluated once per epoch and
//! held constant within it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Constant,
    Linear,
    Exponential,
    ChunkLinear,
}

/// Parameters of a temperature schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub kind: ScheduleKind,
    pub t0: f64,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_t_max")]
    pub t_max: usize,
    /// Temperatures below this value are reported as exactly zero (hard WTA).
    #[serde(default)]
    pub floor: f64,
}

fn default_rho() -> f64 {
    0.95
}

fn default_t_max() -> usize {
    1000
}

/// The floor used for exponential schedules when none is given.
pub const EXPONENTIAL_FLOOR: f64 = 5e-4;

/// Temperature of one epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Temperature {
    pub value: f64,
    /// Set when training must fall back to plain winner-takes-all.
    pub hard_wta: bool,
}

impl Temperature {
    pub const HARD: Temperature = Temperature {
        value: 0.0,
        hard_wta: true,
    };
}

impl ScheduleSpec {
    pub fn constant(t0: f64) -> Result<Self> {
        Self {
            kind: ScheduleKind::Constant,
            t0,
            rho: default_rho(),
            t_max: 1,
            floor: 0.0,
        }
        .validated()
    }

    pub fn linear(t0: f64, t_max: usize) -> Result<Self> {
        Self {
            kind: ScheduleKind::Linear,
            t0,
            rho: default_rho(),
            t_max,
            floor: 0.0,
        }
        .validated()
    }

    pub fn exponential(t0: f64, rho: f64) -> Result<Self> {
        Self {
            kind: ScheduleKind::Exponential,
            t0,
            rho,
            t_max: default_t_max(),
            floor: EXPONENTIAL_FLOOR,
        }
        .validated()
    }

    pub fn chunk_linear(t0: f64, t_max: usize) -> Result<Self> {
        Self {
            kind: ScheduleKind::ChunkLinear,
            t0,
            rho: default_rho(),
            t_max,
            floor: 0.0,
        }
        .validated()
    }

    pub fn with_floor(mut self, floor: f64) -> Result<Self> {
        self.floor = floor;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0 >= 0.0) || !self.t0.is_finite() {
            return Err(Error::Validation(format!("T0 must be finite and >= 0, got {}", self.t0)));
        }
        if !(self.floor >= 0.0) {
            return Err(Error::Validation(format!("floor must be >= 0, got {}", self.floor)));
        }
        match self.kind {
            ScheduleKind::Exponential if !(self.rho > 0.0 && self.rho < 1.0) => Err(Error::Validation(
                format!("exponential decay factor must lie in (0, 1), got {}", self.rho),
            )),
            ScheduleKind::Linear | ScheduleKind::ChunkLinear if self.t_max == 0 => {
                Err(Error::Validation("t_max must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    fn raw(&self, epoch: usize) -> f64 {
        let t = epoch as f64;
        match self.kind {
            ScheduleKind::Constant => self.t0,
            ScheduleKind::Linear => (self.t0 * (1.0 - t / self.t_max as f64)).max(0.0),
            ScheduleKind::Exponential => self.t0 * self.rho.powf(t),
            ScheduleKind::ChunkLinear => {
                if epoch < self.t_max {
                    self.t0 * (1.0 - t / self.t_max as f64)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn temperature_at(&self, epoch: usize) -> Temperature {
        let raw = self.raw(epoch);
        if raw <= 0.0 || raw < self.floor {
            Temperature::HARD
        } else {
            Temperature {
                value: raw,
                hard_wta: false,
            }
        }
    }
}

/// Linearly decaying epsilon `ε₀ (1 - t / t_max)`, clamped to `[0, ε₀]`.
pub fn epsilon_at(epsilon0: f64, epoch: usize, t_max: usize) -> f64 {
    if t_max == 0 {
        return 0.0;
    }
    (epsilon0 * (1.0 - epoch as f64 / t_max as f64)).clamp(0.0, epsilon0.max(0.0))
}
