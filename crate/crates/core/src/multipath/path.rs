use serde::{Deserialize, Serialize};

use super::PathError;
use crate::time::SimTime;

/// One network path: packet rate, one-way delay and i.i.d. loss probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    /// Packets per second.
    pub rate: f64,
    /// One-way latency in seconds.
    pub delay: f64,
    pub loss: f64,
}

impl PathSpec {
    pub fn new(rate: f64, delay: f64, loss: f64) -> Result<PathSpec, PathError> {
        let p = PathSpec { rate, delay, loss };
        p.validate(0)?;
        Ok(p)
    }

    /// Checks the invariants; `index` only labels the error.
    pub fn validate(&self, index: usize) -> Result<(), PathError> {
        if !(self.rate.is_finite() && self.rate > 0.0) {
            return Err(PathError::BadRate { index, rate: self.rate });
        }
        if !(self.delay.is_finite() && self.delay >= 0.0) {
            return Err(PathError::BadDelay { index, delay: self.delay });
        }
        if !(0.0..1.0).contains(&self.loss) {
            return Err(PathError::BadLoss { index, loss: self.loss });
        }
        Ok(())
    }

    /// Time to put one packet on the wire.
    pub fn serialization(&self) -> SimTime {
        SimTime::from_secs_f64(1.0 / self.rate)
    }

    pub fn latency(&self) -> SimTime {
        SimTime::from_secs_f64(self.delay)
    }
}

pub(crate) fn validate_all(paths: &[PathSpec]) -> Result<(), PathError> {
    if paths.is_empty() {
        return Err(PathError::NoPaths);
    }
    paths.iter().enumerate().try_for_each(|(i, p)| p.validate(i))
}
