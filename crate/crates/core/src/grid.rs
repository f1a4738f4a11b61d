// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Sweep axes.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Inclusive, evenly stepped axis `start, start + step, …, stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        Self { start, stop, step }
    }

    pub fn single(value: f64) -> Self {
        Self { start: value, stop: value, step: 1.0 }
    }

    /// Values computed as `start + k·step` so they do not accumulate error.
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(Error::invalid("axis bounds must be finite"));
        }
        if self.step <= 0.0 {
            return Err(Error::invalid("axis step must be positive"));
        }
        if self.stop < self.start {
            return Err(Error::invalid("empty axis: stop < start"));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|k| self.start + k as f64 * self.step).collect())
    }
}
