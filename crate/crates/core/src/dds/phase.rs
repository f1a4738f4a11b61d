// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Exact phase arithmetic.
//!
//! Frequencies are held as integer microhertz and times as integer
//! nanoseconds, so `f · t` is an exact integer count of 1e-15 cycles. Phase
//! accumulators store the fractional cycle in those units and only become
//! floating-point radians when a sample is produced.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::ops::{Add, Neg, Sub};

/// Phase resolution: 1 µHz × 1 ns = 1e-15 cycle.
pub const CYCLE_UNITS: i128 = 1_000_000_000_000_000;

/// Frequency with 1 µHz resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[derive(Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct Freq {
    micro_hz: i64,
}

impl Freq {
    pub const ZERO: Freq = Freq { micro_hz: 0 };

    pub fn from_hz(hz: f64) -> Self {
        Self { micro_hz: (hz * 1e6).round() as i64 }
    }

    pub fn from_micro_hz(micro_hz: i64) -> Self {
        Self { micro_hz }
    }

    pub fn hz(self) -> f64 {
        self.micro_hz as f64 * 1e-6
    }

    pub fn micro_hz(self) -> i64 {
        self.micro_hz
    }

    /// Exact phase advance over `dt_ns`.
    pub fn advance(self, dt_ns: i64) -> Cycles {
        Cycles::from_units(self.micro_hz as i128 * dt_ns as i128)
    }
}

impl From<f64> for Freq {
    fn from(hz: f64) -> Self {
        Freq::from_hz(hz)
    }
}

impl From<Freq> for f64 {
    fn from(f: Freq) -> f64 {
        f.hz()
    }
}

impl Add for Freq {
    type Output = Freq;
    fn add(self, rhs: Freq) -> Freq {
        Freq { micro_hz: self.micro_hz + rhs.micro_hz }
    }
}

impl Sub for Freq {
    type Output = Freq;
    fn sub(self, rhs: Freq) -> Freq {
        Freq { micro_hz: self.micro_hz - rhs.micro_hz }
    }
}

impl Neg for Freq {
    type Output = Freq;
    fn neg(self) -> Freq {
        Freq { micro_hz: -self.micro_hz }
    }
}

/// Fractional cycle in `[0, 1)`, exact to 1e-15 cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Cycles(u64);

impl Cycles {
    pub const ZERO: Cycles = Cycles(0);

    pub fn from_units(units: i128) -> Self {
        Cycles(units.rem_euclid(CYCLE_UNITS) as u64)
    }

    pub fn units(self) -> u64 {
        self.0
    }

    /// Signed distance to the nearest integer cycle, in cycles.
    pub fn distance_to_integer(self) -> f64 {
        let u = self.0 as i128;
        let d = if u * 2 > CYCLE_UNITS { u - CYCLE_UNITS } else { u };
        d as f64 / CYCLE_UNITS as f64
    }

    /// Radians in `(−π, π]`.
    pub fn radians(self) -> f64 {
        self.distance_to_integer() * TAU
    }
}

impl Add for Cycles {
    type Output = Cycles;
    fn add(self, rhs: Cycles) -> Cycles {
        Cycles::from_units(self.0 as i128 + rhs.0 as i128)
    }
}

impl Sub for Cycles {
    type Output = Cycles;
    fn sub(self, rhs: Cycles) -> Cycles {
        Cycles::from_units(self.0 as i128 - rhs.0 as i128)
    }
}

/// Wraps radians into `[0, 2π)`.
pub fn wrap_tau(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU { 0.0 } else { r }
}

/// Wraps radians into `(−π, π]`.
pub fn wrap_pi(x: f64) -> f64 {
    let r = wrap_tau(x);
    if r > std::f64::consts::PI { r - TAU } else { r }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn advance_is_exact_over_long_times() {
        let f = Freq::from_hz(527.05e6);
        // 527.05 MHz × 1 s = 527 050 000 whole cycles
        assert_eq!(f.advance(1_000_000_000), Cycles::ZERO);
        // 290 ns → 152.8445 cycles
        let frac = f.advance(290).units() as f64 / CYCLE_UNITS as f64;
        assert!((frac - 0.8445).abs() < 1e-15);
    }

    #[test]
    fn wrapping() {
        assert!((wrap_pi(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!((wrap_tau(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert_eq!(Cycles::from_units(-1).units() as i128, CYCLE_UNITS - 1);
    }
}
