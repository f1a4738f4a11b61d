// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::compiler::{EngineConfig, GateParams};
use crate::device::DeviceConfig;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

/// Calibrated parameters of the parametric iSWAP.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationRecord {
    /// Volts.
    pub v_dc: f64,
    /// Coupler drive amplitude, fraction of DAC full scale.
    pub amplitude: f64,
    /// Coupler drive frequency, Hz.
    pub drive_frequency: f64,
    /// Pulse length, ns.
    pub duration: i64,
    /// Coupler drive phase relative to the qubits' difference frame.
    pub eta: f64,
    pub vz_q1: f64,
    pub vz_q2: f64,
    /// Unix seconds per completed stage.
    pub timestamps: BTreeMap<String, u64>,
    pub config_hash: String,
}

impl CalibrationRecord {
    /// Record from model knowledge rather than measurement: resonant drive at
    /// the given amplitude and duration, analytic Stark compensation.
    pub fn from_model(cfg: &DeviceConfig, v_dc: f64, amplitude: f64, duration: i64) -> Self {
        let a2 = amplitude * amplitude;
        let t = duration as f64 * 1e-9;
        Self {
            v_dc,
            amplitude,
            drive_frequency: cfg.shifted_difference_frequency(amplitude),
            duration,
            eta: 0.0,
            vz_q1: 2.0 * PI * cfg.stark_coeff_q1 * a2 * t,
            vz_q2: 2.0 * PI * cfg.stark_coeff_q2 * a2 * t,
            timestamps: BTreeMap::new(),
            config_hash: String::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |f: &str, r: &str| Err(Error::Config { path: format!("record.{f}"), reason: r.into() });
        if !(0.0..=1.0).contains(&self.amplitude) {
            return bad("amplitude", "must lie in [0, 1]");
        }
        if self.duration <= 0 || self.duration % 2 != 0 {
            return bad("duration", "must be a positive multiple of 2 ns");
        }
        if !(self.eta > -PI && self.eta <= PI) {
            return bad("eta", "must lie in (-pi, pi]");
        }
        if !(self.drive_frequency.is_finite() && self.vz_q1.is_finite() && self.vz_q2.is_finite()) {
            return bad("drive_frequency", "non-finite value");
        }
        Ok(())
    }

    /// Pulse parameters for the compiler.
    pub fn gate_params(&self, cfg: &DeviceConfig, engine: &EngineConfig) -> Result<GateParams> {
        let mut p = GateParams::with_x90(cfg, engine.x90_duration_ns)?;
        p.coupler_amplitude = self.amplitude;
        p.drive_frequency = self.drive_frequency;
        p.duration_ns = self.duration;
        p.eta = self.eta;
        p.vz_q1 = self.vz_q1;
        p.vz_q2 = self.vz_q2;
        Ok(p)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let r: Self = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        r.validate()?;
        Ok(r)
    }
}

/// `SOURCE_DATE_EPOCH` when set, otherwise the wall clock.
pub fn timestamp_now() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.trim().parse().ok()) {
        return t;
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_record_and_round_trip() {
        let cfg = DeviceConfig::default();
        let r = CalibrationRecord::from_model(&cfg, 3.775, 0.236, 290);
        r.validate().unwrap();
        assert!((r.drive_frequency - 527.05e6).abs() < 1.0);
        assert!((r.vz_q1 + 0.5466).abs() < 1e-3 && (r.vz_q2 - 0.3644).abs() < 1e-3);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        r.save(&p).unwrap();
        assert_eq!(CalibrationRecord::load(&p).unwrap(), r);
        let text = r.to_json().unwrap();
        for key in ["v_dc", "amplitude", "drive_frequency", "duration", "eta", "vz_q1", "vz_q2", "timestamps", "config_hash"] {
            assert!(text.contains(&format!("\"{key}\"")), "{key}");
        }
    }

    #[test]
    fn invariants_are_checked() {
        let cfg = DeviceConfig::default();
        let mut r = CalibrationRecord::from_model(&cfg, 3.775, 0.236, 290);
        r.duration = 291;
        assert!(r.validate().is_err());
        r.duration = 290;
        r.eta = -PI;
        assert!(r.validate().is_err());
        r.eta = PI;
        r.validate().unwrap();
        r.amplitude = 1.2;
        assert!(r.validate().is_err());
    }
}
