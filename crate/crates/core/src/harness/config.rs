// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::benchmarking::RBConfig;
use crate::calibration::CalibrationConfig;
use crate::compiler::EngineConfig;
use crate::device::{DeviceConfig, Noise};
use crate::grid::Axis;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Frequency grids of the spectroscopy maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectroscopyConfig {
    pub v_dc: Axis,
    pub resonator_frequencies: Axis,
    pub qubit_frequencies: Axis,
}

impl Default for SpectroscopyConfig {
    fn default() -> Self {
        Self {
            v_dc: Axis::new(2.0, 4.2, 0.02),
            resonator_frequencies: Axis::new(5.90e9, 6.30e9, 1e6),
            qubit_frequencies: Axis::new(4.20e9, 4.90e9, 2e6),
        }
    }
}

/// Repetition averaging of the phase demonstration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DemoConfig {
    pub repetitions: usize,
    pub shots: u64,
    pub analytic: bool,
    /// Sync offsets of the non-commensurate regime are drawn from
    /// `[0, max_offset_ns)` on the 2 ns grid.
    pub max_offset_ns: i64,
    pub noise: Noise,
}

impl Default for DemoConfig {
    fn default() -> Self {
        Self { repetitions: 200, shots: 1000, analytic: false, max_offset_ns: 10_000, noise: Noise::On }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TomoConfig {
    pub shots: u64,
    pub analytic: bool,
    pub noise: Noise,
}

impl Default for TomoConfig {
    fn default() -> Self {
        Self { shots: 10_000, analytic: false, noise: Noise::On }
    }
}

/// Everything a CLI verb needs. Stage seeds are derived from `seed` with
/// [`sub_seed`](super::sub_seed); `rb.seed` is not read from the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub device: DeviceConfig,
    pub engine: EngineConfig,
    pub calibration: CalibrationConfig,
    pub rb: RBConfig,
    pub spectroscopy: SpectroscopyConfig,
    pub demo: DemoConfig,
    pub tomo: TomoConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 2026,
            output_dir: PathBuf::from("out"),
            device: DeviceConfig::default(),
            engine: EngineConfig::default(),
            calibration: CalibrationConfig::default(),
            rb: RBConfig::default(),
            spectroscopy: SpectroscopyConfig::default(),
            demo: DemoConfig::default(),
            tomo: TomoConfig::default(),
        }
    }
}

fn config_err(path: impl Into<String>, reason: impl std::fmt::Display) -> Error {
    Error::Config { path: path.into(), reason: reason.to_string() }
}

impl RunConfig {
    /// Parses TOML, or JSON when the file name ends in `.json`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(path.display().to_string(), e))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        Self::parse(&text, json)
    }

    pub fn parse(text: &str, json: bool) -> Result<Self> {
        let value: serde_json::Value = if json {
            serde_json::from_str(text).map_err(|e| config_err("<root>", e))?
        } else {
            let table: toml::Table = toml::from_str(text).map_err(|e| config_err("<root>", e.message()))?;
            serde_json::to_value(table).map_err(|e| config_err("<root>", e))?
        };
        let cfg: RunConfig = serde_path_to_error::deserialize(value).map_err(|e| {
            let p = e.path().to_string();
            config_err(if p == "." { "<root>".into() } else { p }, e.into_inner())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.device.validate()?;
        self.engine.validate().map_err(|e| match e {
            e @ Error::Config { .. } => e,
            other => config_err("engine", other),
        })?;
        self.calibration.validate()?;
        self.rb.validate()?;
        for (name, axis) in [
            ("v_dc", self.spectroscopy.v_dc),
            ("resonator_frequencies", self.spectroscopy.resonator_frequencies),
            ("qubit_frequencies", self.spectroscopy.qubit_frequencies),
        ] {
            axis.values().map_err(|e| config_err(format!("spectroscopy.{name}"), e))?;
        }
        if self.demo.repetitions == 0 {
            return Err(config_err("demo.repetitions", "must be positive"));
        }
        if self.demo.max_offset_ns < 2 || self.demo.max_offset_ns % 2 != 0 {
            return Err(config_err("demo.max_offset_ns", "must be a positive multiple of 2"));
        }
        for (name, shots, analytic) in [("demo.shots", self.demo.shots, self.demo.analytic), ("tomo.shots", self.tomo.shots, self.tomo.analytic)] {
            if !analytic && shots == 0 {
                return Err(config_err(name, "must be positive unless analytic"));
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_err("<root>", e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml_and_json() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert_eq!(RunConfig::parse(&c.to_toml().unwrap(), false).unwrap(), c);
        assert_eq!(RunConfig::parse(&serde_json::to_string(&c).unwrap(), true).unwrap(), c);
        assert_eq!(RunConfig::parse("", false).unwrap(), c);
    }

    #[test]
    fn errors_name_the_field() {
        let path = |text: &str| match RunConfig::parse(text, false) {
            Err(Error::Config { path, .. }) => path,
            other => panic!("{other:?}"),
        };
        assert_eq!(path("[device]\nw_q1 = \"fast\"\n"), "device.w_q1");
        assert_eq!(path("[rb]\nbogus = 1\n"), "rb.bogus");
        assert_eq!(path("[calibration]\nshots = 0\n"), "calibration.shots");
        assert_eq!(path("[device]\nt1_q1 = -1.0\n"), "device.t1_q1");
        assert_eq!(path("[demo]\nmax_offset_ns = 3\n"), "demo.max_offset_ns");
        assert_eq!(path("seed = [1"), "<root>");
    }

    #[test]
    fn rb_seed_is_not_configurable() {
        assert!(RunConfig::parse("[rb]\nseed = 5\n", false).is_err());
    }
}
