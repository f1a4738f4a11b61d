// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Runs native-gate circuits end to end: compile, render, evolve from |00⟩.

use crate::compiler::{Compiler, Gate};
use crate::device::{evolve_with, DeviceConfig, Integrator, Noise};
use crate::quantum::DensityMatrix;
use crate::Result;

#[derive(Debug, Clone)]
pub struct Experiment {
    pub device: DeviceConfig,
    pub compiler: Compiler,
    pub noise: Noise,
    pub integrator: Integrator,
}

impl Experiment {
    pub fn new(device: DeviceConfig, compiler: Compiler, noise: Noise) -> Self {
        Self { device, compiler, noise, integrator: Integrator::default() }
    }

    /// State after `gates`, for a repetition starting at `t_start`.
    pub fn final_state(&self, gates: &[Gate], t_start: i64) -> Result<DensityMatrix> {
        let seq = self.compiler.compile(gates, t_start)?;
        let w = seq.render()?;
        Ok(evolve_with(&self.device, &w, &DensityMatrix::basis(0, 0), self.noise, self.integrator)?.final_state)
    }

    /// States after `prefix ++ tail` for every tail. The prefix is evolved
    /// once.
    pub fn final_states_with_tails(
        &self,
        prefix: &[Gate],
        tails: &[Vec<Gate>],
        t_start: i64,
    ) -> Result<Vec<DensityMatrix>> {
        let head = self.compiler.compile(prefix, t_start)?;
        let split = head.gate_ends.last().copied().unwrap_or(0) as usize;
        let rho0 = DensityMatrix::basis(0, 0);
        let mid = if split > 0 {
            let w = head.render()?.slice(0, split);
            evolve_with(&self.device, &w, &rho0, self.noise, self.integrator)?.final_state
        } else {
            rho0
        };
        tails
            .iter()
            .map(|tail| {
                let gates: Vec<Gate> = prefix.iter().chain(tail).copied().collect();
                let seq = self.compiler.compile(&gates, t_start)?;
                let end = seq.gate_ends.last().copied().unwrap_or(0) as usize;
                if end == split {
                    return Ok(mid.clone());
                }
                let w = seq.render()?.slice(split, end);
                Ok(evolve_with(&self.device, &w, &mid, self.noise, self.integrator)?.final_state)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{EngineConfig, GateParams};
    use crate::quantum::{state_fidelity, Qubit};

    #[test]
    fn shared_prefix_matches_full_runs() {
        let cfg = DeviceConfig::default();
        let mut p = GateParams::with_x90(&cfg, 20).unwrap();
        p.coupler_amplitude = 0.236;
        p.duration_ns = 290;
        p.drive_frequency = cfg.shifted_difference_frequency(0.236);
        let exp = Experiment::new(cfg.clone(), Compiler::new(&cfg, EngineConfig::default(), p).unwrap(), Noise::On);
        let prefix = [Gate::X90(Qubit::Q2), Gate::Iswap];
        let tails = vec![vec![], vec![Gate::X90(Qubit::Q1)], vec![Gate::Vz(Qubit::Q2, 1.0), Gate::X90(Qubit::Q2)]];
        let shared = exp.final_states_with_tails(&prefix, &tails, 0).unwrap();
        for (tail, rho) in tails.iter().zip(&shared) {
            let gates: Vec<Gate> = prefix.iter().chain(tail).copied().collect();
            let full = exp.final_state(&gates, 0).unwrap();
            assert!((full.matrix() - rho.matrix()).norm() < 1e-12);
            assert!(state_fidelity(&full, rho).unwrap() > 1.0 - 1e-12);
        }
    }
}
