// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Lowers native gates onto the three sequencer ports.
//!
//! Virtual Z gates never produce samples. The compiler keeps the pending Z
//! angles `φ1, φ2` so that at every point the ideal circuit equals
//! `Z(φ1, φ2)` times what has been played:
//!
//! - an X90 on qubit q is played with drive phase `−φ_q` (tracked as a
//!   virtual Z of `−φ_q` on the qubit port);
//! - an exchange gate with phase η is played with coupler phase
//!   `η + φ1 − φ2`, referenced to the qubit difference frame at the pulse
//!   start;
//! - the Stark compensation after every coupler pulse adds `(vz_q1, vz_q2)`
//!   to the pending angles.
//!
//! Times are relative to the repetition start. The compiler assumes every
//! NCO has an integer number of cycles between syncs and repetition starts;
//! if that assumption is broken the played phases drift from repetition to
//! repetition, which is exactly what the phase-coherence demonstration
//! shows.

use crate::dds::{Cycles, Freq, NcoConfig, PortId, PulseTemplate, SequencerState};
use crate::device::{DeviceConfig, DriveWaveforms};
use crate::quantum::{iswap_family, single_qubit_x90, virtual_z_unitary, Qubit, Unitary};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

pub const PORT_Q1: &str = "q1";
pub const PORT_Q2: &str = "q2";
pub const PORT_COUPLER: &str = "coupler";

pub fn qubit_port(q: Qubit) -> PortId {
    PortId::new(match q {
        Qubit::Q1 => PORT_Q1,
        Qubit::Q2 => PORT_Q2,
    })
}

pub fn coupler_port() -> PortId {
    PortId::new(PORT_COUPLER)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// π/2 rotation about X of the current frame.
    X90(Qubit),
    /// Virtual Z: `diag(1, e^{iφ})` on one qubit.
    Vz(Qubit, f64),
    /// Calibrated iSWAP, Stark compensation included.
    Iswap,
    /// Calibrated −iSWAP (coupler phase advanced by π).
    MinusIswap,
}

impl Gate {
    /// Ideal two-qubit unitary.
    pub fn unitary(&self) -> Unitary {
        match *self {
            Gate::X90(q) => single_qubit_x90(q.index(), 0.0).expect("valid qubit"),
            Gate::Vz(Qubit::Q1, a) => virtual_z_unitary(a, 0.0),
            Gate::Vz(Qubit::Q2, a) => virtual_z_unitary(0.0, a),
            Gate::Iswap => iswap_family(PI, 0.0),
            Gate::MinusIswap => iswap_family(PI, PI),
        }
    }
}

/// Y90 on `q` as native gates: VZ(−π/2), X90, VZ(π/2).
pub fn y90(q: Qubit) -> [Gate; 3] {
    [Gate::Vz(q, -PI / 2.0), Gate::X90(q), Gate::Vz(q, PI / 2.0)]
}

/// X90 about −X, preparing (|0⟩ + i|1⟩)/√2 from |0⟩.
pub fn x90_minus(q: Qubit) -> [Gate; 3] {
    [Gate::Vz(q, PI), Gate::X90(q), Gate::Vz(q, -PI)]
}

pub fn ideal_unitary(gates: &[Gate]) -> Unitary {
    gates.iter().fold(Unitary::identity(), |acc, g| &g.unitary() * &acc)
}

/// Parameters of the physical pulses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    pub x90_duration_ns: i64,
    pub x90_amplitude: f64,
    pub coupler_amplitude: f64,
    /// Coupler drive frequency, Hz.
    pub drive_frequency: f64,
    pub duration_ns: i64,
    pub eta: f64,
    pub vz_q1: f64,
    pub vz_q2: f64,
}

impl GateParams {
    /// Rectangular X90 of the given length, amplitude from the Rabi rate.
    pub fn with_x90(cfg: &DeviceConfig, x90_duration_ns: i64) -> Result<Self> {
        if x90_duration_ns <= 0 || x90_duration_ns % 2 != 0 {
            return Err(Error::invalid("x90 duration must be a positive multiple of 2 ns"));
        }
        let amp = 0.25 / (cfg.rabi_rate_per_unit * x90_duration_ns as f64 * 1e-9);
        if !(amp > 0.0 && amp <= 1.0) {
            return Err(Error::invalid(format!("x90 needs amplitude {amp}, outside (0, 1]")));
        }
        Ok(Self {
            x90_duration_ns,
            x90_amplitude: amp,
            coupler_amplitude: 0.0,
            drive_frequency: cfg.difference_frequency(),
            duration_ns: 2,
            eta: 0.0,
            vz_q1: 0.0,
            vz_q2: 0.0,
        })
    }

    pub fn vz(&self, q: Qubit) -> f64 {
        match q {
            Qubit::Q1 => self.vz_q1,
            Qubit::Q2 => self.vz_q2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    pub repetition_period_ns: i64,
    /// NCO frequencies are rounded down to multiples of this; the rest goes
    /// to the IF generator.
    pub nco_step_hz: f64,
    /// Extra NCO offset (moved out of the IF) when running non-commensurate.
    pub nco_detune_hz: f64,
    pub commensurate: bool,
    pub reference_phase_q1: f64,
    pub reference_phase_q2: f64,
    pub reference_phase_coupler: f64,
    pub x90_duration_ns: i64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            repetition_period_ns: 10_000,
            nco_step_hz: 100e3,
            nco_detune_hz: 12_345.678,
            commensurate: true,
            reference_phase_q1: 0.0,
            reference_phase_q2: 0.0,
            reference_phase_coupler: 0.0,
            x90_duration_ns: 20,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |f: &str, r: &str| Err(Error::Config { path: format!("engine.{f}"), reason: r.into() });
        if self.repetition_period_ns <= 0 || self.repetition_period_ns % 2 != 0 {
            return bad("repetition_period_ns", "must be a positive multiple of 2");
        }
        if !(self.nco_step_hz > 0.0) {
            return bad("nco_step_hz", "must be positive");
        }
        if !self.nco_detune_hz.is_finite() || self.nco_detune_hz.abs() >= 100e6 {
            return bad("nco_detune_hz", "must be finite and well inside the IF band");
        }
        if self.x90_duration_ns <= 0 || self.x90_duration_ns % 2 != 0 {
            return bad("x90_duration_ns", "must be a positive multiple of 2");
        }
        Ok(())
    }

    pub fn non_commensurate(mut self) -> Self {
        self.commensurate = false;
        self
    }

    /// Splits a carrier into (NCO, IF).
    pub fn split(&self, f_hz: f64) -> (Freq, Freq) {
        let f = Freq::from_hz(f_hz);
        let step = Freq::from_hz(self.nco_step_hz).micro_hz();
        let mut nco = Freq::from_micro_hz(f.micro_hz().div_euclid(step) * step);
        if !self.commensurate {
            nco = nco + Freq::from_hz(self.nco_detune_hz);
        }
        (nco, f - nco)
    }

    pub fn reference_phase(&self, port: &str) -> f64 {
        match port {
            PORT_Q1 => self.reference_phase_q1,
            PORT_Q2 => self.reference_phase_q2,
            _ => self.reference_phase_coupler,
        }
    }
}

/// A scheduled repetition, ready to render.
#[derive(Debug, Clone)]
pub struct CompiledSequence {
    pub state: SequencerState,
    pub t_start_ns: i64,
    pub t_end_ns: i64,
    /// Sample offsets (relative to `t_start_ns`) right after each gate.
    pub gate_ends: Vec<i64>,
}

impl CompiledSequence {
    pub fn render(&self) -> Result<DriveWaveforms> {
        let r = |p: PortId| self.state.render(&p, self.t_start_ns, self.t_end_ns);
        Ok(DriveWaveforms {
            q1: r(qubit_port(Qubit::Q1))?,
            q2: r(qubit_port(Qubit::Q2))?,
            coupler: r(coupler_port())?,
        })
    }

    pub fn duration_ns(&self) -> i64 {
        self.t_end_ns - self.t_start_ns
    }
}

#[derive(Debug, Clone)]
pub struct Compiler {
    pub engine: EngineConfig,
    pub params: GateParams,
    w_q1: Freq,
    w_q2: Freq,
    x90: Arc<PulseTemplate>,
    coupler: Arc<PulseTemplate>,
}

impl Compiler {
    pub fn new(cfg: &DeviceConfig, engine: EngineConfig, params: GateParams) -> Result<Self> {
        engine.validate()?;
        if params.x90_duration_ns <= 0 || params.duration_ns <= 0 {
            return Err(Error::invalid("pulse durations must be positive"));
        }
        crate::dds::ensure_grid(params.x90_duration_ns)?;
        crate::dds::ensure_grid(params.duration_ns)?;
        if !(0.0..=1.0).contains(&params.coupler_amplitude) || !(0.0..=1.0).contains(&params.x90_amplitude) {
            return Err(Error::invalid("pulse amplitudes must lie in [0, 1]"));
        }
        Ok(Self {
            engine,
            params,
            w_q1: Freq::from_hz(cfg.w_q1),
            w_q2: Freq::from_hz(cfg.w_q2),
            x90: Arc::new(PulseTemplate::rectangular("x90", params.x90_duration_ns as usize)?),
            coupler: Arc::new(PulseTemplate::rectangular("exchange", params.duration_ns as usize)?),
        })
    }

    fn carriers(&self) -> [(PortId, Freq); 3] {
        [
            (qubit_port(Qubit::Q1), self.w_q1),
            (qubit_port(Qubit::Q2), self.w_q2),
            (coupler_port(), Freq::from_hz(self.params.drive_frequency)),
        ]
    }

    /// NCO settings of the three ports.
    pub fn ncos(&self) -> [(PortId, NcoConfig); 3] {
        self.carriers().map(|(p, f)| {
            let (nco, _) = self.engine.split(f.hz());
            let reference_phase = self.engine.reference_phase(&p.0);
            (p, NcoConfig { frequency: nco, reference_phase })
        })
    }

    /// Empty state with the three ports configured, synced at t = 0.
    pub fn empty_state(&self) -> Result<SequencerState> {
        let mut s = SequencerState::new(self.engine.repetition_period_ns)?;
        for (p, nco) in self.ncos() {
            s = s.with_port(p, nco);
        }
        Ok(s)
    }

    /// Appends one repetition starting at `t_start` (an IF restart) to `state`.
    pub fn compile_into(&self, state: SequencerState, gates: &[Gate], t_start: i64) -> Result<CompiledSequence> {
        let mut s = state.restart(t_start)?;
        for (p, f) in self.carriers() {
            let (_, f_if) = self.engine.split(f.hz());
            s = s.set_if_frequency(&p, t_start, f_if)?;
        }
        let diff = self.w_q1 - self.w_q2;
        let (c_nco, _) = self.engine.split(self.params.drive_frequency);
        let mut pending = [0.0f64; 2];
        let mut t = t_start;
        let mut gate_ends = Vec::with_capacity(gates.len());
        for g in gates {
            match *g {
                Gate::Vz(q, a) => {
                    pending[q.index() - 1] += a;
                    s = s.add_virtual_z(&qubit_port(q), t, -a)?;
                }
                Gate::X90(q) => {
                    s = s.schedule_pulse(&qubit_port(q), t, Arc::clone(&self.x90), self.params.x90_amplitude)?;
                    t += self.params.x90_duration_ns;
                }
                Gate::Iswap | Gate::MinusIswap => {
                    let extra = if *g == Gate::MinusIswap { PI } else { 0.0 };
                    let eta = self.params.eta + extra + pending[0] - pending[1];
                    // coupler phase relative to the difference frame at t
                    let drift: Cycles = (c_nco - diff).advance(t - t_start);
                    let c = coupler_port();
                    s = s
                        .set_if_phase(&c, t, eta - drift.radians())?
                        .schedule_pulse(&c, t, Arc::clone(&self.coupler), self.params.coupler_amplitude)?;
                    t += self.params.duration_ns;
                    for q in Qubit::BOTH {
                        let v = self.params.vz(q);
                        pending[q.index() - 1] += v;
                        s = s.add_virtual_z(&qubit_port(q), t, -v)?;
                    }
                }
            }
            gate_ends.push(t - t_start);
        }
        let t_end = t.max(t_start + crate::dds::GRID_NS);
        Ok(CompiledSequence { state: s, t_start_ns: t_start, t_end_ns: t_end, gate_ends })
    }

    pub fn compile(&self, gates: &[Gate], t_start: i64) -> Result<CompiledSequence> {
        self.compile_into(self.empty_state()?, gates, t_start)
    }

    /// Raw coupler pulse at `t`, phase `eta` in the difference frame, then a
    /// second pulse advanced by π with no phase re-reference. Used for the
    /// uncompensated echo.
    pub fn compile_echo(&self, prefix: &[Gate], suffix: &[Gate], t_start: i64) -> Result<CompiledSequence> {
        let head = self.compile(prefix, t_start)?;
        let mut s = head.state;
        let t = head.t_start_ns + head.gate_ends.last().copied().unwrap_or(0);
        let diff = self.w_q1 - self.w_q2;
        let (c_nco, _) = self.engine.split(self.params.drive_frequency);
        let c = coupler_port();
        let drift = (c_nco - diff).advance(t - t_start);
        let tau = self.params.duration_ns;
        s = s
            .set_if_phase(&c, t, self.params.eta - drift.radians())?
            .schedule_pulse(&c, t, Arc::clone(&self.coupler), self.params.coupler_amplitude)?
            .add_virtual_z(&c, t + tau, PI)?
            .schedule_pulse(&c, t + tau, Arc::clone(&self.coupler), self.params.coupler_amplitude)?;
        let mut t_now = t + 2 * tau;
        // the suffix only uses qubit ports and pending frames start fresh
        for g in suffix {
            match *g {
                Gate::Vz(q, a) => s = s.add_virtual_z(&qubit_port(q), t_now, -a)?,
                Gate::X90(q) => {
                    s = s.schedule_pulse(&qubit_port(q), t_now, Arc::clone(&self.x90), self.params.x90_amplitude)?;
                    t_now += self.params.x90_duration_ns;
                }
                Gate::Iswap | Gate::MinusIswap => {
                    return Err(Error::invalid("echo suffix must be single-qubit gates"));
                }
            }
        }
        Ok(CompiledSequence { state: s, t_start_ns: t_start, t_end_ns: t_now, gate_ends: Vec::new() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::{propagator, Integrator};

    fn setup(cfg: &DeviceConfig) -> Compiler {
        let mut p = GateParams::with_x90(cfg, 20).unwrap();
        p.coupler_amplitude = 0.236;
        p.duration_ns = 290;
        p.drive_frequency = cfg.shifted_difference_frequency(0.236);
        let a2 = 0.236 * 0.236;
        p.vz_q1 = std::f64::consts::TAU * cfg.stark_coeff_q1 * a2 * 290e-9;
        p.vz_q2 = std::f64::consts::TAU * cfg.stark_coeff_q2 * a2 * 290e-9;
        Compiler::new(cfg, EngineConfig::default(), p).unwrap()
    }

    /// Up-to-phase fidelity after removing trailing Z frames, which do not
    /// affect Z-basis readout.
    fn frame_free_fidelity(physical: &Unitary, ideal: &Unitary) -> f64 {
        // maximize over a final Z(a, b) on a coarse grid, then refine
        let mut best = (0.0, 0.0, 0.0);
        let n = 72;
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (i as f64 * std::f64::consts::TAU / n as f64, j as f64 * std::f64::consts::TAU / n as f64);
                let f = (&virtual_z_unitary(a, b) * physical).overlap(ideal);
                if f > best.0 {
                    best = (f, a, b);
                }
            }
        }
        let (mut a, mut b, mut step) = (best.1, best.2, std::f64::consts::TAU / n as f64);
        let mut f0 = best.0;
        for _ in 0..60 {
            let mut moved = false;
            for (da, db) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                let f = (&virtual_z_unitary(a + da, b + db) * physical).overlap(ideal);
                if f > f0 {
                    f0 = f;
                    a += da;
                    b += db;
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        f0 * f0
    }

    #[test]
    fn frequency_split_examples() {
        let e = EngineConfig::default();
        let (nco, f_if) = e.split(527.05e6);
        assert_eq!(nco, Freq::from_hz(527.0e6));
        assert_eq!(f_if, Freq::from_hz(50e3));
        let (nco, f_if) = e.split(4.272_45e9);
        assert_eq!((nco, f_if), (Freq::from_hz(4.2724e9), Freq::from_hz(50e3)));
        assert!(crate::dds::nco_commensurate(nco, e.repetition_period_ns).unwrap());
        let (nco, f_if) = e.non_commensurate().split(4.8e9);
        assert!(!crate::dds::nco_commensurate(nco, e.repetition_period_ns).unwrap());
        assert_eq!(nco + f_if, Freq::from_hz(4.8e9));
    }

    #[test]
    fn compiled_gates_match_ideal_unitaries() {
        let cfg = DeviceConfig::default();
        let c = setup(&cfg);
        let circuits: Vec<Vec<Gate>> = vec![
            vec![Gate::X90(Qubit::Q1)],
            y90(Qubit::Q2).to_vec(),
            vec![Gate::Iswap],
            vec![Gate::X90(Qubit::Q1), Gate::Vz(Qubit::Q1, 0.7), Gate::X90(Qubit::Q1), Gate::Iswap],
            vec![Gate::Vz(Qubit::Q2, 1.1), Gate::Iswap, Gate::X90(Qubit::Q2), Gate::MinusIswap],
        ];
        for gates in circuits {
            for t0 in [0, 30_000] {
                let seq = c.compile(&gates, t0).unwrap();
                let w = seq.render().unwrap();
                let u = propagator(&cfg, &w, Integrator::default()).unwrap();
                // bring the absolute-time frame back to the repetition frame
                let a1 = -std::f64::consts::TAU * (cfg.w_q1 * t0 as f64 * 1e-9).fract();
                let a2 = -std::f64::consts::TAU * (cfg.w_q2 * t0 as f64 * 1e-9).fract();
                let frame = virtual_z_unitary(a1, a2);
                let u_rel = &(&frame.adjoint() * &u) * &frame;
                let f = frame_free_fidelity(&u_rel, &ideal_unitary(&gates));
                assert!(1.0 - f < 2e-3, "{gates:?} at {t0}: {f}");
            }
        }
    }

    #[test]
    fn stark_free_gate_is_exact() {
        let cfg = DeviceConfig::default().without_stark();
        let mut c = setup(&cfg);
        c.params.vz_q1 = 0.0;
        c.params.vz_q2 = 0.0;
        c.params.drive_frequency = cfg.difference_frequency();
        let c = Compiler::new(&cfg, EngineConfig::default(), c.params).unwrap();
        let u = propagator(&cfg, &c.compile(&[Gate::Iswap], 0).unwrap().render().unwrap(), Integrator::default()).unwrap();
        assert!(1.0 - u.overlap(&iswap_family(PI, 0.0)).powi(2) < 1e-6);
    }

    #[test]
    fn durations_and_windows() {
        let cfg = DeviceConfig::default();
        let c = setup(&cfg);
        let seq = c.compile(&[Gate::X90(Qubit::Q1), Gate::Vz(Qubit::Q2, 1.0), Gate::Iswap], 100).unwrap();
        assert_eq!(seq.gate_ends, vec![20, 20, 310]);
        assert_eq!(seq.duration_ns(), 310);
        let empty = c.compile(&[Gate::Vz(Qubit::Q1, 1.0)], 0).unwrap();
        assert_eq!(empty.duration_ns(), 2);
        assert!(c.compile(&[], 3).is_err());
    }
}
