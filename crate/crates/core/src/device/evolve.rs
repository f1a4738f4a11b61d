// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::DeviceConfig;
use crate::dds::{Freq, RenderedWaveform};
use crate::quantum::{DensityMatrix, Mat4, Qubit, Unitary, C64};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Converts Hz to rad/ns.
const HZ_TO_RAD_PER_NS: f64 = TAU * 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Noise {
    #[default]
    On,
    Off,
}

/// Fixed-step RK4 with `substeps` steps per 1 ns sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Integrator {
    pub substeps: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self { substeps: 4 }
    }
}

/// The three drive lines, sampled over one common window.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveWaveforms {
    pub q1: RenderedWaveform,
    pub q2: RenderedWaveform,
    pub coupler: RenderedWaveform,
}

impl DriveWaveforms {
    pub fn len(&self) -> usize {
        self.q1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q1.is_empty()
    }

    pub fn slice(&self, k0: usize, k1: usize) -> Self {
        Self { q1: self.q1.slice(k0, k1), q2: self.q2.slice(k0, k1), coupler: self.coupler.slice(k0, k1) }
    }

    fn check(&self) -> Result<()> {
        let (a, b, c) = (&self.q1, &self.q2, &self.coupler);
        if a.len() != b.len() || a.len() != c.len() {
            return Err(Error::invalid(format!(
                "waveform lengths differ: q1 {}, q2 {}, coupler {}",
                a.len(),
                b.len(),
                c.len()
            )));
        }
        if a.t0_ns != b.t0_ns || a.t0_ns != c.t0_ns {
            return Err(Error::invalid("waveforms start at different times"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub final_state: DensityMatrix,
    /// Seconds.
    pub time_evolved: f64,
    /// Largest ‖H‖·(1 ns) over the run, radians.
    pub max_step_norm: f64,
}

/// `samples[k]·exp(−i(2π f_ref t_k + phase_ref))` of the full analytic
/// signal, with `t_k` the absolute sample time. Phases are combined in exact
/// cycle arithmetic before conversion to radians.
pub fn demodulate(w: &RenderedWaveform, f_ref: f64, phase_ref: f64) -> Vec<C64> {
    let f_ref = Freq::from_hz(f_ref);
    w.samples
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let k = k as i64;
            let cyc = w.carrier_cycles_t0 + w.carrier_frequency.advance(k) - f_ref.advance(w.t0_ns + k);
            s * C64::from_polar(1.0, cyc.radians() + w.carrier_reference_phase - phase_ref)
        })
        .collect()
}

/// Rotating-frame control amplitudes for one sample, all in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Control {
    pub eps1: C64,
    pub eps2: C64,
    pub g_eff: C64,
    pub stark1: f64,
    pub stark2: f64,
}

pub fn controls(cfg: &DeviceConfig, waves: &DriveWaveforms) -> Result<Vec<Control>> {
    waves.check()?;
    let d1 = demodulate(&waves.q1, cfg.w_q1, 0.0);
    let d2 = demodulate(&waves.q2, cfg.w_q2, 0.0);
    let dc = demodulate(&waves.coupler, cfg.difference_frequency(), 0.0);
    Ok((0..waves.len())
        .map(|k| {
            let a2 = waves.coupler.samples[k].norm_sqr();
            Control {
                eps1: d1[k] * cfg.rabi_rate_per_unit,
                eps2: d2[k] * cfg.rabi_rate_per_unit,
                g_eff: dc[k] * cfg.swap_rate_per_unit,
                stark1: cfg.stark_coeff_q1 * a2,
                stark2: cfg.stark_coeff_q2 * a2,
            }
        })
        .collect())
}

/// H in rad/ns:
/// `½Re ε_q X_q + ½Im ε_q Y_q − ½δ_q Z_q − ½(g|01⟩⟨10| + g*|10⟩⟨01|)`, times 2π.
///
/// With this sign choice a resonant exchange drive of phase η generates the
/// parametric iSWAP family with the same η, and the exchange resonance moves
/// by δ₁ − δ₂.
pub fn hamiltonian(c: &Control) -> Mat4 {
    let s = HZ_TO_RAD_PER_NS;
    let mut h = Mat4::zeros();
    let e1 = c.eps1 * (0.5 * s);
    let e2 = c.eps2 * (0.5 * s);
    for (lo, hi) in [(0, 2), (1, 3)] {
        h[(hi, lo)] += e1;
        h[(lo, hi)] += e1.conj();
    }
    for (lo, hi) in [(0, 1), (2, 3)] {
        h[(hi, lo)] += e2;
        h[(lo, hi)] += e2.conj();
    }
    let z1 = [1.0, 1.0, -1.0, -1.0];
    let z2 = [1.0, -1.0, 1.0, -1.0];
    for i in 0..4 {
        h[(i, i)] = C64::new(-0.5 * s * (c.stark1 * z1[i] + c.stark2 * z2[i]), 0.0);
    }
    let g = c.g_eff * (0.5 * s);
    h[(1, 2)] -= g;
    h[(2, 1)] -= g.conj();
    h
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// One 1 ns step of the Schrödinger equation: RK4 for a constant H is the
/// fourth-order Taylor polynomial of exp(−iHh), applied `substeps` times.
fn unitary_step(h: &Mat4, substeps: usize) -> Mat4 {
    let dt = 1.0 / substeps as f64;
    let a = h * C64::new(0.0, -dt);
    let id = Mat4::identity();
    let m = id + a * (id + a * (id + a * (id + a * re(0.25)) * re(1.0 / 3.0)) * re(0.5));
    let mut out = m;
    for _ in 1..substeps {
        out = m * out;
    }
    out
}

/// Amplitude damping and dephasing rates in 1/ns, arranged for direct
/// elementwise evaluation of the dissipator.
struct Dissipator {
    decay: [[f64; 4]; 4],
    gamma1: [f64; 2],
}

impl Dissipator {
    fn new(cfg: &DeviceConfig) -> Self {
        let mut gamma1 = [0.0; 2];
        let mut gphi = [0.0; 2];
        for (k, q) in Qubit::BOTH.into_iter().enumerate() {
            let (t1, _) = cfg.coherence(q);
            gamma1[k] = 1e-9 / t1;
            let tphi = cfg.t_phi(q);
            gphi[k] = if tphi.is_finite() { 1e-9 / (2.0 * tphi) } else { 0.0 };
        }
        let bits = |i: usize| [(i >> 1) & 1, i & 1];
        let mut decay = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let (bi, bj) = (bits(i), bits(j));
                let mut c = 0.0;
                for q in 0..2 {
                    c += 0.5 * gamma1[q] * (bi[q] + bj[q]) as f64;
                    if bi[q] != bj[q] {
                        c += 2.0 * gphi[q];
                    }
                }
                decay[i][j] = c;
            }
        }
        Self { decay, gamma1 }
    }

    /// Adds D(ρ) to `out`.
    fn apply(&self, rho: &Mat4, out: &mut Mat4) {
        for i in 0..4 {
            for j in 0..4 {
                out[(i, j)] -= rho[(i, j)] * self.decay[i][j];
            }
        }
        // σ⁻ρσ⁺ feeding terms
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            out[(i, j)] += rho[(i + 2, j + 2)] * self.gamma1[0];
        }
        for (i, j) in [(0, 0), (0, 2), (2, 0), (2, 2)] {
            out[(i, j)] += rho[(i + 1, j + 1)] * self.gamma1[1];
        }
    }
}

fn lindblad_rhs(h: &Mat4, rho: &Mat4, diss: &Dissipator) -> Mat4 {
    let hr = h * rho;
    // ρH = (Hρ)† for Hermitian H and ρ
    let mut out = (hr - hr.adjoint()) * C64::new(0.0, -1.0);
    diss.apply(rho, &mut out);
    out
}

fn finalize(m: Mat4) -> Result<DensityMatrix> {
    let herm = (m + m.adjoint()) * re(0.5);
    let tr = herm.trace().re;
    if (tr - 1.0).abs() > 1e-9 {
        return Err(Error::Invariant(format!("trace drifted to {tr}")));
    }
    let rho = DensityMatrix::from_matrix_unchecked(herm / C64::new(tr, 0.0));
    rho.validate_with(1e-9, -1e-8)
        .map_err(|e| Error::Invariant(format!("evolution left the state space: {e}")))?;
    Ok(rho)
}

/// Noise-off propagator of the whole window.
pub fn propagator(cfg: &DeviceConfig, waves: &DriveWaveforms, integ: Integrator) -> Result<Unitary> {
    let ctl = controls(cfg, waves)?;
    let mut u = Mat4::identity();
    let mut cache: Option<(Control, Mat4)> = None;
    for c in &ctl {
        let step = match &cache {
            Some((prev, step)) if prev == c => *step,
            _ => {
                let s = unitary_step(&hamiltonian(c), integ.substeps);
                cache = Some((*c, s));
                s
            }
        };
        u = step * u;
    }
    Ok(Unitary::from_matrix_unchecked(u))
}

/// States after the first `n` samples for every `n` in `checkpoints`
/// (ascending, each ≤ the waveform length).
pub fn evolve_checkpoints(
    cfg: &DeviceConfig,
    waves: &DriveWaveforms,
    initial: &DensityMatrix,
    noise: Noise,
    integ: Integrator,
    checkpoints: &[usize],
) -> Result<Vec<DensityMatrix>> {
    if integ.substeps == 0 {
        return Err(Error::invalid("integrator needs at least one substep"));
    }
    if checkpoints.windows(2).any(|w| w[0] > w[1]) || checkpoints.last().is_some_and(|&n| n > waves.len()) {
        return Err(Error::invalid("checkpoints must be ascending and within the waveform"));
    }
    initial.validate()?;
    let ctl = controls(cfg, waves)?;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    let rho0 = *initial.matrix();
    match noise {
        Noise::Off => {
            let mut u = Mat4::identity();
            let mut cache: Option<(Control, Mat4)> = None;
            for k in 0..=ctl.len() {
                while next.peek().is_some_and(|&&n| n == k) {
                    next.next();
                    out.push(finalize(u * rho0 * u.adjoint())?);
                }
                if k == ctl.len() {
                    break;
                }
                let c = &ctl[k];
                let step = match &cache {
                    Some((prev, step)) if prev == c => *step,
                    _ => {
                        let s = unitary_step(&hamiltonian(c), integ.substeps);
                        cache = Some((*c, s));
                        s
                    }
                };
                u = step * u;
            }
        }
        Noise::On => {
            let diss = Dissipator::new(cfg);
            let dt = 1.0 / integ.substeps as f64;
            let mut rho = rho0;
            for k in 0..=ctl.len() {
                while next.peek().is_some_and(|&&n| n == k) {
                    next.next();
                    out.push(finalize(rho)?);
                }
                if k == ctl.len() {
                    break;
                }
                let h = hamiltonian(&ctl[k]);
                for _ in 0..integ.substeps {
                    let k1 = lindblad_rhs(&h, &rho, &diss);
                    let k2 = lindblad_rhs(&h, &(rho + k1 * re(0.5 * dt)), &diss);
                    let k3 = lindblad_rhs(&h, &(rho + k2 * re(0.5 * dt)), &diss);
                    let k4 = lindblad_rhs(&h, &(rho + k3 * re(dt)), &diss);
                    rho += (k1 + (k2 + k3) * re(2.0) + k4) * re(dt / 6.0);
                }
            }
        }
    }
    Ok(out)
}

pub fn evolve(
    cfg: &DeviceConfig,
    waves: &DriveWaveforms,
    initial: &DensityMatrix,
    noise: Noise,
) -> Result<SimResult> {
    evolve_with(cfg, waves, initial, noise, Integrator::default())
}

pub fn evolve_with(
    cfg: &DeviceConfig,
    waves: &DriveWaveforms,
    initial: &DensityMatrix,
    noise: Noise,
    integ: Integrator,
) -> Result<SimResult> {
    let n = waves.len();
    let final_state = evolve_checkpoints(cfg, waves, initial, noise, integ, &[n])?
        .pop()
        .expect("one checkpoint");
    let max_step_norm = controls(cfg, waves)?
        .iter()
        .map(|c| hamiltonian(c).norm())
        .fold(0.0, f64::max);
    Ok(SimResult { final_state, time_evolved: n as f64 * 1e-9, max_step_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dds::PortId;
    use crate::quantum::{iswap_family, single_qubit_x90, state_fidelity, StateVector};
    use proptest::prelude::*;

    fn silent(name: &str, n: usize, carrier: f64) -> RenderedWaveform {
        RenderedWaveform::from_samples(PortId::new(name), 0, vec![C64::new(0.0, 0.0); n], Freq::from_hz(carrier))
    }

    fn swap_drive(cfg: &DeviceConfig, n: usize, amp: f64, eta: f64, f_drive: f64) -> DriveWaveforms {
        let mut coupler = silent("c", n, f_drive);
        coupler.samples.iter_mut().for_each(|s| *s = C64::from_polar(amp, eta));
        DriveWaveforms { q1: silent("q1", n, cfg.w_q1), q2: silent("q2", n, cfg.w_q2), coupler }
    }

    fn unitary_fidelity(a: &Unitary, b: &Unitary) -> f64 {
        a.overlap(b).powi(2)
    }

    #[test]
    fn no_drive_no_noise_is_identity() {
        let cfg = DeviceConfig::default();
        let w = swap_drive(&cfg, 100, 0.0, 0.0, cfg.difference_frequency());
        let rho = StateVector::normalized([C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(0.5, 0.1), C64::new(0.2, 0.0)])
            .unwrap()
            .to_density();
        let r = evolve(&cfg, &w, &rho, Noise::Off).unwrap();
        assert!((r.final_state.matrix() - rho.matrix()).norm() < 1e-12);
        assert_eq!(r.max_step_norm, 0.0);
    }

    #[test]
    fn resonant_pi_swap_transfers_population() {
        let cfg = DeviceConfig::default().without_stark();
        let w = swap_drive(&cfg, 290, 0.236, 0.0, cfg.difference_frequency());
        let r = evolve(&cfg, &w, &DensityMatrix::basis(1, 0), Noise::Off).unwrap();
        assert!((r.final_state.populations()[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn x90_matches_oracle() {
        let cfg = DeviceConfig::default();
        for phase in [0.0, 0.7, -2.0] {
            let mut q1 = silent("q1", 20, cfg.w_q1);
            q1.samples.iter_mut().for_each(|s| *s = C64::from_polar(0.25, phase));
            let w = DriveWaveforms { q1, q2: silent("q2", 20, cfg.w_q2), coupler: silent("c", 20, 0.0) };
            let u = propagator(&cfg, &w, Integrator::default()).unwrap();
            let f = unitary_fidelity(&u, &single_qubit_x90(1, phase).unwrap());
            assert!(1.0 - f < 1e-6, "phase {phase}: {f}");
        }
    }

    #[test]
    fn demodulation_examples() {
        let f = 4.8e9;
        let mut w = silent("q", 50, f);
        w.samples.iter_mut().for_each(|s| *s = C64::new(0.3, 0.0));
        assert!(demodulate(&w, f, 0.0).iter().all(|z| (z - C64::new(0.3, 0.0)).norm() < 1e-12));
        assert!(demodulate(&silent("q", 5, f), f, 1.0).iter().all(|z| z.norm() == 0.0));
        let d = 3.5e6;
        for (k, z) in demodulate(&w, f - d, 0.4).iter().enumerate() {
            let want = C64::from_polar(0.3, TAU * d * k as f64 * 1e-9 - 0.4);
            assert!((z - want).norm() < 1e-9);
        }
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        let cfg = DeviceConfig::default();
        let mut w = swap_drive(&cfg, 10, 0.1, 0.0, 5e8);
        w.q2 = silent("q2", 9, cfg.w_q2);
        assert!(evolve(&cfg, &w, &DensityMatrix::basis(0, 0), Noise::Off).is_err());
    }

    #[test]
    fn detuning_sign_does_not_matter() {
        let cfg = DeviceConfig::default().without_stark();
        for d in [0.4e6, 1.3e6] {
            let pops: Vec<f64> = [-d, d]
                .iter()
                .map(|dd| {
                    let w = swap_drive(&cfg, 400, 0.236, 0.3, cfg.difference_frequency() + dd);
                    evolve(&cfg, &w, &DensityMatrix::basis(1, 0), Noise::Off).unwrap().final_state.populations()[1]
                })
                .collect();
            assert!((pops[0] - pops[1]).abs() < 1e-9, "{pops:?}");
            // generalized Rabi oracle
            let g = cfg.swap_rate_per_unit * 0.236;
            let om = (g * g + d * d).sqrt();
            let want = (g / om).powi(2) * (std::f64::consts::PI * om * 400e-9).sin().powi(2);
            // sample-and-hold of the rotating drive costs ~1e-6
            assert!((pops[0] - want).abs() < 1e-5, "{} vs {want}", pops[0]);
        }
    }

    #[test]
    fn stark_shift_moves_the_resonance() {
        let cfg = DeviceConfig::default();
        let a = 0.236;
        let shift = (cfg.stark_coeff_q1 - cfg.stark_coeff_q2) * a * a;
        let bare = cfg.difference_frequency();
        let mut best = (f64::MIN, 0.0);
        for k in -60..=20 {
            let f = bare + k as f64 * 10e3;
            let w = swap_drive(&cfg, 290, a, 0.0, f);
            let p = evolve(&cfg, &w, &DensityMatrix::basis(1, 0), Noise::Off).unwrap().final_state.populations()[1];
            if p > best.0 {
                best = (p, f);
            }
        }
        let found = best.1 - bare;
        assert!((found - shift).abs() <= 0.05 * shift.abs(), "found {found}, want {shift}");
    }

    #[test]
    fn halving_the_step_changes_little() {
        let cfg = DeviceConfig::default();
        let w = swap_drive(&cfg, 290, 0.236, 0.4, cfg.shifted_difference_frequency(0.236));
        let rho = StateVector::normalized([C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)])
            .unwrap()
            .to_density();
        for noise in [Noise::Off, Noise::On] {
            let a = evolve_with(&cfg, &w, &rho, noise, Integrator { substeps: 4 }).unwrap().final_state;
            let b = evolve_with(&cfg, &w, &rho, noise, Integrator { substeps: 8 }).unwrap().final_state;
            let f = state_fidelity(&a, &b).unwrap();
            assert!((1.0 - f).abs() < 1e-8, "{noise:?}: {f}");
        }
    }

    #[test]
    fn relaxation_and_dephasing_rates() {
        let cfg = DeviceConfig::default();
        let n = 3000;
        let w = swap_drive(&cfg, n, 0.0, 0.0, 0.0);
        let r = evolve(&cfg, &w, &DensityMatrix::basis(1, 1), Noise::On).unwrap().final_state;
        let t = n as f64 * 1e-9;
        assert!((r.excited_population(Qubit::Q1) - (-t / cfg.t1_q1).exp()).abs() < 1e-9);
        let plus = StateVector::normalized([C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
            .unwrap()
            .to_density();
        let r = evolve(&cfg, &w, &plus, Noise::On).unwrap().final_state;
        let coh = r.matrix()[(0, 2)].norm();
        assert!((coh - 0.5 * (-t / cfg.t2_q1).exp()).abs() < 1e-9, "{coh}");
    }

    #[test]
    fn checkpoints_match_separate_runs() {
        let cfg = DeviceConfig::default();
        let w = swap_drive(&cfg, 120, 0.3, 0.0, cfg.difference_frequency());
        let cps = evolve_checkpoints(&cfg, &w, &DensityMatrix::basis(1, 0), Noise::On, Integrator::default(), &[0, 60, 120]).unwrap();
        assert_eq!(cps[0], DensityMatrix::basis(1, 0));
        let mut short = w.clone();
        for wf in [&mut short.q1, &mut short.q2, &mut short.coupler] {
            wf.samples.truncate(60);
        }
        let r = evolve(&cfg, &short, &DensityMatrix::basis(1, 0), Noise::On).unwrap().final_state;
        assert!((r.matrix() - cps[1].matrix()).norm() < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn matches_iswap_family(theta in 0.0f64..TAU, eta in -3.14f64..3.14) {
            let cfg = DeviceConfig::default().without_stark();
            let n = 200;
            let amp = theta / (TAU * cfg.swap_rate_per_unit * n as f64 * 1e-9);
            let w = swap_drive(&cfg, n, amp, eta, cfg.difference_frequency());
            let u = propagator(&cfg, &w, Integrator::default()).unwrap();
            prop_assert!(1.0 - unitary_fidelity(&u, &iswap_family(theta, eta)) < 1e-6);
        }

        #[test]
        fn noisy_evolution_stays_physical(amp in 0.0f64..1.0, eta in -3.0f64..3.0, x in 0.0f64..0.5) {
            let cfg = DeviceConfig::default();
            let mut w = swap_drive(&cfg, 150, amp, eta, cfg.difference_frequency() + 1e6);
            w.q1.samples.iter_mut().for_each(|s| *s = C64::new(x, 0.0));
            let r = evolve(&cfg, &w, &DensityMatrix::basis(1, 0), Noise::On).unwrap().final_state;
            prop_assert!((r.trace().re - 1.0).abs() < 1e-9);
            prop_assert!(r.eigenvalues()[0] > -1e-8);
        }
    }
}
