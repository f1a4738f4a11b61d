// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::{measured_populations, Bench, Sampling};
use crate::compiler::Gate;
use crate::device::evolve_checkpoints;
use crate::fit::{levenberg_marquardt, parabola_peak, LmOptions};
use crate::harness::{sub_seed, CsvTable};
use crate::quantum::{DensityMatrix, Qubit};
use crate::{Error, Result};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Per-qubit excited populations over a 2-D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult2D {
    pub axis1_label: String,
    pub axis1: Vec<f64>,
    pub axis2_label: String,
    pub axis2: Vec<f64>,
    /// `pop_q1[i1][i2]`.
    pub pop_q1: Vec<Vec<f64>>,
    pub pop_q2: Vec<Vec<f64>>,
}

impl SweepResult2D {
    pub fn new(
        axis1_label: &str,
        axis1: Vec<f64>,
        axis2_label: &str,
        axis2: Vec<f64>,
        pop_q1: Vec<Vec<f64>>,
        pop_q2: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == axis1.len() && m.iter().all(|r| r.len() == axis2.len());
        if !shape_ok(&pop_q1) || !shape_ok(&pop_q2) {
            return Err(Error::invalid("population matrix does not match the axes"));
        }
        Ok(Self { axis1_label: axis1_label.into(), axis1, axis2_label: axis2_label.into(), axis2, pop_q1, pop_q2 })
    }

    pub fn population(&self, q: Qubit) -> &Vec<Vec<f64>> {
        match q {
            Qubit::Q1 => &self.pop_q1,
            Qubit::Q2 => &self.pop_q2,
        }
    }

    /// Rows `axis1, axis2, pop_q1, pop_q2`, axis2 fastest.
    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["axis1", "axis2", "pop_q1", "pop_q2"]);
        for (i, &a) in self.axis1.iter().enumerate() {
            for (j, &b) in self.axis2.iter().enumerate() {
                t.push(vec![a, b, self.pop_q1[i][j], self.pop_q2[i][j]]);
            }
        }
        t
    }

    pub fn describe(&self) -> String {
        format!("axis1 = {}, axis2 = {}; pop_q* = excited-state population", self.axis1_label, self.axis2_label)
    }
}

/// `|10⟩` from two X90 pulses on Q1.
fn prepare_10() -> [Gate; 2] {
    [Gate::X90(Qubit::Q1), Gate::X90(Qubit::Q1)]
}

/// State after the |10⟩ preparation and the sample index where it ends.
fn prepared_state(bench: &Bench) -> Result<(DensityMatrix, usize)> {
    let exp = bench.experiment(bench.base_params()?)?;
    let head = exp.compiler.compile(&prepare_10(), 0)?;
    let split = *head.gate_ends.last().unwrap() as usize;
    Ok((exp.final_state(&prepare_10(), 0)?, split))
}

/// States after `prepare_10` and a coupler pulse of each checkpoint length.
fn pulse_states(
    bench: &Bench,
    mid: &DensityMatrix,
    split: usize,
    amplitude: f64,
    frequency: f64,
    durations: &[i64],
) -> Result<Vec<DensityMatrix>> {
    let longest = *durations.last().ok_or_else(|| Error::invalid("no durations"))?;
    let mut p = bench.base_params()?;
    p.coupler_amplitude = amplitude;
    p.drive_frequency = frequency;
    p.duration_ns = longest;
    let exp = bench.experiment(p)?;
    let mut gates = prepare_10().to_vec();
    gates.push(Gate::Iswap);
    let seq = exp.compiler.compile(&gates, 0)?;
    let w = seq.render()?.slice(split, split + longest as usize);
    let marks: Vec<usize> = durations.iter().map(|&d| d as usize).collect();
    evolve_checkpoints(&bench.device, &w, mid, bench.noise, bench.integrator, &marks)
}

/// Starts in |10⟩, drives the coupler for `tau_ns` at every (amplitude,
/// frequency) and reads both qubits.
pub fn amp_freq_sweep(
    bench: &Bench,
    amplitudes: &[f64],
    frequencies: &[f64],
    tau_ns: i64,
    sampling: Sampling,
) -> Result<SweepResult2D> {
    if amplitudes.is_empty() || frequencies.is_empty() {
        return Err(Error::invalid("empty amplitude/frequency sweep"));
    }
    let (mid, split) = prepared_state(bench)?;
    let e = bench.device.readout_assignment_error;
    let nf = frequencies.len();
    let points: Vec<[f64; 2]> = (0..amplitudes.len() * nf)
        .into_par_iter()
        .map(|idx| {
            let (a, f) = (amplitudes[idx / nf], frequencies[idx % nf]);
            let rho = pulse_states(bench, &mid, split, a, f, &[tau_ns])?.pop().unwrap();
            measured_populations(&rho, e, sampling.with_seed(sub_seed(sampling.seed, "amp_freq", idx as u64)))
        })
        .collect::<Result<_>>()?;
    let (p1, p2) = split_rows(&points, nf);
    SweepResult2D::new("amplitude", amplitudes.to_vec(), "drive_frequency_hz", frequencies.to_vec(), p1, p2)
}

/// Starts in |10⟩ and records both qubits after every pulse length, one
/// evolution per frequency.
pub fn duration_freq_sweep(
    bench: &Bench,
    amplitude: f64,
    durations: &[i64],
    frequencies: &[f64],
    sampling: Sampling,
) -> Result<SweepResult2D> {
    if durations.is_empty() || frequencies.is_empty() {
        return Err(Error::invalid("empty duration/frequency sweep"));
    }
    if durations.windows(2).any(|w| w[0] >= w[1]) || durations[0] <= 0 {
        return Err(Error::invalid("durations must be positive and increasing"));
    }
    let (mid, split) = prepared_state(bench)?;
    let e = bench.device.readout_assignment_error;
    let nf = frequencies.len();
    let columns: Vec<Vec<[f64; 2]>> = (0..nf)
        .into_par_iter()
        .map(|j| {
            let states = pulse_states(bench, &mid, split, amplitude, frequencies[j], durations)?;
            states
                .iter()
                .enumerate()
                .map(|(i, rho)| {
                    let idx = (i * nf + j) as u64;
                    measured_populations(rho, e, sampling.with_seed(sub_seed(sampling.seed, "duration_freq", idx)))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let points: Vec<[f64; 2]> =
        (0..durations.len() * nf).map(|idx| columns[idx % nf][idx / nf]).collect();
    let (p1, p2) = split_rows(&points, nf);
    let axis1 = durations.iter().map(|&d| d as f64).collect();
    SweepResult2D::new("duration_ns", axis1, "drive_frequency_hz", frequencies.to_vec(), p1, p2)
}

fn split_rows(points: &[[f64; 2]], n: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    points.chunks(n).map(|r| (r.iter().map(|p| p[0]).collect(), r.iter().map(|p| p[1]).collect())).unzip()
}

/// Swap probability of a detuned exchange: `g²/W² · sin²(π W τ)` with
/// `W = sqrt(g² + Δ²)`, all in Hz and seconds.
pub fn rabi_swap_probability(g: f64, detuning: f64, tau_s: f64) -> f64 {
    let w = (g * g + detuning * detuning).sqrt();
    if w == 0.0 {
        return 0.0;
    }
    (g / w).powi(2) * (PI * w * tau_s).sin().powi(2)
}

/// Global fit of the amplitude/frequency map to
/// `pop_q1 = offset + scale·(1 − P_swap)`, with `g = rate·A` and the
/// resonance at `f0 + stark·A²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiFit {
    /// Swap rate per unit amplitude, Hz.
    pub rate_per_unit: f64,
    pub f0: f64,
    /// Resonance shift per amplitude², Hz.
    pub stark: f64,
    pub offset: f64,
    pub scale: f64,
    pub tau_s: f64,
    pub rms_residual: f64,
}

impl RabiFit {
    pub fn resonance(&self, a: f64) -> f64 {
        self.f0 + self.stark * a * a
    }

    /// Full population oscillations completed at amplitude `a`.
    pub fn oscillations(&self, a: f64) -> f64 {
        self.rate_per_unit * a * self.tau_s
    }

    pub fn pop_q1(&self, a: f64, f: f64) -> f64 {
        let p = rabi_swap_probability(self.rate_per_unit * a, f - self.resonance(a), self.tau_s);
        self.offset + self.scale * (1.0 - p)
    }
}

pub fn fit_rabi(sweep: &SweepResult2D, tau_ns: i64) -> Result<RabiFit> {
    let tau = tau_ns as f64 * 1e-9;
    let mut pts = Vec::new();
    for (i, &a) in sweep.axis1.iter().enumerate() {
        for (j, &f) in sweep.axis2.iter().enumerate() {
            pts.push((a, f, sweep.pop_q1[i][j]));
        }
    }
    let a_max = sweep.axis1.iter().cloned().fold(0.0, f64::max);
    if pts.len() < 8 || a_max <= 0.0 {
        return Err(Error::Fit("amplitude sweep too small for a Rabi fit".into()));
    }
    let lo = pts.iter().map(|p| p.2).fold(f64::MAX, f64::min);
    let hi = pts.iter().map(|p| p.2).fold(f64::MIN, f64::max);
    // frequency with the most swapping on average
    let nf = sweep.axis2.len();
    let f_guess = (0..nf)
        .map(|j| (sweep.axis2[j], sweep.pop_q1.iter().map(|r| r[j]).sum::<f64>()))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap()
        .0;
    // dimensionless parameters: oscillations at a_max, MHz offsets
    let to_fit = |q: &[f64]| RabiFit {
        rate_per_unit: q[0] / (a_max * tau),
        f0: f_guess + q[1] * 1e6,
        stark: q[2] * 1e6 / (a_max * a_max),
        offset: q[3],
        scale: q[4],
        tau_s: tau,
        rms_residual: 0.0,
    };
    let cost = |q: &[f64], sub: usize| -> f64 {
        let m = to_fit(q);
        pts.iter().step_by(sub).map(|&(a, f, y)| (m.pop_q1(a, f) - y).powi(2)).sum()
    };
    let mut best = (f64::MAX, vec![0.0; 5]);
    for df in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        for ks in -6..=6 {
            for kn in 0..=290 {
                let q = [0.5 + 0.05 * kn as f64, df, 0.5 * ks as f64, lo, hi - lo];
                let c = cost(&q, 3);
                if c < best.0 {
                    best = (c, q.to_vec());
                }
            }
        }
    }
    let res = |q: &[f64]| -> Vec<f64> {
        let m = to_fit(q);
        pts.iter().map(|&(a, f, y)| m.pop_q1(a, f) - y).collect()
    };
    let out = levenberg_marquardt(&res, &best.1, LmOptions::default())?;
    let mut fit = to_fit(&out.params);
    fit.rms_residual = (out.cost / pts.len() as f64).sqrt();
    if !(fit.rate_per_unit > 0.0) {
        return Err(Error::Fit("non-positive swap rate".into()));
    }
    Ok(fit)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeChoice {
    pub amplitude: f64,
    pub index: usize,
    pub oscillations: f64,
    pub contrast: f64,
    /// Q1 population along the fitted resonance, one per amplitude.
    pub resonant_trace: Vec<f64>,
}

/// Q1 population at the grid frequency closest to the fitted resonance.
fn resonant_trace(sweep: &SweepResult2D, fit: &RabiFit) -> Vec<f64> {
    sweep
        .axis1
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let f = fit.resonance(a);
            let j = (0..sweep.axis2.len())
                .min_by(|&x, &y| (sweep.axis2[x] - f).abs().partial_cmp(&(sweep.axis2[y] - f).abs()).unwrap())
                .unwrap();
            sweep.pop_q1[i][j]
        })
        .collect()
}

/// Smallest amplitude whose resonant trace has completed `min_oscillations`
/// and reached `min_contrast` (max − min of the trace up to that amplitude).
pub fn select_amplitude(
    sweep: &SweepResult2D,
    fit: &RabiFit,
    min_oscillations: f64,
    min_contrast: f64,
) -> Result<AmplitudeChoice> {
    let fail = |r: String| Error::Calibration { stage: "select_amplitude".into(), reason: r };
    let a_max = sweep.axis1.iter().cloned().fold(0.0, f64::max);
    if fit.oscillations(a_max) < 3.0 {
        return Err(fail(format!("only {:.2} oscillations at the largest amplitude", fit.oscillations(a_max))));
    }
    let trace = resonant_trace(sweep, fit);
    let (mut lo, mut hi) = (f64::MAX, f64::MIN);
    for (i, &a) in sweep.axis1.iter().enumerate() {
        lo = lo.min(trace[i]);
        hi = hi.max(trace[i]);
        let osc = fit.oscillations(a);
        if osc >= min_oscillations && hi - lo >= min_contrast {
            return Ok(AmplitudeChoice {
                amplitude: a,
                index: i,
                oscillations: osc,
                contrast: hi - lo,
                resonant_trace: trace,
            });
        }
    }
    Err(fail(format!(
        "no amplitude reaches {min_oscillations} oscillations with contrast {min_contrast} (best contrast {:.3})",
        hi - lo
    )))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatingPoint {
    pub drive_frequency: f64,
    pub duration_ns: i64,
    /// Swap contrast per frequency.
    pub contrast: Vec<f64>,
    /// Frequency column the duration was read from.
    pub column: usize,
}

/// Indices around the peak at `k` for a parabola fit: the region bounded by
/// the first drops below `y[k] − outer` on either side, keeping points no
/// more than `inner` below the peak. Noise may break the run; it is not
/// required to be contiguous.
fn peak_region(y: &[f64], k: usize, inner: f64, outer: f64) -> Vec<usize> {
    let (mut a, mut b) = (k, k);
    while a > 0 && y[a - 1] >= y[k] - outer {
        a -= 1;
    }
    while b + 1 < y.len() && y[b + 1] >= y[k] - outer {
        b += 1;
    }
    let mut idx: Vec<usize> = (a..=b).filter(|&i| y[i] >= y[k] - inner).collect();
    if idx.len() < 3 {
        let lo = k.saturating_sub(1).min(y.len().saturating_sub(3));
        idx = (lo..(lo + 3).min(y.len())).collect();
    }
    idx
}

fn fit_peak(x: &[f64], y: &[f64], idx: &[usize]) -> Result<f64> {
    let xs: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
    let ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    let v = parabola_peak(&xs, &ys)?;
    Ok(v.clamp(xs[0], xs[xs.len() - 1]))
}

/// Frequency of maximum swap contrast (parabola-refined) and the first
/// maximum of the Q2 population along that frequency, on the 2 ns grid.
pub fn select_point(sweep: &SweepResult2D) -> Result<OperatingPoint> {
    let fail = |r: String| Error::Calibration { stage: "select_point".into(), reason: r };
    let nd = sweep.axis1.len();
    let nf = sweep.axis2.len();
    if nd < 3 || nf < 3 {
        return Err(fail("need at least 3 durations and 3 frequencies".into()));
    }
    let contrast: Vec<f64> = (0..nf)
        .map(|j| {
            let col = sweep.pop_q2.iter().map(|r| r[j]);
            col.clone().fold(f64::MIN, f64::max) - col.fold(f64::MAX, f64::min)
        })
        .collect();
    let jmax = (0..nf).max_by(|&a, &b| contrast[a].partial_cmp(&contrast[b]).unwrap()).unwrap();
    if jmax == 0 || jmax == nf - 1 {
        return Err(fail("swap contrast peaks at the edge of the frequency range".into()));
    }
    let f = fit_peak(&sweep.axis2, &contrast, &peak_region(&contrast, jmax, 0.1, 0.3))
        .map_err(|e| fail(e.to_string()))?;
    let column = (0..nf)
        .min_by(|&x, &y| (sweep.axis2[x] - f).abs().partial_cmp(&(sweep.axis2[y] - f).abs()).unwrap())
        .unwrap();
    let pop: Vec<f64> = sweep.pop_q2.iter().map(|r| r[column]).collect();
    let top = pop.iter().cloned().fold(f64::MIN, f64::max);
    // the first lobe: from the first point near the top until a deep drop
    let first = pop.iter().position(|&p| p >= top - 0.1).unwrap();
    let mut end = first;
    while end + 1 < nd && pop[end + 1] >= top - 0.5 {
        end += 1;
    }
    let k = (first..=end).max_by(|&a, &b| pop[a].partial_cmp(&pop[b]).unwrap()).unwrap();
    if end == nd - 1 && k + 2 >= nd {
        return Err(fail("Q2 population still rising at the longest duration".into()));
    }
    let t = fit_peak(&sweep.axis1, &pop, &peak_region(&pop, k, 0.1, 0.5)).map_err(|e| fail(e.to_string()))?;
    let duration_ns = ((t / 2.0).round() as i64 * 2).max(2);
    Ok(OperatingPoint { drive_frequency: f, duration_ns, contrast, column })
}
