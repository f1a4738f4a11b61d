// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use super::phase::{wrap_tau, Cycles, Freq};
use super::render::RenderedWaveform;
use super::template::PulseTemplate;
use crate::quantum::C64;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// IF clock period: phase and frequency may change every 2 ns.
pub const GRID_NS: i64 = 2;
/// IF sample rate is 1 GS/s, so |f_IF| must stay below 500 MHz.
pub const IF_NYQUIST_HZ: f64 = 500e6;

pub fn ensure_grid(t_ns: i64) -> Result<()> {
    if t_ns.rem_euclid(GRID_NS) != 0 {
        return Err(Error::OffGrid { t_ns });
    }
    Ok(())
}

/// True iff `f_nco · period` is an integer number of cycles (to 1e-9).
pub fn nco_commensurate(f_nco: Freq, repetition_period_ns: i64) -> Result<bool> {
    if repetition_period_ns <= 0 {
        return Err(Error::invalid("repetition period must be positive"));
    }
    Ok(f_nco.advance(repetition_period_ns).distance_to_integer().abs() < 1e-9)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PortId(pub String);

impl PortId {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }
}

impl fmt::Display for PortId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PortId {
    fn from(s: &str) -> Self {
        PortId(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NcoConfig {
    #[serde(rename = "frequency_hz")]
    pub frequency: Freq,
    /// Phase established at each sysref sync, radians.
    #[serde(default)]
    pub reference_phase: f64,
}

impl NcoConfig {
    pub fn new(frequency: Freq) -> Self {
        Self { frequency, reference_phase: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Play { template: Arc<PulseTemplate>, amplitude_scale: f64 },
    SetIfFrequency(Freq),
    SetIfPhase(f64),
    AddVirtualZ(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub t_ns: i64,
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortSchedule {
    pub port: PortId,
    pub nco: NcoConfig,
    events: Vec<Event>,
}

impl PortSchedule {
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    fn insert(&mut self, event: Event) {
        let pos = self.events.partition_point(|e| e.t_ns <= event.t_ns);
        self.events.insert(pos, event);
    }
}

/// All port schedules plus the shared synchronization history.
///
/// A fresh state has an implicit sysref at t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SequencerState {
    ports: BTreeMap<PortId, PortSchedule>,
    repetition_period_ns: i64,
    /// NCO sync instants, ascending.
    syncs: Vec<i64>,
    /// IF-domain start instants (every sync is also a start), ascending.
    starts: Vec<i64>,
}

impl SequencerState {
    pub fn new(repetition_period_ns: i64) -> Result<Self> {
        if repetition_period_ns <= 0 {
            return Err(Error::invalid("repetition period must be positive"));
        }
        ensure_grid(repetition_period_ns)?;
        Ok(Self {
            ports: BTreeMap::new(),
            repetition_period_ns,
            syncs: vec![0],
            starts: vec![0],
        })
    }

    pub fn with_port(mut self, port: impl Into<PortId>, nco: NcoConfig) -> Self {
        let port = port.into();
        self.ports.insert(
            port.clone(),
            PortSchedule { port, nco, events: Vec::new() },
        );
        self
    }

    pub fn repetition_period_ns(&self) -> i64 {
        self.repetition_period_ns
    }

    pub fn last_sync_ns(&self) -> i64 {
        *self.syncs.last().expect("at least one sync")
    }

    pub fn syncs(&self) -> &[i64] {
        &self.syncs
    }

    pub fn starts(&self) -> &[i64] {
        &self.starts
    }

    pub fn ports(&self) -> impl Iterator<Item = &PortSchedule> {
        self.ports.values()
    }

    pub fn port(&self, port: &PortId) -> Result<&PortSchedule> {
        self.ports.get(port).ok_or_else(|| Error::UnknownPort(port.0.clone()))
    }

    fn port_mut(&mut self, port: &PortId) -> Result<&mut PortSchedule> {
        self.ports.get_mut(port).ok_or_else(|| Error::UnknownPort(port.0.clone()))
    }

    /// Sysref: every NCO phase becomes its reference phase at `t` and the IF
    /// generators restart with zero phase.
    pub fn sysref_sync(mut self, t_ns: i64) -> Result<Self> {
        ensure_grid(t_ns)?;
        if t_ns < *self.starts.last().unwrap() {
            return Err(Error::invalid("sync must not precede an earlier start"));
        }
        if self.last_sync_ns() != t_ns {
            self.syncs.push(t_ns);
        }
        if *self.starts.last().unwrap() != t_ns {
            self.starts.push(t_ns);
        }
        Ok(self)
    }

    /// IF-domain restart: IF phase accumulators and virtual-Z frames are
    /// zeroed at `t`, the NCOs keep running from the last sysref.
    pub fn restart(mut self, t_ns: i64) -> Result<Self> {
        ensure_grid(t_ns)?;
        if t_ns < *self.starts.last().unwrap() {
            return Err(Error::invalid("restart must not precede an earlier start"));
        }
        if *self.starts.last().unwrap() != t_ns {
            self.starts.push(t_ns);
        }
        Ok(self)
    }

    pub fn schedule_pulse(
        mut self,
        port: &PortId,
        t_ns: i64,
        template: Arc<PulseTemplate>,
        amplitude_scale: f64,
    ) -> Result<Self> {
        ensure_grid(t_ns)?;
        if !(0.0..=1.0).contains(&amplitude_scale) {
            return Err(Error::invalid(format!(
                "amplitude scale {amplitude_scale} outside [0, 1]"
            )));
        }
        self.port_mut(port)?.insert(Event {
            t_ns,
            action: Action::Play { template, amplitude_scale },
        });
        Ok(self)
    }

    pub fn set_if_phase(mut self, port: &PortId, t_ns: i64, phase: f64) -> Result<Self> {
        ensure_grid(t_ns)?;
        self.port_mut(port)?.insert(Event { t_ns, action: Action::SetIfPhase(phase) });
        Ok(self)
    }

    pub fn set_if_frequency(mut self, port: &PortId, t_ns: i64, f: Freq) -> Result<Self> {
        ensure_grid(t_ns)?;
        if f.hz().abs() >= IF_NYQUIST_HZ {
            return Err(Error::IfFrequencyOutOfRange { hz: f.hz() });
        }
        self.port_mut(port)?.insert(Event { t_ns, action: Action::SetIfFrequency(f) });
        Ok(self)
    }

    pub fn add_virtual_z(mut self, port: &PortId, t_ns: i64, dphi: f64) -> Result<Self> {
        ensure_grid(t_ns)?;
        self.port_mut(port)?.insert(Event { t_ns, action: Action::AddVirtualZ(dphi) });
        Ok(self)
    }

    /// Replaces this state's port NCO, e.g. to move frequency between the
    /// NCO and the IF generator.
    pub fn set_nco(mut self, port: &PortId, nco: NcoConfig) -> Result<Self> {
        self.port_mut(port)?.nco = nco;
        Ok(self)
    }

    /// Offsets every event and sync/start instant by `dt_ns`.
    pub fn shifted(&self, dt_ns: i64) -> Result<Self> {
        ensure_grid(dt_ns)?;
        let mut out = self.clone();
        for p in out.ports.values_mut() {
            for e in &mut p.events {
                e.t_ns += dt_ns;
            }
        }
        // The implicit sync at 0 stays as the NCO time origin.
        for s in out.syncs.iter_mut().skip(1) {
            *s += dt_ns;
        }
        for s in out.starts.iter_mut().skip(1) {
            *s += dt_ns;
        }
        Ok(out)
    }

    fn sync_governing(&self, t_ns: i64) -> Option<i64> {
        let idx = self.syncs.partition_point(|&s| s <= t_ns);
        idx.checked_sub(1).map(|i| self.syncs[i])
    }

    /// Exact NCO phase (cycles) at `t`, excluding the reference phase.
    pub(crate) fn nco_cycles(&self, nco: &NcoConfig, t_ns: i64) -> Result<Cycles> {
        let sync = self.sync_governing(t_ns).ok_or(Error::BeforeSync {
            t_ns,
            sync_ns: self.syncs[0],
        })?;
        Ok(nco.frequency.advance(t_ns - sync))
    }

    /// Total carrier phase (NCO + IF + virtual Z) at `t`, in `[0, 2π)`.
    pub fn phase_at(&self, port: &PortId, t_ns: i64) -> Result<f64> {
        let last = self.last_sync_ns();
        if t_ns < last {
            return Err(Error::BeforeSync { t_ns, sync_ns: last });
        }
        let sched = self.port(port)?;
        let nco = self.nco_cycles(&sched.nco, t_ns)?;
        let timeline = Timeline::build(self, sched);
        let (if_cycles, offset) = timeline.if_phase(t_ns);
        let vz = timeline.vz_at(t_ns);
        Ok(wrap_tau(
            (nco + if_cycles).radians() + sched.nco.reference_phase + offset + vz,
        ))
    }

    /// Renders `[t0, t1)` of one port at 1 GS/s.
    pub fn render(&self, port: &PortId, t0_ns: i64, t1_ns: i64) -> Result<RenderedWaveform> {
        if t1_ns <= t0_ns {
            return Err(Error::invalid("render window must satisfy t0 < t1"));
        }
        let sched = self.port(port)?;
        let timeline = Timeline::build(self, sched);
        let n = (t1_ns - t0_ns) as usize;
        let mut samples = vec![C64::new(0.0, 0.0); n];
        let mut active = vec![false; n];
        for play in &timeline.plays {
            let start = play.t_ns.max(t0_ns);
            let end = (play.t_ns + play.template.duration_ns()).min(t1_ns);
            for t in start..end {
                let env = play.template.samples()[(t - play.t_ns) as usize];
                let (cyc, offset) = timeline.if_phase(t);
                let ph = cyc.radians() + offset + play.vz;
                let k = (t - t0_ns) as usize;
                samples[k] += env * play.scale * C64::from_polar(1.0, ph);
                active[k] = true;
            }
        }
        let mut clipped = false;
        for s in samples.iter_mut() {
            let m = s.norm();
            if m > 1.0 + 1e-12 {
                *s /= m;
                clipped = true;
            }
        }
        let _ = active;
        Ok(RenderedWaveform {
            port: port.clone(),
            t0_ns,
            samples,
            carrier_frequency: sched.nco.frequency,
            carrier_cycles_t0: self.nco_cycles(&sched.nco, t0_ns)?,
            carrier_reference_phase: sched.nco.reference_phase,
            clipped,
        })
    }
}

#[derive(Debug, Clone)]
struct Play {
    t_ns: i64,
    template: Arc<PulseTemplate>,
    scale: f64,
    vz: f64,
}

#[derive(Debug, Clone, Copy)]
struct IfSegment {
    from: i64,
    base: Cycles,
    freq: Freq,
    offset: f64,
}

/// Piecewise IF phase and frame history of one port.
struct Timeline {
    segments: Vec<IfSegment>,
    /// (time, cumulative virtual-Z after events at that time)
    vz_steps: Vec<(i64, f64)>,
    plays: Vec<Play>,
}

impl Timeline {
    fn build(state: &SequencerState, sched: &PortSchedule) -> Self {
        let mut segments = vec![IfSegment {
            from: i64::MIN,
            base: Cycles::ZERO,
            freq: Freq::ZERO,
            offset: 0.0,
        }];
        let mut vz_steps = vec![(i64::MIN, 0.0)];
        let mut plays = Vec::new();
        let mut vz = 0.0;
        let mut starts = state.starts.iter().peekable();
        let mut events = sched.events.iter().peekable();
        loop {
            // Starts come before events at the same instant.
            let take_start = match (starts.peek(), events.peek()) {
                (Some(&&s), Some(e)) => s <= e.t_ns,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            let cur = *segments.last().unwrap();
            if take_start {
                let s = *starts.next().unwrap();
                segments.push(IfSegment { from: s, base: Cycles::ZERO, freq: cur.freq, offset: 0.0 });
                vz = 0.0;
                vz_steps.push((s, vz));
                continue;
            }
            let e = events.next().unwrap();
            let t = e.t_ns;
            match &e.action {
                Action::Play { template, amplitude_scale } => plays.push(Play {
                    t_ns: t,
                    template: Arc::clone(template),
                    scale: *amplitude_scale,
                    vz,
                }),
                Action::SetIfFrequency(f) => {
                    let base = cur.base + cur.freq.advance(t - cur.from);
                    segments.push(IfSegment { from: t, base, freq: *f, offset: cur.offset });
                }
                Action::SetIfPhase(p) => {
                    segments.push(IfSegment { from: t, base: Cycles::ZERO, freq: cur.freq, offset: *p });
                }
                Action::AddVirtualZ(d) => {
                    vz += d;
                    vz_steps.push((t, vz));
                }
            }
        }
        Timeline { segments, vz_steps, plays }
    }

    /// Exact cycles and radian offset of the IF generator at `t`.
    fn if_phase(&self, t_ns: i64) -> (Cycles, f64) {
        let idx = self.segments.partition_point(|s| s.from <= t_ns) - 1;
        let seg = &self.segments[idx];
        let dt = if seg.from == i64::MIN { t_ns } else { t_ns - seg.from };
        (seg.base + seg.freq.advance(dt), seg.offset)
    }

    fn vz_at(&self, t_ns: i64) -> f64 {
        let idx = self.vz_steps.partition_point(|s| s.0 <= t_ns) - 1;
        self.vz_steps[idx].1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn q() -> PortId {
        PortId::new("q1")
    }

    fn one_port(f_nco: f64) -> SequencerState {
        SequencerState::new(10_000).unwrap().with_port(q(), NcoConfig::new(Freq::from_hz(f_nco)))
    }

    fn rect(n: usize) -> Arc<PulseTemplate> {
        Arc::new(PulseTemplate::rectangular("rect", n).unwrap())
    }

    fn max_diff(a: &[C64], b: &[C64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn identical_ports_stay_in_phase() {
        let nco = NcoConfig::new(Freq::from_hz(4.8e9));
        let s = SequencerState::new(10_000)
            .unwrap()
            .with_port("a", nco)
            .with_port("b", nco)
            .sysref_sync(0)
            .unwrap();
        for t in [0, 2, 100, 1234, 99_998] {
            let d = s.phase_at(&"a".into(), t).unwrap() - s.phase_at(&"b".into(), t).unwrap();
            assert_eq!(d, 0.0);
        }
    }

    #[test]
    fn sync_sets_reference_phase() {
        let mut nco = NcoConfig::new(Freq::from_hz(4.2e9));
        nco.reference_phase = 0.7;
        let s = SequencerState::new(10_000).unwrap().with_port(q(), nco).sysref_sync(6).unwrap();
        assert!((s.phase_at(&q(), 6).unwrap() - 0.7).abs() < 1e-15);
        assert!(matches!(s.phase_at(&q(), 4), Err(Error::BeforeSync { .. })));
        assert!(matches!(s.clone().sysref_sync(7), Err(Error::OffGrid { t_ns: 7 })));
    }

    #[test]
    fn commensurate_examples() {
        assert!(nco_commensurate(Freq::from_hz(4e9), 10_000).unwrap());
        assert!(!nco_commensurate(Freq::from_hz(4.000_000_05e9), 10_000).unwrap());
        assert!(nco_commensurate(Freq::from_hz(4e9), 0).is_err());
    }

    #[test]
    fn commensurate_start_phases_have_no_spread() {
        let f = Freq::from_hz(4.8e9);
        let period = 10_000;
        assert!(nco_commensurate(f, period).unwrap());
        let s = SequencerState::new(period).unwrap().with_port(q(), NcoConfig::new(f));
        let phases: Vec<f64> = (0..1000).map(|r| s.phase_at(&q(), r * period).unwrap()).collect();
        let spread = phases.iter().cloned().fold(f64::MIN, f64::max)
            - phases.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-9);
    }

    #[test]
    fn repetition_windows_match_iff_commensurate() {
        for (f, expect_equal) in [(4.8e9, true), (4.800_012_3e9, false)] {
            let period = 10_000;
            let mut s = one_port(f)
                .set_if_frequency(&q(), 0, Freq::from_hz(50e6))
                .unwrap()
                .schedule_pulse(&q(), 4, rect(40), 0.5)
                .unwrap()
                .restart(period)
                .unwrap();
            s = s.schedule_pulse(&q(), period + 4, rect(40), 0.5).unwrap();
            let a = s.render(&q(), 0, 100).unwrap().analytic();
            let b = s.render(&q(), period, period + 100).unwrap().analytic();
            let same = max_diff(&a, &b) < 1e-9;
            assert_eq!(same, expect_equal, "f = {f}");
            assert_eq!(nco_commensurate(Freq::from_hz(f), period).unwrap(), expect_equal);
        }
    }

    #[test]
    fn pulse_occupies_exact_window() {
        let s = one_port(4e9).schedule_pulse(&q(), 2, rect(20), 1.0).unwrap();
        let w = s.render(&q(), 0, 30).unwrap();
        for (k, v) in w.samples.iter().enumerate() {
            assert_eq!(v.norm() > 0.0, (2..22).contains(&k), "sample {k}");
        }
    }

    #[test]
    fn amplitude_scale_sets_peak() {
        let tpl = Arc::new(PulseTemplate::raised_cosine("c", 40).unwrap());
        let peak = tpl.peak();
        let s = one_port(4e9).schedule_pulse(&q(), 0, tpl, 0.236).unwrap();
        let w = s.render(&q(), 0, 40).unwrap();
        let got = w.samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((got - 0.236 * peak).abs() < 1e-12);
        assert!(!w.clipped);
    }

    #[test]
    fn overlapping_pulses_sum_and_clip() {
        let s = one_port(4e9)
            .schedule_pulse(&q(), 0, rect(10), 0.6)
            .unwrap()
            .schedule_pulse(&q(), 4, rect(10), 0.6)
            .unwrap();
        let w = s.render(&q(), 0, 20).unwrap();
        // sample-wise oracle: 0.6 alone, 1.2 → clipped to 1 where both play
        for (k, v) in w.samples.iter().enumerate() {
            let n = (k < 10) as u8 + (4..14).contains(&k) as u8;
            let want = (0.6 * n as f64).min(1.0);
            assert!((v.norm() - want).abs() < 1e-12, "sample {k}");
        }
        assert!(w.clipped);
    }

    #[test]
    fn rejects_bad_arguments() {
        let s = one_port(4e9);
        assert!(matches!(s.clone().set_if_phase(&q(), 3, 0.0), Err(Error::OffGrid { t_ns: 3 })));
        assert!(matches!(
            s.clone().set_if_frequency(&q(), 0, Freq::from_hz(500e6)),
            Err(Error::IfFrequencyOutOfRange { .. })
        ));
        assert!(s.clone().schedule_pulse(&q(), 0, rect(2), 1.2).is_err());
        assert!(matches!(s.clone().add_virtual_z(&"zz".into(), 0, 1.0), Err(Error::UnknownPort(_))));
        assert!(s.render(&q(), 5, 5).is_err());
    }

    #[test]
    fn frequency_switch_is_phase_continuous() {
        let s = one_port(0.0).set_if_frequency(&q(), 10, Freq::from_hz(100e6)).unwrap();
        assert_eq!(s.phase_at(&q(), 10).unwrap(), 0.0);
        assert!((s.phase_at(&q(), 12).unwrap() - 0.2 * TAU).abs() < 1e-12);
        let s2 = one_port(0.0)
            .set_if_frequency(&q(), 0, Freq::from_hz(50e6))
            .unwrap()
            .set_if_frequency(&q(), 10, Freq::from_hz(100e6))
            .unwrap();
        // 0.5 cycles by t = 10, then +0.2 per 2 ns
        assert!((s2.phase_at(&q(), 10).unwrap() - PI).abs() < 1e-12);
        assert!((s2.phase_at(&q(), 12).unwrap() - 0.7 * TAU).abs() < 1e-12);
    }

    #[test]
    fn if_phase_matches_rational_oracle() {
        // 527.05 MHz is above the IF limit, so it sits on the NCO
        let s = one_port(527.05e6);
        // 527.05 MHz × 290 ns = 152.8445 cycles, computed in integers
        let (num, den) = (52_705i64 * 290, 100_000i64);
        let frac = (num % den) as f64 / den as f64;
        let want = TAU * frac;
        assert!((s.phase_at(&q(), 290).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn virtual_z_examples() {
        let base = one_port(4e9).set_if_frequency(&q(), 0, Freq::from_hz(30e6)).unwrap();
        let plain = base.clone().schedule_pulse(&q(), 10, rect(20), 0.5).unwrap();
        let full_turn = base
            .clone()
            .add_virtual_z(&q(), 10, TAU)
            .unwrap()
            .schedule_pulse(&q(), 10, rect(20), 0.5)
            .unwrap();
        let flipped = base
            .clone()
            .add_virtual_z(&q(), 10, PI)
            .unwrap()
            .schedule_pulse(&q(), 10, rect(20), 0.5)
            .unwrap();
        let w0 = plain.render(&q(), 0, 40).unwrap().samples;
        let w1 = full_turn.render(&q(), 0, 40).unwrap().samples;
        let w2 = flipped.render(&q(), 0, 40).unwrap().samples;
        assert!(max_diff(&w0, &w1) < 1e-12);
        let negated: Vec<C64> = w0.iter().map(|z| -z).collect();
        assert!(max_diff(&negated, &w2) < 1e-12);

        let (a, b) = (0.37, -1.91);
        let split = base
            .clone()
            .add_virtual_z(&q(), 4, a)
            .unwrap()
            .add_virtual_z(&q(), 6, b)
            .unwrap()
            .schedule_pulse(&q(), 10, rect(20), 0.5)
            .unwrap();
        let joined = base
            .add_virtual_z(&q(), 6, a + b)
            .unwrap()
            .schedule_pulse(&q(), 10, rect(20), 0.5)
            .unwrap();
        assert_eq!(split.render(&q(), 0, 40).unwrap().samples, joined.render(&q(), 0, 40).unwrap().samples);
    }

    #[test]
    fn virtual_z_spares_pulse_in_progress() {
        let s = one_port(4e9)
            .schedule_pulse(&q(), 0, rect(10), 0.5)
            .unwrap()
            .add_virtual_z(&q(), 4, PI)
            .unwrap();
        let w = s.render(&q(), 0, 10).unwrap();
        assert!(w.samples.iter().all(|z| (z - C64::new(0.5, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn render_of_empty_port_is_zero() {
        let w = one_port(4e9).render(&q(), 0, 16).unwrap();
        assert!(w.samples.iter().all(|z| *z == C64::new(0.0, 0.0)));
        let w = one_port(4e9).schedule_pulse(&q(), 0, rect(8), 0.3).unwrap().render(&q(), 0, 8).unwrap();
        assert!(w.samples.iter().all(|z| (z - C64::new(0.3, 0.0)).norm() < 1e-15));
    }

    proptest! {
        #[test]
        fn odd_timestamps_are_rejected(t in -10_000i64..10_000) {
            let t = 2 * t + 1;
            let s = one_port(4e9);
            prop_assert!(s.clone().set_if_phase(&q(), t, 0.0).is_err());
            prop_assert!(s.clone().set_if_frequency(&q(), t, Freq::ZERO).is_err());
            prop_assert!(s.clone().add_virtual_z(&q(), t, 0.1).is_err());
            prop_assert!(s.clone().schedule_pulse(&q(), t, rect(4), 0.1).is_err());
            prop_assert!(s.clone().sysref_sync(t).is_err());
            prop_assert!(s.restart(t).is_err());
        }

        #[test]
        fn frequency_split_leaves_signal_unchanged(
            f_if in -400e6f64..400e6, shift_khz in -90_000i64..90_000, t_pulse in 0i64..50,
        ) {
            let df = Freq::from_hz(shift_khz as f64 * 1e3);
            let f_if = Freq::from_hz(f_if.round());
            prop_assume!((f_if - df).hz().abs() < IF_NYQUIST_HZ);
            let f_nco = Freq::from_hz(4.5e9);
            let build = |nco: Freq, fif: Freq| {
                one_port(0.0)
                    .set_nco(&q(), NcoConfig::new(nco)).unwrap()
                    .set_if_frequency(&q(), 0, fif).unwrap()
                    .schedule_pulse(&q(), 2 * t_pulse, rect(60), 0.8).unwrap()
                    .render(&q(), 0, 200).unwrap()
                    .analytic()
            };
            let a = build(f_nco, f_if);
            let b = build(f_nco + df, f_if - df);
            prop_assert!(max_diff(&a, &b) < 1e-9);
        }

        #[test]
        fn virtual_z_equals_if_phase_jump(dphi in -7.0f64..7.0, t_event in 1i64..20) {
            let t = 2 * t_event;
            let base = one_port(0.0).set_if_frequency(&q(), 0, Freq::from_hz(21e6)).unwrap();
            // with a zero NCO the total phase is the IF phase
            let if_now = base.phase_at(&q(), t).unwrap();
            let with_vz = base.clone().add_virtual_z(&q(), t, dphi).unwrap()
                .schedule_pulse(&q(), t, rect(30), 0.5).unwrap();
            let with_jump = base.set_if_phase(&q(), t, if_now + dphi).unwrap()
                .schedule_pulse(&q(), t, rect(30), 0.5).unwrap();
            let a = with_vz.render(&q(), t, t + 30).unwrap().samples;
            let b = with_jump.render(&q(), t, t + 30).unwrap().samples;
            prop_assert!(max_diff(&a, &b) < 1e-9);
        }

        #[test]
        fn relative_phase_rigid_under_period_shift(k in 0i64..50, t in 0i64..5000) {
            let period = 10_000;
            let s = SequencerState::new(period).unwrap()
                .with_port("a", NcoConfig::new(Freq::from_hz(4.8e9)))
                .with_port("b", NcoConfig::new(Freq::from_hz(4.2724e9)));
            let t = 2 * t;
            let rel = |st: &SequencerState, tt: i64| {
                st.phase_at(&"a".into(), tt).unwrap() - st.phase_at(&"b".into(), tt).unwrap()
            };
            let shifted = s.clone().sysref_sync(k * period).unwrap();
            let d = crate::dds::wrap_pi(rel(&s, t) - rel(&shifted, k * period + t));
            prop_assert!(d.abs() < 1e-9);
        }
    }
}
