// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! JSON sequence files and waveform CSV export.
//!
//! ```json
//! {
//!   "repetition_period_ns": 10000,
//!   "ports": { "q1": { "frequency_hz": 4.8e9, "reference_phase": 0.0 } },
//!   "templates": { "x90": { "kind": "rectangular", "duration_ns": 20 } },
//!   "events": [
//!     { "port": "q1", "t_ns": 0, "action": "sysref_sync", "params": {} },
//!     { "port": "q1", "t_ns": 0, "action": "play",
//!       "params": { "template": "x90", "amplitude_scale": 0.25 } }
//!   ]
//! }
//! ```
//!
//! Actions: `play`, `set_if_frequency` (`frequency_hz`), `set_if_phase`
//! (`phase`), `add_virtual_z` (`dphi`), `sysref_sync`, `restart`. The last two
//! are global; their `port` is ignored.

use super::engine::{Action, NcoConfig, PortId, SequencerState};
use super::phase::Freq;
use super::render::RenderedWaveform;
use super::template::PulseTemplate;
use crate::harness::fmt_g9;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum TemplateSpec {
    Rectangular { duration_ns: usize },
    RaisedCosine { duration_ns: usize },
    Samples { samples: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct EventRecord {
    #[serde(default)]
    port: String,
    t_ns: i64,
    action: String,
    #[serde(default)]
    params: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SequenceFile {
    repetition_period_ns: i64,
    ports: BTreeMap<String, NcoConfig>,
    #[serde(default)]
    templates: BTreeMap<String, TemplateSpec>,
    events: Vec<EventRecord>,
}

fn param_f64(params: &Value, key: &str, ev: &EventRecord) -> Result<f64> {
    params.get(key).and_then(Value::as_f64).ok_or_else(|| {
        Error::invalid(format!("event {} at {} ns: missing numeric param '{key}'", ev.action, ev.t_ns))
    })
}

pub fn sequence_from_json(text: &str) -> Result<SequencerState> {
    let file: SequenceFile = serde_json::from_str(text)?;
    let mut templates = BTreeMap::new();
    for (name, spec) in &file.templates {
        let t = match spec {
            TemplateSpec::Rectangular { duration_ns } => PulseTemplate::rectangular(name.clone(), *duration_ns)?,
            TemplateSpec::RaisedCosine { duration_ns } => PulseTemplate::raised_cosine(name.clone(), *duration_ns)?,
            TemplateSpec::Samples { samples } => PulseTemplate::new(
                name.clone(),
                samples.iter().map(|[re, im]| crate::quantum::c(*re, *im)).collect(),
            )?,
        };
        templates.insert(name.clone(), Arc::new(t));
    }
    let mut state = SequencerState::new(file.repetition_period_ns)?;
    for (name, nco) in &file.ports {
        state = state.with_port(name.as_str(), *nco);
    }
    let mut events = file.events.clone();
    events.sort_by_key(|e| e.t_ns);
    for ev in &events {
        let port = PortId::new(ev.port.clone());
        let p = &ev.params;
        state = match ev.action.as_str() {
            "sysref_sync" => state.sysref_sync(ev.t_ns)?,
            "restart" => state.restart(ev.t_ns)?,
            "play" => {
                let name = p.get("template").and_then(Value::as_str).ok_or_else(|| {
                    Error::invalid(format!("play at {} ns: missing 'template'", ev.t_ns))
                })?;
                let tpl = templates
                    .get(name)
                    .ok_or_else(|| Error::invalid(format!("unknown template '{name}'")))?;
                let scale = p.get("amplitude_scale").and_then(Value::as_f64).unwrap_or(1.0);
                state.schedule_pulse(&port, ev.t_ns, Arc::clone(tpl), scale)?
            }
            "set_if_frequency" => {
                state.set_if_frequency(&port, ev.t_ns, Freq::from_hz(param_f64(p, "frequency_hz", ev)?))?
            }
            "set_if_phase" => state.set_if_phase(&port, ev.t_ns, param_f64(p, "phase", ev)?)?,
            "add_virtual_z" => state.add_virtual_z(&port, ev.t_ns, param_f64(p, "dphi", ev)?)?,
            other => return Err(Error::invalid(format!("unknown action '{other}'"))),
        };
    }
    Ok(state)
}

pub fn read_sequence_json(path: &Path) -> Result<SequencerState> {
    sequence_from_json(&std::fs::read_to_string(path)?)
}

/// Serializes a state. Templates are written sample by sample.
pub fn sequence_to_json(state: &SequencerState) -> Result<String> {
    let mut templates: BTreeMap<String, TemplateSpec> = BTreeMap::new();
    let mut events = Vec::new();
    for (i, &t) in state.syncs().iter().enumerate() {
        if i > 0 {
            events.push(EventRecord { port: String::new(), t_ns: t, action: "sysref_sync".into(), params: json!({}) });
        }
    }
    for &t in state.starts() {
        if !state.syncs().contains(&t) {
            events.push(EventRecord { port: String::new(), t_ns: t, action: "restart".into(), params: json!({}) });
        }
    }
    let mut ports = BTreeMap::new();
    for sched in state.ports() {
        ports.insert(sched.port.0.clone(), sched.nco);
        for ev in sched.events() {
            let (action, params) = match &ev.action {
                Action::Play { template, amplitude_scale } => {
                    let name = template.name().to_string();
                    let spec = TemplateSpec::Samples {
                        samples: template.samples().iter().map(|z| [z.re, z.im]).collect(),
                    };
                    if let Some(prev) = templates.get(&name) {
                        if serde_json::to_value(prev)? != serde_json::to_value(&spec)? {
                            return Err(Error::invalid(format!("two different templates named '{name}'")));
                        }
                    }
                    templates.insert(name.clone(), spec);
                    ("play", json!({ "template": name, "amplitude_scale": amplitude_scale }))
                }
                Action::SetIfFrequency(f) => ("set_if_frequency", json!({ "frequency_hz": f.hz() })),
                Action::SetIfPhase(p) => ("set_if_phase", json!({ "phase": p })),
                Action::AddVirtualZ(d) => ("add_virtual_z", json!({ "dphi": d })),
            };
            events.push(EventRecord { port: sched.port.0.clone(), t_ns: ev.t_ns, action: action.into(), params });
        }
    }
    // Global events sort before port events at equal times.
    events.sort_by_key(|e| (e.t_ns, !e.port.is_empty()));
    let file = SequenceFile {
        repetition_period_ns: state.repetition_period_ns(),
        ports,
        templates,
        events,
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Writes `t_ns, re, im, carrier_hz`; `re`/`im` are the full analytic signal.
pub fn write_waveform_csv(w: &RenderedWaveform, out: &mut impl Write) -> Result<()> {
    writeln!(out, "t_ns,re,im,carrier_hz")?;
    let carrier = fmt_g9(w.carrier_frequency.hz());
    for (k, z) in w.analytic().iter().enumerate() {
        writeln!(out, "{},{},{},{}", w.t0_ns + k as i64, fmt_g9(z.re), fmt_g9(z.im), carrier)?;
    }
    Ok(())
}
