// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Multi-port direct-digital-synthesis sequencing engine.
//!
//! Each port is an NCO followed by an IF carrier generator and envelope
//! playback. All ports share one time base in integer nanoseconds. Mutating
//! operations happen on the 2 ns IF clock grid; samples are produced at
//! 1 GS/s as a complex analytic baseband with the NCO carrier attached as
//! metadata.
//!
//! Two synchronization events exist:
//!
//! - [`SequencerState::sysref_sync`] defines every NCO phase and starts the
//!   IF generators (the expensive software-triggered sync).
//! - [`SequencerState::restart`] only restarts the IF generators; the NCOs
//!   keep running. Repeating a sequence this way gives identical output iff
//!   each NCO is commensurate with the repetition period.

mod engine;
mod io;
mod phase;
mod render;
mod template;

pub use engine::{
    ensure_grid, nco_commensurate, Action, Event, NcoConfig, PortId, PortSchedule, SequencerState,
    GRID_NS, IF_NYQUIST_HZ,
};
pub use io::{read_sequence_json, sequence_from_json, sequence_to_json, write_waveform_csv};
pub use phase::{wrap_pi, wrap_tau, Cycles, Freq, CYCLE_UNITS};
pub use render::RenderedWaveform;
pub use template::PulseTemplate;
