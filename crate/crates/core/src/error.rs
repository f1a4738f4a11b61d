// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("timestamp {t_ns} ns is not on the 2 ns event grid")]
    OffGrid { t_ns: i64 },

    #[error("IF frequency {hz} Hz exceeds the 500 MHz IF Nyquist limit")]
    IfFrequencyOutOfRange { hz: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("unknown port `{0}`")]
    UnknownPort(String),

    #[error("time {t_ns} ns precedes the last sync at {sync_ns} ns")]
    BeforeSync { t_ns: i64, sync_ns: i64 },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("calibration stage `{stage}` failed: {reason}")]
    Calibration { stage: String, reason: String },

    #[error("config error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn stage(stage: &str, err: impl std::fmt::Display) -> Self {
        Error::Calibration {
            stage: stage.to_string(),
            reason: err.to_string(),
        }
    }
}
