// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::quantum::C64;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Complex envelope sampled at 1 GS/s; one sample per nanosecond.
///
/// DAC full scale is modulus 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TemplateRepr", into = "TemplateRepr")]
pub struct PulseTemplate {
    name: String,
    samples: Vec<C64>,
}

impl PulseTemplate {
    pub fn new(name: impl Into<String>, samples: Vec<C64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("pulse template has no samples"));
        }
        if let Some(peak) = samples.iter().map(|s| s.norm()).find(|m| *m > 1.0 + 1e-12) {
            return Err(Error::invalid(format!(
                "template sample modulus {peak} exceeds DAC full scale"
            )));
        }
        Ok(Self { name: name.into(), samples })
    }

    /// Flat-top envelope at full scale.
    pub fn rectangular(name: impl Into<String>, duration_ns: usize) -> Result<Self> {
        Self::new(name, vec![C64::new(1.0, 0.0); duration_ns])
    }

    /// Raised-cosine (Hann) envelope.
    pub fn raised_cosine(name: impl Into<String>, duration_ns: usize) -> Result<Self> {
        let n = duration_ns as f64;
        let samples = (0..duration_ns)
            .map(|k| {
                let x = (k as f64 + 0.5) / n;
                C64::new(0.5 * (1.0 - (std::f64::consts::TAU * x).cos()), 0.0)
            })
            .collect();
        Self::new(name, samples)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn duration_ns(&self) -> i64 {
        self.samples.len() as i64
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct TemplateRepr {
    name: String,
    samples: Vec<[f64; 2]>,
}

impl From<PulseTemplate> for TemplateRepr {
    fn from(t: PulseTemplate) -> Self {
        TemplateRepr {
            name: t.name,
            samples: t.samples.iter().map(|s| [s.re, s.im]).collect(),
        }
    }
}

impl TryFrom<TemplateRepr> for PulseTemplate {
    type Error = Error;
    fn try_from(r: TemplateRepr) -> Result<Self> {
        PulseTemplate::new(r.name, r.samples.iter().map(|[re, im]| C64::new(*re, *im)).collect())
    }
}
