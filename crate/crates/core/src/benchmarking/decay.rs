// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::fit::{levenberg_marquardt, polyfit, LmOptions};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Hilbert-space dimension of the benchmarked system.
pub const DIMENSION: usize = 4;

/// `y = A·p^m + B` with one-sigma errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub a_err: f64,
    pub b_err: f64,
    pub p_err: f64,
}

impl DecayFit {
    pub fn eval(&self, m: f64) -> f64 {
        self.a * self.p.powf(m) + self.b
    }
}

/// Least-squares fit of `A·p^m + B`. Starts from `B = 0.25`,
/// `A = y(m_min) − B` and `p` from a log-linear fit of `y − B`.
pub fn fit_decay(depths: &[f64], means: &[f64]) -> Result<DecayFit> {
    if depths.len() != means.len() {
        return Err(Error::invalid("depths and means differ in length"));
    }
    let mut distinct = depths.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::Fit("need at least 3 distinct depths".into()));
    }
    let (lo, hi) = means.iter().fold((f64::MAX, f64::MIN), |(l, h), &y| (l.min(y), h.max(y)));
    if hi - lo <= 1e-12 * hi.abs().max(1.0) {
        return Err(Error::Fit("constant data: decay rate is unidentifiable".into()));
    }
    let b0 = 0.25;
    let kmin = (0..depths.len()).min_by(|&i, &j| depths[i].partial_cmp(&depths[j]).unwrap()).unwrap();
    let a0 = means[kmin] - b0;
    let pts: Vec<(f64, f64)> = depths
        .iter()
        .zip(means)
        .filter(|(_, y)| (*y - b0) * a0.signum() > 0.0)
        .map(|(m, y)| (*m, ((y - b0) * a0.signum()).ln()))
        .collect();
    let p0 = if pts.len() >= 2 {
        let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        polyfit(&x, &y, 1).map(|c| c[1].exp()).unwrap_or(0.95)
    } else {
        0.95
    };
    let p0 = if p0.is_finite() { p0.clamp(0.05, 0.9999) } else { 0.95 };
    let res = |q: &[f64]| -> Vec<f64> {
        depths.iter().zip(means).map(|(m, y)| q[0] * q[2].powf(*m) + q[1] - y).collect()
    };
    let fit = levenberg_marquardt(&res, &[a0, b0, p0], LmOptions::default())?;
    let [a, b, p] = [fit.params[0], fit.params[1], fit.params[2]];
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Fit(format!("decay parameter p = {p} outside (0, 1]")));
    }
    Ok(DecayFit { a, b, p, a_err: fit.std_errors[0], b_err: fit.std_errors[1], p_err: fit.std_errors[2] })
}

/// Interleaved estimate with propagated one-sigma error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateError {
    pub value: f64,
    pub std_error: f64,
    /// The interleaved curve decays slower than the reference beyond its
    /// uncertainty.
    pub flagged: bool,
}

/// `(d − 1)/d · (1 − p_int/p_ref)` with `d = 4`.
pub fn gate_error(p_interleaved: f64, p_reference: f64) -> Result<f64> {
    for p in [p_interleaved, p_reference] {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid(format!("decay parameter {p} outside (0, 1]")));
        }
    }
    let d = DIMENSION as f64;
    Ok((d - 1.0) / d * (1.0 - p_interleaved / p_reference))
}

pub fn gate_error_with_uncertainty(interleaved: &DecayFit, reference: &DecayFit) -> Result<GateError> {
    let value = gate_error(interleaved.p, reference.p)?;
    let ratio = interleaved.p / reference.p;
    let rel = ((interleaved.p_err / interleaved.p).powi(2) + (reference.p_err / reference.p).powi(2)).sqrt();
    let d = DIMENSION as f64;
    let std_error = (d - 1.0) / d * ratio * rel;
    Ok(GateError { value, std_error, flagged: value < 0.0 && -value > std_error.max(0.0) })
}
