// Copyright 2026 dds-iswap Contributors
// SPDX-License-Identifier: Apache-2.0

//! Small least-squares toolkit: Levenberg–Marquardt with a forward-difference
//! Jacobian, polynomial least squares and parabolic peak refinement.

use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, PartialEq)]
pub struct LmResult {
    pub params: Vec<f64>,
    /// One-sigma errors from `s²·(JᵀJ)⁻¹`; NaN when undetermined.
    pub std_errors: Vec<f64>,
    /// Sum of squared residuals.
    pub cost: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LmOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self { max_iterations: 500, tolerance: 1e-15 }
    }
}

fn jacobian(residuals: &dyn Fn(&[f64]) -> Vec<f64>, p: &[f64], r0: &DVector<f64>) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(r0.len(), p.len());
    let mut q = p.to_vec();
    for k in 0..p.len() {
        let h = 1e-7 * p[k].abs().max(1e-6);
        q[k] = p[k] + h;
        let r = DVector::from_vec(residuals(&q));
        q[k] = p[k];
        j.set_column(k, &((r - r0) / h));
    }
    j
}

/// Minimizes `Σ residuals(p)²` from `p0`.
pub fn levenberg_marquardt(
    residuals: &dyn Fn(&[f64]) -> Vec<f64>,
    p0: &[f64],
    opts: LmOptions,
) -> Result<LmResult> {
    let mut p = p0.to_vec();
    let mut r = DVector::from_vec(residuals(&p));
    if r.len() < p.len() {
        return Err(Error::Fit(format!("{} points cannot fix {} parameters", r.len(), p.len())));
    }
    let mut cost = r.norm_squared();
    if !cost.is_finite() {
        return Err(Error::Fit("non-finite residuals at the starting point".into()));
    }
    let mut lambda = 1e-3;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let j = jacobian(residuals, &p, &r);
        let jtj = j.transpose() * &j;
        let g = j.transpose() * &r;
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj.clone();
            for k in 0..p.len() {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
            }
            let Some(step) = a.lu().solve(&(-&g)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rt = DVector::from_vec(residuals(&trial));
            let ct = rt.norm_squared();
            if ct.is_finite() && ct <= cost {
                let rel = (cost - ct) / cost.max(1e-300);
                let small_step = step.norm() <= opts.tolerance.sqrt() * (1.0 + DVector::from_vec(p.clone()).norm());
                p = trial;
                r = rt;
                cost = ct;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if rel < opts.tolerance || small_step {
                    return Ok(finish(residuals, p, r, cost, iterations));
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Ok(finish(residuals, p, r, cost, iterations))
}

fn finish(
    residuals: &dyn Fn(&[f64]) -> Vec<f64>,
    params: Vec<f64>,
    r: DVector<f64>,
    cost: f64,
    iterations: usize,
) -> LmResult {
    let j = jacobian(residuals, &params, &r);
    let dof = r.len().saturating_sub(params.len());
    let s2 = if dof > 0 { cost / dof as f64 } else { f64::NAN };
    let std_errors = match (j.transpose() * &j).try_inverse() {
        Some(cov) => (0..params.len()).map(|k| (cov[(k, k)] * s2).max(0.0).sqrt()).collect(),
        None => vec![f64::NAN; params.len()],
    };
    LmResult { params, std_errors, cost, iterations }
}

/// Least-squares polynomial coefficients, constant term first.
pub fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Result<Vec<f64>> {
    if x.len() != y.len() || x.len() <= degree {
        return Err(Error::Fit(format!("need more than {degree} points for a degree-{degree} fit")));
    }
    // centre and scale for conditioning
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let scale = x.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max).max(1e-300);
    let a = DMatrix::from_fn(x.len(), degree + 1, |i, k| ((x[i] - mean) / scale).powi(k as i32));
    let b = DVector::from_column_slice(y);
    let c = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::Fit(e.to_string()))?;
    // expand back to powers of x
    let mut out = vec![0.0; degree + 1];
    for (k, ck) in c.iter().enumerate() {
        // ck·((x − m)/s)^k
        for j in 0..=k {
            let binom = (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64);
            out[j] += ck / scale.powi(k as i32) * binom * (-mean).powi((k - j) as i32);
        }
    }
    Ok(out)
}

/// Vertex of the least-squares parabola through the points, if it is a
/// maximum.
pub fn parabola_peak(x: &[f64], y: &[f64]) -> Result<f64> {
    let mean = x.iter().sum::<f64>() / x.len().max(1) as f64;
    let xc: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let c = polyfit(&xc, y, 2)?;
    if !(c[2] < 0.0) {
        return Err(Error::Fit("points do not bracket a maximum".into()));
    }
    Ok(mean - c[1] / (2.0 * c[2]))
}

/// Index of the largest value plus a parabolic sub-grid offset in units of
/// the grid step (uniform grids only), clamped to ±½.
pub fn refine_argmax(y: &[f64]) -> Option<(usize, f64)> {
    let (k, _) = y
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())?;
    if k == 0 || k + 1 == y.len() {
        return Some((k, 0.0));
    }
    let (a, b, c) = (y[k - 1], y[k], y[k + 1]);
    let den = a - 2.0 * b + c;
    let off = if den < 0.0 { 0.5 * (a - c) / den } else { 0.0 };
    Some((k, off.clamp(-0.5, 0.5)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lm_recovers_exponential() {
        let x: Vec<f64> = (0..30).map(|k| k as f64).collect();
        let y: Vec<f64> = x.iter().map(|m| 0.5 * 0.98f64.powf(*m) + 0.25).collect();
        let res = |p: &[f64]| x.iter().zip(&y).map(|(m, yy)| p[0] * p[2].powf(*m) + p[1] - yy).collect();
        let out = levenberg_marquardt(&res, &[0.4, 0.3, 0.9], LmOptions::default()).unwrap();
        for (got, want) in out.params.iter().zip([0.5, 0.25, 0.98]) {
            assert!((got - want).abs() < 1e-9, "{:?}", out.params);
        }
    }

    #[test]
    fn lm_needs_enough_points() {
        let res = |p: &[f64]| vec![p[0] - 1.0];
        assert!(levenberg_marquardt(&res, &[0.0, 1.0], LmOptions::default()).is_err());
    }

    #[test]
    fn polyfit_exact_quadratic() {
        let x = [526.9e6, 527.0e6, 527.1e6, 527.2e6];
        let y: Vec<f64> = x.iter().map(|v| 1.0 - 1e-14 * (v - 527.05e6f64).powi(2)).collect();
        let peak = parabola_peak(&x, &y).unwrap();
        assert!((peak - 527.05e6).abs() < 1e-3);
        let c = polyfit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 7.0], 2).unwrap();
        for (got, want) in c.iter().zip([1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(parabola_peak(&[0.0, 1.0, 2.0], &[0.0, 1.0, 4.0]).is_err());
    }

    #[test]
    fn argmax_refinement() {
        let y: Vec<f64> = (0..10).map(|k| -((k as f64) - 4.3).powi(2)).collect();
        let (k, off) = refine_argmax(&y).unwrap();
        assert_eq!(k, 4);
        assert!((off - 0.3).abs() < 1e-12);
        assert_eq!(refine_argmax(&[3.0, 1.0]).unwrap(), (0, 0.0));
        assert!(refine_argmax(&[]).is_none());
    }
}
