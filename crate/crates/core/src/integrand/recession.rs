use super::Integrand;
use crate::error::{Error, Result};
use crate::vector::Vector;

/// Probe lattice for [`estimate_recession`].
///
/// Stage `i` (0-based) uses the scales `t/4, t/2, t` with `t = 2^(first_exponent +
/// exponent_step * i)` and perturbs `x`, every `y_k` and every `A_k` by `±radius_i`,
/// with radii `10^-1, 10^-2, ...`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecessionSchedule {
    pub stages: u32,
    pub first_exponent: i32,
    pub exponent_step: i32,
    /// Relative spread allowed at the final stage.
    pub threshold: f64,
}

impl Default for RecessionSchedule {
    fn default() -> Self {
        RecessionSchedule { stages: 6, first_exponent: 4, exponent_step: 4, threshold: 1e-3 }
    }
}

impl RecessionSchedule {
    pub fn scale(&self, stage: u32) -> f64 {
        2f64.powi(self.first_exponent + self.exponent_step * stage as i32)
    }

    pub fn radius(&self, stage: u32) -> f64 {
        10f64.powi(-(stage as i32 + 1))
    }
}

/// Result of [`estimate_recession`].
#[derive(Debug, Clone, PartialEq)]
pub struct RecessionEstimate {
    /// `f(x, y, tA) / t` at the largest probe scale.
    pub value: f64,
    /// Spread (max - min) of the probe quotients, one entry per stage.
    pub spreads: Vec<f64>,
}

impl RecessionEstimate {
    pub fn final_spread(&self) -> f64 {
        *self.spreads.last().unwrap_or(&0.0)
    }
}

/// Estimate `f^∞(x, y, A) = lim f(x', y', tA') / t` over the joint probe lattice.
///
/// Fails with [`Error::NoRecession`] unless the final-stage spread is below
/// `threshold · max(1, |value|)`.
pub fn estimate_recession(
    f: &Integrand,
    x: f64,
    y: &[f64],
    a: &[f64],
    schedule: &RecessionSchedule,
) -> Result<RecessionEstimate> {
    let mut spreads = Vec::with_capacity(schedule.stages as usize);
    let quotient = |xp: f64, yp: &[f64], ap: &[f64], t: f64| -> f64 {
        let scaled: Vector = ap.iter().map(|v| v * t).collect();
        f.eval(xp, yp, &scaled) / t
    };
    let mut value = f64::NAN;
    for stage in 0..schedule.stages {
        let t = schedule.scale(stage);
        let rho = schedule.radius(stage);
        let mut probes: Vec<(f64, Vector, Vector)> = vec![(x, y.into(), a.into())];
        for s in [-rho, rho] {
            probes.push((x + s, y.into(), a.into()));
            for k in 0..y.len() {
                let mut yp: Vector = y.into();
                yp[k] += s;
                probes.push((x, yp, a.into()));
            }
            for k in 0..a.len() {
                let mut ap: Vector = a.into();
                ap[k] += s;
                probes.push((x, y.into(), ap));
            }
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for m in [0.25, 0.5, 1.0] {
            for (xp, yp, ap) in &probes {
                let q = quotient(*xp, yp, ap, m * t);
                lo = lo.min(q);
                hi = hi.max(q);
            }
        }
        spreads.push(if lo.is_finite() && hi.is_finite() { hi - lo } else { f64::INFINITY });
        value = quotient(x, y, a, t);
    }
    let est = RecessionEstimate { value, spreads };
    let spread = est.final_spread();
    if !value.is_finite() || !(spread <= schedule.threshold * value.abs().max(1.0)) {
        return Err(Error::NoRecession { x, spread });
    }
    Ok(est)
}
