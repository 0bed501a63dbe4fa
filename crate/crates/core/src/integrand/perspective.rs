use super::{estimate_recession, Integrand, IntegrandFn, RecessionSchedule, SampleGrid};
use crate::error::Result;
use crate::vector::Vector;

/// `f̃(x, (r, y), (t, A)) = |t| f(x, y, A / |t|)` for `t != 0` and `f^∞(x, y, A)` at `t = 0`.
///
/// The `r` slot is carried along but not read.
#[derive(Clone, Debug)]
pub struct PerspectiveIntegrand {
    base: Integrand,
    recession: RecessionSource,
}

#[derive(Clone)]
enum RecessionSource {
    Supplied(IntegrandFn),
    Estimated,
}

impl std::fmt::Debug for RecessionSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RecessionSource::Supplied(_) => f.write_str("Supplied"),
            RecessionSource::Estimated => f.write_str("Estimated"),
        }
    }
}

impl PerspectiveIntegrand {
    pub fn base(&self) -> &Integrand {
        &self.base
    }

    /// `ry = (r, y) ∈ R^{1+m}`, `ta = (t, A) ∈ R^{1+m}`.
    pub fn eval(&self, x: f64, ry: &[f64], ta: &[f64]) -> f64 {
        let y = &ry[1..];
        let (t, a) = (ta[0], &ta[1..]);
        if t != 0.0 {
            let s = t.abs();
            let scaled: Vector = a.iter().map(|v| v / s).collect();
            s * self.base.eval(x, y, &scaled)
        } else {
            self.recession(x, y, a)
        }
    }

    fn recession(&self, x: f64, y: &[f64], a: &[f64]) -> f64 {
        match &self.recession {
            RecessionSource::Supplied(r) => r(x, y, a),
            RecessionSource::Estimated => {
                estimate_recession(&self.base, x, y, a, &RecessionSchedule::default())
                    .map(|e| e.value)
                    .unwrap_or(f64::NAN)
            }
        }
    }
}

/// Build the perspective integrand. Without a supplied recession function, the
/// estimator must succeed on a moderate probe grid, otherwise `NoRecession` is
/// returned.
pub fn perspective(f: &Integrand) -> Result<PerspectiveIntegrand> {
    let recession = match f.recession_fn() {
        Some(r) => RecessionSource::Supplied(r.clone()),
        None => {
            let grid = SampleGrid::moderate(SampleGrid::default_xs(), 1);
            let schedule = RecessionSchedule::default();
            for (x, y, a) in grid.points().step_by(7) {
                estimate_recession(f, x, &y, &a, &schedule)?;
            }
            RecessionSource::Estimated
        }
    };
    Ok(PerspectiveIntegrand { base: f.clone(), recession })
}
