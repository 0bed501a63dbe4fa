use super::{estimate_recession, Growth, Integrand, RecessionSchedule};
use crate::vector::{norm, Vector};

/// A tensor grid of sample points `(x, y e_1, A e_1)` in `R × R^m × R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub as_: Vec<f64>,
    pub dim: usize,
}

impl SampleGrid {
    /// Magnitudes `0, ±10^-2, ..., ±10^3` in both `y` and `A`.
    pub fn log_scaled(xs: Vec<f64>, dim: usize) -> Self {
        let mut mags = vec![0.0];
        for e in -2..=3 {
            let v = 10f64.powi(e);
            mags.push(v);
            mags.push(-v);
        }
        SampleGrid { xs, ys: mags.clone(), as_: mags, dim }
    }

    /// Moderate values suited to comparing recession functions.
    pub fn moderate(xs: Vec<f64>, dim: usize) -> Self {
        SampleGrid {
            xs,
            ys: vec![-2.0, -0.5, 0.0, 1.0, 3.0],
            as_: vec![-4.0, -1.0, -0.25, 0.5, 2.0, 5.0],
            dim,
        }
    }

    /// Default x-samples inside (-1, 1), away from 0.
    pub fn default_xs() -> Vec<f64> {
        vec![-0.75, -0.25, 0.3, 0.8]
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, Vector, Vector)> + '_ {
        let unit = |v: f64| -> Vector {
            let mut out = Vector::from_elem(0.0, self.dim);
            out[0] = v;
            out
        };
        self.xs.iter().flat_map(move |&x| {
            self.ys
                .iter()
                .flat_map(move |&y| self.as_.iter().map(move |&a| (x, unit(y), unit(a))))
        })
    }
}

/// Result of [`growth_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub claimed: Growth,
    /// Largest `|f| / (1 + |y|^p + |A|)` over the grid.
    pub worst_ratio: f64,
    pub worst_point: (f64, Vector, Vector),
    pub passes: bool,
}

/// Check the growth certificate of `f` on `grid`.
pub fn growth_check(f: &Integrand, grid: &SampleGrid) -> GrowthReport {
    let g = f.growth();
    let mut worst = 0.0;
    let mut at = (f64::NAN, Vector::new(), Vector::new());
    for (x, y, a) in grid.points() {
        let denom = 1.0 + norm(&y).powf(g.p) + norm(&a);
        let r = f.eval(x, &y, &a).abs() / denom;
        if !(r <= worst) {
            worst = r;
            at = (x, y, a);
        }
    }
    GrowthReport { claimed: g, worst_ratio: worst, worst_point: at, passes: worst <= g.c * (1.0 + 1e-12) }
}

/// Result of [`validate_recession`].
#[derive(Debug, Clone, PartialEq)]
pub struct RecessionReport {
    pub supplied: bool,
    /// Largest `|f^∞_supplied - f^∞_estimated|`.
    pub max_deviation: f64,
    pub worst_point: Option<(f64, Vector, Vector)>,
    /// Largest relative defect of `f^∞(x, y, λA) = λ f^∞(x, y, A)` for `λ ∈ {0.5, 2, 10}`.
    pub max_homogeneity_defect: f64,
    /// Grid points at which the estimator reported no recession.
    pub estimation_failures: usize,
    pub flagged: bool,
}

/// Compare the supplied recession function with the estimator and test its
/// homogeneity. Points within `1e-5` of the exceptional set are skipped.
pub fn validate_recession(f: &Integrand, grid: &SampleGrid) -> RecessionReport {
    let schedule = RecessionSchedule::default();
    let mut report = RecessionReport {
        supplied: f.has_recession(),
        max_deviation: 0.0,
        worst_point: None,
        max_homogeneity_defect: 0.0,
        estimation_failures: 0,
        flagged: false,
    };
    for (x, y, a) in grid.points() {
        if f.exceptional_set().iter().any(|n| (x - n).abs() < 1e-5) {
            continue;
        }
        let est = match estimate_recession(f, x, &y, &a, &schedule) {
            Ok(e) => e.value,
            Err(_) => {
                report.estimation_failures += 1;
                report.flagged = true;
                continue;
            }
        };
        let Some(r) = f.recession_fn() else { continue };
        let given = r(x, &y, &a);
        let dev = (given - est).abs();
        if dev > report.max_deviation {
            report.max_deviation = dev;
            report.worst_point = Some((x, y.clone(), a.clone()));
        }
        if dev > schedule.threshold * est.abs().max(1.0) {
            report.flagged = true;
        }
        for l in [0.5, 2.0, 10.0] {
            let scaled: Vector = a.iter().map(|v| v * l).collect();
            let diff = (r(x, &y, &scaled) - l * given).abs();
            let defect = if diff == 0.0 { 0.0 } else { diff / (l * given.abs()) };
            report.max_homogeneity_defect = report.max_homogeneity_defect.max(defect);
        }
    }
    if report.max_homogeneity_defect > 1e-9 {
        report.flagged = true;
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs() -> Integrand {
        Integrand::new("abs", |_, _, a: &[f64]| norm(a)).with_recession(|_, _, a: &[f64]| norm(a))
    }

    fn area(rec_factor: f64) -> Integrand {
        Integrand::new("area", |_, _, a: &[f64]| (1.0 + a[0] * a[0]).sqrt())
            .with_recession(move |_, _, a: &[f64]| rec_factor * norm(a))
    }

    fn grid() -> SampleGrid {
        SampleGrid::moderate(SampleGrid::default_xs(), 1)
    }

    #[test]
    fn exact_recession_has_zero_deviation() {
        let r = validate_recession(&abs(), &grid());
        assert_eq!(r.max_deviation, 0.0);
        assert!(!r.flagged);
    }

    #[test]
    fn area_recession_within_tolerance() {
        let r = validate_recession(&area(1.0), &grid());
        assert!(r.max_deviation <= 1e-3);
        assert!(!r.flagged);
    }

    #[test]
    fn wrong_recession_is_flagged() {
        let r = validate_recession(&area(2.0), &grid());
        assert!(r.flagged);
        assert!((r.max_deviation - 5.0).abs() < 1e-3, "{}", r.max_deviation);
    }

    #[test]
    fn growth_certificates() {
        let g = SampleGrid::log_scaled(SampleGrid::default_xs(), 1);
        assert!(growth_check(&abs(), &g).passes);
        let sq = Integrand::new("sq", |_, _, a: &[f64]| a[0] * a[0]);
        let rep = growth_check(&sq, &g);
        assert!(!rep.passes);
        let sq_fail = Integrand::new("sq", |_, _, a: &[f64]| a[0] * a[0]);
        let only_ten = SampleGrid { as_: vec![10.0], ys: vec![0.0], ..g.clone() };
        assert!(!growth_check(&sq_fail, &only_ten).passes);
        let y2 = Integrand::new("y2", |_, y: &[f64], _| y[0] * y[0]).with_growth(1.0, 2.0);
        assert!(growth_check(&y2, &g).passes);
    }
}
