//! Integrands `f(x, y, A)` with recession functions, growth certificates and
//! continuity metadata, plus the perspective and truncation constructions.

mod checks;
mod perspective;
mod recession;
mod registry;
mod truncate;

use std::fmt;
use std::sync::Arc;

pub use checks::{growth_check, validate_recession, GrowthReport, RecessionReport, SampleGrid};
pub use perspective::{perspective, PerspectiveIntegrand};
pub use recession::{estimate_recession, RecessionEstimate, RecessionSchedule};
pub use registry::{registry, registry_names, smooth_registry_names};
pub use truncate::{cutoff, partition_of_unity, smooth_step, truncate_integrand};

use crate::error::Result;

/// `(x, y, A) -> R` with `y, A ∈ R^m`.
pub type IntegrandFn = Arc<dyn Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync>;

/// Growth certificate `|f(x, y, A)| <= C (1 + |y|^p + |A|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Growth {
    pub c: f64,
    pub p: f64,
}

impl Growth {
    pub fn new(c: f64, p: f64) -> Self {
        Growth { c, p }
    }

    pub fn bound(&self, y: &[f64], a: &[f64]) -> f64 {
        let ny = crate::vector::norm(y);
        self.c * (1.0 + ny.powf(self.p) + crate::vector::norm(a))
    }
}

impl Default for Growth {
    fn default() -> Self {
        Growth { c: 1.0, p: 1.0 }
    }
}

/// Regularity of `f` in `x`.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ContinuityClass {
    #[default]
    Continuous,
    /// Measurable in `x`; the recession function may fail to exist or be
    /// discontinuous on the finite `exceptional_set`.
    Caratheodory { exceptional_set: Vec<f64> },
}

/// An integrand with optional closed-form recession function.
#[derive(Clone)]
pub struct Integrand {
    name: String,
    eval: IntegrandFn,
    recession: Option<IntegrandFn>,
    growth: Growth,
    continuity: ContinuityClass,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("name", &self.name)
            .field("has_recession", &self.recession.is_some())
            .field("growth", &self.growth)
            .field("continuity", &self.continuity)
            .finish()
    }
}

impl Integrand {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Integrand {
            name: name.into(),
            eval: Arc::new(eval),
            recession: None,
            growth: Growth::default(),
            continuity: ContinuityClass::Continuous,
        }
    }

    pub fn with_recession(
        mut self,
        recession: impl Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.recession = Some(Arc::new(recession));
        self
    }

    pub fn with_growth(mut self, c: f64, p: f64) -> Self {
        self.growth = Growth { c, p };
        self
    }

    pub fn with_exceptional_set(mut self, points: Vec<f64>) -> Self {
        self.continuity = ContinuityClass::Caratheodory { exceptional_set: points };
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn growth(&self) -> Growth {
        self.growth
    }

    pub fn continuity(&self) -> &ContinuityClass {
        &self.continuity
    }

    pub fn exceptional_set(&self) -> &[f64] {
        match &self.continuity {
            ContinuityClass::Continuous => &[],
            ContinuityClass::Caratheodory { exceptional_set } => exceptional_set,
        }
    }

    pub fn has_recession(&self) -> bool {
        self.recession.is_some()
    }

    pub(crate) fn eval_fn(&self) -> &IntegrandFn {
        &self.eval
    }

    pub(crate) fn recession_fn(&self) -> Option<&IntegrandFn> {
        self.recession.as_ref()
    }

    pub fn eval(&self, x: f64, y: &[f64], a: &[f64]) -> f64 {
        (self.eval)(x, y, a)
    }

    /// `f^∞(x, y, A)`: the supplied recession function, or a numerical estimate.
    pub fn recession(&self, x: f64, y: &[f64], a: &[f64]) -> Result<f64> {
        match &self.recession {
            Some(r) => Ok(r(x, y, a)),
            None => {
                Ok(estimate_recession(self, x, y, a, &RecessionSchedule::default())?.value)
            }
        }
    }

    /// Worst relative defect of positive 1-homogeneity in `A` of `f` itself over
    /// the grid, for `λ ∈ {0.5, 2, 10}`.
    pub fn homogeneity_defect(&self, grid: &SampleGrid) -> f64 {
        let mut worst: f64 = 0.0;
        for (x, y, a) in grid.points() {
            let base = self.eval(x, &y, &a);
            for l in [0.5, 2.0, 10.0] {
                let scaled: crate::vector::Vector = a.iter().map(|v| v * l).collect();
                let d = (self.eval(x, &y, &scaled) - l * base).abs();
                worst = worst.max(d / (l * base.abs()).max(1.0));
            }
        }
        worst
    }
}
