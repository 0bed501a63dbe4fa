//! Quadrature: Gauss–Legendre rules, Gauss–Kronrod adaptive integration over
//! Lebesgue measure (aware of Cantor-type zones), and adaptive integration
//! against self-similar Cantor measures.

mod adaptive;
mod cantor;
mod gauss;
mod kronrod;

pub use adaptive::integrate;
pub use cantor::{CantorCell, CantorGeometry};
pub use gauss::GaussLegendre;
pub use kronrod::gk15;

use crate::error::{Error, Result};
use crate::exec::Execution;

/// An integral value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate { value: self.value + rhs.value, error: self.error + rhs.error }
    }
}

impl std::ops::Mul<f64> for Estimate {
    type Output = Estimate;
    fn mul(self, s: f64) -> Estimate {
        Estimate { value: self.value * s, error: self.error * s.abs() }
    }
}

/// Numerical settings shared by every evaluation in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss–Legendre node count for integrals over the jump parameter θ ∈ [0, 1].
    pub theta_order: usize,
    /// Absolute tolerance for adaptive integrals.
    pub ac_tolerance: f64,
    /// Depth of the Cantor construction used both to evaluate staircases and to
    /// discretise Cantor measures.
    pub cantor_depth: u32,
    /// Maximum number of subdivisions of one adaptive integral.
    pub subdivision_budget: usize,
    pub execution: Execution,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            theta_order: 32,
            ac_tolerance: 1e-9,
            cantor_depth: 24,
            subdivision_budget: 100_000,
            execution: Execution::default(),
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.theta_order < 2 {
            return Err(Error::InvalidParameter(format!(
                "theta_order must be at least 2, got {}",
                self.theta_order
            )));
        }
        if !(self.ac_tolerance > 0.0 && self.ac_tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ac_tolerance must be positive, got {}",
                self.ac_tolerance
            )));
        }
        if self.cantor_depth == 0 || self.cantor_depth > 60 {
            return Err(Error::InvalidParameter(format!(
                "cantor_depth must lie in 1..=60, got {}",
                self.cantor_depth
            )));
        }
        if self.subdivision_budget == 0 {
            return Err(Error::InvalidParameter("subdivision_budget must be positive".into()));
        }
        Ok(())
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.ac_tolerance = tol;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn theta_rule(&self) -> GaussLegendre {
        GaussLegendre::unit(self.theta_order)
    }

    /// Integrate `f` over `[a, b]` against Lebesgue measure.
    pub fn integrate<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        breakpoints: &[f64],
        zones: &[CantorGeometry],
    ) -> Result<Estimate> {
        integrate(
            f,
            a,
            b,
            breakpoints,
            zones,
            self.ac_tolerance,
            self.subdivision_budget,
            self.cantor_depth,
        )
    }

    /// Integrate `f` against the normalised Cantor measure of `geometry`.
    pub fn integrate_cantor<F: Fn(f64) -> f64>(
        &self,
        geometry: &CantorGeometry,
        f: F,
        cuts: &[f64],
    ) -> Result<Estimate> {
        geometry.integrate(f, cuts, self.ac_tolerance, self.cantor_depth, self.subdivision_budget)
    }
}
