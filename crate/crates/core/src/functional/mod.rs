//! The extended functional
//! `F[u] = ∫ f(x, u, ∇u) dx + ∫∫₀¹ f^∞(x, u^θ, dDˢu/d|Dˢu|) dθ d|Dˢu|`,
//! evaluated directly and, independently, through the perspective integrand of
//! the graph map `x -> (|x|, u(x))`.

mod direct;
mod graph;

pub use direct::evaluate_f;
pub use graph::evaluate_f_graph;

use crate::bvfun::BVFunction1D;
use crate::error::Result;
use crate::integrand::registry;
use crate::quadrature::QuadratureSpec;

/// Value of the functional split by the part of Du it integrates against.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FunctionalValue {
    pub total: f64,
    pub ac_part: f64,
    pub jump_part: f64,
    pub cantor_part: f64,
    pub error_estimate: f64,
}

impl FunctionalValue {
    pub(crate) fn assemble(ac: f64, jump: f64, cantor: f64, error: f64) -> Self {
        FunctionalValue {
            total: ac + jump + cantor,
            ac_part: ac,
            jump_part: jump,
            cantor_part: cantor,
            error_estimate: error,
        }
    }
}

/// `∫ √(1 + |∇u|²) dx + |Dˢu|(Ω)`.
pub fn area_functional_with(u: &BVFunction1D, q: &QuadratureSpec) -> Result<f64> {
    Ok(evaluate_f(&registry("area")?, u, q)?.total)
}

pub fn area_functional(u: &BVFunction1D) -> Result<f64> {
    area_functional_with(u, &QuadratureSpec::default())
}

/// Move `x` off the exceptional set by `1e-13` if it lands exactly on it.
pub(crate) fn nudge(x: f64, exceptional: &[f64]) -> f64 {
    if exceptional.contains(&x) {
        x + 1e-13
    } else {
        x
    }
}

/// Integration windows for the ac part: maximal runs of mesh intervals whose
/// boundaries do not cut through a Cantor support.
pub(crate) fn segments(u: &BVFunction1D) -> Vec<(f64, f64)> {
    let supports: Vec<(f64, f64)> = u.cantor().iter().map(|c| c.support()).collect();
    let bps = u.breakpoints();
    let mut out = Vec::new();
    let mut start = bps[0];
    for &x in &bps[1..bps.len() - 1] {
        if supports.iter().all(|(lo, hi)| !(x > *lo && x < *hi)) {
            out.push((start, x));
            start = x;
        }
    }
    out.push((start, *bps.last().unwrap()));
    out
}
