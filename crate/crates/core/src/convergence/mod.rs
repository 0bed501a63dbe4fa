//! Strict and area-strict metrics, sequence families, mollification, and the
//! experiment runner.

mod embedding;
mod family;
mod mollify;
mod report;

pub use embedding::{critical_exponent, embedding_experiment, EmbeddingRow, EmbeddingTable};
pub use family::{geometric_range, make_family, FamilyParams, Generator, SequenceFamily, FAMILY_NAMES};
pub use mollify::{kernel, kernel_cdf, mollify, mollify_with};
pub use report::{run_experiment, CellFailure, ConvergenceReport, ReportConfig, ReportRow};

use crate::bvfun::{lp_distance_with, BVFunction1D};
use crate::error::Result;
use crate::functional::area_functional_with;
use crate::quadrature::QuadratureSpec;

/// `‖u - v‖₁ + | |Du|(Ω) - |Dv|(Ω) |`.
pub fn strict_distance_with(u: &BVFunction1D, v: &BVFunction1D, q: &QuadratureSpec) -> Result<f64> {
    let l1 = lp_distance_with(u, v, 1.0, q)?;
    Ok(l1 + (u.total_variation_with(q)? - v.total_variation_with(q)?).abs())
}

pub fn strict_distance(u: &BVFunction1D, v: &BVFunction1D) -> Result<f64> {
    strict_distance_with(u, v, &QuadratureSpec::default())
}

/// `‖u - v‖₁ + |A(u) - A(v)|` with `A` the area functional.
pub fn area_strict_distance_with(
    u: &BVFunction1D,
    v: &BVFunction1D,
    q: &QuadratureSpec,
) -> Result<f64> {
    let l1 = lp_distance_with(u, v, 1.0, q)?;
    Ok(l1 + (area_functional_with(u, q)? - area_functional_with(v, q)?).abs())
}

pub fn area_strict_distance(u: &BVFunction1D, v: &BVFunction1D) -> Result<f64> {
    area_strict_distance_with(u, v, &QuadratureSpec::default())
}
