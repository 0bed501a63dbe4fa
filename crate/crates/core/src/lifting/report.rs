use super::{build_lifting, LiftingMeasure, TestFunction};
use crate::bvfun::BVFunction1D;
use crate::error::Result;
use crate::exec;
use crate::quadrature::QuadratureSpec;
use crate::vector::{norm, sub, Vector};

/// One row of [`lifting_convergence_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct LiftingRow {
    pub index: u64,
    /// `| |μ[u_j]| - |μ[u]| |`.
    pub mass_gap: f64,
    /// `max_φ |⟨μ[u_j], φ⟩ - ⟨μ[u], φ⟩|` over the dictionary.
    pub pairing_gap: f64,
}

fn pairings(mu: &LiftingMeasure, dictionary: &[TestFunction]) -> Result<Vec<Vector>> {
    dictionary.iter().map(|phi| mu.pair(phi)).collect()
}

/// Empirical strict-convergence witness for `μ[u_j] -> μ[u]`, one row per family
/// member in input order.
pub fn lifting_convergence_report(
    family: &[(u64, BVFunction1D)],
    limit: &BVFunction1D,
    dictionary: &[TestFunction],
    q: &QuadratureSpec,
) -> Result<Vec<LiftingRow>> {
    let inner = q.with_execution(crate::exec::Execution::Sequential);
    let mu = build_lifting(limit, &inner)?;
    let mass = mu.total_mass();
    let reference = pairings(&mu, dictionary)?;
    exec::try_map(q.execution, family, |(j, uj)| {
        let muj = build_lifting(uj, &inner)?;
        let pj = pairings(&muj, dictionary)?;
        let gap = pj
            .iter()
            .zip(&reference)
            .map(|(a, b)| norm(&sub(a, b)))
            .fold(0.0, f64::max);
        Ok(LiftingRow { index: *j, mass_gap: (muj.total_mass() - mass).abs(), pairing_gap: gap })
    })
}
