use super::family::SequenceFamily;
use super::strict_distance_with;
use crate::bvfun::{
    radial_lp_distance_with, radial_total_variation_with, sup_distance, RadialBV,
};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::quadrature::QuadratureSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingRow {
    pub index: u64,
    pub strict_dist: f64,
    /// `L^{d/(d-1)}` distance; the sup distance when `d = 1`.
    pub lp_dist: f64,
    pub sup_dist: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    pub family: String,
    pub dimension: u32,
    /// `d/(d-1)`, infinite for `d = 1`.
    pub exponent: f64,
    pub rows: Vec<EmbeddingRow>,
}

impl EmbeddingTable {
    pub fn last(&self) -> Option<&EmbeddingRow> {
        self.rows.last()
    }
}

/// Critical embedding exponent `1* = d/(d-1)`.
pub fn critical_exponent(d: u32) -> f64 {
    if d <= 1 {
        f64::INFINITY
    } else {
        d as f64 / (d - 1) as f64
    }
}

fn radial_row(
    family: &SequenceFamily,
    limit: &RadialBV,
    limit_tv: f64,
    j: u64,
    q: &QuadratureSpec,
) -> Result<EmbeddingRow> {
    let d = limit.dimension();
    let uj = RadialBV::new(family.member(j)?, d)?;
    let l1 = radial_lp_distance_with(&uj, limit, 1.0, q)?;
    let tv = radial_total_variation_with(&uj, q)?;
    Ok(EmbeddingRow {
        index: j,
        strict_dist: l1 + (tv - limit_tv).abs(),
        lp_dist: radial_lp_distance_with(&uj, limit, critical_exponent(d), q)?,
        sup_dist: sup_distance(uj.profile(), limit.profile())?,
    })
}

fn flat_row(family: &SequenceFamily, j: u64, q: &QuadratureSpec) -> Result<EmbeddingRow> {
    let uj = family.member(j)?;
    let sup = sup_distance(&uj, family.limit())?;
    Ok(EmbeddingRow {
        index: j,
        strict_dist: strict_distance_with(&uj, family.limit(), q)?,
        lp_dist: sup,
        sup_dist: sup,
    })
}

/// Distances of `u_j` to the limit in the strict metric and in `L^{d/(d-1)}`.
///
/// For `d >= 2` the family's members are read as radial profiles on `(0, R)` and the
/// norms are those of the radial extensions in `R^d`. For `d = 1` the members are used
/// as they are and the critical norm is the sup norm.
pub fn embedding_experiment(
    family: &SequenceFamily,
    d: u32,
    q: &QuadratureSpec,
) -> Result<EmbeddingTable> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let inner = q.with_execution(Execution::Sequential);
    let rows = if d == 1 {
        exec::try_map(q.execution, family.index_range(), |&j| flat_row(family, j, &inner))?
    } else {
        let limit = RadialBV::new(family.limit().clone(), d)?;
        let limit_tv = radial_total_variation_with(&limit, &inner)?;
        exec::try_map(q.execution, family.index_range(), |&j| {
            radial_row(family, &limit, limit_tv, j, &inner)
        })?
    };
    Ok(EmbeddingTable {
        family: family.name().to_string(),
        dimension: d,
        exponent: critical_exponent(d),
        rows,
    })
}
