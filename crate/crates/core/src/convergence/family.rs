use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::mollify::mollify_with;
use crate::bvfun::{BVFunction1D, Domain1D, Piece, RadialBV};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;

pub type Generator = Arc<dyn Fn(u64) -> Result<BVFunction1D> + Send + Sync>;

/// Built-in family names accepted by [`make_family`]. Hyphens may replace underscores.
pub const FAMILY_NAMES: &[&str] = &[
    "oscillation",
    "jump_smoothing",
    "shifted_jump",
    "mollified",
    "radial_steepening",
    "radial_mollified",
];

/// `{1, 2, 4, ..., max}`.
pub fn geometric_range(max: u64) -> Vec<u64> {
    std::iter::successors(Some(1u64), |j| j.checked_mul(2)).take_while(|j| *j <= max).collect()
}

/// A sequence `j -> u_j` together with its intended limit.
///
/// Radial families carry a dimension; their members and limit are profiles on `(0, R)`.
#[derive(Clone)]
pub struct SequenceFamily {
    name: String,
    generator: Generator,
    limit: BVFunction1D,
    index_range: Vec<u64>,
    dimension: Option<u32>,
}

impl fmt::Debug for SequenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceFamily")
            .field("name", &self.name)
            .field("index_range", &self.index_range)
            .field("dimension", &self.dimension)
            .finish()
    }
}

impl SequenceFamily {
    pub fn new(
        name: impl Into<String>,
        generator: impl Fn(u64) -> Result<BVFunction1D> + Send + Sync + 'static,
        limit: BVFunction1D,
        index_range: Vec<u64>,
    ) -> Self {
        SequenceFamily {
            name: name.into(),
            generator: Arc::new(generator),
            limit,
            index_range,
            dimension: None,
        }
    }

    /// Reinterpret members and limit as radial profiles in dimension `d`.
    pub fn radial(mut self, d: u32) -> Result<Self> {
        RadialBV::new(self.limit.clone(), d)?;
        self.dimension = Some(d);
        Ok(self)
    }

    pub fn with_index_range(mut self, range: Vec<u64>) -> Self {
        self.index_range = range;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn limit(&self) -> &BVFunction1D {
        &self.limit
    }

    pub fn index_range(&self) -> &[u64] {
        &self.index_range
    }

    pub fn dimension(&self) -> Option<u32> {
        self.dimension
    }

    /// `u_j`; fails if it does not live on the limit's domain.
    pub fn member(&self, j: u64) -> Result<BVFunction1D> {
        let u = (self.generator)(j)?;
        if u.domain() != self.limit.domain() || u.dim() != self.limit.dim() {
            return Err(Error::InvalidFunction(format!(
                "member {j} of `{}` does not share the limit's domain and target",
                self.name
            )));
        }
        Ok(u)
    }

    pub fn radial_member(&self, j: u64) -> Result<RadialBV> {
        let d = self.radial_dimension()?;
        RadialBV::new(self.member(j)?, d)
    }

    pub fn radial_limit(&self) -> Result<RadialBV> {
        RadialBV::new(self.limit.clone(), self.radial_dimension()?)
    }

    fn radial_dimension(&self) -> Result<u32> {
        self.dimension.ok_or_else(|| {
            Error::InvalidParameter(format!("family `{}` is not radial", self.name))
        })
    }
}

/// Options for [`make_family`].
#[derive(Debug, Clone)]
pub struct FamilyParams {
    /// Function to mollify (`mollified`, `radial_mollified`).
    pub base: Option<BVFunction1D>,
    /// Dimension for radial families.
    pub dimension: u32,
    /// Overrides the family's default index range.
    pub index_range: Option<Vec<u64>>,
    /// Quadrature used inside mollified members.
    pub quadrature: QuadratureSpec,
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams {
            base: None,
            dimension: 2,
            index_range: None,
            quadrature: QuadratureSpec::default(),
        }
    }
}

fn oscillation(j: u64) -> Result<BVFunction1D> {
    let w = 2.0 * PI * j as f64;
    BVFunction1D::smooth(
        Domain1D::unit(),
        Piece::scalar(move |x| x + (w * x).sin() / w, move |x| 1.0 + (w * x).cos()),
    )
}

/// `-1` left of `c - h`, `+1` right of `c + h`, linear in between; the ramp may
/// overflow the domain, in which case it is cut off.
fn ramp(dom: Domain1D, c: f64, h: f64) -> Result<BVFunction1D> {
    let slope = 1.0 / h;
    let mid = Piece::affine_scalar(slope, -slope * c);
    let (lo, hi) = (c - h, c + h);
    let mut bps = Vec::new();
    let mut pieces = Vec::new();
    if lo > dom.a {
        bps.push(lo);
        pieces.push(Piece::constant_scalar(-1.0));
    }
    pieces.push(mid);
    if hi < dom.b {
        bps.push(hi);
        pieces.push(Piece::constant_scalar(1.0));
    }
    BVFunction1D::piecewise(dom, bps, pieces)
}

fn sign_step(dom: Domain1D, c: f64) -> Result<BVFunction1D> {
    BVFunction1D::step(dom, vec![c], &[-1.0, 1.0])
}

fn shifted_jump(j: u64) -> Result<BVFunction1D> {
    let dom = Domain1D::symmetric();
    if j <= 1 {
        return BVFunction1D::step(dom, vec![], &[1.0]);
    }
    BVFunction1D::step(dom, vec![-1.0 / j as f64], &[0.0, 1.0])
}

fn mollified_family(
    name: &str,
    base: BVFunction1D,
    q: QuadratureSpec,
    range: Vec<u64>,
) -> SequenceFamily {
    let len = base.domain().length();
    let u = base.clone();
    SequenceFamily::new(
        name,
        move |j| {
            let eps = 0.25 * len * 0.5f64.powi(j.min(1000) as i32);
            mollify_with(&u, eps, &q)
        },
        base,
        range,
    )
}

/// Build a named family. See [`FAMILY_NAMES`].
///
/// * `oscillation`: `x + sin(2πjx)/(2πj)` on (0,1), limit `x`.
/// * `jump_smoothing`: ramp of slope `j` on `[-1/j, 1/j]` saturating at ±1 on (-1,1),
///   limit the sign step at 0.
/// * `shifted_jump`: indicator of `[-1/j, 1)` on (-1,1), limit indicator of `[0,1)`.
/// * `mollified`: `K_ε * base` with `ε_j = (b-a)/4 · 2^{-j}`; default base is the
///   indicator of `[0,1)` on (-1,1).
/// * `radial_steepening`: the `jump_smoothing` ramp recentred at `r = 1/2` on (0,1),
///   as a radial profile.
/// * `radial_mollified`: mollified radial profile, default base the indicator of
///   `(0, 1/2)`.
pub fn make_family(name: &str, params: &FamilyParams) -> Result<SequenceFamily> {
    let key = name.replace('-', "_");
    let q = params.quadrature;
    let fam = match key.as_str() {
        "oscillation" => {
            let limit = BVFunction1D::smooth(Domain1D::unit(), Piece::affine_scalar(1.0, 0.0))?;
            SequenceFamily::new("oscillation", oscillation, limit, geometric_range(64))
        }
        "jump_smoothing" => SequenceFamily::new(
            "jump_smoothing",
            |j| ramp(Domain1D::symmetric(), 0.0, 1.0 / j.max(1) as f64),
            sign_step(Domain1D::symmetric(), 0.0)?,
            geometric_range(64),
        ),
        "shifted_jump" => SequenceFamily::new(
            "shifted_jump",
            shifted_jump,
            BVFunction1D::step(Domain1D::symmetric(), vec![0.0], &[0.0, 1.0])?,
            geometric_range(64),
        ),
        "mollified" => {
            let base = match &params.base {
                Some(b) => b.clone(),
                None => BVFunction1D::step(Domain1D::symmetric(), vec![0.0], &[0.0, 1.0])?,
            };
            mollified_family("mollified", base, q, (1..=10).collect())
        }
        "radial_steepening" => {
            let dom = Domain1D::unit();
            SequenceFamily::new(
                "radial_steepening",
                move |j| ramp(dom, 0.5, 1.0 / j.max(1) as f64),
                sign_step(dom, 0.5)?,
                geometric_range(1 << 16),
            )
            .radial(params.dimension)?
        }
        "radial_mollified" => {
            let base = match &params.base {
                Some(b) => b.clone(),
                None => BVFunction1D::step(Domain1D::unit(), vec![0.5], &[1.0, 0.0])?,
            };
            mollified_family("radial_mollified", base, q, (1..=16).collect())
                .radial(params.dimension)?
        }
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    Ok(match &params.index_range {
        Some(r) => fam.with_index_range(r.clone()),
        None => fam,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvfun::{sup_distance, total_variation};

    fn family(name: &str) -> SequenceFamily {
        make_family(name, &FamilyParams::default()).unwrap()
    }

    #[test]
    fn oscillation_member_formula() {
        let u = family("oscillation").member(4).unwrap();
        for &x in &[0.1, 0.37, 0.9] {
            let want = x + (8.0 * PI * x).sin() / (8.0 * PI);
            assert!((u.value_scalar(x) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn shifted_jump_member_is_an_indicator() {
        let f = family("shifted-jump");
        let u = f.member(10).unwrap();
        assert_eq!(u.jumps().len(), 1);
        assert!((u.jumps()[0].location + 0.1).abs() < 1e-15);
        assert_eq!(u.value_scalar(-0.2), 0.0);
        assert_eq!(u.value_scalar(0.5), 1.0);
        assert_eq!(f.member(1).unwrap().value_scalar(-0.99), 1.0);
    }

    #[test]
    fn jump_smoothing_keeps_variation_and_sup_gap() {
        let f = family("jump_smoothing");
        for &j in f.index_range() {
            let u = f.member(j).unwrap();
            assert!((total_variation(&u).unwrap() - 2.0).abs() < 1e-12);
            assert!((sup_distance(&u, f.limit()).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mollified_family_limit_is_the_base() {
        let c = crate::bvfun::CantorComponent::middle_thirds(0.0, 1.0, 1.0).unwrap();
        let base = BVFunction1D::cantor_function(Domain1D::unit(), c).unwrap();
        let params = FamilyParams { base: Some(base), ..FamilyParams::default() };
        let f = make_family("mollified", &params).unwrap();
        assert!(f.limit().has_cantor());
        let u = f.member(3).unwrap();
        assert!(!u.has_cantor());
        assert!((u.value_scalar(0.5) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn radial_families_carry_dimension() {
        let f = family("radial_steepening");
        assert_eq!(f.dimension(), Some(2));
        assert!(f.radial_member(8).is_ok());
        assert!(family("oscillation").radial_member(1).is_err());
    }

    #[test]
    fn unknown_family() {
        assert!(matches!(
            make_family("nosuch", &FamilyParams::default()),
            Err(Error::UnknownName(_))
        ));
    }

    #[test]
    fn geometric_range_endpoints() {
        assert_eq!(geometric_range(64), vec![1, 2, 4, 8, 16, 32, 64]);
        assert_eq!(geometric_range(1), vec![1]);
    }
}
