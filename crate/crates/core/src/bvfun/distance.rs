use super::BVFunction1D;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::vector::{norm, sub};

const SAMPLES_PER_SEGMENT: usize = 64;
const GOLDEN_STEPS: usize = 80;

fn check_compatible(u: &BVFunction1D, v: &BVFunction1D) -> Result<()> {
    let (du, dv) = (u.domain(), v.domain());
    if (du.a - dv.a).abs() > 1e-12 || (du.b - dv.b).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "functions live on different domains ({}, {}) and ({}, {})",
            du.a, du.b, dv.a, dv.b
        )));
    }
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: v.dim() });
    }
    Ok(())
}

/// Sorted union of both meshes, endpoints included.
pub(crate) fn merged_mesh(u: &BVFunction1D, v: &BVFunction1D) -> Vec<f64> {
    let mut pts: Vec<f64> = u.breakpoints().iter().chain(v.breakpoints()).copied().collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `∫ |u - v|^p dx` over the common domain.
pub fn lp_integral(u: &BVFunction1D, v: &BVFunction1D, p: f64, q: &QuadratureSpec) -> Result<f64> {
    check_compatible(u, v)?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent p must lie in [1, inf), got {p}")));
    }
    let dom = u.domain();
    let mut zones = u.cantor_zones();
    zones.extend(v.cantor_zones());
    let depth = q.cantor_depth;
    let f = |x: f64| {
        let d = norm(&sub(&u.value_at(x, depth), &v.value_at(x, depth)));
        if p == 1.0 {
            d
        } else {
            d.powf(p)
        }
    };
    Ok(q.integrate(f, dom.a, dom.b, &merged_mesh(u, v), &zones)?.value)
}

/// `‖u - v‖_{L^p}`.
pub fn lp_distance_with(u: &BVFunction1D, v: &BVFunction1D, p: f64, q: &QuadratureSpec) -> Result<f64> {
    Ok(lp_integral(u, v, p, q)?.powf(1.0 / p))
}

pub fn lp_distance(u: &BVFunction1D, v: &BVFunction1D, p: f64) -> Result<f64> {
    lp_distance_with(u, v, p, &QuadratureSpec::default())
}

/// Essential supremum of `|u - v|`.
///
/// One-sided limits are compared at every breakpoint of either function; inside
/// each mesh interval the difference is sampled and the best sample refined by
/// golden-section search.
pub fn sup_distance(u: &BVFunction1D, v: &BVFunction1D) -> Result<f64> {
    check_compatible(u, v)?;
    let mesh = merged_mesh(u, v);
    let diff = |x: f64| norm(&sub(&u.value(x), &v.value(x)));
    let mut best: f64 = 0.0;
    for (i, &x) in mesh.iter().enumerate() {
        if i > 0 {
            best = best.max(norm(&sub(&u.left_limit(x), &v.left_limit(x))));
        }
        if i + 1 < mesh.len() {
            best = best.max(norm(&sub(&u.right_limit(x), &v.right_limit(x))));
        }
    }
    for w in mesh.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let h = (hi - lo) / SAMPLES_PER_SEGMENT as f64;
        let xs: Vec<f64> = (1..SAMPLES_PER_SEGMENT).map(|k| lo + h * k as f64).collect();
        let Some((k, m)) = xs
            .iter()
            .map(|x| diff(*x))
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            continue;
        };
        best = best.max(m);
        best = best.max(golden_max(&diff, xs[k] - h, xs[k] + h));
    }
    Ok(best)
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut best = f1.max(f2);
    for _ in 0..GOLDEN_STEPS {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
        best = best.max(f1).max(f2);
        if hi - lo < 1e-15 * (1.0 + lo.abs()) {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvfun::{Domain1D, Piece};

    fn steep_ramp(j: f64) -> BVFunction1D {
        BVFunction1D::piecewise(
            Domain1D::symmetric(),
            vec![-1.0 / j, 1.0 / j],
            vec![
                Piece::constant_scalar(-1.0),
                Piece::affine_scalar(j, 0.0),
                Piece::constant_scalar(1.0),
            ],
        )
        .unwrap()
    }

    fn sign() -> BVFunction1D {
        BVFunction1D::step(Domain1D::symmetric(), vec![0.0], &[-1.0, 1.0]).unwrap()
    }

    #[test]
    fn distance_to_self_is_zero() {
        let u = steep_ramp(3.0);
        assert_eq!(lp_distance(&u, &u, 1.0).unwrap(), 0.0);
        assert_eq!(sup_distance(&u, &u).unwrap(), 0.0);
    }

    #[test]
    fn steep_ramp_distances() {
        for j in [2.0, 8.0, 64.0] {
            let u = steep_ramp(j);
            assert_eq!(sup_distance(&u, &sign()).unwrap(), 1.0);
            let l1 = lp_distance(&u, &sign(), 1.0).unwrap();
            assert!((l1 - 1.0 / j).abs() < 1e-12, "j={j}: {l1}");
        }
    }

    #[test]
    fn l2_of_ramp_against_zero() {
        let dom = Domain1D::unit();
        let u = BVFunction1D::smooth(dom, Piece::affine_scalar(1.0, 0.0)).unwrap();
        let z = BVFunction1D::smooth(dom, Piece::constant_scalar(0.0)).unwrap();
        let d = lp_distance(&u, &z, 2.0).unwrap();
        assert!((d - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let s = sup_distance(&u, &z).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interior_maximum_is_found() {
        let dom = Domain1D::unit();
        let u = BVFunction1D::smooth(dom, Piece::scalar(|x| x * (1.0 - x), |x| 1.0 - 2.0 * x))
            .unwrap();
        let z = BVFunction1D::smooth(dom, Piece::constant_scalar(0.0)).unwrap();
        assert!((sup_distance(&u, &z).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn domain_mismatch_is_rejected() {
        let u = BVFunction1D::smooth(Domain1D::unit(), Piece::constant_scalar(0.0)).unwrap();
        assert!(lp_distance(&u, &sign(), 1.0).is_err());
    }
}
