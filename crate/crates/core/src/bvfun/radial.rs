use std::f64::consts::PI;

use super::{distance, BVFunction1D};
use crate::error::{Error, Result};
use crate::exec::pairwise_sum;
use crate::quadrature::QuadratureSpec;
use crate::vector::{norm, sub};

/// `u(x) = g(|x|)` on the ball of radius R in R^d, stored by its profile `g` on (0, R).
#[derive(Debug, Clone)]
pub struct RadialBV {
    profile: BVFunction1D,
    dimension: u32,
}

impl RadialBV {
    pub fn new(profile: BVFunction1D, dimension: u32) -> Result<Self> {
        if profile.domain().a != 0.0 {
            return Err(Error::InvalidFunction(format!(
                "radial profile must start at r = 0, got {}",
                profile.domain().a
            )));
        }
        if dimension < 2 {
            return Err(Error::InvalidParameter(format!(
                "radial dimension must be at least 2, got {dimension}"
            )));
        }
        Ok(RadialBV { profile, dimension })
    }

    pub fn profile(&self) -> &BVFunction1D {
        &self.profile
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// Exponent `d - 1` of the radial weight.
    pub fn weight_exponent(&self) -> u32 {
        self.dimension - 1
    }
}

/// Surface area of the unit sphere in R^d.
pub fn sphere_area(d: u32) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (d - 2) as f64 * sphere_area(d - 2),
    }
}

fn weight(r: f64, k: u32) -> f64 {
    if k == 0 {
        1.0
    } else {
        r.powi(k as i32)
    }
}

/// `∫ r^k d|Du|(r)`. With `k = 0` this is exactly the total variation.
pub fn weighted_total_variation(u: &BVFunction1D, k: u32, q: &QuadratureSpec) -> Result<f64> {
    let mut parts = Vec::new();
    for (i, p) in u.pieces().iter().enumerate() {
        let (lo, hi) = u.interval(i);
        let tol = q.ac_tolerance * (hi - lo) / u.domain().length();
        let e = q.with_tolerance(tol).integrate(
            |r| norm(&p.derivative(r)) * weight(r, k),
            lo,
            hi,
            &[],
            &[],
        )?;
        parts.push(e.value);
    }
    for j in u.jumps() {
        parts.push(j.mass() * weight(j.location, k));
    }
    for c in u.cantor() {
        let e = q.integrate_cantor(c.geometry(), |r| weight(r, k), &[])?;
        parts.push(c.mass() * e.value);
    }
    Ok(pairwise_sum(&parts))
}

/// `∫ |u - v|^p r^k dr`.
pub fn weighted_lp_integral(
    u: &BVFunction1D,
    v: &BVFunction1D,
    p: f64,
    k: u32,
    q: &QuadratureSpec,
) -> Result<f64> {
    if k == 0 {
        return distance::lp_integral(u, v, p, q);
    }
    if u.domain() != v.domain() {
        return Err(Error::InvalidParameter("profiles live on different domains".into()));
    }
    let dom = u.domain();
    let mut zones = u.cantor_zones();
    zones.extend(v.cantor_zones());
    let depth = q.cantor_depth;
    let f = |r: f64| {
        norm(&sub(&u.value_at(r, depth), &v.value_at(r, depth))).powf(p) * weight(r, k)
    };
    Ok(q.integrate(f, dom.a, dom.b, &distance::merged_mesh(u, v), &zones)?.value)
}

/// |Du|(B_R) for the radial extension.
pub fn radial_total_variation_with(ru: &RadialBV, q: &QuadratureSpec) -> Result<f64> {
    Ok(sphere_area(ru.dimension) * weighted_total_variation(&ru.profile, ru.weight_exponent(), q)?)
}

pub fn radial_total_variation(ru: &RadialBV) -> Result<f64> {
    radial_total_variation_with(ru, &QuadratureSpec::default())
}

/// `‖u - v‖_{L^p(B_R)}` for two radial functions of the same dimension.
pub fn radial_lp_distance_with(
    ru: &RadialBV,
    rv: &RadialBV,
    p: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    if ru.dimension != rv.dimension {
        return Err(Error::InvalidParameter(format!(
            "radial dimensions differ: {} and {}",
            ru.dimension, rv.dimension
        )));
    }
    let s = weighted_lp_integral(&ru.profile, &rv.profile, p, ru.weight_exponent(), q)?;
    Ok((sphere_area(ru.dimension) * s).powf(1.0 / p))
}

pub fn radial_lp_distance(ru: &RadialBV, rv: &RadialBV, p: f64) -> Result<f64> {
    radial_lp_distance_with(ru, rv, p, &QuadratureSpec::default())
}

/// `‖u‖_{L^p(B_R)}`.
pub fn radial_lp_norm_with(ru: &RadialBV, p: f64, q: &QuadratureSpec) -> Result<f64> {
    let zero = ru.profile.zero_like()?;
    let s = weighted_lp_integral(&ru.profile, &zero, p, ru.weight_exponent(), q)?;
    Ok((sphere_area(ru.dimension) * s).powf(1.0 / p))
}

pub fn radial_lp_norm(ru: &RadialBV, p: f64) -> Result<f64> {
    radial_lp_norm_with(ru, p, &QuadratureSpec::default())
}
