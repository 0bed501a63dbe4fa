//! Convolution with the triweight kernel `K(t) = 35/32 (1 - t²)³` after even reflection
//! of `u` across both endpoints.
//!
//! Both the value and the derivative of `u_ε = K_ε * u` are written as integrals against
//! the derivative measure `Du`, so jumps and Cantor parts are handled by their own exact
//! rules:
//!
//! ```text
//! u_ε(x)  = u((x-ε)+) + ∫_(x-ε, x+ε) Φ((x-z)/ε) dDu(z)
//! u_ε'(x) = ∫ K_ε(x-z) dDu(z)
//! ```
//!
//! where `Φ` is the cumulative kernel.

use std::sync::Arc;

use crate::bvfun::{BVFunction1D, Piece};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::vector::Vector;

/// The kernel on `[-1, 1]`. C² with unit mass.
pub fn kernel(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        let s = 1.0 - t * t;
        35.0 / 32.0 * s * s * s
    }
}

/// `Φ(t) = ∫_{-1}^t K`.
pub fn kernel_cdf(t: f64) -> f64 {
    if t <= -1.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let t2 = t * t;
        0.5 + 35.0 / 32.0 * t * (1.0 - t2 * (1.0 - t2 * (0.6 - t2 / 7.0)))
    }
}

struct Mollifier {
    u: BVFunction1D,
    eps: f64,
    q: QuadratureSpec,
}

impl Mollifier {
    /// `∫_(lo, hi) w dDu` for `a <= lo < hi <= b`.
    fn against_du(&self, w: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Result<Vector> {
        let u = &self.u;
        let m = u.dim();
        let mut out = Vector::from_elem(0.0, m);
        if hi <= lo {
            return Ok(out);
        }
        for (i, p) in u.pieces().iter().enumerate() {
            let (pl, ph) = u.interval(i);
            let (l, h) = (pl.max(lo), ph.min(hi));
            if h <= l {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                let e = self.q.integrate(|s| w(s) * p.derivative(s)[c], l, h, &[], &[])?;
                *o += e.value;
            }
        }
        for j in u.jumps() {
            if j.location > lo && j.location < hi {
                let ws = w(j.location);
                for (o, d) in out.iter_mut().zip(j.difference()) {
                    *o += ws * d;
                }
            }
        }
        for c in u.cantor() {
            let (alpha, beta) = c.support();
            if beta <= lo || alpha >= hi {
                continue;
            }
            let e = self.q.integrate_cantor(
                c.geometry(),
                |s| if s > lo && s < hi { w(s) } else { 0.0 },
                &[lo, hi],
            )?;
            for (o, v) in out.iter_mut().zip(c.mass_vector()) {
                *o += e.value * v;
            }
        }
        Ok(out)
    }

    /// `∫_(x-ε, x+ε) G((x-z)/ε) dDu_ext(z)` with `u_ext` the even reflection of `u`.
    fn window(&self, x: f64, g: &dyn Fn(f64) -> f64) -> Result<Vector> {
        let (a, b) = (self.u.domain().a, self.u.domain().b);
        let eps = self.eps;
        let direct = |z: f64| g((x - z) / eps);
        let mut out = self.against_du(&direct, (x - eps).max(a), (x + eps).min(b))?;
        if x - eps < a {
            let left = |s: f64| g((x - (2.0 * a - s)) / eps);
            let r = self.against_du(&left, a, 2.0 * a - x + eps)?;
            for (o, v) in out.iter_mut().zip(r) {
                *o -= v;
            }
        }
        if x + eps > b {
            let right = |s: f64| g((x - (2.0 * b - s)) / eps);
            let r = self.against_du(&right, 2.0 * b - x - eps, b)?;
            for (o, v) in out.iter_mut().zip(r) {
                *o -= v;
            }
        }
        Ok(out)
    }

    fn value(&self, x: f64) -> Result<Vector> {
        let (a, eps) = (self.u.domain().a, self.eps);
        let z = x - eps;
        let mut base = if z >= a { self.u.right_limit(z) } else { self.u.left_limit(2.0 * a - z) };
        let w = self.window(x, &kernel_cdf)?;
        for (o, v) in base.iter_mut().zip(w) {
            *o += v;
        }
        Ok(base)
    }

    fn derivative(&self, x: f64) -> Result<Vector> {
        let eps = self.eps;
        let mut w = self.window(x, &kernel)?;
        for o in w.iter_mut() {
            *o /= eps;
        }
        Ok(w)
    }
}

fn or_nan(r: Result<Vector>, m: usize) -> Vector {
    r.unwrap_or_else(|_| Vector::from_elem(f64::NAN, m))
}

/// `K_ε * u`, a C¹ function on the domain of `u`.
///
/// All mesh intervals share one evaluator, so the result has no jumps; the mesh only
/// marks where the kernel window meets a singular point of `u`.
///
/// Values that fail to integrate come back as NaN; downstream consumers treat
/// non-finite values as evaluation failures.
pub fn mollify_with(u: &BVFunction1D, eps: f64, q: &QuadratureSpec) -> Result<BVFunction1D> {
    let dom = u.domain();
    if !(eps > 0.0 && eps < dom.length() / 4.0) {
        return Err(Error::InvalidParameter(format!(
            "mollification radius must lie in (0, {}), got {eps}",
            dom.length() / 4.0
        )));
    }
    let m = u.dim();
    let tol = (0.1 * q.ac_tolerance).max(1e-14);
    let moll = Arc::new(Mollifier { u: u.clone(), eps, q: q.with_tolerance(tol) });
    let piece = Piece::general(
        m,
        {
            let moll = Arc::clone(&moll);
            move |x| or_nan(moll.value(x), m)
        },
        move |x| or_nan(moll.derivative(x), m),
    );
    let mesh = window_edges(u, eps);
    let pieces = vec![piece; mesh.len() + 1];
    BVFunction1D::piecewise(dom, mesh, pieces)
}

/// Points where the kernel window starts or stops overlapping a singular point of `u`
/// (a breakpoint, an end of a Cantor support, or a domain end). The mollified function
/// is C¹ across them; they only serve as a quadrature mesh.
fn window_edges(u: &BVFunction1D, eps: f64) -> Vec<f64> {
    let dom = u.domain();
    let mut singular: Vec<f64> = u.breakpoints().to_vec();
    for c in u.cantor() {
        let (alpha, beta) = c.support();
        singular.extend([alpha, beta]);
    }
    let mut pts: Vec<f64> = singular
        .iter()
        .flat_map(|s| [s - eps, s + eps])
        .filter(|x| *x > dom.a && *x < dom.b)
        .collect();
    pts.sort_by(f64::total_cmp);
    let min_gap = 1e-9 * dom.length();
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    for x in pts {
        let clear_left = out.last().map_or(x - dom.a, |l| x - l) > min_gap;
        if clear_left && dom.b - x > min_gap {
            out.push(x);
        }
    }
    out
}

pub fn mollify(u: &BVFunction1D, eps: f64) -> Result<BVFunction1D> {
    mollify_with(u, eps, &QuadratureSpec::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvfun::{lp_distance, total_variation, CantorComponent, Domain1D};
    use crate::quadrature::GaussLegendre;

    #[test]
    fn kernel_has_unit_mass_and_cdf_matches() {
        let gl = GaussLegendre::unit(16);
        assert!((gl.integrate(-1.0, 1.0, kernel) - 1.0).abs() < 1e-14);
        for &t in &[-0.7, -0.1, 0.0, 0.4, 0.95] {
            let c = gl.integrate(-1.0, t, kernel);
            assert!((c - kernel_cdf(t)).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_is_preserved() {
        let u = BVFunction1D::step(Domain1D::unit(), vec![], &[2.5]).unwrap();
        let v = mollify(&u, 0.1).unwrap();
        for &x in &[0.0, 0.05, 0.5, 0.97, 1.0] {
            assert!((v.value_scalar(x) - 2.5).abs() < 1e-14);
            assert!(v.gradient(x)[0].abs() < 1e-14);
        }
    }

    #[test]
    fn affine_interior_is_preserved() {
        let u = BVFunction1D::smooth(Domain1D::unit(), Piece::affine_scalar(2.0, 1.0)).unwrap();
        let v = mollify(&u, 0.1).unwrap();
        // the kernel is symmetric, so linear functions are reproduced away from the ends
        for &x in &[0.2, 0.5, 0.8] {
            assert!((v.value_scalar(x) - (1.0 + 2.0 * x)).abs() < 1e-12);
            assert!((v.gradient(x)[0] - 2.0).abs() < 1e-12);
        }
        // reflection flattens the slope at the boundary
        assert!(v.gradient(0.0)[0].abs() < 1e-12);
    }

    #[test]
    fn smoothed_jump_matches_cdf() {
        let u = BVFunction1D::step(Domain1D::symmetric(), vec![0.0], &[0.0, 1.0]).unwrap();
        let eps = 0.2;
        let v = mollify(&u, eps).unwrap();
        for &x in &[-0.3, -0.1, 0.0, 0.05, 0.19, 0.5] {
            let want = kernel_cdf(x / eps);
            assert!((v.value_scalar(x) - want).abs() < 1e-13, "{x}");
            assert!((v.gradient(x)[0] - kernel(x / eps) / eps).abs() < 1e-12);
        }
        assert_eq!(v.jumps().len(), 0);
        // jump at 0 and both domain ends, each ± ε
        assert_eq!(v.breakpoints(), &[-1.0, -0.8, -0.2, 0.2, 0.8, 1.0]);
        assert!((total_variation(&v).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let c = CantorComponent::middle_thirds(0.0, 1.0, 1.0).unwrap();
        let u = BVFunction1D::cantor_function(Domain1D::unit(), c).unwrap();
        let v = mollify(&u, 0.05).unwrap();
        assert!(v.derivative_defect(5) < 1e-5);
    }

    #[test]
    fn l1_error_bounded_by_radius_times_variation() {
        let u = BVFunction1D::step(Domain1D::symmetric(), vec![-0.5, 0.2, 0.6], &[0.0, 1.0, -1.0, 0.5])
            .unwrap();
        for &eps in &[0.2, 0.05, 0.01] {
            let v = mollify(&u, eps).unwrap();
            let d = lp_distance(&v, &u, 1.0).unwrap();
            assert!(d <= eps * total_variation(&u).unwrap());
        }
    }

    #[test]
    fn radius_is_validated() {
        let u = BVFunction1D::step(Domain1D::unit(), vec![], &[1.0]).unwrap();
        assert!(mollify(&u, 0.3).is_err());
        assert!(mollify(&u, 0.0).is_err());
    }
}
