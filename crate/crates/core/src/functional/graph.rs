use super::{nudge, FunctionalValue};
use crate::bvfun::BVFunction1D;
use crate::error::{Error, Result};
use crate::integrand::{perspective, Integrand, PerspectiveIntegrand};
use crate::quadrature::QuadratureSpec;
use crate::vector::{norm, Vector};

/// `(first, rest...)` as a single vector.
fn prepend(first: f64, rest: &[f64]) -> Vector {
    let mut v = Vector::with_capacity(rest.len() + 1);
    v.push(first);
    v.extend_from_slice(rest);
    v
}

fn finite(v: f64, x: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NoRecession { x, spread: f64::INFINITY })
    }
}

fn singular_density(p: &PerspectiveIntegrand, x: f64, y: &[f64], polar: &[f64]) -> f64 {
    p.eval(x, &prepend(x.abs(), y), &prepend(0.0, polar))
}

/// Graph evaluation: `∫ f̃(x, (|x|, u), dDU/d|DU|) d|DU|` for `U(x) = (|x|, u(x))`,
/// with the perspective integrand `f̃`.
///
/// On the ac part `dDU/d|DU| = (sgn x, ∇u) / √(1 + |∇u|²)` (the sign at 0 taken
/// as +1) and `d|DU| = √(1 + |∇u|²) dx`; on the singular parts the t-slot is 0.
pub fn evaluate_f_graph(f: &Integrand, u: &BVFunction1D, q: &QuadratureSpec) -> Result<FunctionalValue> {
    q.validate()?;
    let p = perspective(f)?;
    let dom = u.domain();
    let n = f.exceptional_set();
    let depth = q.cantor_depth;

    let mut bps: Vec<f64> = u.breakpoints().to_vec();
    bps.extend_from_slice(n);
    if dom.contains(0.0) {
        bps.push(0.0);
    }
    let density = |x: f64| {
        let x = nudge(x, n);
        let y = u.value_at(x, depth);
        let grad = u.gradient(x);
        let len = (1.0 + norm(&grad).powi(2)).sqrt();
        let sign = if x < 0.0 { -1.0 } else { 1.0 };
        let dir: Vector = std::iter::once(sign / len).chain(grad.iter().map(|g| g / len)).collect();
        p.eval(x, &prepend(x.abs(), &y), &dir) * len
    };
    let ac = q.integrate(density, dom.a, dom.b, &bps, &u.cantor_zones())?;

    let rule = q.theta_rule();
    let mut jump = 0.0;
    for j in u.jumps() {
        let polar = j.polar();
        let x = j.location;
        let s = rule.integrate(0.0, 1.0, |t| singular_density(&p, x, &j.average(t), &polar));
        jump += finite(s, x)? * j.mass();
    }

    let mut cantor = 0.0;
    let mut cantor_err = 0.0;
    let mut cuts: Vec<f64> = u.interior_breakpoints().to_vec();
    cuts.extend_from_slice(n);
    for c in u.cantor() {
        let dir = c.direction();
        let est = q.integrate_cantor(
            c.geometry(),
            |x| singular_density(&p, x, &u.value_at(x, depth), &dir),
            &cuts,
        )?;
        let (lo, _) = c.support();
        cantor += finite(est.value, lo)? * c.mass();
        cantor_err += est.error * c.mass();
    }

    Ok(FunctionalValue::assemble(ac.value, jump, cantor, ac.error + cantor_err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvfun::{Domain1D, Piece};
    use crate::functional::evaluate_f;
    use crate::integrand::registry;

    #[test]
    fn ramp_on_both_paths() {
        let q = QuadratureSpec::default();
        let u = BVFunction1D::smooth(Domain1D::unit(), Piece::affine_scalar(1.0, 0.0)).unwrap();
        let a = evaluate_f_graph(&registry("abs").unwrap(), &u, &q).unwrap();
        assert!((a.total - 1.0).abs() < 1e-14);
        let b = evaluate_f_graph(&registry("area").unwrap(), &u, &q).unwrap();
        assert!((b.total - 2f64.sqrt()).abs() < 1e-14);
        assert!((evaluate_f(&registry("area").unwrap(), &u, &q).unwrap().total - b.total).abs() < 1e-14);
    }

    #[test]
    fn nonconvex_three_jumps_agree() {
        let q = QuadratureSpec::default();
        let u = BVFunction1D::piecewise(
            Domain1D::symmetric(),
            vec![-0.5, 0.1, 0.6],
            vec![
                Piece::scalar(|x| x * x, |x| 2.0 * x),
                Piece::constant_scalar(1.3),
                Piece::scalar(|x| (3.0 * x).sin(), |x| 3.0 * (3.0 * x).cos()),
                Piece::affine_scalar(-2.0, 0.5),
            ],
        )
        .unwrap();
        let f = registry("nonconvex").unwrap();
        let a = evaluate_f(&f, &u, &q).unwrap();
        let b = evaluate_f_graph(&f, &u, &q).unwrap();
        assert!((a.total - b.total).abs() <= 1e-6, "{} vs {}", a.total, b.total);
    }
}
