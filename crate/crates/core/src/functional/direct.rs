use super::{nudge, segments, FunctionalValue};
use crate::bvfun::BVFunction1D;
use crate::error::Result;
use crate::exec::{self, pairwise_sum};
use crate::integrand::Integrand;
use crate::quadrature::{Estimate, GaussLegendre, QuadratureSpec};

fn ac_on(f: &Integrand, u: &BVFunction1D, lo: f64, hi: f64, q: &QuadratureSpec) -> Result<Estimate> {
    let n = f.exceptional_set();
    let depth = q.cantor_depth;
    let mut bps: Vec<f64> = u.breakpoints().to_vec();
    bps.extend_from_slice(n);
    let integrand = |x: f64| {
        let x = nudge(x, n);
        let i = u.piece_index(x);
        f.eval(x, &u.piece_value(i, x, depth), &u.pieces()[i].derivative(x))
    };
    q.integrate(integrand, lo, hi, &bps, &u.cantor_zones())
}

/// `∫₀¹ f^∞(x, u^θ, polar) dθ` with the θ-rule and its half-order companion.
fn theta_average(
    f: &Integrand,
    x: f64,
    jump: &crate::bvfun::JumpAtom,
    fine: &GaussLegendre,
    coarse: &GaussLegendre,
) -> Result<(f64, f64)> {
    let polar = jump.polar();
    let sample = |rule: &GaussLegendre| -> Result<f64> {
        let vals = rule
            .nodes
            .iter()
            .map(|t| f.recession(x, &jump.average(*t), &polar))
            .collect::<Result<Vec<f64>>>()?;
        Ok(rule.average(&vals))
    };
    let v = sample(fine)?;
    let c = sample(coarse)?;
    Ok((v, (v - c).abs()))
}

/// Direct evaluation: adaptive quadrature on the ac part, a Gauss–Legendre θ-average
/// at each jump atom, and Cantor-measure quadrature of `f^∞` along each Cantor part.
pub fn evaluate_f(f: &Integrand, u: &BVFunction1D, q: &QuadratureSpec) -> Result<FunctionalValue> {
    q.validate()?;
    let segs = segments(u);
    let ac = exec::try_map(q.execution, &segs, |&(lo, hi)| ac_on(f, u, lo, hi, q))?;

    let fine = q.theta_rule();
    let coarse = GaussLegendre::unit((q.theta_order / 2).max(1));
    let mut jump_vals = Vec::with_capacity(u.jumps().len());
    let mut jump_errs = Vec::with_capacity(u.jumps().len());
    for j in u.jumps() {
        let (v, e) = theta_average(f, j.location, j, &fine, &coarse)?;
        jump_vals.push(j.mass() * v);
        jump_errs.push(j.mass() * e);
    }

    let mut cantor_vals = Vec::new();
    let mut cantor_errs = Vec::new();
    let mut cuts: Vec<f64> = u.interior_breakpoints().to_vec();
    cuts.extend_from_slice(f.exceptional_set());
    for c in u.cantor() {
        let dir = c.direction();
        let depth = q.cantor_depth;
        let failure = std::cell::OnceCell::new();
        let est = q.integrate_cantor(
            c.geometry(),
            |x| match f.recession(x, &u.value_at(x, depth), &dir) {
                Ok(v) => v,
                Err(e) => {
                    let _ = failure.set(e);
                    f64::NAN
                }
            },
            &cuts,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let est = est? * c.mass();
        cantor_vals.push(est.value);
        cantor_errs.push(est.error);
    }

    let ac_vals: Vec<f64> = ac.iter().map(|e| e.value).collect();
    let errors: Vec<f64> = ac
        .iter()
        .map(|e| e.error)
        .chain(jump_errs)
        .chain(cantor_errs)
        .collect();
    Ok(FunctionalValue::assemble(
        pairwise_sum(&ac_vals),
        pairwise_sum(&jump_vals),
        pairwise_sum(&cantor_vals),
        pairwise_sum(&errors),
    ))
}
