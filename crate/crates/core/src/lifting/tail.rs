use crate::bvfun::{BVFunction1D, JumpAtom};
use crate::error::Result;
use crate::exec::pairwise_sum;
use crate::quadrature::QuadratureSpec;
use crate::vector::{dot, norm};

const SAMPLES: usize = 512;

/// Sign changes of `g` on `[lo, hi]`, located by sampling and bisection.
pub(crate) fn crossings(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let h = (hi - lo) / SAMPLES as f64;
    let mut x0 = lo;
    let mut g0 = g(lo);
    for i in 1..=SAMPLES {
        let x1 = if i == SAMPLES { hi } else { lo + h * i as f64 };
        let g1 = g(x1);
        if (g0 < 0.0) != (g1 < 0.0) {
            let (mut a, mut b) = (x0, x1);
            let neg_left = g0 < 0.0;
            while b - a > 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if (g(m) < 0.0) == neg_left {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        x0 = x1;
        g0 = g1;
    }
    out
}

/// `|{θ ∈ [0, 1] : |u^θ| >= k}|`.
fn jump_fraction(j: &JumpAtom, k: f64) -> f64 {
    let d = j.difference();
    let a = dot(&d, &d);
    let b = 2.0 * dot(&j.left, &d);
    let c = dot(&j.left, &j.left) - k * k;
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return 1.0;
    }
    let sq = disc.sqrt();
    // numerically stable roots
    let qv = -0.5 * (b + b.signum() * sq);
    let (mut r0, mut r1) = if qv == 0.0 { (0.0, 0.0) } else { (qv / a, c / qv) };
    if r0 > r1 {
        std::mem::swap(&mut r0, &mut r1);
    }
    let inside = (r1.min(1.0) - r0.max(0.0)).max(0.0);
    1.0 - inside
}

/// `|μ[u]|({(x, y) : |y| >= k})`.
pub fn tail_gradient_mass(u: &BVFunction1D, k: f64, q: &QuadratureSpec) -> Result<f64> {
    let depth = q.cantor_depth;
    let mut parts = Vec::new();
    for (i, p) in u.pieces().iter().enumerate() {
        let (lo, hi) = u.interval(i);
        let g = |x: f64| norm(&u.piece_value(i, x, depth)) - k;
        let mut pts = vec![lo];
        pts.extend(crossings(&g, lo, hi));
        pts.push(hi);
        for w in pts.windows(2) {
            if w[1] <= w[0] || g(0.5 * (w[0] + w[1])) < 0.0 {
                continue;
            }
            let tol = q.ac_tolerance * (w[1] - w[0]) / u.domain().length();
            let e = q.with_tolerance(tol).integrate(
                |x| norm(&p.derivative(x)),
                w[0],
                w[1],
                &[],
                &u.cantor_zones(),
            )?;
            parts.push(e.value);
        }
    }
    for j in u.jumps() {
        parts.push(j.mass() * jump_fraction(j, k));
    }
    for c in u.cantor() {
        let (alpha, beta) = c.support();
        let g = |x: f64| norm(&u.value_at(x, depth)) - k;
        let mut cuts = u.interior_breakpoints().to_vec();
        let mut edges = vec![alpha];
        edges.extend(cuts.iter().copied().filter(|x| *x > alpha && *x < beta));
        edges.push(beta);
        for w in edges.windows(2) {
            cuts.extend(crossings(&g, w[0], w[1]));
        }
        let e = q.integrate_cantor(c.geometry(), |x| if g(x) >= 0.0 { 1.0 } else { 0.0 }, &cuts)?;
        parts.push(c.mass() * e.value);
    }
    Ok(pairwise_sum(&parts))
}
