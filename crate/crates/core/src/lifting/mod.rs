//! The lifting `μ[u] = |Du| ⊗ ν` of a BV function to `Ω × R^m`, stored as a list of
//! structured components, with its pairings and identities.

mod report;
mod tail;
mod testfn;

pub use report::{lifting_convergence_report, LiftingRow};
pub use tail::tail_gradient_mass;
pub use testfn::TestFunction;

use crate::bvfun::{BVFunction1D, CantorComponent, JumpAtom};
use crate::error::{Error, Result};
use crate::exec::{self, pairwise_sum};
use crate::integrand::{Integrand, SampleGrid};
use crate::quadrature::{Estimate, QuadratureSpec};
use crate::vector::{dot, norm, scale, Vector};

/// One structured piece of a lifting measure.
#[derive(Debug, Clone)]
pub enum LiftingComponent {
    /// `|∇u(x)| dx ⊗ δ_{u(x)}` on mesh interval `[lo, hi]`, polar `∇u / |∇u|`.
    Ac { lo: f64, hi: f64, mass: f64 },
    /// `δ_x ⊗` (image of `dθ` under `θ -> u^θ(x)`), polar `(u⁺ - u⁻) / |u⁺ - u⁻|`.
    Jump { atom: JumpAtom, mass: f64 },
    /// `|v| μ_C ⊗ δ_{ũ(x)}`, polar `v / |v|`.
    Cantor { component: CantorComponent, mass: f64 },
}

impl LiftingComponent {
    pub fn mass(&self) -> f64 {
        match self {
            LiftingComponent::Ac { mass, .. }
            | LiftingComponent::Jump { mass, .. }
            | LiftingComponent::Cantor { mass, .. } => *mass,
        }
    }
}

/// Extra structure of an integrand used to place quadrature splits.
#[derive(Debug, Clone, Default)]
pub struct PairingHints<'a> {
    /// x-points where the integrand may be non-smooth.
    pub x_breaks: Vec<f64>,
    /// Test function whose y-ball splits the jump segments.
    pub test_function: Option<&'a TestFunction>,
}

/// `μ[u]` for a BV function `u`.
#[derive(Debug, Clone)]
pub struct LiftingMeasure {
    source: BVFunction1D,
    components: Vec<LiftingComponent>,
    quadrature: QuadratureSpec,
}

/// Build `μ[u]`; ac masses are computed by adaptive quadrature per mesh interval.
pub fn build_lifting(u: &BVFunction1D, q: &QuadratureSpec) -> Result<LiftingMeasure> {
    q.validate()?;
    let idx: Vec<usize> = (0..u.pieces().len()).collect();
    let ac = exec::try_map(q.execution, &idx, |&i| {
        let (lo, hi) = u.interval(i);
        let p = &u.pieces()[i];
        let tol = q.ac_tolerance * (hi - lo) / u.domain().length();
        let mass = match p {
            crate::bvfun::Piece::Affine { slope, .. } => norm(slope) * (hi - lo),
            _ => q.with_tolerance(tol).integrate(|x| norm(&p.derivative(x)), lo, hi, &[], &[])?.value,
        };
        Ok::<_, Error>(LiftingComponent::Ac { lo, hi, mass })
    })?;
    let mut components: Vec<LiftingComponent> =
        ac.into_iter().filter(|c| c.mass() > 0.0).collect();
    for j in u.jumps() {
        components.push(LiftingComponent::Jump { atom: j.clone(), mass: j.mass() });
    }
    for c in u.cantor() {
        if c.mass() > 0.0 {
            components.push(LiftingComponent::Cantor { component: c.clone(), mass: c.mass() });
        }
    }
    Ok(LiftingMeasure { source: u.clone(), components, quadrature: *q })
}

/// `|μ[u]|(Ω × R^m)`.
pub fn total_mass(mu: &LiftingMeasure) -> f64 {
    mu.total_mass()
}

impl LiftingMeasure {
    pub fn components(&self) -> &[LiftingComponent] {
        &self.components
    }

    pub fn source(&self) -> &BVFunction1D {
        &self.source
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quadrature
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.components.iter().map(|c| c.mass()).collect::<Vec<_>>())
    }

    /// `∫ g(x, y, dμ/d|μ|) d|μ|(x, y)`.
    pub fn integrate_polar<G>(&self, g: G, hints: &PairingHints) -> Result<Estimate>
    where
        G: Fn(f64, &[f64], &[f64]) -> f64 + Sync,
    {
        let u = &self.source;
        let q = &self.quadrature;
        let depth = q.cantor_depth;
        let rule = q.theta_rule();
        let zones = u.cantor_zones();
        let parts = exec::try_map(q.execution, &self.components, |c| -> Result<Estimate> {
            match c {
                LiftingComponent::Ac { lo, hi, .. } => {
                    let i = u.piece_index(0.5 * (lo + hi));
                    let p = &u.pieces()[i];
                    let f = |x: f64| {
                        let grad = p.derivative(x);
                        let n = norm(&grad);
                        if n == 0.0 {
                            return 0.0;
                        }
                        g(x, &u.piece_value(i, x, depth), &scale(&grad, 1.0 / n)) * n
                    };
                    q.integrate(f, *lo, *hi, &hints.x_breaks, &zones)
                }
                LiftingComponent::Jump { atom, mass } => {
                    let x = atom.location;
                    let polar = atom.polar();
                    let window = match hints.test_function {
                        Some(phi) => phi.segment_window(&atom.left, &atom.right),
                        None => Some((0.0, 1.0)),
                    };
                    let Some((t0, t1)) = window else { return Ok(Estimate::default()) };
                    let v = rule.integrate(t0, t1, |t| g(x, &atom.average(t), &polar));
                    Ok(Estimate { value: v * mass, error: 0.0 })
                }
                LiftingComponent::Cantor { component, mass } => {
                    let dir = component.direction();
                    let mut cuts = u.interior_breakpoints().to_vec();
                    cuts.extend_from_slice(&hints.x_breaks);
                    if let Some((cy, ry)) = hints.test_function.and_then(|phi| phi.y_ball()) {
                        // the staircase crosses the ball boundary where φ has a kink
                        let (alpha, beta) = component.support();
                        let edge = |x: f64| {
                            let y = u.value_at(x, depth);
                            let d2: f64 = y.iter().zip(cy).map(|(a, b)| (a - b) * (a - b)).sum();
                            d2 - ry * ry
                        };
                        let mut edges = vec![alpha];
                        edges.extend(cuts.iter().copied().filter(|x| *x > alpha && *x < beta));
                        edges.push(beta);
                        edges.sort_by(f64::total_cmp);
                        for w in edges.windows(2) {
                            cuts.extend(tail::crossings(&edge, w[0], w[1]));
                        }
                    }
                    let e = q.integrate_cantor(
                        component.geometry(),
                        |x| g(x, &u.value_at(x, depth), &dir),
                        &cuts,
                    )?;
                    Ok(e * *mass)
                }
            }
        })?;
        let values: Vec<f64> = parts.iter().map(|e| e.value).collect();
        let errors: Vec<f64> = parts.iter().map(|e| e.error).collect();
        Ok(Estimate { value: pairwise_sum(&values), error: pairwise_sum(&errors) })
    }

    /// `⟨μ, φ⟩ = ∫ φ(x, y) dμ(x, y) ∈ R^m`.
    pub fn pair(&self, phi: &TestFunction) -> Result<Vector> {
        let hints = PairingHints { x_breaks: phi.kinks().to_vec(), test_function: Some(phi) };
        (0..self.source.dim())
            .map(|k| Ok(self.integrate_polar(|x, y, p| phi.eval(x, y) * p[k], &hints)?.value))
            .collect()
    }
}

/// `Q_φ(u, μ) = ∫ ∂ₓφ(x, u(x)) dx + ∫ ∇_yφ(x, y) · dμ(x, y)`.
///
/// Vanishes for `μ = μ[u]`. Fails with `SupportViolation` unless the x-support of
/// `φ` is compactly inside the domain.
#[allow(non_snake_case)]
pub fn Q(phi: &TestFunction, u: &BVFunction1D, mu: &LiftingMeasure) -> Result<f64> {
    let dom = u.domain();
    let (lo, hi) = phi.x_support();
    if !(lo > dom.a && hi < dom.b) {
        return Err(Error::SupportViolation { lo, hi, a: dom.a, b: dom.b });
    }
    let q = mu.quadrature();
    let depth = q.cantor_depth;
    let mut bps = u.breakpoints().to_vec();
    bps.extend_from_slice(phi.kinks());
    let first = q.integrate(
        |x| phi.grad_x(x, &u.value_at(x, depth)),
        lo,
        hi,
        &bps,
        &u.cantor_zones(),
    )?;
    let hints = PairingHints { x_breaks: phi.kinks().to_vec(), test_function: Some(phi) };
    let second = mu.integrate_polar(|x, y, p| dot(&phi.grad_y(x, y), p), &hints)?;
    Ok(first.value + second.value)
}

/// `∫ f(x, y, dμ[u]/d|μ[u]|) d|μ[u]|` for a positively 1-homogeneous `f`.
pub fn functional_via_lifting(f: &Integrand, u: &BVFunction1D, q: &QuadratureSpec) -> Result<f64> {
    let grid = SampleGrid::moderate(SampleGrid::default_xs(), u.dim());
    let defect = f.homogeneity_defect(&grid);
    if defect > 1e-9 {
        return Err(Error::NotHomogeneous { name: f.name().to_string(), defect });
    }
    let mu = build_lifting(u, q)?;
    let mut breaks = u.breakpoints().to_vec();
    breaks.extend_from_slice(f.exceptional_set());
    let hints = PairingHints { x_breaks: breaks, test_function: None };
    Ok(mu.integrate_polar(|x, y, p| f.eval(x, y, p), &hints)?.value)
}

/// `∫ h(x) dμ(x, y)`, which equals `∫ h dDu`.
pub fn pushforward_pair(
    mu: &LiftingMeasure,
    h: impl Fn(f64) -> f64 + Sync,
    breaks: &[f64],
) -> Result<Vector> {
    let hints = PairingHints { x_breaks: breaks.to_vec(), test_function: None };
    (0..mu.source().dim())
        .map(|k| Ok(mu.integrate_polar(|x, _, p| h(x) * p[k], &hints)?.value))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvfun::{total_variation, Domain1D, Piece};
    use crate::functional::evaluate_f;
    use crate::integrand::registry;

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn two_jumps() -> BVFunction1D {
        BVFunction1D::piecewise(
            Domain1D::symmetric(),
            vec![-0.3, 0.4],
            vec![
                Piece::scalar(|x| 0.5 * x * x, |x| x),
                Piece::scalar(|x| 1.0 + x.sin(), |x| x.cos()),
                Piece::affine_scalar(-1.0, -0.2),
            ],
        )
        .unwrap()
    }

    fn cantor() -> BVFunction1D {
        BVFunction1D::cantor_function(
            Domain1D::unit(),
            CantorComponent::middle_thirds(0.0, 1.0, 1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn component_structure() {
        let ramp = BVFunction1D::smooth(Domain1D::unit(), Piece::affine_scalar(1.0, 0.0)).unwrap();
        let mu = build_lifting(&ramp, &q()).unwrap();
        assert_eq!(mu.components().len(), 1);
        assert!(matches!(mu.components()[0], LiftingComponent::Ac { .. }));
        assert_eq!(total_mass(&mu), 1.0);

        let jump = BVFunction1D::step(Domain1D::symmetric(), vec![0.0], &[0.0, 1.0]).unwrap();
        let mu = build_lifting(&jump, &q()).unwrap();
        assert_eq!(mu.components().len(), 1);
        assert!(matches!(&mu.components()[0], LiftingComponent::Jump { mass, .. } if *mass == 1.0));

        let mu = build_lifting(&cantor(), &q()).unwrap();
        assert_eq!(mu.components().len(), 1);
        assert_eq!(total_mass(&mu), 1.0);
    }

    #[test]
    fn mass_matches_variation() {
        let u = two_jumps();
        let mu = build_lifting(&u, &q()).unwrap();
        assert!((total_mass(&mu) - total_variation(&u).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn q_vanishes_for_x_only_and_linear_in_y() {
        let u = two_jumps();
        let mu = build_lifting(&u, &q()).unwrap();
        let psi = TestFunction::x_only(
            |x| (1.0 - (x / 0.9).powi(2)).max(0.0).powi(3),
            |x| {
                let w = 1.0 - (x / 0.9).powi(2);
                if w <= 0.0 { 0.0 } else { -6.0 * x / 0.81 * w * w }
            },
            (-0.9, 0.9),
            1,
        );
        assert!(Q(&psi, &u, &mu).unwrap().abs() < 1e-9);
        let smooth = BVFunction1D::smooth(Domain1D::symmetric(), Piece::scalar(f64::exp, f64::exp)).unwrap();
        let mu = build_lifting(&smooth, &q()).unwrap();
        let s = |x: f64| (1.0 - (x / 0.8).powi(2)).max(0.0).powi(3);
        let ds = |x: f64| {
            let w = 1.0 - (x / 0.8).powi(2);
            if w <= 0.0 { 0.0 } else { -6.0 * x / 0.64 * w * w }
        };
        let phi = TestFunction::new(
            move |x, y| s(x) * y[0],
            move |x, y| ds(x) * y[0],
            move |x, _| smallvec::smallvec![s(x)],
            (-0.8, 0.8),
        );
        assert!(Q(&phi, &smooth, &mu).unwrap().abs() < 1e-9);
    }

    #[test]
    fn q_vanishes_for_random_bumps() {
        for u in [two_jumps(), cantor()] {
            let mu = build_lifting(&u, &q()).unwrap();
            for phi in TestFunction::random_bumps(20, u.domain(), -1.0, 2.0, 1, 11) {
                let v = Q(&phi, &u, &mu).unwrap();
                assert!(v.abs() <= 1e-6, "Q = {v}");
            }
        }
    }

    #[test]
    fn support_violation() {
        let u = two_jumps();
        let mu = build_lifting(&u, &q()).unwrap();
        let phi = TestFunction::bump(0.5, 0.6, &[0.0], 1.0, 1.0);
        assert!(matches!(Q(&phi, &u, &mu), Err(Error::SupportViolation { .. })));
    }

    #[test]
    fn lifting_functional_matches_direct() {
        let u = two_jumps();
        let f = registry("abs").unwrap();
        let a = functional_via_lifting(&f, &u, &q()).unwrap();
        assert!((a - total_variation(&u).unwrap()).abs() < 1e-9);
        let g = Integrand::new("ya", |_, y: &[f64], a: &[f64]| y[0].abs() * norm(a));
        let jump = BVFunction1D::step(Domain1D::symmetric(), vec![0.0], &[0.0, 1.0]).unwrap();
        assert!((functional_via_lifting(&g, &jump, &q()).unwrap() - 0.5).abs() < 1e-15);
        let gr = g.clone().with_recession(|_, y: &[f64], a: &[f64]| y[0].abs() * norm(a));
        let d = evaluate_f(&gr, &u, &q()).unwrap().total;
        assert!((functional_via_lifting(&g, &u, &q()).unwrap() - d).abs() < 1e-8);
        assert!(matches!(
            functional_via_lifting(&registry("area").unwrap(), &u, &q()),
            Err(Error::NotHomogeneous { .. })
        ));
    }

    #[test]
    fn pushforward_captures_atoms_and_density() {
        let jump = BVFunction1D::step(Domain1D::symmetric(), vec![0.0], &[-1.0, 1.0]).unwrap();
        let mu = build_lifting(&jump, &q()).unwrap();
        let h = |x: f64| if x.abs() < 0.1 { 1.0 } else { 0.0 };
        assert!((pushforward_pair(&mu, h, &[-0.1, 0.1]).unwrap()[0] - 2.0).abs() < 1e-14);
        assert_eq!(pushforward_pair(&mu, |_| 0.0, &[]).unwrap()[0], 0.0);
        let ramp = BVFunction1D::smooth(Domain1D::unit(), Piece::affine_scalar(1.0, 0.0)).unwrap();
        let mu = build_lifting(&ramp, &q()).unwrap();
        let v = pushforward_pair(&mu, |x| x * x, &[]).unwrap()[0];
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
    }
}
