use std::fmt;
use std::sync::Arc;

use super::{BVFunction1D, Piece};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::vector::{Matrix, Vector};

type MapFn = Arc<dyn Fn(&[f64]) -> Vector + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Matrix + Send + Sync>;

/// A C¹ map `g: R^m -> R^n` with its Jacobian (an `n × m` matrix).
#[derive(Clone)]
pub struct VectorMap {
    in_dim: usize,
    out_dim: usize,
    value: MapFn,
    gradient: GradFn,
}

impl fmt::Debug for VectorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorMap(R^{} -> R^{})", self.in_dim, self.out_dim)
    }
}

impl VectorMap {
    pub fn new(
        in_dim: usize,
        out_dim: usize,
        value: impl Fn(&[f64]) -> Vector + Send + Sync + 'static,
        gradient: impl Fn(&[f64]) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        VectorMap { in_dim, out_dim, value: Arc::new(value), gradient: Arc::new(gradient) }
    }

    /// Scalar map `R -> R`.
    pub fn scalar(
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dg: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        VectorMap::new(
            1,
            1,
            move |y| smallvec::smallvec![g(y[0])],
            move |y| Matrix::from_rows(1, 1, vec![dg(y[0])]),
        )
    }

    pub fn identity(m: usize) -> Self {
        VectorMap::new(m, m, |y| y.into(), move |_| Matrix::identity(m))
    }

    /// `y -> M y`.
    pub fn linear(m: Matrix) -> Self {
        let (rows, cols) = (m.rows, m.cols);
        let mv = m.clone();
        VectorMap::new(cols, rows, move |y| mv.mul_vec(y), move |_| m.clone())
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn apply(&self, y: &[f64]) -> Vector {
        (self.value)(y)
    }

    pub fn gradient(&self, y: &[f64]) -> Matrix {
        (self.gradient)(y)
    }
}

/// `g ∘ u`. Pieces become `g(p(x))` with derivative `∇g(p(x)) p'(x)`; jumps of the
/// result are `g(u⁺) - g(u⁻)` wherever these differ.
pub fn compose(g: &VectorMap, u: &BVFunction1D) -> Result<BVFunction1D> {
    if u.has_cantor() {
        return Err(Error::UnsupportedCantorComposition);
    }
    if g.in_dim() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: g.in_dim() });
    }
    let pieces = u
        .pieces()
        .iter()
        .map(|p| {
            let (gv, gd) = (g.clone(), g.clone());
            let (pv, pd) = (p.clone(), p.clone());
            Piece::general(
                g.out_dim(),
                move |x| gv.apply(&pv.value(x)),
                move |x| gd.gradient(&pd.value(x)).mul_vec(&pd.derivative(x)),
            )
        })
        .collect();
    BVFunction1D::new(u.domain(), u.interior_breakpoints().to_vec(), pieces, vec![])
}

/// Vol'pert averaged superposition `∫₀¹ ∇g(u^θ(x)) dθ` with the default θ rule.
pub fn volpert_average(g: &VectorMap, u: &BVFunction1D, x: f64) -> Matrix {
    volpert_average_with(g, u, x, &GaussLegendre::unit(32))
}

pub fn volpert_average_with(
    g: &VectorMap,
    u: &BVFunction1D,
    x: f64,
    rule: &GaussLegendre,
) -> Matrix {
    let Some(jump) = u.jump_at(x) else {
        return g.gradient(&u.value(x));
    };
    let grads: Vec<Matrix> = rule.nodes.iter().map(|t| g.gradient(&jump.average(*t))).collect();
    let (rows, cols) = (g.out_dim(), g.in_dim());
    let mut out = Matrix::zeros(rows, cols);
    let mut samples = vec![0.0; grads.len()];
    for k in 0..rows * cols {
        for (s, m) in samples.iter_mut().zip(&grads) {
            *s = m.data[k];
        }
        out.data[k] = rule.average(&samples);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvfun::{decompose, Domain1D};

    fn ramp() -> BVFunction1D {
        BVFunction1D::smooth(Domain1D::unit(), Piece::affine_scalar(1.0, 0.0)).unwrap()
    }

    fn unit_jump() -> BVFunction1D {
        BVFunction1D::step(Domain1D::symmetric(), vec![0.0], &[0.0, 1.0]).unwrap()
    }

    #[test]
    fn doubling_doubles_density() {
        let v = compose(&VectorMap::scalar(|y| 2.0 * y, |_| 2.0), &ramp()).unwrap();
        assert!((v.gradient(0.37)[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn square_of_ramp() {
        let v = compose(&VectorMap::scalar(|y| y * y, |y| 2.0 * y), &ramp()).unwrap();
        for x in [0.1, 0.5, 0.9] {
            assert!((v.gradient(x)[0] - 2.0 * x).abs() < 1e-14);
        }
    }

    #[test]
    fn arctan_jump_mass() {
        let v = compose(&VectorMap::scalar(f64::atan, |y| 1.0 / (1.0 + y * y)), &unit_jump())
            .unwrap();
        let d = decompose(&v).unwrap();
        assert_eq!(d.jumps.len(), 1);
        assert!((d.jump_mass - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn rejects_cantor() {
        let u = BVFunction1D::cantor_function(
            Domain1D::new(-0.5, 1.5).unwrap(),
            crate::bvfun::CantorComponent::middle_thirds(0.0, 1.0, 1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(
            compose(&VectorMap::identity(1), &u).unwrap_err(),
            Error::UnsupportedCantorComposition
        );
    }

    #[test]
    fn volpert_averages() {
        let sq = VectorMap::scalar(|y| y * y, |y| 2.0 * y);
        let m = volpert_average(&sq, &unit_jump(), 0.0);
        assert!((m.get(0, 0) - 1.0).abs() < 1e-14);
        let m = volpert_average(&sq, &ramp(), 0.25);
        assert_eq!(m.get(0, 0), 0.5);
        let m = volpert_average(&VectorMap::identity(1), &unit_jump(), 0.0);
        assert_eq!(m, Matrix::identity(1));
    }
}
