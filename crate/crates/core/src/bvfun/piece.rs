use std::fmt;
use std::sync::Arc;

use crate::vector::{norm, Vector};

/// Evaluation procedure `x -> R^m`.
pub type ValueFn = Arc<dyn Fn(f64) -> Vector + Send + Sync>;

/// Smoothness tag of a [`Piece`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Affine,
    GeneralC1,
}

/// The restriction of a BV function to one mesh interval: a C¹ map into R^m
/// together with its derivative.
#[derive(Clone)]
pub enum Piece {
    /// `x -> offset + slope * x`.
    Affine { offset: Vector, slope: Vector },
    General { dim: usize, value: ValueFn, derivative: ValueFn },
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Affine { offset, slope } => f
                .debug_struct("Affine")
                .field("offset", offset)
                .field("slope", slope)
                .finish(),
            Piece::General { dim, .. } => f.debug_struct("General").field("dim", dim).finish(),
        }
    }
}

impl Piece {
    pub fn constant(value: &[f64]) -> Self {
        Piece::Affine { offset: value.into(), slope: Vector::from_elem(0.0, value.len()) }
    }

    pub fn constant_scalar(value: f64) -> Self {
        Piece::constant(&[value])
    }

    pub fn affine(offset: &[f64], slope: &[f64]) -> Self {
        assert_eq!(offset.len(), slope.len(), "affine piece dimensions");
        Piece::Affine { offset: offset.into(), slope: slope.into() }
    }

    /// Scalar affine piece `x -> offset + slope * x`.
    pub fn affine_scalar(slope: f64, offset: f64) -> Self {
        Piece::affine(&[offset], &[slope])
    }

    pub fn general(
        dim: usize,
        value: impl Fn(f64) -> Vector + Send + Sync + 'static,
        derivative: impl Fn(f64) -> Vector + Send + Sync + 'static,
    ) -> Self {
        Piece::General { dim, value: Arc::new(value), derivative: Arc::new(derivative) }
    }

    /// Scalar C¹ piece from a value and a derivative.
    pub fn scalar(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Piece::general(1, move |x| smallvec::smallvec![value(x)], move |x| {
            smallvec::smallvec![derivative(x)]
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Piece::Affine { offset, .. } => offset.len(),
            Piece::General { dim, .. } => *dim,
        }
    }

    pub fn smoothness(&self) -> Smoothness {
        match self {
            Piece::Affine { .. } => Smoothness::Affine,
            Piece::General { .. } => Smoothness::GeneralC1,
        }
    }

    pub fn value(&self, x: f64) -> Vector {
        match self {
            Piece::Affine { offset, slope } => {
                offset.iter().zip(slope).map(|(o, s)| o + s * x).collect()
            }
            Piece::General { value, .. } => value(x),
        }
    }

    pub fn derivative(&self, x: f64) -> Vector {
        match self {
            Piece::Affine { slope, .. } => slope.clone(),
            Piece::General { derivative, .. } => derivative(x),
        }
    }

    /// Relative mismatch between the stated derivative and a Richardson-extrapolated
    /// centred difference of the value at `x`.
    pub fn derivative_defect(&self, x: f64, h: f64) -> f64 {
        let d = self.derivative(x);
        let central = |h: f64| -> Vector {
            let p = self.value(x + h);
            let m = self.value(x - h);
            p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        };
        let c1 = central(h);
        let c2 = central(0.5 * h);
        let fd: Vector = c1.iter().zip(&c2).map(|(a, b)| (4.0 * b - a) / 3.0).collect();
        let diff: Vector = d.iter().zip(&fd).map(|(a, b)| a - b).collect();
        norm(&diff) / norm(&d).max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_piece_values() {
        let p = Piece::affine_scalar(2.0, 1.0);
        assert_eq!(p.value(3.0)[0], 7.0);
        assert_eq!(p.derivative(-5.0)[0], 2.0);
        assert_eq!(p.smoothness(), Smoothness::Affine);
    }

    #[test]
    fn derivative_defect_detects_wrong_derivative() {
        let good = Piece::scalar(|x| x.sin(), |x| x.cos());
        let bad = Piece::scalar(|x| x.sin(), |x| 1.1 * x.cos());
        assert!(good.derivative_defect(0.3, 1e-3) < 1e-8);
        assert!(bad.derivative_defect(0.3, 1e-3) > 1e-2);
    }
}
