//! A fixed suite of BV functions covering every derivative part, plus a seeded
//! random piecewise generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bvfun::{BVFunction1D, CantorComponent, Domain1D, Piece};
use crate::error::Result;

/// `x` on (0,1).
pub fn linear() -> BVFunction1D {
    BVFunction1D::smooth(Domain1D::unit(), Piece::affine_scalar(1.0, 0.0)).unwrap()
}

/// Indicator of `[0,1)` on (-1,1).
pub fn indicator() -> BVFunction1D {
    BVFunction1D::step(Domain1D::symmetric(), vec![0.0], &[0.0, 1.0]).unwrap()
}

/// Single jump of height 2 at `x = 0.3` on (-1,1).
pub fn jump_at_point_three() -> BVFunction1D {
    BVFunction1D::step(Domain1D::symmetric(), vec![0.3], &[-1.0, 1.0]).unwrap()
}

/// Steps with jumps at -0.5, 0.2 and 0.6 on (-1,1).
pub fn three_steps() -> BVFunction1D {
    BVFunction1D::step(Domain1D::symmetric(), vec![-0.5, 0.2, 0.6], &[0.0, 1.0, -1.0, 0.5])
        .unwrap()
}

/// Affine pieces with three jumps, one of which has a sign change across it.
pub fn three_ramps() -> BVFunction1D {
    BVFunction1D::piecewise(
        Domain1D::symmetric(),
        vec![-0.6, -0.1, 0.5],
        vec![
            Piece::affine_scalar(0.5, 0.2),
            Piece::affine_scalar(-1.5, -0.4),
            Piece::affine_scalar(2.0, 0.3),
            Piece::affine_scalar(-0.7, -0.2),
        ],
    )
    .unwrap()
}

/// `x²` with a unit jump at 0.4 on (-1,1).
pub fn quadratic_with_jump() -> BVFunction1D {
    BVFunction1D::piecewise(
        Domain1D::symmetric(),
        vec![0.4],
        vec![Piece::scalar(|x| x * x, |x| 2.0 * x), Piece::scalar(|x| x * x + 1.0, |x| 2.0 * x)],
    )
    .unwrap()
}

/// `sin 3x` with a jump of -0.8 at -0.25 on (-1,1).
pub fn sine_with_jump() -> BVFunction1D {
    BVFunction1D::piecewise(
        Domain1D::symmetric(),
        vec![-0.25],
        vec![
            Piece::scalar(|x| (3.0 * x).sin(), |x| 3.0 * (3.0 * x).cos()),
            Piece::scalar(|x| (3.0 * x).sin() - 0.8, |x| 3.0 * (3.0 * x).cos()),
        ],
    )
    .unwrap()
}

/// The middle-thirds staircase on (0,1).
pub fn cantor() -> BVFunction1D {
    let c = CantorComponent::middle_thirds(0.0, 1.0, 1.0).unwrap();
    BVFunction1D::cantor_function(Domain1D::unit(), c).unwrap()
}

/// All three parts at once: affine pieces, jumps at 0.1 and 0.9, and a half-mass
/// staircase on [0.3, 0.7].
pub fn cantor_with_jumps() -> BVFunction1D {
    let c = CantorComponent::middle_thirds(0.3, 0.7, 0.5).unwrap();
    BVFunction1D::new(
        Domain1D::unit(),
        vec![0.1, 0.9],
        vec![
            Piece::affine_scalar(2.0, 0.0),
            Piece::constant_scalar(1.0),
            Piece::affine_scalar(-1.0, 0.5),
        ],
        vec![c],
    )
    .unwrap()
}

/// R²-valued: a circular arc left of 0 and an affine piece right of it.
pub fn planar() -> BVFunction1D {
    BVFunction1D::piecewise(
        Domain1D::symmetric(),
        vec![0.0],
        vec![
            Piece::general(
                2,
                |x| smallvec::smallvec![x.cos(), x.sin()],
                |x| smallvec::smallvec![-x.sin(), x.cos()],
            ),
            Piece::affine(&[1.0, 0.5], &[0.0, 1.0]),
        ],
    )
    .unwrap()
}

/// The named suite used by the property and acceptance tests.
pub fn suite() -> Vec<(&'static str, BVFunction1D)> {
    vec![
        ("linear", linear()),
        ("indicator", indicator()),
        ("three_steps", three_steps()),
        ("three_ramps", three_ramps()),
        ("quadratic_with_jump", quadratic_with_jump()),
        ("sine_with_jump", sine_with_jump()),
        ("cantor", cantor()),
        ("cantor_with_jumps", cantor_with_jumps()),
        ("planar", planar()),
    ]
}

/// Random scalar function on (-1,1) with `jumps` breakpoints and pieces that are
/// affine or `c + s·sin(ωx)`. Deterministic in `seed`.
pub fn random_piecewise(jumps: usize, seed: u64) -> Result<BVFunction1D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dom = Domain1D::symmetric();
    let mut bps: Vec<f64> = Vec::with_capacity(jumps);
    while bps.len() < jumps {
        let x: f64 = rng.gen_range(-0.9..0.9);
        if bps.iter().all(|b| (b - x).abs() > 0.05) {
            bps.push(x);
        }
    }
    bps.sort_by(f64::total_cmp);
    let pieces = (0..=jumps)
        .map(|_| {
            let c: f64 = rng.gen_range(-2.0..2.0);
            let s: f64 = rng.gen_range(-1.5..1.5);
            if rng.gen_bool(0.5) {
                Piece::affine_scalar(s, c)
            } else {
                let w: f64 = rng.gen_range(0.5..4.0);
                Piece::scalar(move |x| c + s * (w * x).sin(), move |x| s * w * (w * x).cos())
            }
        })
        .collect();
    BVFunction1D::piecewise(dom, bps, pieces)
}
