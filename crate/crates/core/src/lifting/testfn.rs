use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bvfun::Domain1D;
use crate::vector::{norm, sub, Vector};

type ScalarFn = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(f64, &[f64]) -> Vector + Send + Sync>;

/// A C¹ function `φ(x, y)` on `Ω × R^m` with its partial gradients, compactly
/// supported in `x` (and, for bumps, in a ball in `y`).
#[derive(Clone)]
pub struct TestFunction {
    eval: ScalarFn,
    grad_x: ScalarFn,
    grad_y: VectorFn,
    x_support: (f64, f64),
    y_ball: Option<(Vector, f64)>,
    kinks: Vec<f64>,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("x_support", &self.x_support)
            .field("y_ball", &self.y_ball)
            .finish()
    }
}

/// `(1 - s²)³` for `s² < 1` and its derivative with respect to `s²`.
fn profile(s2: f64) -> (f64, f64) {
    if s2 >= 1.0 {
        (0.0, 0.0)
    } else {
        let w = 1.0 - s2;
        (w * w * w, -3.0 * w * w)
    }
}

impl TestFunction {
    pub fn new(
        eval: impl Fn(f64, &[f64]) -> f64 + Send + Sync + 'static,
        grad_x: impl Fn(f64, &[f64]) -> f64 + Send + Sync + 'static,
        grad_y: impl Fn(f64, &[f64]) -> Vector + Send + Sync + 'static,
        x_support: (f64, f64),
    ) -> Self {
        TestFunction {
            eval: Arc::new(eval),
            grad_x: Arc::new(grad_x),
            grad_y: Arc::new(grad_y),
            x_support,
            y_ball: None,
            kinks: vec![x_support.0, x_support.1],
        }
    }

    /// `amp · β(|x - cx| / rx) · β(|y - cy| / ry)` with `β(s) = (1 - s²)³₊`.
    pub fn bump(cx: f64, rx: f64, cy: &[f64], ry: f64, amp: f64) -> Self {
        let c: Vector = cy.into();
        let (c1, c2, c3) = (c.clone(), c.clone(), c.clone());
        let sx = move |x: f64| ((x - cx) / rx).powi(2);
        let sy = move |y: &[f64], c: &[f64]| norm(&sub(y, c)).powi(2) / (ry * ry);
        TestFunction {
            eval: Arc::new(move |x, y| amp * profile(sx(x)).0 * profile(sy(y, &c1)).0),
            grad_x: Arc::new(move |x, y| {
                let py = profile(sy(y, &c2)).0;
                if py == 0.0 {
                    return 0.0;
                }
                amp * profile(sx(x)).1 * 2.0 * (x - cx) / (rx * rx) * py
            }),
            grad_y: Arc::new(move |x, y| {
                let px = profile(sx(x)).0;
                let d = profile(sy(y, &c3)).1;
                y.iter()
                    .zip(&c3)
                    .map(|(yi, ci)| amp * px * d * 2.0 * (yi - ci) / (ry * ry))
                    .collect()
            }),
            x_support: (cx - rx, cx + rx),
            y_ball: Some((c, ry)),
            kinks: vec![cx - rx, cx + rx],
        }
    }

    /// `ψ(x)` with no dependence on `y`.
    pub fn x_only(
        psi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dpsi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        x_support: (f64, f64),
        dim: usize,
    ) -> Self {
        TestFunction::new(
            move |x, _| psi(x),
            move |x, _| dpsi(x),
            move |_, _| Vector::from_elem(0.0, dim),
            x_support,
        )
    }

    /// `n` random bumps with x-supports compactly inside `domain` and y-centres
    /// in `[y_lo, y_hi]` (first coordinate; other coordinates 0).
    pub fn random_bumps(n: usize, domain: Domain1D, y_lo: f64, y_hi: f64, dim: usize, seed: u64) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = domain.length();
        let (ylo, yhi) = if y_hi > y_lo { (y_lo, y_hi) } else { (y_lo - 1.0, y_lo + 1.0) };
        let yspan = yhi - ylo;
        (0..n)
            .map(|_| {
                let rx = len * rng.gen_range(0.05..0.45);
                let margin = 1e-3 * len;
                let cx = rng.gen_range(domain.a + rx + margin..domain.b - rx - margin);
                let mut cy = Vector::from_elem(0.0, dim);
                cy[0] = rng.gen_range(ylo..=yhi);
                let ry = yspan * rng.gen_range(0.2..1.2);
                let amp = rng.gen_range(-2.0..2.0);
                TestFunction::bump(cx, rx, &cy, ry, amp)
            })
            .collect()
    }

    pub fn eval(&self, x: f64, y: &[f64]) -> f64 {
        (self.eval)(x, y)
    }

    pub fn grad_x(&self, x: f64, y: &[f64]) -> f64 {
        (self.grad_x)(x, y)
    }

    pub fn grad_y(&self, x: f64, y: &[f64]) -> Vector {
        (self.grad_y)(x, y)
    }

    pub fn x_support(&self) -> (f64, f64) {
        self.x_support
    }

    pub fn y_ball(&self) -> Option<(&[f64], f64)> {
        self.y_ball.as_ref().map(|(c, r)| (c.as_slice(), *r))
    }

    /// Points where the x-profile is only finitely smooth.
    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    /// The sub-interval of `θ ∈ [0, 1]` on which `lo + θ (hi - lo)` lies in the
    /// y-ball, or `[0, 1]` when there is no ball.
    pub fn segment_window(&self, lo: &[f64], hi: &[f64]) -> Option<(f64, f64)> {
        let Some((c, r)) = &self.y_ball else { return Some((0.0, 1.0)) };
        let d = sub(hi, lo);
        let e = sub(lo, c);
        let a: f64 = d.iter().map(|v| v * v).sum();
        let b = 2.0 * d.iter().zip(&e).map(|(p, q)| p * q).sum::<f64>();
        let cc = e.iter().map(|v| v * v).sum::<f64>() - r * r;
        if a == 0.0 {
            return (cc < 0.0).then_some((0.0, 1.0));
        }
        let disc = b * b - 4.0 * a * cc;
        if disc <= 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        let (t0, t1) = ((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a));
        let (lo, hi) = (t0.max(0.0), t1.min(1.0));
        (lo < hi).then_some((lo, hi))
    }
}
