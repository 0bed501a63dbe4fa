use std::fmt;

use super::{CantorComponent, Piece, Smoothness};
use crate::error::{Error, Result};
use crate::exec::{self, pairwise_sum};
use crate::quadrature::{CantorGeometry, Estimate, QuadratureSpec};
use crate::vector::{add, lerp, norm, scale, sub, Vector};

/// Trace mismatch below which a breakpoint is not a jump.
pub const JUMP_TOLERANCE: f64 = 1e-12;

/// Default construction depth for evaluating Cantor staircases.
pub const DEFAULT_CANTOR_DEPTH: u32 = 24;

/// A bounded open interval `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain1D {
    pub a: f64,
    pub b: f64,
}

impl Domain1D {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain { a, b });
        }
        Ok(Domain1D { a, b })
    }

    pub fn unit() -> Self {
        Domain1D { a: 0.0, b: 1.0 }
    }

    /// The symmetric interval (-1, 1).
    pub fn symmetric() -> Self {
        Domain1D { a: -1.0, b: 1.0 }
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.a && x < self.b
    }
}

/// A point of the jump set with its one-sided traces.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpAtom {
    pub location: f64,
    /// Left trace u⁻.
    pub left: Vector,
    /// Right trace u⁺.
    pub right: Vector,
}

impl JumpAtom {
    /// `|u⁺ - u⁻|`.
    pub fn mass(&self) -> f64 {
        norm(&sub(&self.right, &self.left))
    }

    /// `u⁺ - u⁻`.
    pub fn difference(&self) -> Vector {
        sub(&self.right, &self.left)
    }

    /// Unit polar `(u⁺ - u⁻) / |u⁺ - u⁻|` of the jump part (the jump direction in
    /// one dimension is +1).
    pub fn polar(&self) -> Vector {
        scale(&self.difference(), 1.0 / self.mass())
    }

    /// `θ u⁺ + (1 - θ) u⁻`.
    pub fn average(&self, theta: f64) -> Vector {
        lerp(&self.left, &self.right, theta)
    }
}

/// Where a point sits relative to the mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    /// Strictly inside mesh interval `i`.
    Interior(usize),
    /// At interior breakpoint `i` (between pieces `i - 1` and `i`).
    Breakpoint(usize),
}

/// A function of bounded variation on an interval, with values in R^m.
///
/// It is the sum of a piecewise-C¹ part (one [`Piece`] per mesh interval) and any
/// number of [`CantorComponent`]s with pairwise disjoint supports. Jumps are read
/// off the piece traces at the breakpoints.
#[derive(Clone)]
pub struct BVFunction1D {
    domain: Domain1D,
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
    jumps: Vec<JumpAtom>,
    jump_index: Vec<Option<usize>>,
    cantor: Vec<CantorComponent>,
    dim: usize,
}

impl fmt::Debug for BVFunction1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BVFunction1D")
            .field("domain", &self.domain)
            .field("breakpoints", &self.breakpoints)
            .field("pieces", &self.pieces)
            .field("jumps", &self.jumps)
            .field("cantor", &self.cantor)
            .finish()
    }
}

impl BVFunction1D {
    /// Build from interior breakpoints (strictly increasing, inside the domain), one
    /// piece per mesh interval, and Cantor components.
    pub fn new(
        domain: Domain1D,
        interior_breakpoints: Vec<f64>,
        pieces: Vec<Piece>,
        cantor: Vec<CantorComponent>,
    ) -> Result<Self> {
        let Domain1D { a, b } = domain;
        if pieces.len() != interior_breakpoints.len() + 1 {
            return Err(Error::InvalidFunction(format!(
                "{} breakpoints need {} pieces, got {}",
                interior_breakpoints.len(),
                interior_breakpoints.len() + 1,
                pieces.len()
            )));
        }
        let mut breakpoints = Vec::with_capacity(interior_breakpoints.len() + 2);
        breakpoints.push(a);
        for &x in &interior_breakpoints {
            let prev = *breakpoints.last().unwrap();
            if !(x > prev && x < b) {
                return Err(Error::InvalidFunction(format!(
                    "breakpoint {x} is not strictly increasing inside ({a}, {b})"
                )));
            }
            breakpoints.push(x);
        }
        breakpoints.push(b);

        let dim = pieces[0].dim();
        if dim == 0 {
            return Err(Error::InvalidFunction("pieces must have at least one component".into()));
        }
        for p in &pieces {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
            }
        }
        for c in &cantor {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.dim() });
            }
            let (lo, hi) = c.support();
            if !(lo >= a && hi <= b) {
                return Err(Error::InvalidFunction(format!(
                    "Cantor support [{lo}, {hi}] must lie inside [{a}, {b}]"
                )));
            }
        }
        for (i, c) in cantor.iter().enumerate() {
            for d in &cantor[i + 1..] {
                let (p, q) = (c.support(), d.support());
                if p.0 < q.1 && q.0 < p.1 {
                    return Err(Error::InvalidFunction(
                        "Cantor components must have disjoint supports".into(),
                    ));
                }
            }
        }

        let mut u = BVFunction1D {
            domain,
            breakpoints,
            pieces,
            jumps: Vec::new(),
            jump_index: Vec::new(),
            cantor,
            dim,
        };
        for i in 0..u.pieces.len() {
            let (lo, hi) = u.interval(i);
            for x in [lo, 0.5 * (lo + hi), hi] {
                if u.pieces[i].value(x).iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidFunction(format!("piece {i} is not finite at {x}")));
                }
            }
        }
        u.jump_index = vec![None; u.breakpoints.len()];
        for i in 1..u.breakpoints.len() - 1 {
            let x = u.breakpoints[i];
            let c = u.cantor_value(x, DEFAULT_CANTOR_DEPTH);
            let left = add(&u.pieces[i - 1].value(x), &c);
            let right = add(&u.pieces[i].value(x), &c);
            if norm(&sub(&right, &left)) > JUMP_TOLERANCE {
                u.jump_index[i] = Some(u.jumps.len());
                u.jumps.push(JumpAtom { location: x, left, right });
            }
        }
        Ok(u)
    }

    /// A single C¹ piece on the whole domain.
    pub fn smooth(domain: Domain1D, piece: Piece) -> Result<Self> {
        BVFunction1D::new(domain, vec![], vec![piece], vec![])
    }

    /// Piecewise-C¹ function without Cantor part.
    pub fn piecewise(domain: Domain1D, breakpoints: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        BVFunction1D::new(domain, breakpoints, pieces, vec![])
    }

    /// Scalar piecewise-constant function taking `values[i]` on mesh interval `i`.
    pub fn step(domain: Domain1D, breakpoints: Vec<f64>, values: &[f64]) -> Result<Self> {
        let pieces = values.iter().map(|v| Piece::constant_scalar(*v)).collect();
        BVFunction1D::piecewise(domain, breakpoints, pieces)
    }

    /// Pure Cantor function `v · c(x)` on `domain`.
    pub fn cantor_function(domain: Domain1D, component: CantorComponent) -> Result<Self> {
        let zero = Piece::constant(&vec![0.0; component.dim()]);
        BVFunction1D::new(domain, vec![], vec![zero], vec![component])
    }

    /// The zero function with the same domain and value dimension.
    pub fn zero_like(&self) -> Result<Self> {
        BVFunction1D::smooth(self.domain, Piece::constant(&vec![0.0; self.dim]))
    }

    pub fn domain(&self) -> Domain1D {
        self.domain
    }

    /// Value dimension m.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Mesh including both domain endpoints.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn interior_breakpoints(&self) -> &[f64] {
        &self.breakpoints[1..self.breakpoints.len() - 1]
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn jumps(&self) -> &[JumpAtom] {
        &self.jumps
    }

    pub fn cantor(&self) -> &[CantorComponent] {
        &self.cantor
    }

    pub fn has_cantor(&self) -> bool {
        !self.cantor.is_empty()
    }

    pub fn cantor_zones(&self) -> Vec<CantorGeometry> {
        self.cantor.iter().map(|c| *c.geometry()).collect()
    }

    /// Mesh interval `i`.
    pub fn interval(&self, i: usize) -> (f64, f64) {
        (self.breakpoints[i], self.breakpoints[i + 1])
    }

    pub fn locate(&self, x: f64) -> Position {
        let bps = &self.breakpoints;
        match bps.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(0) => Position::Interior(0),
            Ok(i) if i == bps.len() - 1 => Position::Interior(self.pieces.len() - 1),
            Ok(i) => Position::Breakpoint(i),
            Err(0) => Position::Interior(0),
            Err(i) => Position::Interior((i - 1).min(self.pieces.len() - 1)),
        }
    }

    /// Index of the piece governing `x` from the right (the last piece at `b`).
    pub fn piece_index(&self, x: f64) -> usize {
        match self.locate(x) {
            Position::Interior(i) => i,
            Position::Breakpoint(i) => i.min(self.pieces.len() - 1),
        }
    }

    /// Sum of the Cantor parts at `x`.
    pub fn cantor_value(&self, x: f64, depth: u32) -> Vector {
        let mut out = Vector::from_elem(0.0, self.dim);
        for c in &self.cantor {
            let s = c.unit_staircase(x, depth);
            if s != 0.0 {
                for (o, v) in out.iter_mut().zip(c.mass_vector()) {
                    *o += v * s;
                }
            }
        }
        out
    }

    /// Value of piece `i` plus the Cantor parts.
    pub fn piece_value(&self, i: usize, x: f64, depth: u32) -> Vector {
        let p = self.pieces[i].value(x);
        if self.cantor.is_empty() {
            p
        } else {
            add(&p, &self.cantor_value(x, depth))
        }
    }

    /// Precise representative ũ(x); at a jump point, the midpoint of the traces.
    pub fn value_at(&self, x: f64, depth: u32) -> Vector {
        match self.locate(x) {
            Position::Interior(i) => self.piece_value(i, x, depth),
            Position::Breakpoint(i) => match self.jump_index[i] {
                Some(j) => self.jumps[j].average(0.5),
                None => self.piece_value(i, x, depth),
            },
        }
    }

    pub fn value(&self, x: f64) -> Vector {
        self.value_at(x, DEFAULT_CANTOR_DEPTH)
    }

    /// Scalar convenience for m = 1.
    pub fn value_scalar(&self, x: f64) -> f64 {
        self.value(x)[0]
    }

    pub fn left_limit(&self, x: f64) -> Vector {
        let i = match self.locate(x) {
            Position::Interior(i) => i,
            Position::Breakpoint(i) => i - 1,
        };
        self.piece_value(i, x, DEFAULT_CANTOR_DEPTH)
    }

    pub fn right_limit(&self, x: f64) -> Vector {
        self.piece_value(self.piece_index(x), x, DEFAULT_CANTOR_DEPTH)
    }

    /// Density ∇u of the absolutely continuous part of Du.
    pub fn gradient(&self, x: f64) -> Vector {
        self.pieces[self.piece_index(x)].derivative(x)
    }

    pub fn jump_at(&self, x: f64) -> Option<&JumpAtom> {
        match self.locate(x) {
            Position::Breakpoint(i) => self.jump_index[i].map(|j| &self.jumps[j]),
            Position::Interior(_) => None,
        }
    }

    /// Jump averaging function u^θ(x): `θu⁺ + (1-θ)u⁻` on the jump set (left trace as
    /// u⁻), ũ(x) elsewhere.
    pub fn jump_average(&self, x: f64, theta: f64) -> Vector {
        match self.jump_at(x) {
            Some(j) => j.average(theta),
            None => self.value(x),
        }
    }

    /// Largest relative mismatch between piece derivatives and finite differences,
    /// sampled at `samples` interior points per piece.
    pub fn derivative_defect(&self, samples: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, p) in self.pieces.iter().enumerate() {
            if p.smoothness() == Smoothness::Affine {
                continue;
            }
            let (lo, hi) = self.interval(i);
            let h = 1e-4 * (hi - lo).min(1.0);
            for k in 1..=samples {
                let x = lo + (hi - lo) * k as f64 / (samples + 1) as f64;
                let h = h.min(0.5 * (x - lo)).min(0.5 * (hi - x));
                worst = worst.max(p.derivative_defect(x, h));
            }
        }
        worst
    }

    /// `∫ |∇u| dx` over mesh interval `i`.
    fn ac_mass_on(&self, i: usize, q: &QuadratureSpec) -> Result<Estimate> {
        let (lo, hi) = self.interval(i);
        match &self.pieces[i] {
            Piece::Affine { slope, .. } => {
                Ok(Estimate { value: norm(slope) * (hi - lo), error: 0.0 })
            }
            p @ Piece::General { .. } => {
                let tol = q.ac_tolerance * (hi - lo) / self.domain.length();
                q.with_tolerance(tol).integrate(|x| norm(&p.derivative(x)), lo, hi, &[], &[])
            }
        }
    }

    /// Split of Du into absolutely continuous, jump, and Cantor parts.
    pub fn decompose(&self, q: &QuadratureSpec) -> Result<DerivativeDecomposition> {
        let idx: Vec<usize> = (0..self.pieces.len()).collect();
        let ac = exec::try_map(q.execution, &idx, |&i| self.ac_mass_on(i, q))?;
        let ac_values: Vec<f64> = ac.iter().map(|e| e.value).collect();
        let ac_errors: Vec<f64> = ac.iter().map(|e| e.error).collect();
        let ac_mass = pairwise_sum(&ac_values);
        let jumps: Vec<(f64, f64)> = self.jumps.iter().map(|j| (j.location, j.mass())).collect();
        let cantor: Vec<f64> = self.cantor.iter().map(|c| c.mass()).collect();
        let jump_mass = pairwise_sum(&jumps.iter().map(|j| j.1).collect::<Vec<_>>());
        let cantor_mass = pairwise_sum(&cantor);
        Ok(DerivativeDecomposition {
            source: self.clone(),
            ac_mass,
            ac_error: pairwise_sum(&ac_errors),
            jumps,
            cantor,
            jump_mass,
            cantor_mass,
            total: ac_mass + jump_mass + cantor_mass,
        })
    }

    /// |Du|(Ω).
    pub fn total_variation_with(&self, q: &QuadratureSpec) -> Result<f64> {
        Ok(self.decompose(q)?.total)
    }
}

/// Du = ∇u dx + Dʲu + Dᶜu with the masses of each part.
#[derive(Debug, Clone)]
pub struct DerivativeDecomposition {
    source: BVFunction1D,
    /// `∫ |∇u| dx`.
    pub ac_mass: f64,
    pub ac_error: f64,
    /// `(location, |u⁺ - u⁻|)` per jump atom.
    pub jumps: Vec<(f64, f64)>,
    /// `|v|` per Cantor component.
    pub cantor: Vec<f64>,
    /// |Dʲu|(Ω).
    pub jump_mass: f64,
    /// |Dᶜu|(Ω).
    pub cantor_mass: f64,
    /// |Du|(Ω).
    pub total: f64,
}

impl DerivativeDecomposition {
    /// ∇u(x).
    pub fn ac_density(&self, x: f64) -> Vector {
        self.source.gradient(x)
    }

    /// |Dˢu|(Ω).
    pub fn singular_mass(&self) -> f64 {
        self.jump_mass + self.cantor_mass
    }
}

/// Derivative decomposition with default quadrature settings.
pub fn decompose(u: &BVFunction1D) -> Result<DerivativeDecomposition> {
    u.decompose(&QuadratureSpec::default())
}

/// |Du|(Ω) with default quadrature settings.
pub fn total_variation(u: &BVFunction1D) -> Result<f64> {
    u.total_variation_with(&QuadratureSpec::default())
}

/// Jump averaging function u^θ(x).
pub fn jump_average(u: &BVFunction1D, x: f64, theta: f64) -> Vector {
    u.jump_average(x, theta)
}
