use crate::error::{Error, Result};
use crate::quadrature::CantorGeometry;
use crate::vector::{norm, scale, Vector};

/// A Cantor part `v · c(x)` where `c` is the normalised staircase of a
/// self-similar Cantor set on `[alpha, beta]` and `v ∈ R^m` carries direction and mass.
#[derive(Debug, Clone, PartialEq)]
pub struct CantorComponent {
    geometry: CantorGeometry,
    mass_vector: Vector,
}

impl CantorComponent {
    pub fn new(alpha: f64, beta: f64, removed_fraction: f64, mass_vector: &[f64]) -> Result<Self> {
        let geometry = CantorGeometry::new(alpha, beta, removed_fraction)?;
        if mass_vector.is_empty() || mass_vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("Cantor mass vector must be finite".into()));
        }
        Ok(CantorComponent { geometry, mass_vector: mass_vector.into() })
    }

    /// The standard middle-thirds staircase on `[alpha, beta]` with scalar mass.
    pub fn middle_thirds(alpha: f64, beta: f64, mass: f64) -> Result<Self> {
        CantorComponent::new(alpha, beta, 1.0 / 3.0, &[mass])
    }

    pub fn geometry(&self) -> &CantorGeometry {
        &self.geometry
    }

    pub fn support(&self) -> (f64, f64) {
        (self.geometry.alpha, self.geometry.beta)
    }

    pub fn removed_fraction(&self) -> f64 {
        self.geometry.removed_fraction()
    }

    pub fn mass_vector(&self) -> &[f64] {
        &self.mass_vector
    }

    /// `|v|`, the total variation of this component.
    pub fn mass(&self) -> f64 {
        norm(&self.mass_vector)
    }

    /// Unit polar vector `v / |v|`.
    pub fn direction(&self) -> Vector {
        let m = self.mass();
        if m == 0.0 {
            self.mass_vector.clone()
        } else {
            scale(&self.mass_vector, 1.0 / m)
        }
    }

    pub fn dim(&self) -> usize {
        self.mass_vector.len()
    }

    /// Normalised staircase in [0, 1].
    pub fn unit_staircase(&self, x: f64, depth: u32) -> f64 {
        self.geometry.staircase(x, depth)
    }

    /// Cumulative function, rising from 0 at `alpha` to `|v|` at `beta`.
    pub fn staircase(&self, x: f64, depth: u32) -> f64 {
        self.mass() * self.unit_staircase(x, depth)
    }
}
