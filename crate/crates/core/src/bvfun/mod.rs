//! Functions of bounded variation on an interval: representation, derivative
//! decomposition, traces, jump averaging, composition, distances and radial lifts.

mod cantor;
mod compose;
pub(crate) mod distance;
mod function;
mod piece;
mod radial;

pub use cantor::CantorComponent;
pub use compose::{compose, volpert_average, volpert_average_with, VectorMap};
pub use distance::{lp_distance, lp_distance_with, lp_integral, sup_distance};
pub use function::{
    decompose, jump_average, total_variation, BVFunction1D, DerivativeDecomposition, Domain1D,
    JumpAtom, Position, DEFAULT_CANTOR_DEPTH, JUMP_TOLERANCE,
};
pub use piece::{Piece, Smoothness, ValueFn};
pub use radial::{
    radial_lp_distance, radial_lp_distance_with, radial_lp_norm, radial_lp_norm_with,
    radial_total_variation, radial_total_variation_with, sphere_area, weighted_lp_integral,
    weighted_total_variation, RadialBV,
};
