//! Dense exact matrices over `Q(i)` and the numeric joint-spectrum layer.

mod charpoly;
mod exact;
mod matrix;
pub mod numeric;
mod spectrum;

pub use charpoly::{characteristic_polynomial, determinant, eval_at_matrix, minimal_polynomial};
pub use exact::{
    fraction_free_echelon, inverse, kernel_basis, lift_coordinates, rank, restrict_to_subspace, solve, vectorize,
    Echelon, Insertion, SpanBuilder,
};
pub use matrix::{int_matrix, ExactMatrix, Matrix};
pub use spectrum::{check_commuting, joint_spectrum, Cluster, ClusterSummary, JointSpectrum, DEFAULT_TOLERANCE};
