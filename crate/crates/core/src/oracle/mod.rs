//! Brute-force ground truth.
//!
//! Everything here is computed from the explicit finite-difference stencil
//! and dense elimination, never from the closed-form spectrum, so it can be
//! used to check the spectral routes.

mod dense;
mod identities;
mod scalar;

pub use dense::{
    assemble_laplacian, assemble_laplacian_as, assemble_poly, dense_invert, dense_solve, DenseMatrix,
    LuFactors, PolyOperatorOracle, MAX_DENSE_LEN,
};
pub use scalar::{Dd, Scalar};
pub use identities::{
    ramp_sine_sum, ramp_sine_sum_direct, sine_square_sum, weighted_cosine_sum,
    weighted_geometric_sum, weighted_sine_sum,
};
