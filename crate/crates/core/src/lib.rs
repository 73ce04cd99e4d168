//! Direct spectral solvers for polynomials of the finite-difference Laplace
//! matrix on tensor-product grids of the unit hyperbox.
//!
//! The eigenpairs of the discrete Laplacian are known in closed form, so any
//! `P(A) x = b` is solved by expanding `b` in the eigenbasis and dividing
//! each coefficient by `P(lambda)`. Implicit time stepping reduces to raising
//! per-mode amplification factors to a power. The [`oracle`] module provides
//! dense assembly and LU elimination to check every spectral result.

pub mod error;
pub mod field;
pub mod grid;
pub mod oracle;
pub mod polynomial;
pub mod solver;
pub mod spectrum;
pub mod timestep;
pub mod transform;

pub use error::{Error, Result};
pub use field::Field;
pub use grid::{make_grid, BoundaryKind, Grid};
pub use polynomial::{Certificate, MatrixPolynomial};
pub use solver::{inverse_1d_closed_form, SpectralSolver};
pub use spectrum::{AxisSpectrum, Spectrum};
pub use timestep::{EvolutionSpec, Scheme, SnapshotPlan};
pub use transform::{analyze, synthesize, CoefficientTensor, TransformPath};
