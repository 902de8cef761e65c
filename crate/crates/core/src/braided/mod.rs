//! R-matrix verification, braided *-spaces V(tR), Ψ-invariance systems,
//! classification of quadratic generators, and braided Brownian motion.

pub mod classify;
pub mod qsde;
pub mod rmatrix;
pub mod space;

pub use classify::{classify_generators, invariant_quadratic_solve, GeneratorCone, InvariantBasis};
pub use qsde::{braided_bm_qsde, symmetrization_check, BraidedQsde};
pub use rmatrix::{check_r_matrix, BraidedError, RMatrix, RMatrixReport};
pub use space::{BraidedSpaceSpec, Tensor2};
