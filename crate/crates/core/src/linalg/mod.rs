//! Dense complex linear algebra used throughout the crate.

pub mod eig;
pub mod hermitian;
pub mod lu;
pub mod matrix;

pub use eig::{canonical_order, eig, eig_unguarded, eigvals, min_gap, sort_canonical, spectral_radius, Eigensystem};
pub use hermitian::{hermitian_eigen, positive_sqrt, HermitianEigen};
pub use lu::{cond_estimate, inverse, matpow, Lu};
pub use matrix::{inner, norm2, outer, ComplexMatrix, C64, I, ONE, ZERO};
