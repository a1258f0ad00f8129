use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every stage. All of them are relative
/// unless the field doc says otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Eigen-residual bound, relative to the Frobenius norm of the matrix.
    pub tol_eig: f64,
    /// Minimum eigenvalue separation, relative to `max(1, spectral radius)`.
    pub tol_gap: f64,
    pub tol_inv: f64,
    pub tol_sqrt: f64,
    /// Absolute Hermiticity check on `A - A^dagger`, scaled by `max(1, |A|_F)`.
    pub tol_herm: f64,
    /// Smallest admissible eigenvalue of a positive-definite matrix, relative to its largest.
    pub tol_pd: f64,
    pub cond_max: f64,
    /// Gram and resolution-of-identity bound for biorthogonal systems.
    pub tol_bio: f64,
    /// Inversion and Hermiticity bound for metric pairs, relative to `cond(S)`.
    pub tol_metric: f64,
    /// Eigenvector certificates and adjoint identities on chain nodes.
    pub tol_chain: f64,
    /// Pseudo-Hermiticity residual threshold, relative to `|H|_F`.
    pub tol_theorem: f64,
    /// Reality threshold factor; the absolute tolerance is `tol_real * (1 + spectral radius)`.
    pub tol_real: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_eig: 1e-10,
            tol_gap: 1e-8,
            tol_inv: 1e-12,
            tol_sqrt: 1e-10,
            tol_herm: 1e-10,
            tol_pd: 1e-12,
            cond_max: 1e12,
            tol_bio: 1e-8,
            tol_metric: 1e-8,
            tol_chain: 1e-8,
            tol_theorem: 1e-7,
            tol_real: 1e-8,
        }
    }
}
