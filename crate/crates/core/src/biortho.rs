//! Biorthogonal eigenbases: right eigenvectors `phi` of `H` paired with right
//! eigenvectors `psi` of `H^dagger` so that `<phi_n, psi_m> = delta_nm`.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::eig::{eig, normalize_phase, spectral_radius};
use crate::linalg::lu::Lu;
use crate::linalg::matrix::{inner, norm2, outer, scale_vec, sub_vec, ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiorthogonalSystem {
    pub dim: usize,
    /// Eigenvalues of `H` in canonical order.
    pub eigenvalues: Vec<C64>,
    /// `H phi_n = E_n phi_n`.
    pub phi: Vec<Vec<C64>>,
    /// `H^dagger psi_n = conj(E_n) psi_n`.
    pub psi: Vec<Vec<C64>>,
    /// `|G - 1|_F` with `G_nm = <phi_n, psi_m>`.
    pub gram_residual: f64,
}

/// Builds the biorthogonal system of `h` from two independent eigendecompositions.
///
/// `phi_n` is unit-norm with its first largest-modulus entry real positive;
/// `psi_n` absorbs the rescaling that makes `<phi_n, psi_n> = 1`.
pub fn build_biorthogonal(h: &ComplexMatrix, tols: &Tolerances) -> Result<BiorthogonalSystem> {
    let right = eig(h, tols)?;
    let left = eig(&h.dagger(), tols)?;
    let scale = spectral_radius(&right.eigenvalues).max(1.0);
    let ambiguity = tols.tol_gap * scale;

    let targets: Vec<C64> = left.eigenvalues.iter().map(|z| z.conj()).collect();
    let mut used = vec![false; targets.len()];
    let mut psi = Vec::with_capacity(h.dim());
    for (n, e) in right.eigenvalues.iter().enumerate() {
        let mut best: Option<(usize, f64)> = None;
        let mut second = f64::INFINITY;
        for (m, t) in targets.iter().enumerate() {
            if used[m] {
                continue;
            }
            let d = (t - e).norm();
            match best {
                Some((_, bd)) if d >= bd => second = second.min(d),
                _ => {
                    if let Some((_, bd)) = best {
                        second = second.min(bd);
                    }
                    best = Some((m, d));
                }
            }
        }
        let (m, _) = best.ok_or(Error::PairingAmbiguous { index: n })?;
        if second < ambiguity {
            return Err(Error::PairingAmbiguous { index: n });
        }
        used[m] = true;
        psi.push(left.vectors[m].clone());
    }

    let phi: Vec<Vec<C64>> = right.vectors.into_iter().map(normalize_phase).collect();
    let mut psi_scaled = Vec::with_capacity(phi.len());
    for (f, p) in phi.iter().zip(psi) {
        let overlap = inner(f, &p);
        if overlap.norm() < f64::EPSILON * norm2(&p) {
            return Err(Error::IllConditionedBasis {
                residual: f64::INFINITY,
                tolerance: tols.tol_bio,
            });
        }
        psi_scaled.push(scale_vec(&p, overlap.inv()));
    }
    BiorthogonalSystem::from_parts(right.eigenvalues, phi, psi_scaled, tols)
}

impl BiorthogonalSystem {
    /// Assembles a system from given families, checking the Gram identity.
    pub fn from_parts(
        eigenvalues: Vec<C64>,
        phi: Vec<Vec<C64>>,
        psi: Vec<Vec<C64>>,
        tols: &Tolerances,
    ) -> Result<Self> {
        let dim = eigenvalues.len();
        if phi.len() != dim || psi.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: phi.len().min(psi.len()) });
        }
        if let Some(v) = phi.iter().chain(&psi).find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
        }
        let mut sys = Self { dim, eigenvalues, phi, psi, gram_residual: 0.0 };
        sys.gram_residual = sys.gram().frob_dist(&ComplexMatrix::identity(dim));
        if !(sys.gram_residual <= tols.tol_bio) {
            return Err(Error::IllConditionedBasis {
                residual: sys.gram_residual,
                tolerance: tols.tol_bio,
            });
        }
        Ok(sys)
    }

    /// `G_nm = <phi_n, psi_m>`.
    pub fn gram(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, |n, m| inner(&self.phi[n], &self.psi[m]))
    }

    /// Column matrix of `phi`.
    pub fn phi_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.phi)
    }

    pub fn psi_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.psi)
    }

    /// Sum of `|phi_n><psi_n|`.
    pub fn resolution(&self) -> ComplexMatrix {
        sum_outer(&self.phi, &self.psi)
    }

    /// Sum of `|psi_n><phi_n|`, the adjoint resolution.
    pub fn dual_resolution(&self) -> ComplexMatrix {
        sum_outer(&self.psi, &self.phi)
    }

    /// Largest `|H phi_n - E_n phi_n|` and `|H^dagger psi_n - conj(E_n) psi_n|`,
    /// each relative to the norm of the vector.
    pub fn eigen_residuals(&self, h: &ComplexMatrix) -> (f64, f64) {
        let hd = h.dagger();
        let rel = |m: &ComplexMatrix, v: &[C64], l: C64| {
            norm2(&sub_vec(&m.matvec(v), &scale_vec(v, l))) / norm2(v).max(f64::MIN_POSITIVE)
        };
        let mut rphi: f64 = 0.0;
        let mut rpsi: f64 = 0.0;
        for ((e, f), p) in self.eigenvalues.iter().zip(&self.phi).zip(&self.psi) {
            rphi = rphi.max(rel(h, f, *e));
            rpsi = rpsi.max(rel(&hd, p, e.conj()));
        }
        (rphi, rpsi)
    }

    /// Multiplies `phi_n` by `c_n` and divides `psi_n` by `conj(c_n)`, which
    /// preserves every Gram entry.
    pub fn rescaled(&self, c: &[C64]) -> Self {
        assert_eq!(c.len(), self.dim, "one factor per mode");
        Self {
            dim: self.dim,
            eigenvalues: self.eigenvalues.clone(),
            phi: self.phi.iter().zip(c).map(|(f, &cn)| scale_vec(f, cn)).collect(),
            psi: self.psi.iter().zip(c).map(|(p, &cn)| scale_vec(p, cn.conj().inv())).collect(),
            gram_residual: self.gram_residual,
        }
        .with_fresh_gram()
    }

    /// Rescales each mode so that `phi_n` is the component of the numerical
    /// vector closest to `reference[n]` along its own direction. Used to pin
    /// the per-mode normalization to closed-form eigenvectors.
    pub fn gauged_to(&self, reference: &[Vec<C64>]) -> Result<Self> {
        if reference.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: reference.len() });
        }
        let c: Vec<C64> = self
            .phi
            .iter()
            .zip(reference)
            .map(|(f, r)| inner(f, r) / inner(f, f))
            .collect();
        Ok(self.rescaled(&c))
    }

    fn with_fresh_gram(mut self) -> Self {
        self.gram_residual = self.gram().frob_dist(&ComplexMatrix::identity(self.dim));
        self
    }
}

/// `|Sum_n |phi_n><psi_n| - 1|_F`.
pub fn resolution_residual(b: &BiorthogonalSystem) -> f64 {
    b.resolution().frob_dist(&ComplexMatrix::identity(b.dim))
}

/// `psi` as columns of `(Phi^-1)^dagger`, an independent route to the dual family.
pub fn psi_from_inverse(phi: &[Vec<C64>]) -> Result<Vec<Vec<C64>>> {
    let m = ComplexMatrix::from_columns(phi);
    let lu = Lu::factor(&m);
    if lu.is_singular() {
        return Err(Error::Singular { cond: f64::INFINITY });
    }
    Ok(lu.inverse().dagger().columns())
}

fn sum_outer(a: &[Vec<C64>], b: &[Vec<C64>]) -> ComplexMatrix {
    let n = a.first().map_or(0, Vec::len);
    let mut acc = ComplexMatrix::zeros(n.max(1));
    for (f, g) in a.iter().zip(b) {
        acc = &acc + &outer(f, g);
    }
    acc
}
