//! Metric operators built from a biorthogonal system and the weighted inner
//! products they define.

use serde::{Deserialize, Serialize};

use crate::biortho::BiorthogonalSystem;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::hermitian::hermitian_eigen;
use crate::linalg::lu::cond_estimate;
use crate::linalg::matrix::{inner, outer, ComplexMatrix, C64};

/// `S_phi = Sum |phi_n><phi_n|` and `S_psi = Sum |psi_n><psi_n|`, mutually inverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricPair {
    pub s_phi: ComplexMatrix,
    pub s_psi: ComplexMatrix,
    /// `|S_phi S_psi - 1|_F`.
    pub inv_residual: f64,
    /// Generation tag: "0", "1", "2a" or "2b".
    pub level_label: String,
}

impl MetricPair {
    pub fn identity(dim: usize, level_label: &str) -> Self {
        Self {
            s_phi: ComplexMatrix::identity(dim),
            s_psi: ComplexMatrix::identity(dim),
            inv_residual: 0.0,
            level_label: level_label.to_string(),
        }
    }

    pub fn dim(&self) -> usize {
        self.s_phi.dim()
    }

    /// One-norm condition number of `S_phi`, using `S_psi` as its inverse.
    pub fn condition(&self) -> f64 {
        self.s_phi.norm_one() * self.s_psi.norm_one()
    }
}

/// Outer-product metrics of `b`, labelled generation "0".
pub fn build_metrics(b: &BiorthogonalSystem, tols: &Tolerances) -> Result<MetricPair> {
    build_metrics_labeled(b, "0", tols)
}

pub fn build_metrics_labeled(
    b: &BiorthogonalSystem,
    level_label: &str,
    tols: &Tolerances,
) -> Result<MetricPair> {
    let s_phi = sum_projectors(&b.phi);
    let s_psi = sum_projectors(&b.psi);
    let cond = cond_estimate(&s_phi);
    if !(cond <= tols.cond_max) {
        return Err(Error::MetricIllConditioned { cond });
    }
    for (name, s) in [("S_phi", &s_phi), ("S_psi", &s_psi)] {
        if !s.is_hermitian(tols.tol_herm) {
            return Err(Error::NotPositiveDefinite(format!("{name} not Hermitian")));
        }
        let e = hermitian_eigen(s)?;
        let lmax = *e.values.last().expect("non-empty");
        if !(e.values[0] > tols.tol_pd * lmax.max(1.0)) {
            return Err(Error::NotPositiveDefinite(format!(
                "{name} smallest eigenvalue {:e}",
                e.values[0]
            )));
        }
    }
    let inv_residual = s_phi.matmul(&s_psi).frob_dist(&ComplexMatrix::identity(b.dim));
    if !(inv_residual <= tols.tol_metric * cond.max(1.0)) {
        return Err(Error::MetricIllConditioned { cond });
    }
    Ok(MetricPair { s_phi, s_psi, inv_residual, level_label: level_label.to_string() })
}

fn sum_projectors(v: &[Vec<C64>]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(v.len());
    for f in v {
        acc = &acc + &outer(f, f);
    }
    acc
}

/// `<S f, g>`.
pub fn weighted_inner(f: &[C64], g: &[C64], s: &ComplexMatrix) -> C64 {
    inner(&s.matvec(f), g)
}

/// `phi -> S_phi phi`, `psi -> S_psi psi`; eigenvalues carried over.
pub fn promote_vectors(
    b: &BiorthogonalSystem,
    m: &MetricPair,
    tols: &Tolerances,
) -> Result<BiorthogonalSystem> {
    BiorthogonalSystem::from_parts(
        b.eigenvalues.clone(),
        b.phi.iter().map(|f| m.s_phi.matvec(f)).collect(),
        b.psi.iter().map(|p| m.s_psi.matvec(p)).collect(),
        tols,
    )
}

/// Largest `|S_phi psi_n - phi_n|` and `|S_psi phi_n - psi_n|` relative to
/// the target vector norm.
pub fn mapping_residual(b: &BiorthogonalSystem, m: &MetricPair) -> f64 {
    use crate::linalg::matrix::{norm2, sub_vec};
    let mut worst: f64 = 0.0;
    for (f, p) in b.phi.iter().zip(&b.psi) {
        let r1 = norm2(&sub_vec(&m.s_phi.matvec(p), f)) / norm2(f);
        let r2 = norm2(&sub_vec(&m.s_psi.matvec(f), p)) / norm2(p);
        worst = worst.max(r1).max(r2);
    }
    worst
}
