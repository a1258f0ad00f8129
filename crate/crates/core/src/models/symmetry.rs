//! Symmetry operators, the imaginary gauge transformation of the open chain
//! and the two-site parameter correspondence.

use std::f64::consts::PI;

use super::{build, ModelSpec};
use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64, ONE};

/// The operators a family supports; absent ones are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryOps {
    pub parity: Option<ComplexMatrix>,
    pub shift: Option<ComplexMatrix>,
    pub fourier: Option<ComplexMatrix>,
}

pub fn symmetry_ops(spec: &ModelSpec) -> Result<SymmetryOps> {
    spec.validate()?;
    match *spec {
        ModelSpec::PtDimer { .. } => Ok(SymmetryOps {
            parity: Some(ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])),
            shift: None,
            fourier: None,
        }),
        ModelSpec::HnPeriodic { l, .. } => Ok(SymmetryOps {
            parity: None,
            shift: Some(cyclic_shift(l, 1)),
            fourier: Some(fourier(l, 1)),
        }),
        ModelSpec::RlChain { l, .. } => Ok(SymmetryOps {
            parity: None,
            shift: Some(cyclic_shift(l, 2)),
            fourier: Some(fourier(l, 2)),
        }),
        _ => Err(Error::UnsupportedSymmetry {
            op: "parity/shift/fourier".into(),
            family: spec.family().into(),
        }),
    }
}

/// Translation by one cell of `block` sites on a ring of `cells` cells.
fn cyclic_shift(cells: usize, block: usize) -> ComplexMatrix {
    let n = cells * block;
    ComplexMatrix::from_fn(n, |i, j| if i == (j + block) % n { ONE } else { C64::new(0.0, 0.0) })
}

/// `F_{xy} = e^{i k (x-1)(y-1)} / sqrt(L)`, `k = 2 pi / L`, acting on cells.
fn fourier(cells: usize, block: usize) -> ComplexMatrix {
    let k = 2.0 * PI / cells as f64;
    let norm = 1.0 / (cells as f64).sqrt();
    ComplexMatrix::from_fn(cells * block, |i, j| {
        if i % block != j % block {
            return C64::new(0.0, 0.0);
        }
        let (x, y) = (i / block, j / block);
        // reduce the exponent before converting to keep the phase exact
        let m = (x * y) % cells;
        C64::from_polar(norm, k * m as f64)
    })
}

/// `|P conj(H) - H P|_F`, zero when `H` commutes with parity times complex conjugation.
pub fn pt_check(h: &ComplexMatrix, parity: &ComplexMatrix) -> f64 {
    parity.matmul(&h.conj()).frob_dist(&h.matmul(parity))
}

/// `S = diag(e^{g (x-1)})` and `S^-1 H S`, which removes the asymmetry of the
/// open chain.
pub fn gauge_symmetrize(spec: &ModelSpec) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let ModelSpec::HnOpen { l, g, .. } = *spec else {
        return Err(Error::InvalidSpec(format!("gauge transformation needs hn_open, got {}", spec.family())));
    };
    let h = build(spec)?;
    let d: Vec<f64> = (0..l).map(|x| (g * x as f64).exp()).collect();
    let s = ComplexMatrix::from_real_diag(&d);
    let sym = ComplexMatrix::from_fn(l, |i, j| h[(i, j)] * (d[j] / d[i]));
    Ok((s, sym))
}

/// Maps a two-site chain written as `-g' [[0, 1 - k], [1 + k, 0]]` to
/// hopping and asymmetry `(t_h, g)` with `t_h = g' sqrt(1 - k^2)` and
/// `e^{2g} = (1 + k) / (1 - k)`.
pub fn santos_params(g_prime: f64, k: f64) -> Result<(f64, f64)> {
    if !(k.abs() < 1.0) || !g_prime.is_finite() {
        return Err(Error::InvalidSpec(format!("need |k| < 1, got k = {k}")));
    }
    let t_h = g_prime * (1.0 - k * k).sqrt();
    let g = 0.5 * ((1.0 + k) / (1.0 - k)).ln();
    Ok((t_h, g))
}
