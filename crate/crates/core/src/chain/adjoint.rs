//! The two adjoints induced by a metric pair and the identities relating them.

use serde::{Deserialize, Serialize};

use super::metric::MetricPair;
use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;

/// `S_phi X^dagger S_psi`.
pub fn sharp(x: &ComplexMatrix, m: &MetricPair) -> ComplexMatrix {
    m.s_phi.matmul(&x.dagger()).matmul(&m.s_psi)
}

/// `S_psi X^dagger S_phi`.
pub fn flat(x: &ComplexMatrix, m: &MetricPair) -> ComplexMatrix {
    m.s_psi.matmul(&x.dagger()).matmul(&m.s_phi)
}

/// `|S A - B S|_F / max(1, |A|_F)`.
pub fn intertwine_residual(s: &ComplexMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    s.matmul(a).frob_dist(&b.matmul(s)) / a.frob_norm().max(1.0)
}

/// `|A - B|_F` divided by the larger of the two norms (at least 1e-300).
pub fn relative_dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.frob_dist(b) / a.frob_norm().max(b.frob_norm()).max(1e-300)
}

/// The four equivalent statements about the order of adjoint maps, evaluated
/// numerically. Residuals are relative to the size of the compared products.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    /// `flat(X)^dagger` against `flat(X^dagger)`.
    pub flat_commutes: f64,
    /// `[X, S_phi^2]`.
    pub phi_square_commutes: f64,
    /// `[X, S_psi^2]`.
    pub psi_square_commutes: f64,
    /// `sharp(X)^dagger` against `sharp(X^dagger)`.
    pub sharp_commutes: f64,
    pub tolerance: f64,
    /// Common truth value of the four statements.
    pub holds: bool,
}

impl Lemma1Report {
    pub fn residuals(&self) -> [f64; 4] {
        [
            self.flat_commutes,
            self.phi_square_commutes,
            self.psi_square_commutes,
            self.sharp_commutes,
        ]
    }
}

pub fn lemma1_check(x: &ComplexMatrix, m: &MetricPair, tol: f64) -> Result<Lemma1Report> {
    let xd = x.dagger();
    let flat_commutes = relative_dist(&flat(x, m).dagger(), &flat(&xd, m));
    let sharp_commutes = relative_dist(&sharp(x, m).dagger(), &sharp(&xd, m));
    let commute = |s: &ComplexMatrix| {
        let s2 = s.matmul(s);
        relative_dist(&x.matmul(&s2), &s2.matmul(x))
    };
    let phi_square_commutes = commute(&m.s_phi);
    let psi_square_commutes = commute(&m.s_psi);
    let flags = [flat_commutes, phi_square_commutes, psi_square_commutes, sharp_commutes]
        .map(|r| r <= tol);
    if flags.iter().any(|&f| f != flags[0]) {
        return Err(Error::InconsistentEquivalence(format!(
            "adjoint ordering statements disagree: residuals {flat_commutes:e}, \
             {phi_square_commutes:e}, {psi_square_commutes:e}, {sharp_commutes:e} at tolerance {tol:e}"
        )));
    }
    Ok(Lemma1Report {
        flat_commutes,
        phi_square_commutes,
        psi_square_commutes,
        sharp_commutes,
        tolerance: tol,
        holds: flags[0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{C64, I};

    fn pair() -> MetricPair {
        let s_phi = ComplexMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]);
        let s_psi = ComplexMatrix::from_real_rows(&[vec![1.0, -1.0], vec![-1.0, 2.0]]);
        MetricPair { s_phi, s_psi, inv_residual: 0.0, level_label: "0".into() }
    }

    #[test]
    fn identity_pair_reduces_to_dagger() {
        let x = ComplexMatrix::from_rows(&[vec![I, C64::new(1.0, 2.0)], vec![C64::new(0.0, 0.0), C64::new(3.0, 0.0)]]);
        let m = MetricPair::identity(2, "0");
        assert_eq!(sharp(&x, &m), x.dagger());
        assert_eq!(flat(&x, &m), x.dagger());
        assert!(lemma1_check(&x, &m, 1e-12).unwrap().holds);
    }

    #[test]
    fn daggers_swap_the_maps() {
        let x = ComplexMatrix::from_rows(&[vec![I, C64::new(1.0, 2.0)], vec![C64::new(-0.5, 0.0), C64::new(3.0, 1.0)]]);
        let m = pair();
        assert!(flat(&x, &m).dagger().frob_dist(&sharp(&x.dagger(), &m)) < 1e-12);
        assert!(sharp(&x, &m).dagger().frob_dist(&flat(&x.dagger(), &m)) < 1e-12);
    }

    #[test]
    fn metric_itself_satisfies_lemma() {
        let m = pair();
        assert!(lemma1_check(&m.s_phi, &m, 1e-12).unwrap().holds);
        let x = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 2.0]]);
        assert!(!lemma1_check(&x, &m, 1e-8).unwrap().holds);
    }
}
