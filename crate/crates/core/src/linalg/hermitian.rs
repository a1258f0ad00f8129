//! Cyclic Jacobi eigensolver for Hermitian matrices and the positive square root.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `A = V diag(values) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: ComplexMatrix,
}

/// Jacobi rotations applied to the Hermitian part of `a`; the caller is
/// responsible for checking Hermiticity first.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frob_norm();
    if scale == 0.0 {
        return Ok(HermitianEigen { values: vec![0.0; n], vectors: v });
    }

    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale * 1e-2 || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r; // e^{i theta}
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = diag(1, e^{-i theta}) * [[c, s], [-s, c]]
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = phase.conj() * (-s);
                let jqq = phase.conj() * c;
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = akp * jpp + akq * jqp;
                    m[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    m[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { iterations: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let cols: Vec<Vec<C64>> = order.iter().map(|&i| v.column(i)).collect();
    Ok(HermitianEigen { values, vectors: ComplexMatrix::from_columns(&cols) })
}

/// Rebuilds `V f(diag) V^dagger` from a Hermitian decomposition.
pub fn hermitian_function(e: &HermitianEigen, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let n = e.values.len();
    let fv: Vec<f64> = e.values.iter().map(|&x| f(x)).collect();
    let out = ComplexMatrix::from_fn(n, |i, j| {
        (0..n).map(|k| e.vectors[(i, k)] * fv[k] * e.vectors[(j, k)].conj()).sum()
    });
    out.hermitian_part()
}

/// The unique Hermitian positive-definite `B` with `B^2 = A`.
///
/// `A` must be Hermitian within `tol_herm` and its smallest eigenvalue must
/// exceed `tol_pd * max(1, largest eigenvalue)`.
pub fn positive_sqrt(a: &ComplexMatrix, tol_herm: f64, tol_pd: f64) -> Result<ComplexMatrix> {
    if !a.is_hermitian(tol_herm) {
        return Err(Error::NotPositiveDefinite(format!(
            "not Hermitian (residual {:e})",
            a.hermiticity_residual()
        )));
    }
    let e = hermitian_eigen(a)?;
    let lmax = *e.values.last().expect("non-empty spectrum");
    let lmin = e.values[0];
    if !(lmin > tol_pd * lmax.max(1.0)) {
        return Err(Error::NotPositiveDefinite(format!(
            "smallest eigenvalue {lmin:e} (largest {lmax:e})"
        )));
    }
    Ok(hermitian_function(&e, f64::sqrt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::I;

    #[test]
    fn sqrt_of_diagonal_and_identity() {
        let id = ComplexMatrix::identity(3);
        assert!(positive_sqrt(&id, 1e-10, 1e-12).unwrap().frob_dist(&id) < 1e-15);
        let a = ComplexMatrix::from_real_diag(&[4.0, 9.0]);
        let b = positive_sqrt(&a, 1e-10, 1e-12).unwrap();
        assert!(b.frob_dist(&ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn rejects_indefinite_and_non_hermitian() {
        let a = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert!(matches!(positive_sqrt(&a, 1e-10, 1e-12), Err(Error::NotPositiveDefinite(_))));
        let b = ComplexMatrix::from_rows(&[vec![C64::new(1.0, 0.0), I], vec![I, C64::new(1.0, 0.0)]]);
        assert!(matches!(positive_sqrt(&b, 1e-10, 1e-12), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn jacobi_complex_hermitian() {
        let a = ComplexMatrix::from_rows(&[
            vec![C64::new(2.0, 0.0), C64::new(0.0, -1.0), C64::new(0.5, 0.5)],
            vec![C64::new(0.0, 1.0), C64::new(3.0, 0.0), C64::new(1.0, 0.0)],
            vec![C64::new(0.5, -0.5), C64::new(1.0, 0.0), C64::new(-1.0, 0.0)],
        ]);
        let e = hermitian_eigen(&a).unwrap();
        let rebuilt = hermitian_function(&e, |x| x);
        assert!(rebuilt.frob_dist(&a) < 1e-13);
        let vtv = e.vectors.dagger().matmul(&e.vectors);
        assert!(vtv.frob_dist(&ComplexMatrix::identity(3)) < 1e-13);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}
