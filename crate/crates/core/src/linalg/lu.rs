//! LU factorization with partial pivoting, inversion, condition estimates and
//! integer matrix powers.

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// `P A = L U` packed in one matrix; `perm[i]` is the source row of row `i`.
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    singular: bool,
}

impl Lu {
    pub fn factor(a: &ComplexMatrix) -> Self {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Self { lu, perm, singular }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.dim();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let below: C64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= below;
        }
        for i in (0..n).rev() {
            let above: C64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - above) / self.lu[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> ComplexMatrix {
        let n = self.lu.dim();
        let cols: Vec<Vec<C64>> = (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = ONE;
                self.solve(&e)
            })
            .collect();
        ComplexMatrix::from_columns(&cols)
    }

    pub fn determinant(&self) -> C64 {
        let n = self.lu.dim();
        let mut det = (0..n).map(|i| self.lu[(i, i)]).product::<C64>();
        // parity of the permutation
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j];
                len += 1;
            }
            if len % 2 == 0 {
                det = -det;
            }
        }
        det
    }
}

/// One-norm condition number `|A|_1 |A^-1|_1`; infinite when `A` is exactly singular.
pub fn cond_estimate(a: &ComplexMatrix) -> f64 {
    let lu = Lu::factor(a);
    if lu.is_singular() {
        return f64::INFINITY;
    }
    let inv = lu.inverse();
    if !inv.is_finite() {
        return f64::INFINITY;
    }
    a.norm_one() * inv.norm_one()
}

/// Inverse, refused when the condition estimate exceeds `cond_max`.
pub fn inverse(a: &ComplexMatrix, cond_max: f64) -> Result<ComplexMatrix> {
    let lu = Lu::factor(a);
    if lu.is_singular() {
        return Err(Error::Singular { cond: f64::INFINITY });
    }
    let inv = lu.inverse();
    let cond = if inv.is_finite() { a.norm_one() * inv.norm_one() } else { f64::INFINITY };
    if !(cond <= cond_max) {
        return Err(Error::Singular { cond });
    }
    Ok(inv)
}

/// `A^k` by binary powering; `A^0` is the identity.
pub fn matpow(a: &ComplexMatrix, k: u32) -> ComplexMatrix {
    let mut result = ComplexMatrix::identity(a.dim());
    let mut base = a.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = result.matmul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.matmul(&base);
        }
    }
    result
}
