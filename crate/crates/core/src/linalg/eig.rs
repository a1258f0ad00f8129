//! General (non-Hermitian) complex eigensolver.
//!
//! Pipeline: diagonal balancing, Householder reduction to upper Hessenberg
//! form, single-shift QR iteration with Givens rotations to a complex Schur
//! form `T`, back-substitution for the eigenvectors of `T`, and finally
//! transformation back to the original coordinates. Every returned eigenpair
//! is certified against the original matrix.

use super::lu::Lu;
use super::matrix::{norm2, scale_vec, sub_vec, ComplexMatrix, C64, ONE, ZERO};
use crate::config::Tolerances;
use crate::error::{Error, Result};

pub const MAX_DIM: usize = 1024;
const MAX_ITER_PER_EIGENVALUE: usize = 60;

/// Eigenpairs of a matrix in canonical order (real part, then imaginary part).
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub dim: usize,
    pub eigenvalues: Vec<C64>,
    /// Right eigenvectors, unit 2-norm, `vectors[n]` pairs with `eigenvalues[n]`.
    pub vectors: Vec<Vec<C64>>,
    /// `|H v_n - lambda_n v_n|_2` for each pair.
    pub residuals: Vec<f64>,
    /// Minimum pairwise eigenvalue distance (infinite for `dim == 1`).
    pub min_gap: f64,
}

impl Eigensystem {
    pub fn spectral_radius(&self) -> f64 {
        spectral_radius(&self.eigenvalues)
    }
}

pub fn spectral_radius(values: &[C64]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn min_gap(values: &[C64]) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            gap = gap.min((a - b).norm());
        }
    }
    gap
}

/// Permutation putting `values` in canonical order: ascending real part, with
/// real parts equal up to rounding grouped and ordered by imaginary part; ties
/// keep the original index order.
pub fn canonical_order(values: &[C64]) -> Vec<usize> {
    let scale = spectral_radius(values).max(1.0);
    let group_tol = 1e-12 * scale;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re).then(a.cmp(&b)));
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]].re - values[order[end - 1]].re <= group_tol {
            end += 1;
        }
        order[start..end]
            .sort_by(|&a, &b| values[a].im.total_cmp(&values[b].im).then(a.cmp(&b)));
        start = end;
    }
    order
}

pub fn sort_canonical(values: &[C64]) -> Vec<C64> {
    canonical_order(values).into_iter().map(|i| values[i]).collect()
}

/// Full eigendecomposition with residual certificates and the multiplicity-one guard.
pub fn eig(h: &ComplexMatrix, tols: &Tolerances) -> Result<Eigensystem> {
    let es = eig_unguarded(h, tols)?;
    let threshold = tols.tol_gap * es.spectral_radius().max(1.0);
    if es.min_gap < threshold {
        return Err(Error::DegenerateSpectrum { gap: es.min_gap, threshold });
    }
    Ok(es)
}

/// Like [`eig`] but accepts repeated eigenvalues. Eigenvectors of a repeated
/// eigenvalue are whatever the Schur form yields and still carry residuals.
pub fn eig_unguarded(h: &ComplexMatrix, tols: &Tolerances) -> Result<Eigensystem> {
    check_input(h)?;
    let n = h.dim();
    let norm = h.frob_norm();
    let schur = SchurForm::compute(h)?;
    let raw_values = schur.t.diagonal();
    let raw_vectors = schur.eigenvectors();

    let bound = tols.tol_eig * norm;
    let mut vectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for (lambda, v) in raw_values.iter().zip(raw_vectors) {
        let (v, r) = certify(h, *lambda, v, bound);
        if !(r <= bound) && norm > 0.0 {
            return Err(Error::NoConvergence { iterations: MAX_ITER_PER_EIGENVALUE * n });
        }
        vectors.push(v);
        residuals.push(r);
    }

    let order = canonical_order(&raw_values);
    let eigenvalues: Vec<C64> = order.iter().map(|&i| raw_values[i]).collect();
    let min_gap = min_gap(&eigenvalues);
    Ok(Eigensystem {
        dim: n,
        eigenvalues,
        vectors: order.iter().map(|&i| vectors[i].clone()).collect(),
        residuals: order.iter().map(|&i| residuals[i]).collect(),
        min_gap,
    })
}

/// Eigenvalues only, canonical order, no degeneracy guard.
pub fn eigvals(h: &ComplexMatrix) -> Result<Vec<C64>> {
    check_input(h)?;
    let schur = SchurForm::compute(h)?;
    Ok(sort_canonical(&schur.t.diagonal()))
}

fn check_input(h: &ComplexMatrix) -> Result<()> {
    if h.dim() > MAX_DIM {
        return Err(Error::InvalidMatrix(format!(
            "dimension {} exceeds supported maximum {MAX_DIM}",
            h.dim()
        )));
    }
    if !h.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    Ok(())
}

/// Normalizes `v`, fixes its phase and, when the residual misses `bound`,
/// polishes it with a few steps of shifted inverse iteration.
fn certify(h: &ComplexMatrix, lambda: C64, v: Vec<C64>, bound: f64) -> (Vec<C64>, f64) {
    let residual = |x: &[C64]| norm2(&sub_vec(&h.matvec(x), &scale_vec(x, lambda)));
    let mut best = normalize_phase(v);
    let mut best_r = residual(&best);
    if best_r <= bound {
        return (best, best_r);
    }
    let n = h.dim();
    let eps_shift = f64::EPSILON * h.frob_norm().max(f64::MIN_POSITIVE) * 8.0;
    let shift = lambda + C64::new(eps_shift, eps_shift);
    let shifted = ComplexMatrix::from_fn(n, |i, j| if i == j { h[(i, j)] - shift } else { h[(i, j)] });
    let lu = Lu::factor(&shifted);
    if lu.is_singular() {
        return (best, best_r);
    }
    let mut x = best.clone();
    for _ in 0..3 {
        let y = lu.solve(&x);
        let ny = norm2(&y);
        if !(ny.is_finite() && ny > 0.0) {
            break;
        }
        x = normalize_phase(y);
        let r = residual(&x);
        if r < best_r {
            best = x.clone();
            best_r = r;
        }
        if best_r <= bound {
            break;
        }
    }
    (best, best_r)
}

/// Unit 2-norm with the first entry of largest modulus made real positive.
pub fn normalize_phase(v: Vec<C64>) -> Vec<C64> {
    let nrm = norm2(&v);
    if nrm == 0.0 {
        return v;
    }
    let mut pivot = 0;
    let mut pmax = -1.0;
    for (i, z) in v.iter().enumerate() {
        // strict comparison with a relative margin picks the first of near-equal entries
        if z.norm() > pmax * (1.0 + 1e-12) {
            pmax = z.norm();
            pivot = i;
        }
    }
    let phase = v[pivot] / v[pivot].norm();
    let c = phase.conj() / nrm;
    scale_vec(&v, c)
}

/// `A = D Q T Q^dagger D^-1` with `D` diagonal (balancing), `Q` unitary and `T`
/// upper triangular.
struct SchurForm {
    t: ComplexMatrix,
    q: ComplexMatrix,
    d: Vec<f64>,
}

impl SchurForm {
    fn compute(a: &ComplexMatrix) -> Result<Self> {
        let (mut h, d) = balance(a);
        let mut q = hessenberg(&mut h);
        schur_qr(&mut h, &mut q)?;
        // clear rounding below the diagonal
        let n = h.dim();
        for i in 0..n {
            for j in 0..i {
                h[(i, j)] = ZERO;
            }
        }
        Ok(Self { t: h, q, d })
    }

    /// Eigenvectors of the original matrix, unnormalized, in Schur diagonal order.
    fn eigenvectors(&self) -> Vec<Vec<C64>> {
        let n = self.t.dim();
        let tnorm = self.t.frob_norm().max(f64::MIN_POSITIVE);
        let small = f64::EPSILON * tnorm;
        let big = 1e150;
        (0..n)
            .map(|k| {
                let lambda = self.t[(k, k)];
                let mut x = vec![ZERO; n];
                x[k] = ONE;
                for i in (0..k).rev() {
                    let s: C64 = (i + 1..=k).map(|j| self.t[(i, j)] * x[j]).sum();
                    let mut denom = self.t[(i, i)] - lambda;
                    if denom.norm() < small {
                        denom = C64::new(small, 0.0);
                    }
                    x[i] = -s / denom;
                    if x[i].norm() > big {
                        let inv = 1.0 / x[i].norm();
                        for xj in x[i..=k].iter_mut() {
                            *xj *= inv;
                        }
                    }
                }
                let y = self.q.matvec(&x);
                y.iter().zip(&self.d).map(|(z, &di)| z * di).collect()
            })
            .collect()
    }
}

/// Diagonal similarity `D^-1 A D` by powers of two that equalizes row and
/// column norms. Returns the balanced matrix and the diagonal of `D`.
fn balance(a: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>) {
    let n = a.dim();
    let mut b = a.clone();
    let mut d = vec![1.0; n];
    let radix = 2.0;
    let radix2 = radix * radix;
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += b[(j, i)].l1_norm();
                    r += b[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix2;
            }
            g = r * radix;
            while c >= g {
                f /= radix;
                c /= radix2;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                d[i] *= f;
                for j in 0..n {
                    b[(i, j)] /= f;
                    b[(j, i)] *= f;
                }
            }
        }
    }
    (b, d)
}

/// Householder reduction in place; returns the accumulated unitary `Q` with
/// `A_in = Q H Q^dagger`.
fn hessenberg(h: &mut ComplexMatrix) -> ComplexMatrix {
    let n = h.dim();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return q;
    }
    for k in 0..n - 2 {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = norm2(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = norm2(&v);
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // P = I - 2 v v^dagger on indices k+1..n
        // H <- P H
        for j in 0..n {
            let s: C64 = (0..v.len()).map(|a| v[a].conj() * h[(k + 1 + a, j)]).sum();
            for a in 0..v.len() {
                h[(k + 1 + a, j)] -= v[a] * s * 2.0;
            }
        }
        // H <- H P, Q <- Q P
        for m in [&mut *h, &mut q] {
            for i in 0..n {
                let s: C64 = (0..v.len()).map(|a| m[(i, k + 1 + a)] * v[a]).sum();
                for a in 0..v.len() {
                    m[(i, k + 1 + a)] -= s * v[a].conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    q
}

/// Single-shift QR iteration on a Hessenberg matrix, reducing it to upper
/// triangular form and accumulating the rotations into `z`.
fn schur_qr(h: &mut ComplexMatrix, z: &mut ComplexMatrix) -> Result<()> {
    let n = h.dim();
    if n == 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let hnorm = h.frob_norm();
    if hnorm == 0.0 {
        return Ok(());
    }
    let mut ihi = n - 1;
    let mut its = 0usize;
    let mut total = 0usize;
    let max_total = MAX_ITER_PER_EIGENVALUE * n;
    let mut rot: Vec<(C64, C64, f64)> = Vec::with_capacity(n);

    while ihi > 0 {
        // locate the active unreduced block [l, ihi]
        let mut l = ihi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if diag == 0.0 {
                diag = hnorm;
            }
            if sub <= eps * diag {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == ihi {
            ihi -= 1;
            its = 0;
            continue;
        }
        if total >= max_total || its >= MAX_ITER_PER_EIGENVALUE {
            return Err(Error::NoConvergence { iterations: total });
        }
        its += 1;
        total += 1;

        let mu = if its.is_multiple_of(10) {
            // exceptional shift breaks cycles
            h[(ihi, ihi)] + C64::new(0.75 * h[(ihi, ihi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(ihi - 1, ihi - 1)], h[(ihi - 1, ihi)], h[(ihi, ihi - 1)], h[(ihi, ihi)])
        };

        for k in l..=ihi {
            h[(k, k)] -= mu;
        }
        rot.clear();
        for k in l..ihi {
            let a = h[(k, k)];
            let b = h[(k + 1, k)];
            let rho = (a.norm_sqr() + b.norm_sqr()).sqrt();
            rot.push((a, b, rho));
            if rho == 0.0 {
                continue;
            }
            // rows k, k+1 <- R [row k; row k+1], R = [[a*, b*], [-b, a]] / rho
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = (a.conj() * x + b.conj() * y) / rho;
                h[(k + 1, j)] = (-b * x + a * y) / rho;
            }
        }
        for (idx, &(a, b, rho)) in rot.iter().enumerate() {
            if rho == 0.0 {
                continue;
            }
            let k = l + idx;
            // columns k, k+1 <- [col k, col k+1] R^dagger
            let rmax = (k + 1).min(ihi);
            for i in 0..=rmax {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = (x * a + y * b) / rho;
                h[(i, k + 1)] = (-x * b.conj() + y * a.conj()) / rho;
            }
            for i in 0..n {
                let x = z[(i, k)];
                let y = z[(i, k + 1)];
                z[(i, k)] = (x * a + y * b) / rho;
                z[(i, k + 1)] = (-x * b.conj() + y * a.conj()) / rho;
            }
        }
        for k in l..=ihi {
            h[(k, k)] += mu;
        }
    }
    Ok(())
}

/// Eigenvalue of `[[p, q], [r, s]]` closer to `s`.
fn wilkinson_shift(p: C64, q: C64, r: C64, s: C64) -> C64 {
    let half = (p - s) * 0.5;
    let disc = (half * half + q * r).sqrt();
    let m = (p + s) * 0.5;
    let l1 = m + disc;
    let l2 = m - disc;
    if (l1 - s).norm() <= (l2 - s).norm() {
        l1
    } else {
        l2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_is_degenerate() {
        let err = eig(&ComplexMatrix::identity(2), &tols()).unwrap_err();
        assert!(matches!(err, Error::DegenerateSpectrum { .. }));
    }

    #[test]
    fn diagonal_case() {
        let es = eig(&ComplexMatrix::from_real_diag(&[2.0, 1.0]), &tols()).unwrap();
        assert_eq!(es.eigenvalues, vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        // eigenvalue 1 sits on the second coordinate
        assert!((es.vectors[0][0]).norm() < 1e-15 && (es.vectors[0][1] - ONE).norm() < 1e-15);
        assert!((es.vectors[1][1]).norm() < 1e-15 && (es.vectors[1][0] - ONE).norm() < 1e-15);
    }

    #[test]
    fn upper_triangular_two_by_two() {
        // characteristic polynomial (1 - l)(2 - l)
        let h = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 2.0]]);
        let es = eig(&h, &tols()).unwrap();
        assert!((es.eigenvalues[0] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((es.eigenvalues[1] - C64::new(2.0, 0.0)).norm() < 1e-14);
        assert!((es.min_gap - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let h = ComplexMatrix::from_real_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        let es = eig(&h, &tols()).unwrap();
        assert!((es.eigenvalues[0] - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((es.eigenvalues[1] - C64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn canonical_order_groups_conjugates() {
        let v = vec![
            C64::new(1.0 + 1e-16, 2.0),
            C64::new(1.0, -2.0),
            C64::new(-3.0, 0.0),
        ];
        let sorted = sort_canonical(&v);
        assert_eq!(sorted[0], C64::new(-3.0, 0.0));
        assert_eq!(sorted[1].im, -2.0);
        assert_eq!(sorted[2].im, 2.0);
    }

    #[test]
    fn balancing_handles_graded_matrix() {
        // diagonal similarity of a symmetric tridiagonal matrix with a wide grading
        let n = 12;
        let g: f64 = 1.5;
        let h = ComplexMatrix::from_fn(n, |i, j| {
            if i == j + 1 {
                C64::new(-g.exp(), 0.0)
            } else if j == i + 1 {
                C64::new(-(-g).exp(), 0.0)
            } else {
                ZERO
            }
        });
        let es = eig(&h, &tols()).unwrap();
        for (k, lambda) in es.eigenvalues.iter().enumerate() {
            let exact = -2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((lambda - C64::new(exact, 0.0)).norm() < 1e-10, "{lambda} vs {exact}");
        }
    }

    #[test]
    fn rejects_oversized() {
        let h = ComplexMatrix::zeros(MAX_DIM + 1);
        assert!(matches!(eigvals(&h), Err(Error::InvalidMatrix(_))));
    }
}
