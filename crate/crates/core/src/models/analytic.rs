//! Closed-form eigensystems and seed biorthogonal systems for each family.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{build, rl_hoppings, ModelSpec};
use crate::biortho::{build_biorthogonal, BiorthogonalSystem};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::eig::{canonical_order, normalize_phase};
use crate::linalg::matrix::{ComplexMatrix, C64, I, ONE, ZERO};

/// Closed-form eigenvalues with right (`H`) and left (`H^dagger`) eigenvector
/// families, normalized so that `<right_n, left_m> = delta_nm`. Canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticEigensystem {
    pub eigenvalues: Vec<C64>,
    pub right_vectors: Vec<Vec<C64>>,
    pub left_vectors: Vec<Vec<C64>>,
    pub validity_note: String,
}

impl AnalyticEigensystem {
    fn sorted(eigenvalues: Vec<C64>, right: Vec<Vec<C64>>, left: Vec<Vec<C64>>, note: &str) -> Self {
        let order = canonical_order(&eigenvalues);
        Self {
            eigenvalues: order.iter().map(|&i| eigenvalues[i]).collect(),
            right_vectors: order.iter().map(|&i| right[i].clone()).collect(),
            left_vectors: order.iter().map(|&i| left[i].clone()).collect(),
            validity_note: note.to_string(),
        }
    }

    pub fn to_biorthogonal(&self, tols: &Tolerances) -> Result<BiorthogonalSystem> {
        BiorthogonalSystem::from_parts(
            self.eigenvalues.clone(),
            self.right_vectors.clone(),
            self.left_vectors.clone(),
            tols,
        )
    }
}

pub fn analytic_reference(spec: &ModelSpec) -> Result<AnalyticEigensystem> {
    spec.validate()?;
    match *spec {
        ModelSpec::Triangular2x2 { alpha, e1, e2 } => {
            let a = C64::new(alpha, 0.0);
            Ok(AnalyticEigensystem::sorted(
                vec![e1, e2],
                vec![vec![ONE, ZERO], vec![a, ONE]],
                vec![vec![ONE, -a], vec![ZERO, ONE]],
                "requires E1 != E2",
            ))
        }
        ModelSpec::HnOpen { l, t_h, g } => {
            let norm = (2.0 / (l as f64 + 1.0)).sqrt();
            let mut e = Vec::with_capacity(l);
            let mut right = Vec::with_capacity(l);
            let mut left = Vec::with_capacity(l);
            for n in 1..=l {
                let k = n as f64 * PI / (l as f64 + 1.0);
                e.push(C64::new(-2.0 * t_h * k.cos(), 0.0));
                let mode = |sign: f64| -> Vec<C64> {
                    (1..=l)
                        .map(|x| {
                            let xf = x as f64;
                            C64::new(norm * (sign * g * (xf - 1.0)).exp() * (k * xf).sin(), 0.0)
                        })
                        .collect()
                };
                right.push(mode(1.0));
                left.push(mode(-1.0));
            }
            Ok(AnalyticEigensystem::sorted(e, right, left, "standing waves with envelope e^{+-g(x-1)}"))
        }
        ModelSpec::HnPeriodic { l, t_h, g } => {
            let norm = 1.0 / (l as f64).sqrt();
            let mut e = Vec::with_capacity(l);
            let mut waves = Vec::with_capacity(l);
            for n in 1..=l {
                let k = 2.0 * PI * n as f64 / l as f64;
                e.push(C64::new(k, g).cos() * (-2.0 * t_h));
                waves.push((1..=l).map(|x| C64::from_polar(norm, k * x as f64)).collect());
            }
            Ok(AnalyticEigensystem::sorted(e, waves.clone(), waves, "plane waves"))
        }
        ModelSpec::PtDimer { t_h, gamma } => pt_dimer_reference(t_h, gamma),
        ModelSpec::RlChain { .. } => rl_reference(spec),
        ModelSpec::HnImpurity { .. } | ModelSpec::HnRandom { .. } => Err(Error::NoClosedForm(spec.family().to_string())),
    }
}

/// Eigensystem of `[[i g, -1], [-1, -i g]]` scaled by `t`.
fn pt_dimer_reference(t_h: f64, gamma: f64) -> Result<AnalyticEigensystem> {
    if t_h == 0.0 {
        return Err(Error::NoClosedForm("pt_dimer needs t_h != 0".into()));
    }
    let g = gamma / t_h;
    let ig = I * g;
    let (e, right, left, note) = if g.abs() < 1.0 {
        let beta = (1.0 - g * g).sqrt();
        let b = C64::new(beta, 0.0);
        let c = 1.0 / (2.0 * beta).sqrt();
        (
            vec![-b, b],
            vec![vec![ONE * c, (ig + b) * c], vec![-(ig + b) * c, ONE * c]],
            vec![vec![(ig + b) * c, ONE * c], vec![-ONE * c, (ig + b) * c]],
            "unbroken phase |gamma| < |t|",
        )
    } else if g.abs() > 1.0 {
        let kappa = (g * g - 1.0).sqrt();
        let ik = I * kappa;
        let cr = (ik * 2.0).sqrt().inv();
        let cl = (-ik * 2.0).sqrt().inv();
        (
            vec![ik, -ik],
            vec![vec![cr, (ig - ik) * cr], vec![(ig - ik) * cr, -cr]],
            vec![vec![-(ig + ik) * cl, -cl], vec![-cl, (ig + ik) * cl]],
            "broken phase |gamma| > |t|",
        )
    } else {
        return Err(Error::NoClosedForm("exceptional point |gamma| = |t|".into()));
    };
    let e = e.into_iter().map(|z| z * t_h).collect();
    Ok(AnalyticEigensystem::sorted(e, right, left, note))
}

/// The `L` Bloch blocks `[[i gamma, -mu + i nu], [-mu - i nu, -i gamma]]` with
/// `mu = u + w cos k`, `nu = w sin k`, `k = 2 pi n / L`, `n = 1..L`.
pub fn rl_blocks(spec: &ModelSpec) -> Result<Vec<ComplexMatrix>> {
    let ModelSpec::RlChain { l, t_h, delta, gamma } = *spec else {
        return Err(Error::InvalidSpec(format!("{} has no Bloch blocks", spec.family())));
    };
    spec.validate()?;
    let (u, w) = rl_hoppings(t_h, delta);
    Ok((1..=l)
        .map(|n| {
            let k = 2.0 * PI * n as f64 / l as f64;
            let (mu, nu) = (u + w * k.cos(), w * k.sin());
            ComplexMatrix::from_rows(&[
                vec![I * gamma, C64::new(-mu, nu)],
                vec![C64::new(-mu, -nu), -I * gamma],
            ])
        })
        .collect())
}

fn rl_reference(spec: &ModelSpec) -> Result<AnalyticEigensystem> {
    let ModelSpec::RlChain { l, t_h, delta, gamma } = *spec else { unreachable!() };
    let (u, w) = rl_hoppings(t_h, delta);
    let scale = u.abs() + w.abs() + gamma.abs();
    let tiny = 1e-10 * scale.max(1.0);
    let mut e = Vec::with_capacity(2 * l);
    let mut right = Vec::with_capacity(2 * l);
    let mut left = Vec::with_capacity(2 * l);
    let norm = 1.0 / (l as f64).sqrt();
    for n in 1..=l {
        let k = 2.0 * PI * n as f64 / l as f64;
        let (mu, nu) = (u + w * k.cos(), w * k.sin());
        let eps = C64::new(mu * mu + nu * nu - gamma * gamma, 0.0).sqrt();
        let a = C64::new(mu, -nu);
        if eps.norm() < tiny || a.norm() < tiny {
            return Err(Error::NoClosedForm(format!("block k = {k} sits at an exceptional point")));
        }
        let ig = I * gamma;
        let ac = a.conj();
        // eigenvalue -eps, then +eps
        let p1 = [a, ig + eps].map(|z| z / (a * eps * 2.0).sqrt());
        let p2 = [-(ig + eps), ac].map(|z| z / (ac * eps * 2.0).sqrt());
        // left vectors: conjugated rows of the inverse of [p1 p2]
        let det = p1[0] * p2[1] - p2[0] * p1[1];
        let q1 = [p2[1] / det, -p2[0] / det].map(|z| z.conj());
        let q2 = [-p1[1] / det, p1[0] / det].map(|z| z.conj());
        for (lambda, p, q) in [(-eps, p1, q1), (eps, p2, q2)] {
            let embed = |v: [C64; 2]| -> Vec<C64> {
                (0..l)
                    .flat_map(|xi| {
                        let phase = C64::from_polar(norm, k * xi as f64);
                        [v[0] * phase, v[1] * phase]
                    })
                    .collect()
            };
            e.push(lambda);
            right.push(embed(p));
            left.push(embed(q));
        }
    }
    Ok(AnalyticEigensystem::sorted(e, right, left, "Bloch blocks embedded by a cell Fourier transform"))
}

/// Per-mode normalization of the seed basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `phi_n` unit norm, first largest-modulus entry real positive.
    #[default]
    UnitPhi,
    /// `phi_n` scaled to the family's closed-form eigenvectors.
    ClosedForm,
}

/// Seed biorthogonal system of `spec` under the chosen normalization.
///
/// The Bloch-block chain has pairwise repeated eigenvalues (`k` and `-k`), so
/// its seed is assembled from the blocks rather than from a general
/// eigendecomposition.
pub fn seed_system(spec: &ModelSpec, normalization: Normalization, tols: &Tolerances) -> Result<BiorthogonalSystem> {
    if let ModelSpec::RlChain { .. } = spec {
        let b = analytic_reference(spec)?.to_biorthogonal(tols)?;
        return Ok(match normalization {
            Normalization::ClosedForm => b,
            Normalization::UnitPhi => to_unit_phi(&b),
        });
    }
    let h = build(spec)?;
    let b = build_biorthogonal(&h, tols)?;
    match normalization {
        Normalization::UnitPhi => Ok(b),
        Normalization::ClosedForm => {
            let a = analytic_reference(spec)?;
            // pair closed-form modes to numerical ones by nearest eigenvalue
            let mut used = vec![false; a.eigenvalues.len()];
            let mut reference = Vec::with_capacity(b.dim);
            for e in &b.eigenvalues {
                let (j, _) = a
                    .eigenvalues
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| !used[*j])
                    .map(|(j, z)| (j, (z - e).norm()))
                    .min_by(|x, y| x.1.total_cmp(&y.1))
                    .expect("same dimension");
                used[j] = true;
                reference.push(a.right_vectors[j].clone());
            }
            b.gauged_to(&reference)
        }
    }
}

fn to_unit_phi(b: &BiorthogonalSystem) -> BiorthogonalSystem {
    let c: Vec<C64> = b
        .phi
        .iter()
        .map(|f| {
            let target = normalize_phase(f.clone());
            // the scalar taking f to its normalized version
            let (i, _) = f
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
                .expect("non-empty");
            target[i] / f[i]
        })
        .collect();
    b.rescaled(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{norm2, scale_vec, sub_vec};

    fn check_eigen_equations(spec: &ModelSpec) {
        let h = build(spec).unwrap();
        let a = analytic_reference(spec).unwrap();
        let hd = h.dagger();
        for ((e, r), l) in a.eigenvalues.iter().zip(&a.right_vectors).zip(&a.left_vectors) {
            assert!(norm2(&sub_vec(&h.matvec(r), &scale_vec(r, *e))) < 1e-12, "{spec:?}");
            assert!(norm2(&sub_vec(&hd.matvec(l), &scale_vec(l, e.conj()))) < 1e-12, "{spec:?}");
        }
        a.to_biorthogonal(&Tolerances::default()).unwrap();
    }

    #[test]
    fn closed_forms_solve_their_models() {
        for spec in [
            ModelSpec::Triangular2x2 { alpha: 1.0, e1: C64::new(1.0, 0.0), e2: C64::new(2.0, 0.0) },
            ModelSpec::Triangular2x2 { alpha: -0.4, e1: C64::new(0.0, 1.0), e2: C64::new(2.0, -1.0) },
            ModelSpec::HnOpen { l: 7, t_h: 1.0, g: 0.3 },
            ModelSpec::HnOpen { l: 5, t_h: -0.5, g: -0.2 },
            ModelSpec::HnPeriodic { l: 6, t_h: 1.0, g: 0.1 },
            ModelSpec::PtDimer { t_h: 1.0, gamma: 0.5 },
            ModelSpec::PtDimer { t_h: 1.0, gamma: 2.0 },
            ModelSpec::PtDimer { t_h: -2.0, gamma: 0.7 },
            ModelSpec::RlChain { l: 6, t_h: 1.0, delta: 0.3, gamma: 0.1 },
            ModelSpec::RlChain { l: 5, t_h: 1.0, delta: 0.3, gamma: 2.5 },
        ] {
            check_eigen_equations(&spec);
        }
    }

    #[test]
    fn open_chain_three_sites() {
        let a = analytic_reference(&ModelSpec::HnOpen { l: 3, t_h: 1.0, g: 0.7 }).unwrap();
        let r2 = 2f64.sqrt();
        for (z, x) in a.eigenvalues.iter().zip([-r2, 0.0, r2]) {
            assert!((z - C64::new(x, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn disordered_families_have_no_closed_form() {
        let spec = ModelSpec::HnRandom { l: 5, t_h: 1.0, g: 0.1, v_max: 1.0, seed: 3 };
        assert!(matches!(analytic_reference(&spec), Err(Error::NoClosedForm(_))));
    }

    #[test]
    fn unit_seed_for_bloch_chain() {
        let spec = ModelSpec::RlChain { l: 4, t_h: 1.0, delta: 0.3, gamma: 0.1 };
        let b = seed_system(&spec, Normalization::UnitPhi, &Tolerances::default()).unwrap();
        for f in &b.phi {
            assert!((norm2(f) - 1.0).abs() < 1e-14);
        }
        assert!(b.gram_residual < 1e-12);
    }
}
