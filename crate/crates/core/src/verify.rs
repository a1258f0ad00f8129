//! Invariant suite over a chain tree and the reality / pseudo-Hermiticity
//! classification.

use serde::{Deserialize, Serialize};

use crate::biortho::{resolution_residual, BiorthogonalSystem};
use crate::chain::tree::{conditioned_spectrum_distance, spectrum_tolerance};
use crate::chain::{
    build_metrics, flat, intertwine_residual, lemma1_check, mapping_residual,
    power_identity_residuals, relative_dist, sharp, ChainNode, ChainTree, MetricPair,
};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::eig::{eigvals, spectral_radius};
use crate::linalg::hermitian::hermitian_eigen;
use crate::linalg::matrix::{inner, norm2, scale_vec, sub_vec, ComplexMatrix, C64, I};
use crate::models::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumClass {
    #[serde(rename = "all-real")]
    AllReal,
    #[serde(rename = "all-imaginary")]
    AllImaginary,
    #[serde(rename = "mixed")]
    Mixed,
}

impl std::fmt::Display for SpectrumClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::AllReal => "all-real",
            Self::AllImaginary => "all-imaginary",
            Self::Mixed => "mixed",
        })
    }
}

/// Whether a check is expected to pass, expected to fail, or only reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Pass,
    Fail,
    Report,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    /// `residual <= tolerance`.
    pub passed: bool,
    pub expect: Expect,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64, expect: Expect) -> Self {
        Self { name: name.into(), residual, tolerance, passed: residual <= tolerance, expect }
    }

    /// The outcome agrees with the expectation.
    pub fn ok(&self) -> bool {
        match self.expect {
            Expect::Pass => self.passed,
            Expect::Fail => !self.passed,
            Expect::Report => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub spectrum_class: SpectrumClass,
    pub pseudo_hermitian: bool,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.ok()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }
}

/// Absolute reality threshold `tol_real * (1 + spectral radius)`.
pub fn reality_threshold(e: &[C64], tol_real: f64) -> f64 {
    tol_real * (1.0 + spectral_radius(e))
}

/// Classifies `e` with the threshold [`reality_threshold`]. A spectrum that
/// is both real and imaginary (all zeros) counts as all-real.
pub fn classify_spectrum(e: &[C64], tol_real: f64) -> SpectrumClass {
    let tol = reality_threshold(e, tol_real);
    if e.iter().all(|z| z.im.abs() <= tol) {
        SpectrumClass::AllReal
    } else if e.iter().all(|z| z.re.abs() <= tol) {
        SpectrumClass::AllImaginary
    } else {
        SpectrumClass::Mixed
    }
}

/// Number of eigenvalues with `|Im| <= tol_real * (1 + spectral radius)`.
pub fn count_real(e: &[C64], tol_real: f64) -> usize {
    let tol = reality_threshold(e, tol_real);
    e.iter().filter(|z| z.im.abs() <= tol).count()
}

/// Residuals `|A + sign B|` of the four pseudo-Hermiticity statements;
/// `sign = -1` for the plain identities and `+1` for the anti variants. The
/// two intertwining residuals are divided by `|S|_F`.
fn pseudo_residuals(h: &ComplexMatrix, m: &MetricPair, sign: f64) -> [f64; 4] {
    let hd = h.dagger();
    let res = |a: &ComplexMatrix, b: &ComplexMatrix| (a + &b.scale_real(sign)).frob_norm();
    [
        res(&m.s_psi.matmul(h), &hd.matmul(&m.s_psi)) / m.s_psi.frob_norm(),
        res(&m.s_phi.matmul(&hd), &h.matmul(&m.s_phi)) / m.s_phi.frob_norm(),
        res(h, &sharp(h, m)),
        res(&hd, &flat(&hd, m)),
    ]
}

const ITEMS: [&str; 4] = ["ii.S_psi_intertwines", "iii.S_phi_intertwines", "iv.sharp_fixes_H", "v.flat_fixes_Hdag"];

/// Reality of the spectrum against the four pseudo-Hermiticity statements.
/// Each item is expected to pass exactly when the spectrum is all-real;
/// tolerance `tol_theorem * |H|_F`.
pub fn theorem1_suite(
    h: &ComplexMatrix,
    b: &BiorthogonalSystem,
    m: &MetricPair,
    tols: &Tolerances,
) -> Result<VerificationReport> {
    let class = classify_spectrum(&b.eigenvalues, tols.tol_real);
    let tol = tols.tol_theorem * h.frob_norm();
    let res = pseudo_residuals(h, m, -1.0);
    let real = class == SpectrumClass::AllReal;
    let expect = if real { Expect::Pass } else { Expect::Fail };
    let checks: Vec<Check> = ITEMS
        .iter()
        .zip(res)
        .map(|(name, r)| Check::new(format!("theorem1.{name}"), r, tol, expect))
        .collect();
    let all_pass = checks.iter().all(|c| c.passed);
    if real != all_pass {
        return Err(Error::InconsistentEquivalence(format!(
            "spectrum {class} but pseudo-Hermiticity residuals {res:?} at tolerance {tol:e}"
        )));
    }
    Ok(VerificationReport { checks, spectrum_class: class, pseudo_hermitian: all_pass, notes: vec![] })
}

/// Anti-pseudo-Hermiticity for purely imaginary spectra, plus the statement
/// that `-i h` is pseudo-Hermitian with the same metrics.
pub fn remark1_suite(
    h: &ComplexMatrix,
    b: &BiorthogonalSystem,
    m: &MetricPair,
    tols: &Tolerances,
) -> Result<VerificationReport> {
    let class = classify_spectrum(&b.eigenvalues, tols.tol_real);
    if class != SpectrumClass::AllImaginary {
        return Err(Error::WrongSpectrumClass {
            expected: SpectrumClass::AllImaginary.to_string(),
            found: class.to_string(),
        });
    }
    let tol = tols.tol_theorem * h.frob_norm();
    let res = pseudo_residuals(h, m, 1.0);
    let mut checks: Vec<Check> = ITEMS
        .iter()
        .zip(res)
        .map(|(name, r)| Check::new(format!("remark1.{name}"), r, tol, Expect::Pass))
        .collect();
    let rotated = h.scale(-I);
    let rotated_basis = BiorthogonalSystem {
        eigenvalues: b.eigenvalues.iter().map(|z| -I * z).collect(),
        ..b.clone()
    };
    let inner_report = theorem1_suite(&rotated, &rotated_basis, m, tols)?;
    checks.extend(inner_report.checks.into_iter().map(|mut c| {
        c.name = format!("remark1.rotated.{}", c.name);
        c.expect = Expect::Pass;
        c
    }));
    let pseudo_hermitian = false;
    Ok(VerificationReport { checks, spectrum_class: class, pseudo_hermitian, notes: vec![] })
}

/// Runs every invariant on `t` and never aborts; failures are report entries.
pub fn full_suite(t: &ChainTree, tols: &Tolerances) -> VerificationReport {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let seed = &t.seed;
    let h = t.hamiltonian();
    let hnorm = h.frob_norm();
    let class = classify_spectrum(&seed.eigenvalues, tols.tol_real);

    // seed basis
    checks.push(Check::new("seed.gram", seed.gram_residual, tols.tol_bio, Expect::Pass));
    checks.push(Check::new("seed.resolution", resolution_residual(seed), tols.tol_bio, Expect::Pass));
    let dual = seed.dual_resolution().frob_dist(&ComplexMatrix::identity(seed.dim));
    checks.push(Check::new("seed.dual_resolution", dual, tols.tol_bio, Expect::Pass));
    let (rphi, rpsi) = seed.eigen_residuals(h);
    let scale = hnorm.max(1.0);
    checks.push(Check::new("seed.phi_eigen", rphi / scale, 10.0 * tols.tol_eig, Expect::Pass));
    checks.push(Check::new("seed.psi_eigen", rpsi / scale, 10.0 * tols.tol_eig, Expect::Pass));

    // metrics
    for (level, m) in &t.metrics {
        metric_checks(&mut checks, level, m, tols);
        pairing_checks(&mut checks, level, m, tols);
        match lemma1_check(h, m, tols.tol_chain) {
            Ok(r) => notes.push(format!("lemma1 level {level}: statements hold = {}", r.holds)),
            Err(e) => {
                checks.push(Check::new(format!("lemma1.{level}.consistent"), 1.0, 0.0, Expect::Pass));
                notes.push(e.to_string());
            }
        }
    }
    if let Some(m0) = t.metrics.get("0") {
        let map = mapping_residual(seed, m0);
        let tol = tols.tol_metric * m0.condition().max(1.0);
        checks.push(Check::new("metric.0.maps_psi_to_phi", map, tol, Expect::Pass));
        checks.push(convention_check(seed, m0, tols));
    }

    // nodes
    for (label, node) in &t.nodes {
        let x = &node.hamiltonian;
        let xnorm = x.frob_norm().max(f64::MIN_POSITIVE);
        let eigen = node
            .eigenvectors
            .iter()
            .zip(&node.eigenvalues)
            .map(|(v, &l)| norm2(&sub_vec(&x.matvec(v), &scale_vec(v, l))) / (xnorm * norm2(v)))
            .fold(0.0, f64::max);
        checks.push(Check::new(format!("node.{label}.eigenvectors"), eigen, tols.tol_chain, Expect::Pass));
        checks.push(node_spectrum_check(label, node, t, tols));
    }

    // intertwining relations
    for (level, m) in &t.metrics {
        let hd = h.dagger();
        let rel = |name: &str, s: &ComplexMatrix, a: &ComplexMatrix, b: &ComplexMatrix| {
            let r = intertwine_residual(s, a, b);
            let tol = tols.tol_chain * s.frob_norm().max(1.0) * (1.0 + b.frob_norm() / a.frob_norm().max(1.0));
            Check::new(format!("intertwine.{level}.{name}"), r, tol, Expect::Pass)
        };
        if let (Ok(sh), Ok(fl), Ok(shd), Ok(fld)) = (
            t.node(&format!("sharp{level}")),
            t.node(&format!("flat{level}")),
            t.node(&format!("sharp{level}dag")),
            t.node(&format!("flat{level}dag")),
        ) {
            checks.push(rel("sharp", &m.s_psi, &sh.hamiltonian, &hd));
            checks.push(rel("flat", &m.s_phi, &fl.hamiltonian, &hd));
            checks.push(rel("sharpdag", &m.s_phi, &shd.hamiltonian, h));
            checks.push(rel("flatdag", &m.s_psi, &fld.hamiltonian, h));
            // adjoint involution on the tree's own nodes
            let r = relative_dist(&fld.hamiltonian, &sharp(&hd, m));
            checks.push(Check::new(format!("involution.{level}.flatdag_is_sharp_of_Hdag"), r, tols.tol_chain, Expect::Pass));
            let r = relative_dist(&shd.hamiltonian, &flat(&hd, m));
            checks.push(Check::new(format!("involution.{level}.sharpdag_is_flat_of_Hdag"), r, tols.tol_chain, Expect::Pass));
        }
    }

    // power identities
    if t.depth >= 2 {
        match power_identity_residuals(t) {
            Ok(map) => {
                for (name, r) in map {
                    checks.push(Check::new(format!("power.{name}"), r, tols.tol_chain, Expect::Pass));
                }
            }
            Err(e) => notes.push(format!("power identities unavailable: {e}")),
        }
    }

    // reality versus pseudo-Hermiticity
    let mut pseudo_hermitian = false;
    if let Some(m0) = t.metrics.get("0") {
        match theorem1_suite(h, seed, m0, tols) {
            Ok(r) => {
                pseudo_hermitian = r.pseudo_hermitian;
                checks.extend(r.checks);
            }
            Err(e) => {
                checks.push(Check::new("theorem1.consistent", 1.0, 0.0, Expect::Pass));
                notes.push(e.to_string());
            }
        }
        if class == SpectrumClass::AllImaginary {
            match remark1_suite(h, seed, m0, tols) {
                Ok(r) => checks.extend(r.checks),
                Err(e) => {
                    checks.push(Check::new("remark1.consistent", 1.0, 0.0, Expect::Pass));
                    notes.push(e.to_string());
                }
            }
        }
        if class != SpectrumClass::AllReal {
            // no positive metric of the tree makes H self-adjoint
            let tol = tols.tol_theorem * hnorm;
            for (level, m) in &t.metrics {
                checks.push(Check::new(format!("nonexistence.{level}.sharp"), h.frob_dist(&sharp(h, m)), tol, Expect::Fail));
                checks.push(Check::new(format!("nonexistence.{level}.flat"), h.frob_dist(&flat(h, m)), tol, Expect::Fail));
            }
        }
    }
    if let Some(m1) = t.metrics.get("1") {
        let r = relative_dist(h, &sharp(h, m1));
        checks.push(Check::new("report.sharp1_fixes_H", r, tols.tol_theorem, Expect::Report));
        notes.push(format!(
            "relative |H - sharp1(H)| = {r:.3e} (reported only; reality ties to the level-0 map)"
        ));
    }

    let mut report = VerificationReport { checks, spectrum_class: class, pseudo_hermitian, notes };
    report.sort();
    report
}

fn metric_checks(checks: &mut Vec<Check>, level: &str, m: &MetricPair, tols: &Tolerances) {
    for (name, s) in [("S_phi", &m.s_phi), ("S_psi", &m.s_psi)] {
        let herm = s.hermiticity_residual() / s.frob_norm().max(1.0);
        checks.push(Check::new(format!("metric.{level}.{name}.hermitian"), herm, tols.tol_herm, Expect::Pass));
        let spread = match hermitian_eigen(s) {
            Ok(e) => {
                let lmin = e.values[0];
                let lmax = *e.values.last().expect("non-empty");
                if lmin > 0.0 {
                    lmax / lmin
                } else {
                    f64::INFINITY
                }
            }
            Err(_) => f64::INFINITY,
        };
        checks.push(Check::new(format!("metric.{level}.{name}.positive"), spread, tols.cond_max, Expect::Pass));
    }
    let tol = tols.tol_metric * m.condition().max(1.0);
    checks.push(Check::new(format!("metric.{level}.inverse"), m.inv_residual, tol, Expect::Pass));
}

/// `flat(X)^dagger = sharp(X^dagger)` and `sharp(X)^dagger = flat(X^dagger)`
/// on twenty pseudo-random matrices.
fn pairing_checks(checks: &mut Vec<Check>, level: &str, m: &MetricPair, tols: &Tolerances) {
    let n = m.dim();
    let mut worst: f64 = 0.0;
    for trial in 0..20u64 {
        let x = random_matrix(n, 0x5eed_0000 + trial);
        let xd = x.dagger();
        worst = worst
            .max(relative_dist(&flat(&x, m).dagger(), &sharp(&xd, m)))
            .max(relative_dist(&sharp(&x, m).dagger(), &flat(&xd, m)));
    }
    checks.push(Check::new(format!("involution.{level}.random"), worst, tols.tol_chain, Expect::Pass));
}

/// Metrics are unchanged when each `phi_n` picks up a unit phase that `psi_n`
/// compensates.
fn convention_check(seed: &BiorthogonalSystem, m0: &MetricPair, tols: &Tolerances) -> Check {
    let phases: Vec<C64> = (0..seed.dim as u64)
        .map(|i| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * rng::unit(0xc0de, i)))
        .collect();
    let r = match build_metrics(&seed.rescaled(&phases), tols) {
        Ok(m) => relative_dist(&m.s_phi, &m0.s_phi).max(relative_dist(&m.s_psi, &m0.s_psi)),
        Err(_) => f64::INFINITY,
    };
    Check::new("metric.0.convention_independent", r, tols.tol_metric, Expect::Pass)
}

fn node_spectrum_check(label: &str, node: &ChainNode, t: &ChainTree, tols: &Tolerances) -> Check {
    let name = format!("node.{label}.spectrum");
    let x = &node.hamiltonian;
    let Ok(computed) = eigvals(x) else {
        return Check::new(name, f64::INFINITY, 0.0, Expect::Pass);
    };
    let partner = match label.strip_suffix("dag") {
        Some(base) => base.to_string(),
        None => format!("{label}dag"),
    };
    // biorthogonality makes the largest overlap pick the partner vector
    let conditions: Vec<f64> = match t.nodes.get(&partner) {
        Some(p) => node
            .eigenvectors
            .iter()
            .map(|v| {
                let best = p.eigenvectors.iter().map(|w| inner(w, v).norm() / (norm2(v) * norm2(w))).fold(0.0, f64::max);
                best.recip()
            })
            .collect(),
        None => vec![1.0; node.eigenvectors.len()],
    };
    let r = conditioned_spectrum_distance(&computed, &node.eigenvalues, &conditions) / x.frob_norm().max(1.0);
    Check::new(name, r, spectrum_tolerance(tols), Expect::Pass)
}

/// Entries with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let v = rng::box_potential(seed, 2 * n * n, 1.0);
    ComplexMatrix::from_fn(n, |i, j| {
        let k = 2 * (i * n + j);
        C64::new(v[k], v[k + 1])
    })
}
