//! The tree of isospectral Hamiltonians generated by iterating metric
//! construction on promoted eigenvector families.
//!
//! | label       | matrix                              | spectrum  | eigenvectors      |
//! |-------------|-------------------------------------|-----------|-------------------|
//! | `H`         | `H`                                 | `E`       | `phi`             |
//! | `Hdag`      | `H^dagger`                          | `conj(E)` | `psi`             |
//! | `sharpK`    | `S_phi^K H^dagger S_psi^K`          | `conj(E)` | `S_phi^K psi`     |
//! | `flatK`     | `S_psi^K H^dagger S_phi^K`          | `conj(E)` | `S_psi^K psi`     |
//! | `sharpKdag` | `S_psi^K H S_phi^K`                 | `E`       | `S_psi^K phi`     |
//! | `flatKdag`  | `S_phi^K H S_psi^K`                 | `E`       | `S_phi^K phi`     |
//!
//! The `dag` nodes are the conjugate transposes of their parents, so
//! `sharpKdag = flat_K(H^dagger)` and `flatKdag = sharp_K(H^dagger)`.
//!
//! `K` runs over the metric levels `0`, `1`, `2a`, `2b`. Level 0 uses the
//! outer-product metrics of the seed basis. Level 1 uses the metrics of the
//! eigenbasis of `flat0` (`S_phi phi`, `S_psi psi`); the eigenbasis of `sharp0`
//! is the seed basis with roles swapped and is recorded as an alias. Level
//! `2a` uses the eigenbasis of `sharp1` (`S_psi^1 phi`, `S_phi^1 psi`) and
//! level `2b` that of `flat1` (`S_phi^1 phi`, `S_psi^1 psi`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::adjoint::{flat, relative_dist, sharp};
use super::metric::{build_metrics_labeled, promote_vectors, MetricPair};
use crate::biortho::{build_biorthogonal, BiorthogonalSystem};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::eig::{canonical_order, eigvals};
use crate::linalg::lu::matpow;
use crate::linalg::matrix::{inner, norm2, scale_vec, sub_vec, ComplexMatrix, C64};

pub const MAX_DEPTH: usize = 3;

/// Which half of the tree a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumHalf {
    #[serde(rename = "spectrum-of-H")]
    Direct,
    #[serde(rename = "spectrum-of-Hdag")]
    Conjugate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeResiduals {
    /// Largest `|X v - l v| / (|X|_F |v|)` over the stored pairs.
    pub eigen: f64,
    /// Largest distance between a computed eigenvalue and its expected
    /// value, divided by that eigenvalue's condition number and by
    /// `max(1, |X|_F)`.
    pub spectrum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainNode {
    pub label: String,
    #[serde(rename = "matrix")]
    pub hamiltonian: ComplexMatrix,
    /// Canonical order.
    pub eigenvalues: Vec<C64>,
    pub eigenvectors: Vec<Vec<C64>>,
    /// Level label of the metric pair that produced the node.
    pub metric_used: Option<String>,
    pub parent: Option<String>,
    pub conj_class: SpectrumHalf,
    pub residuals: NodeResiduals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainTree {
    pub depth: usize,
    pub seed: BiorthogonalSystem,
    pub metrics: BTreeMap<String, MetricPair>,
    /// Bases that coincide with an existing one, mapped to it.
    pub aliases: BTreeMap<String, String>,
    pub nodes: BTreeMap<String, ChainNode>,
}

/// Number of nodes in a complete tree of the given depth.
pub fn expected_node_count(depth: usize) -> usize {
    match depth {
        0 => 2,
        1 => 6,
        2 => 10,
        _ => 18,
    }
}

impl ChainTree {
    pub fn node(&self, label: &str) -> Result<&ChainNode> {
        self.nodes.get(label).ok_or_else(|| Error::UnknownNodeLabel(label.to_string()))
    }

    pub fn metric(&self, level: &str) -> Option<&MetricPair> {
        self.metrics.get(level)
    }

    /// The seed Hamiltonian.
    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.nodes["H"].hamiltonian
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub fn grow_chain(h: &ComplexMatrix, depth: usize, tols: &Tolerances) -> Result<ChainTree> {
    let seed = build_biorthogonal(h, tols)?;
    grow_chain_from(h, seed, depth, tols)
}

/// Grows the tree from a prepared biorthogonal system of `h`, e.g. one whose
/// per-mode normalization was pinned to closed-form eigenvectors.
pub fn grow_chain_from(
    h: &ComplexMatrix,
    seed: BiorthogonalSystem,
    depth: usize,
    tols: &Tolerances,
) -> Result<ChainTree> {
    let (tree, err) = grow_chain_partial(h, seed, depth, tols);
    match err {
        None => Ok(tree),
        Some(e) => Err(e),
    }
}

/// Like [`grow_chain_from`] but always returns the nodes built so far, with
/// the error that stopped growth, if any.
pub fn grow_chain_partial(
    h: &ComplexMatrix,
    seed: BiorthogonalSystem,
    depth: usize,
    tols: &Tolerances,
) -> (ChainTree, Option<Error>) {
    let mut tree = ChainTree {
        depth,
        seed,
        metrics: BTreeMap::new(),
        aliases: BTreeMap::new(),
        nodes: BTreeMap::new(),
    };
    let err = grow(&mut tree, h, tols).err();
    (tree, err)
}

fn grow(tree: &mut ChainTree, h: &ComplexMatrix, tols: &Tolerances) -> Result<()> {
    if tree.depth > MAX_DEPTH {
        return Err(Error::InvalidSpec(format!("chain depth {} exceeds {MAX_DEPTH}", tree.depth)));
    }
    if h.dim() != tree.seed.dim {
        return Err(Error::DimensionMismatch { expected: tree.seed.dim, found: h.dim() });
    }
    let seed = tree.seed.clone();
    let hd = h.dagger();
    let root = Draft {
        label: "H",
        x: h.clone(),
        vectors: seed.phi.clone(),
        partners: &seed.psi,
        half: SpectrumHalf::Direct,
    };
    insert(tree, root, None, None, tols)?;
    let adjoint = Draft {
        label: "Hdag",
        x: hd,
        vectors: seed.psi.clone(),
        partners: &seed.phi,
        half: SpectrumHalf::Conjugate,
    };
    insert(tree, adjoint, None, Some("H"), tols)?;
    if tree.depth == 0 {
        return Ok(());
    }

    let m0 = metrics_for(&seed, "0", tols)?;
    tree.metrics.insert("0".into(), m0.clone());
    tree.aliases.insert("E_sharp0".into(), "E".into());
    add_generation(tree, h, &m0, "0", tols)?;
    if tree.depth == 1 {
        return Ok(());
    }

    let promoted = promote_vectors(&seed, &m0, tols).map_err(|e| node_err("1", e))?;
    let m1 = metrics_for(&promoted, "1", tols)?;
    tree.metrics.insert("1".into(), m1.clone());
    add_generation(tree, h, &m1, "1", tols)?;
    if tree.depth == 2 {
        return Ok(());
    }

    let basis_2a = from_vectors(
        &seed,
        seed.phi.iter().map(|f| m1.s_psi.matvec(f)).collect(),
        seed.psi.iter().map(|p| m1.s_phi.matvec(p)).collect(),
        tols,
    )
    .map_err(|e| node_err("2a", e))?;
    let basis_2b = from_vectors(
        &seed,
        seed.phi.iter().map(|f| m1.s_phi.matvec(f)).collect(),
        seed.psi.iter().map(|p| m1.s_psi.matvec(p)).collect(),
        tols,
    )
    .map_err(|e| node_err("2b", e))?;
    for (level, basis) in [("2a", basis_2a), ("2b", basis_2b)] {
        let m = metrics_for(&basis, level, tols)?;
        tree.metrics.insert(level.into(), m.clone());
        add_generation(tree, h, &m, level, tols)?;
    }
    Ok(())
}

fn from_vectors(
    seed: &BiorthogonalSystem,
    phi: Vec<Vec<C64>>,
    psi: Vec<Vec<C64>>,
    tols: &Tolerances,
) -> Result<BiorthogonalSystem> {
    BiorthogonalSystem::from_parts(seed.eigenvalues.clone(), phi, psi, tols)
}

fn metrics_for(b: &BiorthogonalSystem, level: &str, tols: &Tolerances) -> Result<MetricPair> {
    build_metrics_labeled(b, level, tols).map_err(|e| node_err(&format!("metric{level}"), e))
}

fn node_err(label: &str, e: Error) -> Error {
    match e {
        Error::ChainNode { .. } => e,
        other => Error::ChainNode { label: label.to_string(), source: Box::new(other) },
    }
}

fn add_generation(
    tree: &mut ChainTree,
    h: &ComplexMatrix,
    m: &MetricPair,
    level: &str,
    tols: &Tolerances,
) -> Result<()> {
    let seed = tree.seed.clone();
    let apply = |s: &ComplexMatrix, vs: &[Vec<C64>]| -> Vec<Vec<C64>> {
        vs.iter().map(|v| s.matvec(v)).collect()
    };
    let sh = sharp(h, m);
    let fl = flat(h, m);
    let sharp_vecs = apply(&m.s_phi, &seed.psi);
    let sharp_dag_vecs = apply(&m.s_psi, &seed.phi);
    let flat_vecs = apply(&m.s_psi, &seed.psi);
    let flat_dag_vecs = apply(&m.s_phi, &seed.phi);
    let sharp_label = format!("sharp{level}");
    let flat_label = format!("flat{level}");
    let drafts = [
        (sharp_label.clone(), sh.clone(), &sharp_vecs, &sharp_dag_vecs, SpectrumHalf::Conjugate, "H".to_string()),
        (flat_label.clone(), fl.clone(), &flat_vecs, &flat_dag_vecs, SpectrumHalf::Conjugate, "H".to_string()),
        (format!("{sharp_label}dag"), sh.dagger(), &sharp_dag_vecs, &sharp_vecs, SpectrumHalf::Direct, sharp_label),
        (format!("{flat_label}dag"), fl.dagger(), &flat_dag_vecs, &flat_vecs, SpectrumHalf::Direct, flat_label),
    ];
    for (label, x, vectors, partners, half, parent) in drafts {
        let draft = Draft { label: &label, x, vectors: vectors.clone(), partners, half };
        insert(tree, draft, Some(level), Some(&parent), tols)?;
    }
    Ok(())
}

/// A node before validation. `partners` are the eigenvectors of the
/// adjoint matrix, biorthogonal to `vectors`.
struct Draft<'a> {
    label: &'a str,
    x: ComplexMatrix,
    vectors: Vec<Vec<C64>>,
    partners: &'a [Vec<C64>],
    half: SpectrumHalf,
}

fn insert(
    tree: &mut ChainTree,
    draft: Draft<'_>,
    metric: Option<&str>,
    parent: Option<&str>,
    tols: &Tolerances,
) -> Result<()> {
    let label = draft.label.to_string();
    let node = make_node(draft, &tree.seed.eigenvalues, metric, parent, tols)
        .map_err(|e| node_err(&label, e))?;
    tree.nodes.insert(label, node);
    Ok(())
}

fn make_node(
    draft: Draft<'_>,
    seed_eigenvalues: &[C64],
    metric: Option<&str>,
    parent: Option<&str>,
    tols: &Tolerances,
) -> Result<ChainNode> {
    let Draft { label, x, vectors, partners, half } = draft;
    if !x.is_finite() {
        return Err(Error::InvalidMatrix("non-finite node matrix".into()));
    }
    let expected: Vec<C64> = match half {
        SpectrumHalf::Direct => seed_eigenvalues.to_vec(),
        SpectrumHalf::Conjugate => seed_eigenvalues.iter().map(|z| z.conj()).collect(),
    };
    let xnorm = x.frob_norm().max(f64::MIN_POSITIVE);
    let eigen = vectors
        .iter()
        .zip(&expected)
        .map(|(v, &l)| norm2(&sub_vec(&x.matvec(v), &scale_vec(v, l))) / (xnorm * norm2(v)))
        .fold(0.0, f64::max);
    if !(eigen <= tols.tol_chain) {
        return Err(Error::NodeInvariant {
            label: label.to_string(),
            detail: format!("eigenvector residual {eigen:e} exceeds {:e}", tols.tol_chain),
        });
    }
    let conditions: Vec<f64> = vectors
        .iter()
        .zip(partners)
        .map(|(v, w)| norm2(v) * norm2(w) / inner(w, v).norm())
        .collect();
    let computed = eigvals(&x)?;
    let spectrum = conditioned_spectrum_distance(&computed, &expected, &conditions) / xnorm.max(1.0);
    if !(spectrum <= spectrum_tolerance(tols)) {
        return Err(Error::NodeInvariant {
            label: label.to_string(),
            detail: format!("spectrum mismatch {spectrum:e}"),
        });
    }
    let order = canonical_order(&expected);
    Ok(ChainNode {
        label: label.to_string(),
        eigenvalues: order.iter().map(|&i| expected[i]).collect(),
        eigenvectors: order.iter().map(|&i| vectors[i].clone()).collect(),
        hamiltonian: x,
        metric_used: metric.map(str::to_string),
        parent: parent.map(str::to_string),
        conj_class: half,
        residuals: NodeResiduals { eigen, spectrum },
    })
}

/// Tolerance on [`NodeResiduals::spectrum`].
pub fn spectrum_tolerance(tols: &Tolerances) -> f64 {
    10.0 * tols.tol_eig
}

/// Greedy nearest matching of `computed` onto `expected`; each distance is
/// divided by the condition number of the matched expected eigenvalue.
pub fn conditioned_spectrum_distance(computed: &[C64], expected: &[C64], conditions: &[f64]) -> f64 {
    if computed.len() != expected.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; expected.len()];
    let mut worst: f64 = 0.0;
    for x in computed {
        let (j, d) = expected
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(d / conditions[j].max(1.0));
    }
    worst
}

/// Largest distance under a greedy nearest matching of `a` onto `b`.
pub fn spectrum_distance(a: &[C64], b: &[C64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let mut best = None;
        for (j, y) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (x - y).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) => {
                used[j] = true;
                worst = worst.max(d);
            }
            None => return f64::INFINITY,
        }
    }
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    worst
}

/// Relative residuals of the metric power identities, keyed by a readable name.
pub fn power_identity_residuals(t: &ChainTree) -> Result<BTreeMap<String, f64>> {
    let level = |name: &str, required: usize| {
        t.metrics.get(name).ok_or(Error::DepthTooShallow { depth: t.depth, required })
    };
    if t.depth < 2 {
        return Err(Error::DepthTooShallow { depth: t.depth, required: 2 });
    }
    let m0 = level("0", 2)?;
    let m1 = level("1", 2)?;
    let mut out = BTreeMap::new();
    out.insert("S_phi1 = S_phi0^3".into(), relative_dist(&m1.s_phi, &matpow(&m0.s_phi, 3)));
    out.insert("S_psi1 = S_psi0^3".into(), relative_dist(&m1.s_psi, &matpow(&m0.s_psi, 3)));
    if t.depth >= 3 {
        let a = level("2a", 3)?;
        let b = level("2b", 3)?;
        out.insert("S_phi2a = S_psi0^5".into(), relative_dist(&a.s_phi, &matpow(&m0.s_psi, 5)));
        out.insert("S_psi2a = S_phi0^5".into(), relative_dist(&a.s_psi, &matpow(&m0.s_phi, 5)));
        out.insert("S_phi2b = S_phi0^7".into(), relative_dist(&b.s_phi, &matpow(&m0.s_phi, 7)));
        out.insert("S_psi2b = S_psi0^7".into(), relative_dist(&b.s_psi, &matpow(&m0.s_psi, 7)));
    }
    Ok(out)
}
