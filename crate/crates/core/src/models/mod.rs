//! Lattice and few-level Hamiltonians with closed-form eigensystems and
//! symmetry operators.

pub mod analytic;
pub mod rng;
pub mod symmetry;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64, I};

pub use analytic::{analytic_reference, rl_blocks, seed_system, AnalyticEigensystem, Normalization};
pub use symmetry::{gauge_symmetrize, pt_check, santos_params, symmetry_ops, SymmetryOps};

fn default_hopping() -> f64 {
    1.0
}

/// A model family with its parameters. Sites are numbered from 1 as in the
/// usual lattice notation; matrix indices are `site - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "parameters")]
pub enum ModelSpec {
    /// `[[E1, alpha (E2 - E1)], [0, E2]]`.
    #[serde(rename = "triangular2x2")]
    Triangular2x2 { alpha: f64, e1: C64, e2: C64 },
    /// Open chain with hoppings `-t e^{g}` (to the right) and `-t e^{-g}` (to the left).
    #[serde(rename = "hn_open")]
    HnOpen {
        #[serde(rename = "L")]
        l: usize,
        #[serde(default = "default_hopping")]
        t_h: f64,
        g: f64,
    },
    #[serde(rename = "hn_periodic")]
    HnPeriodic {
        #[serde(rename = "L")]
        l: usize,
        #[serde(default = "default_hopping")]
        t_h: f64,
        g: f64,
    },
    /// Periodic chain plus a single on-site potential `v` at site `x0`
    /// (default: the middle site `ceil(L / 2)`).
    #[serde(rename = "hn_impurity")]
    HnImpurity {
        #[serde(rename = "L")]
        l: usize,
        #[serde(default = "default_hopping")]
        t_h: f64,
        g: f64,
        #[serde(default)]
        x0: Option<usize>,
        v: f64,
    },
    /// Periodic chain plus on-site potentials uniform in `[-V, V]`.
    #[serde(rename = "hn_random")]
    HnRandom {
        #[serde(rename = "L")]
        l: usize,
        #[serde(default = "default_hopping")]
        t_h: f64,
        g: f64,
        #[serde(rename = "V")]
        v_max: f64,
        seed: u64,
    },
    /// `[[i gamma, -t], [-t, -i gamma]]`.
    #[serde(rename = "pt_dimer")]
    PtDimer {
        #[serde(default = "default_hopping")]
        t_h: f64,
        gamma: f64,
    },
    /// Periodic two-sublattice chain with gain `+i gamma` on A, loss `-i gamma`
    /// on B, intra-cell hopping `u = t (1 + delta)` and inter-cell `w = t (1 - delta)`.
    #[serde(rename = "rl_chain")]
    RlChain {
        #[serde(rename = "L")]
        l: usize,
        #[serde(default = "default_hopping")]
        t_h: f64,
        delta: f64,
        gamma: f64,
    },
}

impl ModelSpec {
    pub fn family(&self) -> &'static str {
        match self {
            Self::Triangular2x2 { .. } => "triangular2x2",
            Self::HnOpen { .. } => "hn_open",
            Self::HnPeriodic { .. } => "hn_periodic",
            Self::HnImpurity { .. } => "hn_impurity",
            Self::HnRandom { .. } => "hn_random",
            Self::PtDimer { .. } => "pt_dimer",
            Self::RlChain { .. } => "rl_chain",
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Self::Triangular2x2 { .. } | Self::PtDimer { .. } => 2,
            Self::HnOpen { l, .. }
            | Self::HnPeriodic { l, .. }
            | Self::HnImpurity { l, .. }
            | Self::HnRandom { l, .. } => l,
            Self::RlChain { l, .. } => 2 * l,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("{name} must be finite")))
            }
        };
        let lattice = |l: usize| {
            if l >= 2 {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("L must be at least 2, got {l}")))
            }
        };
        match *self {
            Self::Triangular2x2 { alpha, e1, e2 } => {
                finite("alpha", alpha)?;
                finite("E1", e1.re + e1.im)?;
                finite("E2", e2.re + e2.im)
            }
            Self::HnOpen { l, t_h, g } | Self::HnPeriodic { l, t_h, g } => {
                lattice(l)?;
                finite("t_h", t_h)?;
                finite("g", g)
            }
            Self::HnImpurity { l, t_h, g, x0, v } => {
                lattice(l)?;
                finite("t_h", t_h)?;
                finite("g", g)?;
                finite("v", v)?;
                match x0 {
                    Some(x) if x == 0 || x > l => {
                        Err(Error::InvalidSpec(format!("impurity site {x} outside 1..={l}")))
                    }
                    _ => Ok(()),
                }
            }
            Self::HnRandom { l, t_h, g, v_max, .. } => {
                lattice(l)?;
                finite("t_h", t_h)?;
                finite("g", g)?;
                finite("V", v_max)?;
                if v_max < 0.0 {
                    return Err(Error::InvalidSpec("V must be nonnegative".into()));
                }
                Ok(())
            }
            Self::PtDimer { t_h, gamma } => {
                finite("t_h", t_h)?;
                finite("gamma", gamma)
            }
            Self::RlChain { l, t_h, delta, gamma } => {
                lattice(l)?;
                finite("t_h", t_h)?;
                finite("delta", delta)?;
                finite("gamma", gamma)
            }
        }
    }

    /// Impurity site (1-based), defaulting to the middle of the chain.
    pub fn impurity_site(&self) -> Option<usize> {
        match *self {
            Self::HnImpurity { l, x0, .. } => Some(x0.unwrap_or(l.div_ceil(2))),
            _ => None,
        }
    }

    /// On-site potentials (diagonal) added to the periodic chain, if any.
    pub fn onsite_potential(&self) -> Option<Vec<f64>> {
        match *self {
            Self::HnImpurity { l, v, .. } => {
                let mut p = vec![0.0; l];
                p[self.impurity_site().expect("impurity family") - 1] = v;
                Some(p)
            }
            Self::HnRandom { l, v_max, seed, .. } => Some(rng::box_potential(seed, l, v_max)),
            _ => None,
        }
    }
}

/// The Hamiltonian matrix of `spec`.
pub fn build(spec: &ModelSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let m = match *spec {
        ModelSpec::Triangular2x2 { alpha, e1, e2 } => {
            ComplexMatrix::from_rows(&[vec![e1, (e2 - e1) * alpha], vec![C64::new(0.0, 0.0), e2]])
        }
        ModelSpec::HnOpen { l, t_h, g } => hatano_nelson(l, t_h, g, false),
        ModelSpec::HnPeriodic { l, t_h, g } => hatano_nelson(l, t_h, g, true),
        ModelSpec::HnImpurity { l, t_h, g, .. } | ModelSpec::HnRandom { l, t_h, g, .. } => {
            let mut h = hatano_nelson(l, t_h, g, true);
            for (x, v) in spec.onsite_potential().expect("disordered family").into_iter().enumerate() {
                h[(x, x)] += v;
            }
            h
        }
        ModelSpec::PtDimer { t_h, gamma } => ComplexMatrix::from_rows(&[
            vec![I * gamma, C64::new(-t_h, 0.0)],
            vec![C64::new(-t_h, 0.0), -I * gamma],
        ]),
        ModelSpec::RlChain { l, t_h, delta, gamma } => {
            let (u, w) = rl_hoppings(t_h, delta);
            let n = 2 * l;
            let mut h = ComplexMatrix::zeros(n);
            for xi in 0..l {
                let a = 2 * xi;
                let b = a + 1;
                let next_a = (a + 2) % n;
                h[(a, a)] += I * gamma;
                h[(b, b)] -= I * gamma;
                h[(a, b)] -= u;
                h[(b, a)] -= u;
                h[(b, next_a)] -= w;
                h[(next_a, b)] -= w;
            }
            h
        }
    };
    Ok(m)
}

/// `(u, w) = (t (1 + delta), t (1 - delta))`.
pub fn rl_hoppings(t_h: f64, delta: f64) -> (f64, f64) {
    (t_h * (1.0 + delta), t_h * (1.0 - delta))
}

fn hatano_nelson(l: usize, t: f64, g: f64, periodic: bool) -> ComplexMatrix {
    let right = C64::new(-t * g.exp(), 0.0);
    let left = C64::new(-t * (-g).exp(), 0.0);
    let mut h = ComplexMatrix::zeros(l);
    for x in 0..l - 1 {
        h[(x + 1, x)] += right;
        h[(x, x + 1)] += left;
    }
    if periodic {
        h[(0, l - 1)] += right;
        h[(l - 1, 0)] += left;
    }
    h
}
