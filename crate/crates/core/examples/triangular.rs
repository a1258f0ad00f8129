//! The 2x2 upper-triangular matrix: every node of the chain, printed.

use isochain::chain::grow_chain_from;
use isochain::linalg::C64;
use isochain::models::{build, seed_system, ModelSpec, Normalization};
use isochain::Tolerances;

fn main() -> isochain::Result<()> {
    let tols = Tolerances::default();
    let spec = ModelSpec::Triangular2x2 { alpha: 1.0, e1: C64::new(1.0, 0.0), e2: C64::new(2.0, 0.0) };
    let h = build(&spec)?;
    let tree = grow_chain_from(&h, seed_system(&spec, Normalization::ClosedForm, &tols)?, 2, &tols)?;
    for (level, m) in &tree.metrics {
        println!("S_phi[{level}] = {}", fmt(&m.s_phi));
    }
    for (label, node) in &tree.nodes {
        println!("{label:>9} = {}", fmt(&node.hamiltonian));
    }
    Ok(())
}

fn fmt(x: &isochain::linalg::ComplexMatrix) -> String {
    let r = |i: usize| format!("[{:8.3} {:8.3}]", x[(i, 0)].re, x[(i, 1)].re);
    format!("{} {}", r(0), r(1))
}
