//! Periodic chain with one impurity: two extra real eigenvalues and dense
//! node matrices. Writes heatmap CSVs of the level-0 nodes.
//!
//! cargo run --example impurity_heatmap -- [output-dir]

use std::path::PathBuf;

use isochain::chain::grow_chain;
use isochain::cli::heatmap_csv;
use isochain::linalg::eigvals;
use isochain::models::{build, ModelSpec};
use isochain::verify::count_real;
use isochain::Tolerances;

fn main() -> isochain::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let tols = Tolerances::default();
    let clean = build(&ModelSpec::HnPeriodic { l: 11, t_h: 1.0, g: 0.1 })?;
    let spec = ModelSpec::HnImpurity { l: 11, t_h: 1.0, g: 0.1, x0: None, v: 1.0 };
    let h = build(&spec)?;
    println!(
        "real eigenvalues: clean {}, with impurity at site {} -> {}",
        count_real(&eigvals(&clean)?, tols.tol_real),
        spec.impurity_site().unwrap_or_default(),
        count_real(&eigvals(&h)?, tols.tol_real)
    );

    let tree = grow_chain(&h, 1, &tols)?;
    for label in ["flat0", "sharp0dag"] {
        let x = &tree.node(label)?.hamiltonian;
        let path = dir.join(format!("impurity_{label}.csv"));
        std::fs::write(&path, heatmap_csv(x))?;
        println!(
            "{label}: |x(2,9)| = {:.3e}, |x(3,8)| = {:.3e}, max {:.3e} -> {}",
            x[(1, 8)].norm(),
            x[(2, 7)].norm(),
            x.max_abs(),
            path.display()
        );
    }
    Ok(())
}
