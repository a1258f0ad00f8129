//! Grow a depth-3 chain, save it as JSON, reload it and run the invariant suite.

use isochain::chain::ChainTree;
use isochain::cli::{grow, RunConfig};
use isochain::models::ModelSpec;
use isochain::verify::full_suite;

fn main() -> isochain::Result<()> {
    let mut cfg = RunConfig::new(ModelSpec::HnImpurity { l: 11, t_h: 1.0, g: 0.1, x0: None, v: 1.0 });
    cfg.depth = 3;
    let tree = grow(&cfg)?;
    let path = std::env::temp_dir().join("isochain_impurity_tree.json");
    std::fs::write(&path, tree.to_json()?)?;
    let reloaded = ChainTree::from_json(&std::fs::read_to_string(&path)?)?;
    let report = full_suite(&reloaded, &cfg.tolerances);
    println!("{} nodes, {} checks, spectrum {}", reloaded.nodes.len(), report.checks.len(), report.spectrum_class);
    for c in report.checks.iter().filter(|c| c.name.starts_with("power.") || c.name.starts_with("metric.2b")) {
        println!("  {:<36} {:.2e} <= {:.1e}: {}", c.name, c.residual, c.tolerance, c.passed);
    }
    for n in &report.notes {
        println!("  note: {n}");
    }
    println!("all checks agree with expectations: {}", report.all_ok());
    Ok(())
}
