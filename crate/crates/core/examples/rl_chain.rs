//! Alternating-hopping chain with gain and loss: the spectrum is the union of
//! 2x2 Bloch blocks and changes from real to imaginary as gamma grows.

use isochain::linalg::eigvals;
use isochain::models::{build, rl_blocks, ModelSpec};
use isochain::verify::{classify_spectrum, count_real};
use isochain::Tolerances;

fn main() -> isochain::Result<()> {
    let tols = Tolerances::default();
    let delta = 0.3;
    println!("gamma  real  class");
    for step in 0..=12 {
        let gamma = 0.25 * step as f64;
        let spec = ModelSpec::RlChain { l: 6, t_h: 1.0, delta, gamma };
        let e = eigvals(&build(&spec)?)?;
        println!("{gamma:5.2}  {:4}  {}", count_real(&e, tols.tol_real), classify_spectrum(&e, tols.tol_real));
    }
    let spec = ModelSpec::RlChain { l: 6, t_h: 1.0, delta, gamma: 0.1 };
    for (k, block) in rl_blocks(&spec)?.iter().enumerate() {
        println!("block {k}: {}", show(&eigvals(block)?));
    }
    Ok(())
}

fn show(e: &[isochain::linalg::C64]) -> String {
    e.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect::<Vec<_>>().join(", ")
}
