//! Open chain with asymmetric hopping: g-independent real spectrum, diagonal
//! metrics and the increasingly asymmetric adjoints.

use isochain::chain::grow_chain_from;
use isochain::linalg::eigvals;
use isochain::models::{build, gauge_symmetrize, santos_params, seed_system, ModelSpec, Normalization};
use isochain::Tolerances;

fn main() -> isochain::Result<()> {
    let tols = Tolerances::default();
    let spec = ModelSpec::HnOpen { l: 11, t_h: 1.0, g: 0.1 };
    let h = build(&spec)?;

    println!("spectrum (independent of g):");
    for z in eigvals(&h)? {
        println!("  {:+.12}", z.re);
    }

    let (_, symmetric) = gauge_symmetrize(&spec)?;
    println!("similarity-transformed chain is Hermitian: {}", symmetric.is_hermitian(1e-14));

    let seed = seed_system(&spec, Normalization::ClosedForm, &tols)?;
    let tree = grow_chain_from(&h, seed, 2, &tols)?;
    let m0 = tree.metric("0").expect("depth 2 has level 0");
    println!("S_phi diagonal: {:?}", m0.s_phi.diagonal().iter().map(|z| format!("{:.4}", z.re)).collect::<Vec<_>>());
    for label in ["H", "sharp0", "flat0", "sharp1", "flat1"] {
        let x = &tree.node(label)?.hamiltonian;
        println!("{label:>7}: below {:+.6}, above {:+.6}", x[(1, 0)].re, x[(0, 1)].re);
    }

    let (t_h, g) = santos_params(1.0, 0.6)?;
    println!("two-site chain -g'[[0, 1-k], [1+k, 0]] with g'=1, k=0.6 -> t_h = {t_h}, g = {g:.6}");
    Ok(())
}
