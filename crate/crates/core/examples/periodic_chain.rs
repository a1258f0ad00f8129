//! Periodic chain: the metric collapses to the identity and the spectrum lies
//! on an ellipse.

use isochain::chain::{grow_chain_from, sharp};
use isochain::linalg::{eigvals, ComplexMatrix};
use isochain::models::{build, seed_system, symmetry_ops, ModelSpec, Normalization};
use isochain::verify::count_real;
use isochain::Tolerances;

fn main() -> isochain::Result<()> {
    let tols = Tolerances::default();
    let g = 0.1;
    let spec = ModelSpec::HnPeriodic { l: 11, t_h: 1.0, g };
    let h = build(&spec)?;
    let e = eigvals(&h)?;
    for z in &e {
        let ellipse = (z.re / g.cosh()).powi(2) + (z.im / g.sinh()).powi(2);
        println!("{:+.8} {:+.8}i   ellipse {:.12}", z.re, z.im, ellipse);
    }
    println!("real eigenvalues: {}", count_real(&e, tols.tol_real));

    let seed = seed_system(&spec, Normalization::ClosedForm, &tols)?;
    let tree = grow_chain_from(&h, seed, 1, &tols)?;
    let m0 = tree.metric("0").expect("level 0");
    println!("|S_phi - 1| = {:.2e}", m0.s_phi.frob_dist(&ComplexMatrix::identity(11)));
    println!("|sharp(H) - H^dagger| = {:.2e}", sharp(&h, m0).frob_dist(&h.dagger()));

    let ops = symmetry_ops(&spec)?;
    let shift = ops.shift.expect("periodic chain has a shift");
    println!("|[H, T]| = {:.2e}", h.commutator(&shift).frob_norm());
    Ok(())
}
