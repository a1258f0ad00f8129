//! Reality of the spectrum against pseudo-Hermiticity on random matrices with
//! prescribed eigenvalues.

use isochain::biortho::build_biorthogonal;
use isochain::chain::build_metrics;
use isochain::linalg::{inverse, ComplexMatrix, C64};
use isochain::verify::theorem1_suite;
use isochain::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> isochain::Result<()> {
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for imag in [0.0, 1e-3, 0.1, 1.0] {
        let lambda: Vec<C64> = (0..6).map(|k| C64::new(k as f64 - 2.5, if k == 0 { imag } else { 0.0 })).collect();
        let v = ComplexMatrix::from_fn(6, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let h = v.matmul(&ComplexMatrix::from_diag(&lambda)).matmul(&inverse(&v, 1e6)?);
        let b = build_biorthogonal(&h, &tols)?;
        let m = build_metrics(&b, &tols)?;
        let report = theorem1_suite(&h, &b, &m, &tols)?;
        println!("Im(E_1) = {imag:<6} -> {} / pseudo-Hermitian {}", report.spectrum_class, report.pseudo_hermitian);
        for c in &report.checks {
            println!("    {:<28} {:.3e}  (tol {:.1e})", c.name, c.residual / h.frob_norm(), c.tolerance / h.frob_norm());
        }
    }
    Ok(())
}
