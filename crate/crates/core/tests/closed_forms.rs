//! Closed-form level-1 matrices of the gain/loss dimer.

use isochain::chain::grow_chain_from;
use isochain::linalg::{ComplexMatrix, C64};
use isochain::models::{build, seed_system, ModelSpec, Normalization};
use isochain::Tolerances;

fn symmetric_form(scale: f64, diag: C64, off: f64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![diag, C64::new(off, 0.0)], vec![C64::new(off, 0.0), -diag]]).scale_real(scale)
}

#[test]
fn dimer_level_one() {
    let tols = Tolerances::default();
    for gamma in [0.2, 0.5, 0.8] {
        let spec = ModelSpec::PtDimer { t_h: 1.0, gamma };
        let h = build(&spec).unwrap();
        let tree = grow_chain_from(&h, seed_system(&spec, Normalization::ClosedForm, &tols).unwrap(), 2, &tols).unwrap();
        let beta = (1.0 - gamma * gamma).sqrt();
        let g2 = gamma * gamma;

        let m1 = tree.metric("1").unwrap();
        let s_phi1 = ComplexMatrix::from_rows(&[
            vec![C64::new(1.0 + 3.0 * g2, 0.0), C64::new(0.0, -gamma * (3.0 + g2))],
            vec![C64::new(0.0, gamma * (3.0 + g2)), C64::new(1.0 + 3.0 * g2, 0.0)],
        ])
        .scale_real(beta.powi(-3));
        assert!(m1.s_phi.frob_dist(&s_phi1) < 1e-12, "gamma {gamma}");

        // odd and even parts of (1 + gamma)^7 and (1 + gamma)^5
        let flat1 = symmetric_form(
            -beta.powi(-6),
            C64::new(0.0, gamma * (7.0 + 35.0 * g2 + 21.0 * g2 * g2 + g2 * g2 * g2)),
            1.0 + 21.0 * g2 + 35.0 * g2 * g2 + 7.0 * g2 * g2 * g2,
        );
        let sharp1 = symmetric_form(
            -beta.powi(-4),
            C64::new(0.0, -gamma * (5.0 + 10.0 * g2 + g2 * g2)),
            1.0 + 10.0 * g2 + 5.0 * g2 * g2,
        );
        assert!(tree.node("flat1").unwrap().hamiltonian.frob_dist(&flat1) < 1e-11, "gamma {gamma}");
        assert!(tree.node("sharp1").unwrap().hamiltonian.frob_dist(&sharp1) < 1e-11, "gamma {gamma}");

        // the misprint 1 + 5 gamma^2 + 10 gamma^2 must not match
        let misprint = 1.0 + 15.0 * g2;
        let off = tree.node("sharp1").unwrap().hamiltonian[(0, 1)].re * -beta.powi(4);
        assert!((off - misprint).abs() > 1e-3);
    }
}
