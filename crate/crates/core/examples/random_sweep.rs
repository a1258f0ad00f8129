//! Random on-site potentials against hopping asymmetry: fraction of
//! realizations with an all-real spectrum for two disorder strengths.

use isochain::cli::{sweep, RunConfig, SeedRange};
use isochain::models::ModelSpec;

fn main() -> isochain::Result<()> {
    for v_max in [1.0, 2.5] {
        let mut cfg = RunConfig::new(ModelSpec::HnRandom { l: 11, t_h: 1.0, g: 0.1, v_max, seed: 0 });
        cfg.seeds = Some(SeedRange { start: 0, end: 200 });
        let rows = sweep(&cfg)?;
        let all_real = rows.iter().filter(|r| r.n_complex == 0).count();
        let pseudo = rows.iter().filter(|r| r.pseudo_hermitian == Some(true)).count();
        let mean_real = rows.iter().map(|r| r.n_real as f64).sum::<f64>() / rows.len() as f64;
        println!(
            "V = {v_max}: {all_real}/{} all-real, {pseudo} pseudo-Hermitian, mean real count {mean_real:.2}",
            rows.len()
        );
    }
    Ok(())
}
