//! Concentration of the empirical Stieltjes transform around the limit:
//! per-energy statistics for the removal matrix and the full matrix.
//!
//! Run with `cargo run --release --example local_law_sweep`.

use rmtlab::ensemble::EnsembleConfig;
use rmtlab::spectra::{local_law_sweep, DomainSpec, LocalLawArm};

fn main() -> rmtlab::Result<()> {
    let cfg = EnsembleConfig::new(400, 1.5, 0.45, 0.10, 5)?;
    let domain = DomainSpec {
        e_grid: vec![0.5, 0.75, 1.0, 1.25, 1.5],
        eta: 0.3,
        rjj_eta: Some((cfg.n as f64).powf(-0.4)),
    };
    for arm in [LocalLawArm::Removal, LocalLawArm::Full, LocalLawArm::Flow] {
        let rep = local_law_sweep(&cfg, &domain, arm, 15)?;
        println!("arm {:?} (eta = {}):", arm, rep.eta);
        for p in &rep.points {
            println!(
                "  E = {:<5} mean |m_N - m_alpha| = {:.4} ± {:.4}   q95 max|R_jj| = {:.2}",
                p.e,
                p.mean_abs_mdiff,
                p.se_abs_mdiff,
                p.q95_max_rjj.unwrap_or(f64::NAN)
            );
        }
    }
    println!("(the removal arm carries a finite-size bias of order t; the full matrix sits closer)");
    Ok(())
}
