//! Unfolded eigenvalue spacings against the sampled GOE reference and the
//! Wigner surmise.
//!
//! Run with `cargo run --release --example gap_statistics`.

use rmtlab::ensemble::EnsembleConfig;
use rmtlab::limit_law::density_rho_alpha;
use rmtlab::spectra::*;

fn main() -> rmtlab::Result<()> {
    let n = 300;
    let cfg = EnsembleConfig::new(n, 1.5, 0.45, 0.10, 13)?;
    let e = 1.0;
    let k = default_gap_count(n);
    let trials = 40;
    let rho = density_rho_alpha(cfg.alpha, e, (1e-3, 5e-4))?;
    println!("unfolding with rho_alpha({e}) = {rho:.4}, {k} gaps per trial");

    let levy = pooled_gaps_levy(&cfg, e, k, rho, trials)?;
    let goe = pooled_gaps_goe(n, 0.0, k, trials, 777)?;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    println!(
        "mean unfolded spacing: heavy-tailed {:.3}, GOE {:.3} (1.0 when the density is right)",
        mean(&levy),
        mean(&goe)
    );
    println!(
        "two-sample KS heavy-tailed vs GOE: {:.4}",
        ks_distance(&levy, &goe)?
    );
    println!(
        "one-sample KS vs Wigner surmise: heavy-tailed {:.4}, GOE {:.4}",
        ks_distance_to_cdf(&levy, wigner_surmise_cdf)?,
        ks_distance_to_cdf(&goe, wigner_surmise_cdf)?
    );
    Ok(())
}
