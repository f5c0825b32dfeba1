//! Eigenvector sup-norms in a bulk window: heavy-tailed ensemble against the
//! GOE baseline.
//!
//! Run with `cargo run --release --example delocalization`.

use rmtlab::ensemble::{sample_goe, sample_pair, EnsembleConfig};
use rmtlab::rng::trial_rng;
use rmtlab::spectra::{delocalization_report, eigs};

fn main() -> rmtlab::Result<()> {
    let n = 500;
    let cfg = EnsembleConfig::new(n, 1.5, 0.45, 0.10, 8)?;
    let window = (0.5, 1.5);
    let trials = 10;
    let mut levy = Vec::new();
    let mut goe = Vec::new();
    for trial in 0..trials {
        let pair = sample_pair(&cfg, &mut trial_rng(cfg.seed, trial))?;
        levy.push(delocalization_report(&eigs(&pair.h)?, window)?);
        let w = sample_goe(n, &mut trial_rng(99, trial));
        goe.push(delocalization_report(&eigs(&w.w)?, window)?);
    }
    let summarize = |name: &str, reps: &[rmtlab::spectra::DelocalizationReport]| {
        let max = reps.iter().map(|r| r.max).fold(0.0f64, f64::max);
        let med: f64 = reps.iter().map(|r| r.median).sum::<f64>() / reps.len() as f64;
        println!(
            "{name:<13} sqrt(N)·sup-norm: median {med:.2}, worst max {max:.2} over {} trials",
            reps.len()
        );
    };
    summarize("heavy-tailed", &levy);
    summarize("GOE", &goe);
    println!(
        "references: N^0.25 = {:.2}, sqrt(2 ln N)·1.5 = {:.2}, pigeonhole floor 1.0",
        (n as f64).powf(0.25),
        (2.0 * (n as f64).ln()).sqrt() * 1.5
    );
    Ok(())
}
