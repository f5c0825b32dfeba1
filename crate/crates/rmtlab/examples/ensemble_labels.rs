//! Coupled matrix pairs and the three-level label decomposition
//! `H = A + B + C`, `X = B + C`.
//!
//! Run with `cargo run --release --example ensemble_labels`.

use rmtlab::ensemble::*;
use rmtlab::rng::trial_rng;

fn main() -> rmtlab::Result<()> {
    let cfg = EnsembleConfig::new(500, 1.5, 0.45, 0.10, 42)?;
    println!(
        "N = {}, alpha = {}, b = {:.4}, nu = {}, rho = {}",
        cfg.n,
        cfg.alpha,
        cfg.b(),
        cfg.nu,
        cfg.rho
    );
    for d in validate_params(cfg.alpha, cfg.b(), cfg.nu, cfg.rho) {
        println!("  constraint {:<28} margin {:+.4}", d.name, d.margin);
    }

    let pair = sample_pair(&cfg, &mut trial_rng(cfg.seed, 0))?;
    let count = |m: &ndarray::Array2<f64>| m.iter().filter(|v| **v != 0.0).count();
    println!(
        "support sizes: A = {}, B = {}, C = {} (of {} entries)",
        count(&pair.a),
        count(&pair.b),
        count(&pair.c),
        cfg.n * cfg.n
    );
    let psi_count: usize = pair.psi.iter().map(|&v| v as usize).sum();
    println!(
        "Psi count = {psi_count} vs N^(1+alpha rho) = {:.0}",
        (cfg.n as f64).powf(1.0 + cfg.alpha * cfg.rho)
    );

    // the removal coupling holds entrywise
    let cut = (cfg.n as f64).powf(-cfg.nu);
    let coupled = pair
        .h
        .iter()
        .zip(pair.x.iter())
        .all(|(&h, &x)| if h.abs() >= cut { x == h } else { x == 0.0 });
    println!("removal coupling X = H·1(|H| >= N^-nu): {coupled}");

    // interpolation endpoints
    let goe = sample_goe(cfg.n, &mut trial_rng(cfg.seed, 1));
    let t = 0.35;
    let h1 = interpolate_gamma(&pair, &goe, t, 1.0)?;
    println!("H^1 equals H exactly: {}", h1 == pair.h);
    let h0 = interpolate_gamma(&pair, &goe, t, 0.0)?;
    let max_dev = h0
        .iter()
        .zip(pair.x.iter().zip(goe.w.iter()))
        .map(|(&v, (&x, &w))| (v - x - t.sqrt() * w).abs())
        .fold(0.0f64, f64::max)
        ;
    println!("H^0 equals X + sqrt(t) W to {max_dev:.1e}");
    Ok(())
}
