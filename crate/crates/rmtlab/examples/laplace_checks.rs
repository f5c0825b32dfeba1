//! Laplace-transform comparisons for removal variables: the quadratic-form
//! law and the characteristic function of removal sums.
//!
//! Run with `cargo run --release --example laplace_checks`.

use rmtlab::ensemble::EnsembleConfig;
use rmtlab::spectra::quadratic_form_laplace_test;
use rmtlab::stable_laws::removal_char_check;

fn main() -> rmtlab::Result<()> {
    let n = 500;
    let cfg = EnsembleConfig::new(n, 1.5, 0.45, 0.10, 19)?;
    let weights = vec![1.0; n];
    for t in [0.5, 1.0, 2.0] {
        let rep = quadratic_form_laplace_test(&cfg, &weights, t, 30_000)?;
        println!(
            "t = {t}: E exp(-t^2 <X,X>/2) = {:.4}, Gaussian-dual side = {:.4}, |log ratio| = {:.4} (error scale {:.4})",
            rep.lhs,
            rep.rhs,
            rep.log_ratio.abs(),
            rep.error_scale * n as f64
        );
    }

    let coeffs = vec![1.0; n];
    let check = removal_char_check(
        &cfg.coupling_inputs(),
        &coeffs,
        1.0,
        20_000,
        &mut rmtlab::rng::scalar_rng(cfg.seed, 11),
    )?;
    println!(
        "removal char fn: lhs = {:.4} ± {:.4}, stable main term = {:.4}, discrepancy = {:.4}",
        check.lhs.re, check.lhs_std_error, check.rhs.re, check.discrepancy
    );
    Ok(())
}
