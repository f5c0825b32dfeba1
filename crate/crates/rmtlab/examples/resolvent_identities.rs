//! Resolvent diagnostics on one coupled pair: Ward identity, entry bounds,
//! Schur-complement quantities and the small-denominator minima.
//!
//! Run with `cargo run --release --example resolvent_identities`.

use num_complex::Complex64;
use rmtlab::ensemble::{sample_pair, EnsembleConfig};
use rmtlab::resolvent::*;
use rmtlab::rng::trial_rng;

fn main() -> rmtlab::Result<()> {
    let cfg = EnsembleConfig::new(400, 1.5, 0.45, 0.10, 3)?;
    let pair = sample_pair(&cfg, &mut trial_rng(cfg.seed, 0))?;
    let z = Complex64::new(1.0, 0.3);

    let rec = resolvent(&pair.x, z)?;
    let d = rec.diagnostics(&pair.x);
    println!("m_N(z) = {:.6}", rec.m_n);
    println!(
        "solve residual {:.1e}, Ward residual {:.1e}, entry-bound excess {:.1e}",
        d.solve_residual, d.ward_residual, d.entry_bound_excess
    );

    let (s1, s2) = minor_perturbation_sums(&pair.x, z, 17)?;
    println!(
        "minor perturbation sums: r=1 {:.2e} (bound {:.2e}), r=2 {:.2e} (bound {:.2e})",
        s1,
        4.0 / (cfg.n as f64 * z.im),
        s2,
        8.0 / (cfg.n as f64 * z.im * z.im)
    );

    let q = schur_quantities(&pair, z, 5, &[])?;
    println!(
        "row 5: S = {:.4}, U = {:.4}, T = {:.4}, Schur residual {:.1e}",
        q.s, q.u, q.t, q.schur_residual
    );
    println!("Im S = {:.4} >= 0, Im(S + U) = {:.4} >= 0", q.s.im, (q.s + q.u).im);

    let indices: Vec<usize> = (0..32).collect();
    let stats = lambda_event_stats(&pair, z, &indices)?;
    println!(
        "minima over 32 rows: Im(S+z) = {:.4}, Im(S_frak+z) = {:.4}, Im(S-T+z) = {:.4}",
        stats.min_im_s_plus_z, stats.min_im_sfrak_plus_z, stats.min_im_s_minus_t_plus_z
    );
    Ok(())
}
