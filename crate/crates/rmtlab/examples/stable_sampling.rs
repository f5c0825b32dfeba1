//! Sampling heavy-tailed scalars: the stable law, its deformation, removal
//! splits, truncated moments and the coupling time.
//!
//! Run with `cargo run --release --example stable_sampling`.

use rmtlab::rng::trial_rng;
use rmtlab::stable_laws::*;

fn main() -> rmtlab::Result<()> {
    let alpha = 1.5;
    let params = StableParams::paper_normalized(alpha)?;
    println!("alpha = {alpha}, normalized scale sigma = {:.6}", params.sigma);

    let mut rng = trial_rng(7, 0);
    let n = 200_000;
    let samples: Vec<f64> = (0..n).map(|_| sample_stable(&params, &mut rng)).collect();

    // empirical characteristic function against exp(-sigma^alpha |t|^alpha)
    for t in [0.5, 1.0, 2.0] {
        let emp = empirical_char_function(&samples, t)?;
        println!(
            "t = {t}: E[cos(tZ)] = {:.4} vs exp(-sigma^a t^a) = {:.4}",
            emp.re,
            params.char_fn(t)
        );
    }

    // tail exponent over two decades
    let grid: Vec<f64> = (0..=8).map(|k| 10.0 * 10f64.powf(k as f64 / 4.0)).collect();
    println!("fitted tail slope = {:.3} (expect {:.1})", fit_tail_slope(&samples, &grid), -alpha);

    // removal split: the boundary goes to the small part
    let s = split_removal(1.0, 1.0);
    println!("split(1.0 at cutoff 1.0): small = {}, large = {}", s.small_part, s.large_part);

    // truncated second moment grows like R^{2-alpha}
    let mut rng = trial_rng(7, 1);
    for r in [10.0, 20.0] {
        let est = truncated_second_moment(&params, &DeformationSpec::None, r, 200_000, &mut rng)?;
        println!("E[z^2; |z| < {r}] = {:.3} ± {:.3}", est.value, est.std_error);
    }

    // the coupling time of a desk-scale ensemble
    let inputs = CouplingTimeInputs {
        n: 1000,
        alpha,
        nu: 0.45,
        rho: 0.10,
        seed: 7,
        deformation: DeformationSpec::None,
    };
    let t = coupling_time_t(&inputs, 2_000_000)?;
    println!(
        "coupling time t = {:.4} ± {:.4} (scale N^(a-2)nu = {:.4})",
        t.value,
        t.std_error,
        1000f64.powf((alpha - 2.0) * inputs.nu)
    );
    Ok(())
}
