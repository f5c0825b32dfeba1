//! Statistical cross-checks at experiment scale: the empirical spectral law
//! against the tabulated limit density, the function-space fixed point
//! against resolvent Monte Carlo, stability and refinement properties of the
//! Ω solver, and GOE self-consistency guards.

use num_complex::Complex64;
use rmtlab::ensemble::{sample_goe, sample_pair, EnsembleConfig};
use rmtlab::limit_law;
use rmtlab::quadrant::{self, HalfQuadrantFunction, QuadratureSpec};
use rmtlab::resolvent::{gamma_z_empirical, lambda_event_stats};
use rmtlab::rng::trial_rng;
use rmtlab::spectra;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[test]
fn esd_matches_limit_density_at_scale() {
    // one heavy-tailed trial at N = 2000 against the tabulated density
    let cfg = EnsembleConfig::new(2000, 1.5, 0.45, 0.10, 301).unwrap();
    let pair = sample_pair(&cfg, &mut trial_rng(cfg.seed, 0)).unwrap();
    let dec = spectra::eigs(&pair.h).unwrap();
    let grid: Vec<f64> = (0..=400).map(|k| -5.0 + k as f64 * 0.025).collect();
    let rho = limit_law::density_table(1.5, &grid, (1e-3, 5e-4)).unwrap();
    let interp = |x: f64| -> f64 {
        if x <= grid[0] || x >= *grid.last().unwrap() {
            return 0.0;
        }
        let pos = grid.partition_point(|&g| g < x).max(1);
        let w = (x - grid[pos - 1]) / (grid[pos] - grid[pos - 1]);
        rho[pos - 1] * (1.0 - w) + rho[pos] * w
    };
    let cmp = spectra::esd_compare(&dec.eigenvalues, interp, 40, (-5.0, 5.0)).unwrap();
    println!("heavy-tailed ESD: L1 = {:.4}, sup = {:.4}", cmp.l1_discrepancy, cmp.sup_discrepancy);
    assert!(cmp.l1_discrepancy <= 0.08, "L1 {}", cmp.l1_discrepancy);

    // GOE control at the same scale against the semicircle
    let goe = sample_goe(2000, &mut trial_rng(302, 0));
    let dg = spectra::eigs(&goe.w).unwrap();
    let cmp = spectra::esd_compare(&dg.eigenvalues, limit_law::rho_semicircle, 40, (-2.2, 2.2))
        .unwrap();
    assert!(cmp.l1_discrepancy <= 0.05, "GOE L1 {}", cmp.l1_discrepancy);
    let ks = spectra::ks_distance_to_cdf(&dg.eigenvalues, limit_law::semicircle_cdf).unwrap();
    assert!(ks <= 0.03, "GOE KS {ks}");
}

#[test]
fn global_regime_concentration() {
    // at η = 10 the transform concentrates at the 1/√(Nη²) scale
    let n = 500;
    let cfg = EnsembleConfig::new(n, 1.5, 0.45, 0.10, 303).unwrap();
    let trials = 40;
    let eta = 10.0;
    let m_ref = limit_law::m_alpha(1.5, Complex64::new(1.0, eta)).unwrap();
    let bound = 5.0 / (n as f64 * eta * eta).sqrt();
    let mut pass = 0;
    for trial in 0..trials {
        let pair = sample_pair(&cfg, &mut trial_rng(cfg.seed, trial)).unwrap();
        let dec = spectra::eigs(&pair.x).unwrap();
        if (dec.m_n(Complex64::new(1.0, eta)) - m_ref).norm() <= bound {
            pass += 1;
        }
    }
    let rate = pass as f64 / trials as f64;
    println!("global-regime pass rate {rate:.2} at bound {bound:.4}");
    assert!(rate >= 0.95, "rate {rate}");
}

#[test]
fn goe_local_law_self_consistency() {
    // regression guard: the sweep machinery run on GOE against the
    // semicircle passes the analogous threshold
    let n = 500;
    let trials = 30;
    let e_grid = [0.5, 1.0, 1.5];
    let eta = 0.3;
    let mut worst: f64 = 0.0;
    for trial in 0..trials {
        let goe = sample_goe(n, &mut trial_rng(304, trial));
        let dec = spectra::eigs(&goe.w).unwrap();
        for &e in &e_grid {
            let z = Complex64::new(e, eta);
            worst = worst.max((dec.m_n(z) - limit_law::m_semicircle(z)).norm());
        }
    }
    println!("GOE local-law worst deviation {worst:.4}");
    assert!(worst <= 0.02, "worst {worst}");
}

#[test]
fn lambda_event_floor_at_scale() {
    // the three Schur minima hold far above the (log N)^{-30/(α-1)} floor
    let n = 1000;
    let cfg = EnsembleConfig::new(n, 1.5, 0.45, 0.10, 305).unwrap();
    let z = Complex64::new(1.0, 0.05);
    let floor = (n as f64).ln().powf(-30.0 / 0.5) * 0.1;
    let indices: Vec<usize> = (0..32).collect();
    let trials = 50;
    let mut pass = 0;
    for trial in 0..trials {
        let pair = sample_pair(&cfg, &mut trial_rng(cfg.seed, trial)).unwrap();
        let stats = lambda_event_stats(&pair, z, &indices).unwrap();
        let min = stats
            .min_im_s_plus_z
            .min(stats.min_im_sfrak_plus_z)
            .min(stats.min_im_s_minus_t_plus_z);
        if min >= floor {
            pass += 1;
        }
    }
    assert!(
        pass as f64 / trials as f64 >= 0.95,
        "floor pass rate {}",
        pass as f64 / trials as f64
    );
}

#[test]
fn gamma_z_matches_omega_at_scale() {
    // resolvent Monte Carlo of γ_z against the function-space fixed point
    let alpha = 0.8;
    let z = Complex64::new(0.05, 0.5);
    let cfg = EnsembleConfig::suggested(2000, alpha, 306).unwrap();
    let grid_size = 48;
    let trials = 50;
    let est = gamma_z_empirical(&cfg, z, grid_size, trials, None).unwrap();
    let spec = QuadratureSpec::default_spec();
    let sol = quadrant::solve_omega(alpha, z, grid_size, 1e-6, 300, &spec).unwrap();
    let mut sup: f64 = 0.0;
    for (k, &t) in est.gamma.theta.iter().enumerate() {
        sup = sup.max((est.gamma.values[k] - sol.omega.eval_angle(t)).norm());
    }
    println!("sup |gamma_z - Omega_z| = {sup:.4} over {trials} trials");
    assert!(sup <= 0.05, "sup {sup}");
}

#[test]
fn omega_solver_refinement_and_residuals() {
    let alpha = 0.8;
    let z = Complex64::new(0.05, 0.5);
    let spec = QuadratureSpec::default_spec();
    let tol = 1e-6;
    let sol64 = quadrant::solve_omega(alpha, z, 64, tol, 300, &spec).unwrap();
    let sol128 = quadrant::solve_omega(alpha, z, 128, tol, 300, &spec).unwrap();
    let one = Complex64::new(1.0, 0.0);
    let refine_shift = (sol64.omega.eval(one) - sol128.omega.eval(one)).norm();
    println!(
        "grid refinement 64 -> 128 moves Omega(1) by {refine_shift:.2e}; residuals {:.2e} / {:.2e}",
        sol64.residual_sup, sol128.residual_sup
    );
    assert!(refine_shift <= 1e-4, "refinement shift {refine_shift}");
    assert!(sol64.residual_sup <= tol * 1.01 && sol64.iterations <= 200);

    // residual re-evaluated on the refined grid stays within 10x tolerance:
    // resample the 64-node solution onto 128 nodes and re-apply the map
    let resampled = HalfQuadrantFunction {
        theta: sol128.omega.theta.clone(),
        values: sol128
            .omega
            .theta
            .iter()
            .map(|&t| sol64.omega.eval_angle(t))
            .collect(),
        degree: sol64.omega.degree,
    };
    let mapped = quadrant::upsilon(alpha, z, &resampled, &spec).unwrap();
    let res = resampled.sup_distance(&mapped);
    println!("refined-grid residual {res:.2e}");
    assert!(res <= 10.0 * tol, "refined residual {res}");
}

#[test]
fn omega_stability_under_perturbation() {
    // perturbing the fixed point must show up in the map residual:
    // ‖f - Υf‖ ≥ ε / C for ‖f - Ω‖ = ε (C frozen from calibration)
    let alpha = 0.8;
    let z = Complex64::new(0.05, 0.5);
    let spec = QuadratureSpec::default_spec();
    let sol = quadrant::solve_omega(alpha, z, 64, 1e-7, 300, &spec).unwrap();
    let eps = 1e-3;
    let c_stability = 10.0;
    for mode in 0..2 {
        let mut f = sol.omega.clone();
        for (k, v) in f.values.iter_mut().enumerate() {
            let angle = f.theta[k];
            let bump = match mode {
                0 => Complex64::new(1.0, 0.0),
                _ => Complex64::new((4.0 * angle).cos(), (4.0 * angle).sin() * 0.5),
            };
            *v += eps * bump;
        }
        let mapped = quadrant::upsilon(alpha, z, &f, &spec).unwrap();
        let res = f.sup_distance(&mapped);
        println!("mode {mode}: perturbation {eps:.1e} -> residual {res:.2e}");
        assert!(
            res >= eps / c_stability,
            "mode {mode}: residual {res} below {eps}/{c_stability}"
        );
    }
}

#[test]
fn r_pz_bound_and_f_bound() {
    let alpha = 0.8;
    let z = Complex64::new(0.05, 0.5);
    let spec = QuadratureSpec::default_spec();
    let sol = quadrant::solve_omega(alpha, z, 64, 1e-6, 300, &spec).unwrap();
    // r_{2,z}(Ω_z) stays bounded (frozen constant from calibration)
    let r2 = quadrant::r_pz(alpha, 2.0, z, &sol.omega, &spec).unwrap();
    println!("r_2,z(Omega) = {r2:.4}");
    assert!(r2.norm() <= 5.0, "r2 {r2}");

    // ‖F_h(g)‖ ≤ C (Re h)^{-α/2} (1 + ‖g‖) with C frozen once
    let g = HalfQuadrantFunction::from_fn(alpha, 64, |u| {
        rmtlab::special::cpow(quadrant::bracket(Complex64::new(1.0, 0.0), u), alpha / 2.0)
    });
    let g2 = HalfQuadrantFunction {
        theta: g.theta.clone(),
        values: g.values.iter().map(|v| v * 2.0).collect(),
        degree: g.degree,
    };
    let c_bound = 3.0;
    for h in [Complex64::new(0.5, -0.05), Complex64::new(1.0, 0.3), Complex64::new(2.0, 0.0)] {
        for gg in [&g, &g2] {
            let mut sup: f64 = 0.0;
            for &t in &[0.2, 0.8, 1.4] {
                let u = Complex64::from_polar(1.0, t);
                sup = sup.max(quadrant::eval_f(alpha, h, gg, u, &spec).unwrap().norm());
            }
            let bound = c_bound * h.re.powf(-alpha / 2.0) * (1.0 + gg.sup_norm());
            println!("‖F‖ = {sup:.3} vs bound {bound:.3} at Re h = {}", h.re);
            assert!(sup <= bound, "sup {sup} vs bound {bound}");
        }
    }
}

#[test]
fn m_alpha_small_positivity_and_asymptotics() {
    let alpha = 0.8;
    let spec = QuadratureSpec::default_spec();
    // Im > 0 across a small-|E| grid
    for &(e, eta) in &[(0.0, 0.3), (0.1, 0.5), (-0.1, 1.0)] {
        let m = quadrant::m_alpha_small(alpha, Complex64::new(e, eta), 48, &spec).unwrap();
        assert!(m.im > 0.0, "z = {e}+{eta}i: {m}");
    }
    // -1/z asymptotics at z = 5i within 2%
    let m = quadrant::m_alpha_small(alpha, I * 5.0, 48, &spec).unwrap();
    let target = I / 5.0;
    assert!(
        (m - target).norm() <= 0.02 * target.norm(),
        "m(5i) = {m} vs {target}"
    );
}
