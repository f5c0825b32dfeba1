//! Batch experiment runner: a validated config in, CSV/JSON/SVG artifacts
//! out, with optional pass/fail checks gating the exit status.

use crate::config::{Experiment, RunConfig};
use crate::ensemble::{dump_matrix, sample_goe, sample_pair, validate_params};
use crate::error::Result;
use crate::limit_law::{self, LimitLawSolver};
use crate::quadrant::{self, QuadratureSpec};
use crate::report::{fmt_g17, write_csv, SvgPlot};
use crate::rng::trial_rng;
use crate::spectra::{self, DomainSpec, LocalLawArm};
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Serialize)]
pub struct RunSummary {
    pub experiment: Experiment,
    pub files: Vec<PathBuf>,
    pub checks: Vec<CheckResult>,
    pub wall_seconds: f64,
    /// experiment-level scalar results, echoed into the manifest
    pub summary: serde_json::Value,
}

impl RunSummary {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn check(name: &str, value: f64, threshold: f64, pass: bool) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass,
        value,
        threshold,
    }
}

/// Execute one experiment, writing artifacts under `out_dir`.
pub fn execute(cfg: &RunConfig, raw_config: &str, out_dir: &Path, dump: bool) -> Result<RunSummary> {
    std::fs::create_dir_all(out_dir)?;
    let start = Instant::now();
    let mut files = Vec::new();
    if dump {
        let pair = sample_pair(&cfg.ensemble, &mut trial_rng(cfg.ensemble.seed, 0))?;
        for (name, m) in [("h_trial0.mat", &pair.h), ("x_trial0.mat", &pair.x)] {
            let path = out_dir.join(name);
            dump_matrix(&path, m)?;
            files.push(path);
        }
    }
    let (mut more_files, checks, summary) = match cfg.experiment {
        Experiment::Density => density_experiment(cfg, out_dir)?,
        Experiment::LocalLaw => locallaw_experiment(cfg, out_dir)?,
        Experiment::Deloc => deloc_experiment(cfg, out_dir)?,
        Experiment::Gaps => gaps_experiment(cfg, out_dir)?,
        Experiment::Compare => compare_experiment(cfg, out_dir)?,
        Experiment::FixedPoint => fixedpoint_experiment(cfg, out_dir)?,
        Experiment::TiTail => titail_experiment(cfg, out_dir)?,
        Experiment::Laplace => laplace_experiment(cfg, out_dir)?,
        Experiment::Dbm => dbm_experiment(cfg, out_dir)?,
        Experiment::Validate => validate_experiment(cfg, out_dir)?,
        Experiment::SelfTest => selftest_experiment(out_dir)?,
    };
    files.append(&mut more_files);
    let summary_struct = RunSummary {
        experiment: cfg.experiment,
        files,
        checks,
        wall_seconds: start.elapsed().as_secs_f64(),
        summary,
    };
    write_manifest(cfg, raw_config, out_dir, &summary_struct)?;
    Ok(summary_struct)
}

fn write_manifest(
    cfg: &RunConfig,
    raw_config: &str,
    out_dir: &Path,
    summary: &RunSummary,
) -> Result<()> {
    let mut hasher = Sha256::new();
    hasher.update(raw_config.as_bytes());
    let digest = hasher.finalize();
    let manifest = serde_json::json!({
        "schema_version": crate::config::SCHEMA_VERSION,
        "experiment": cfg.experiment,
        "seed": cfg.ensemble.seed,
        "config_echo": raw_config,
        "config_sha256": format!("{digest:x}"),
        "files": summary.files,
        "checks": summary.checks,
        "wall_seconds": summary.wall_seconds,
        "summary": summary.summary,
    });
    std::fs::write(
        out_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(())
}

type ExperimentOutput = (Vec<PathBuf>, Vec<CheckResult>, serde_json::Value);

fn density_experiment(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutput> {
    let p = &cfg.params;
    let alpha = cfg.ensemble.alpha;
    let (e_min, e_max) = (p.e_min.unwrap_or(-5.0), p.e_max.unwrap_or(5.0));
    let n_e = p.n_e.unwrap_or(201);
    let eta_pair = p.eta_pair.unwrap_or((1e-3, 5e-4));
    let h = (e_max - e_min) / (n_e - 1) as f64;
    let e_grid: Vec<f64> = (0..n_e).map(|k| e_min + k as f64 * h).collect();
    let mut solver = LimitLawSolver::new(alpha);
    let mut rows = Vec::with_capacity(n_e);
    let mut rho = Vec::with_capacity(n_e);
    for &e in &e_grid {
        let r1 = solver.solve(Complex64::new(e, eta_pair.0))?;
        let r2 = solver.solve(Complex64::new(e, eta_pair.1))?;
        let v = ((eta_pair.0 * r2.m_alpha.im - eta_pair.1 * r1.m_alpha.im)
            / (eta_pair.0 - eta_pair.1)
            / std::f64::consts::PI)
            .max(0.0);
        rho.push(v);
        rows.push(vec![
            fmt_g17(e),
            fmt_g17(v),
            fmt_g17(r2.m_alpha.im),
            fmt_g17(r2.residual),
        ]);
    }
    let csv = out.join("density.csv");
    write_csv(&csv, &["E", "rho_alpha", "im_m", "residual"], &rows)?;

    // single-trial ESD overlay
    let pair = sample_pair(&cfg.ensemble, &mut trial_rng(cfg.ensemble.seed, 0))?;
    let dec = spectra::eigs(&pair.h)?;
    let bins = 40;
    let cmp = spectra::esd_compare(
        &dec.eigenvalues,
        |x| interp_density(&e_grid, &rho, x),
        bins,
        (e_min, e_max),
    )?;
    let width = (e_max - e_min) / bins as f64;
    let y_max = rho.iter().cloned().fold(0.0f64, f64::max).max(
        cmp.empirical.iter().cloned().fold(0.0f64, f64::max) / width,
    ) * 1.1;
    let mut plot = SvgPlot::new(
        &format!("spectral density overlay (alpha = {alpha}, N = {})", cfg.ensemble.n),
        (e_min, e_max),
        (0.0, y_max),
    )?;
    let heights: Vec<f64> = cmp.empirical.iter().map(|&f| f / width).collect();
    plot.bars(&cmp.bin_edges, &heights, "steelblue")?;
    let curve: Vec<(f64, f64)> = e_grid.iter().cloned().zip(rho.iter().cloned()).collect();
    plot.polyline(&curve, "crimson", None)?;
    plot.label(e_min + 0.05 * (e_max - e_min), y_max * 0.95, "limit density", "crimson");
    let svg = out.join("density_overlay.svg");
    plot.write(&svg)?;

    // mass with the analytic α/(2|x|^{α+1}) tail beyond the grid
    let mass_in = crate::quad::simpson_uniform(&rho, h);
    let tail = 0.5 * (e_max.powf(-alpha) + e_min.abs().powf(-alpha));
    let mass = mass_in + tail;
    let mut checks = Vec::new();
    if let Some(tol) = cfg.checks.max_mass_defect {
        checks.push(check("density mass defect", (mass - 1.0).abs(), tol, (mass - 1.0).abs() <= tol));
    }
    Ok((
        vec![csv, svg],
        checks,
        serde_json::json!({"mass_with_tail": mass, "l1_vs_esd": cmp.l1_discrepancy}),
    ))
}

fn interp_density(grid: &[f64], rho: &[f64], x: f64) -> f64 {
    if x <= grid[0] || x >= *grid.last().unwrap() {
        return 0.0;
    }
    let pos = grid.partition_point(|&g| g < x).max(1);
    let (x0, x1) = (grid[pos - 1], grid[pos]);
    let w = (x - x0) / (x1 - x0);
    rho[pos - 1] * (1.0 - w) + rho[pos] * w
}

fn locallaw_experiment(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutput> {
    let p = &cfg.params;
    let (e_min, e_max) = (p.e_min.unwrap_or(0.5), p.e_max.unwrap_or(1.5));
    let n_e = p.n_e.unwrap_or(6);
    let etas = p.eta_grid.clone().unwrap_or_else(|| vec![p.eta.unwrap_or(0.3)]);
    let arm = p.arm.unwrap_or(LocalLawArm::Removal);
    let e_grid: Vec<f64> = (0..n_e)
        .map(|k| e_min + k as f64 * (e_max - e_min) / (n_e - 1).max(1) as f64)
        .collect();
    let mut rows = Vec::new();
    let mut heat = Vec::new();
    let mut worst: f64 = 0.0;
    for &eta in &etas {
        let domain = DomainSpec {
            e_grid: e_grid.clone(),
            eta,
            rjj_eta: p.rjj_eta,
        };
        let report = spectra::local_law_sweep(&cfg.ensemble, &domain, arm, cfg.trials)?;
        for pt in &report.points {
            worst = worst.max(pt.mean_abs_mdiff);
            heat.push(pt.mean_abs_mdiff);
            rows.push(vec![
                fmt_g17(eta),
                fmt_g17(pt.e),
                fmt_g17(pt.mean_abs_mdiff),
                fmt_g17(pt.se_abs_mdiff),
                fmt_g17(pt.q95_max_rjj.unwrap_or(f64::NAN)),
            ]);
        }
    }
    let csv = out.join("locallaw.csv");
    write_csv(
        &csv,
        &["eta", "E", "mean_abs_mdiff", "se", "q95_max_rjj"],
        &rows,
    )?;
    // heatmap over the (E, η) grid; single-η runs get a thin strip
    let de = if e_grid.len() > 1 { e_grid[1] - e_grid[0] } else { 0.1 };
    let mut xs: Vec<f64> = e_grid.iter().map(|e| e - de / 2.0).collect();
    xs.push(e_grid.last().unwrap() + de / 2.0);
    let mut ys: Vec<f64> = etas.clone();
    ys.push(etas.last().unwrap() * 1.5);
    let mut plot = SvgPlot::new(
        &format!("local-law sweep |m_N - m_alpha| ({} trials)", cfg.trials),
        (xs[0], *xs.last().unwrap()),
        (ys[0], *ys.last().unwrap()),
    )?;
    plot.heat_cells(&xs, &ys, &heat)?;
    let svg = out.join("locallaw_heatmap.svg");
    plot.write(&svg)?;
    let mut checks = Vec::new();
    if let Some(tol) = cfg.checks.max_mean_mdiff {
        checks.push(check("local-law worst mean |m_N - m_alpha|", worst, tol, worst <= tol));
    }
    Ok((
        vec![csv, svg],
        checks,
        serde_json::json!({"worst_mean_mdiff": worst}),
    ))
}

fn deloc_experiment(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutput> {
    let p = &cfg.params;
    let window = (p.e_min.unwrap_or(0.5), p.e_max.unwrap_or(1.5));
    let mut rows = Vec::new();
    let mut maxima = Vec::new();
    let mut scatter = Vec::new();
    for trial in 0..cfg.trials {
        let pair = sample_pair(&cfg.ensemble, &mut trial_rng(cfg.ensemble.seed, trial as u64))?;
        let dec = spectra::eigs(&pair.h)?;
        let rep = spectra::delocalization_report(&dec, window)?;
        if trial == 0 {
            let n = dec.n();
            for (k, &l) in dec.eigenvalues.iter().enumerate() {
                if l >= window.0 && l <= window.1 {
                    let sup = (0..n)
                        .map(|i| dec.eigenvectors[[i, k]].abs())
                        .fold(0.0f64, f64::max);
                    scatter.push((l, (n as f64).sqrt() * sup));
                }
            }
        }
        rows.push(vec![
            trial.to_string(),
            rep.scaled_sup_norms.len().to_string(),
            fmt_g17(rep.max),
            fmt_g17(rep.median),
            fmt_g17(rep.q95),
        ]);
        maxima.push(rep.max);
    }
    let csv = out.join("deloc.csv");
    write_csv(&csv, &["trial", "vectors", "max", "median", "q95"], &rows)?;
    let y_max = maxima.iter().cloned().fold(0.0f64, f64::max) * 1.2;
    let mut plot = SvgPlot::new(
        &format!("sqrt(N)·sup-norm of eigenvectors, trial 0, window [{}, {}]", window.0, window.1),
        window,
        (0.0, y_max),
    )?;
    plot.scatter(&scatter, "darkgreen")?;
    let svg = out.join("deloc_scatter.svg");
    plot.write(&svg)?;
    let mut checks = Vec::new();
    if let Some(bound) = cfg.checks.deloc_bound {
        let frac = maxima.iter().filter(|&&m| m <= bound).count() as f64 / maxima.len() as f64;
        let need = cfg.checks.min_pass_fraction.unwrap_or(0.95);
        checks.push(check("delocalization pass fraction", frac, need, frac >= need));
    }
    Ok((
        vec![csv, svg],
        checks,
        serde_json::json!({"max_over_trials": maxima.iter().cloned().fold(0.0f64, f64::max)}),
    ))
}

fn gaps_experiment(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutput> {
    let p = &cfg.params;
    let e = p.e_center.unwrap_or(1.0);
    let k = p.gaps_per_trial.unwrap_or_else(|| spectra::default_gap_count(cfg.ensemble.n));
    let rho = limit_law::density_rho_alpha(cfg.ensemble.alpha, e, p.eta_pair.unwrap_or((1e-3, 5e-4)))?;
    let levy = spectra::pooled_gaps_levy(&cfg.ensemble, e, k, rho, cfg.trials)?;
    let goe = spectra::pooled_gaps_goe(cfg.ensemble.n, 0.0, k, cfg.trials, cfg.ensemble.seed ^ 0xabcd)?;
    let ks = spectra::ks_distance(&levy, &goe)?;
    let mean_levy = levy.iter().sum::<f64>() / levy.len() as f64;
    let mean_goe = goe.iter().sum::<f64>() / goe.len() as f64;
    let mut rows = Vec::new();
    for (i, s) in levy.iter().enumerate() {
        rows.push(vec!["levy".into(), i.to_string(), fmt_g17(*s)]);
    }
    for (i, s) in goe.iter().enumerate() {
        rows.push(vec!["goe".into(), i.to_string(), fmt_g17(*s)]);
    }
    let csv = out.join("gaps.csv");
    write_csv(&csv, &["ensemble", "index", "spacing"], &rows)?;

    // spacing histogram with the Wigner surmise as reference curve
    let bins = 30;
    let s_max = 4.0;
    let width = s_max / bins as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|b| b as f64 * width).collect();
    let hist = |sample: &[f64]| -> Vec<f64> {
        let mut h = vec![0.0; bins];
        for &s in sample {
            if s < s_max {
                h[(s / width) as usize] += 1.0 / (sample.len() as f64 * width);
            }
        }
        h
    };
    let mut plot = SvgPlot::new(
        &format!("unfolded spacing distribution at E = {e} (KS = {ks:.4})"),
        (0.0, s_max),
        (0.0, 1.1),
    )?;
    plot.bars(&edges, &hist(&levy), "steelblue")?;
    plot.polyline(
        &edges
            .iter()
            .map(|&s| {
                // density of the Wigner surmise (π s / 2) exp(-π s²/4)
                (s, std::f64::consts::PI * s / 2.0
                    * (-std::f64::consts::PI * s * s / 4.0).exp())
            })
            .collect::<Vec<_>>(),
        "black",
        Some("5,3"),
    )?;
    let goe_hist = hist(&goe);
    let centers: Vec<(f64, f64)> = (0..bins)
        .map(|b| ((b as f64 + 0.5) * width, goe_hist[b]))
        .collect();
    plot.polyline(&centers, "crimson", None)?;
    plot.label(2.2, 1.0, "dashed: Wigner surmise", "black");
    plot.label(2.2, 0.93, "red: sampled GOE", "crimson");
    edges.truncate(bins + 1);
    let svg = out.join("gaps_spacing.svg");
    plot.write(&svg)?;

    let mut checks = Vec::new();
    if let Some(tol) = cfg.checks.max_gap_ks {
        checks.push(check("pooled gap KS vs GOE", ks, tol, ks <= tol));
    }
    Ok((
        vec![csv, svg],
        checks,
        serde_json::json!({"ks": ks, "mean_spacing_levy": mean_levy, "mean_spacing_goe": mean_goe}),
    ))
}

fn compare_experiment(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutput> {
    let p = &cfg.params;
    let z = Complex64::new(p.e_center.unwrap_or(1.0), p.eta.unwrap_or(0.1));
    let grid = p
        .gamma_grid
        .clone()
        .unwrap_or_else(|| vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    let rep = spectra::comparison_statistic(&cfg.ensemble, z, &grid, cfg.trials)?;
    let rows: Vec<Vec<String>> = rep
        .points
        .iter()
        .map(|pt| vec![fmt_g17(pt.gamma), fmt_g17(pt.gap), fmt_g17(pt.se)])
        .collect();
    let csv = out.join("compare.csv");
    write_csv(&csv, &["gamma", "gap", "se"], &rows)?;
    let end_gap = rep.points.last().map(|pt| pt.gap).unwrap_or(f64::NAN);
    let mut checks = Vec::new();
    if let Some(tol) = cfg.checks.max_statistic {
        checks.push(check("comparison gap at gamma = 1", end_gap, tol, end_gap <= tol));
    }
    Ok((
        vec![csv],
        checks,
        serde_json::json!({"t_flow": rep.t_flow, "gap_at_one": end_gap}),
    ))
}

fn fixedpoint_experiment(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutput> {
    let p = &cfg.params;
    let z = Complex64::new(p.e_center.unwrap_or(0.05), p.eta.unwrap_or(0.5));
    let grid_size = p.grid_size.unwrap_or(64);
    let alpha = cfg.ensemble.alpha;
    let scalar = limit_law::solve_y(alpha, z, 1e-11, 400)?;
    let spec = QuadratureSpec::fine();
    let sol = quadrant::solve_omega(alpha, z, grid_size, 1e-7, 300, &spec)?;
    let omega1 = sol.omega.eval(Complex64::new(1.0, 0.0));
    let m_small = Complex64::new(0.0, 1.0) * quadrant::s_pz(alpha, 1.0, z, omega1)?;
    let route_gap = (m_small - scalar.m_alpha).norm();
    let rows: Vec<Vec<String>> = sol
        .omega
        .theta
        .iter()
        .zip(&sol.omega.values)
        .map(|(&t, v)| vec![fmt_g17(t), fmt_g17(v.re), fmt_g17(v.im)])
        .collect();
    let csv = out.join("omega.csv");
    write_csv(&csv, &["theta", "re_omega", "im_omega"], &rows)?;
    let sidecar = out.join("omega_meta.json");
    std::fs::write(
        &sidecar,
        serde_json::to_string_pretty(&serde_json::json!({
            "alpha": alpha,
            "z": {"re": z.re, "im": z.im},
            "residual_sup": sol.residual_sup,
            "residual_r": sol.residual_r,
            "iterations": sol.iterations,
            "admissibility_at_diagonal": sol.admissibility_at_diagonal,
        }))?,
    )?;
    let mut checks = Vec::new();
    if let Some(tol) = cfg.checks.max_route_gap {
        checks.push(check("cross-route |m difference|", route_gap, tol, route_gap <= tol));
    }
    Ok((
        vec![csv, sidecar],
        checks,
        serde_json::json!({
            "m_scalar": {"re": scalar.m_alpha.re, "im": scalar.m_alpha.im},
            "m_functional": {"re": m_small.re, "im": m_small.im},
            "route_gap": route_gap,
        }),
    ))
}

fn titail_experiment(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutput> {
    let p = &cfg.params;
    let z = Complex64::new(p.e_center.unwrap_or(1.0), p.eta.unwrap_or(0.3));
    let rep = spectra::ti_tail_test(&cfg.ensemble, z, cfg.trials)?;
    let rows: Vec<Vec<String>> = rep
        .tail
        .iter()
        .map(|&(t, pr)| vec![fmt_g17(t), fmt_g17(pr)])
        .collect();
    let csv = out.join("titail.csv");
    write_csv(&csv, &["t", "tail_prob"], &rows)?;
    let mut checks = Vec::new();
    if let (Some(slope), Some(tol)) = (cfg.checks.slope, cfg.checks.slope_tol) {
        let d = (rep.fitted_slope - slope).abs();
        checks.push(check("tail slope deviation", d, tol, d <= tol));
    }
    Ok((
        vec![csv],
        checks,
        serde_json::json!({"fitted_slope": rep.fitted_slope, "mean_t": rep.mean_t}),
    ))
}

fn laplace_experiment(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutput> {
    let p = &cfg.params;
    let t = p.t_value.unwrap_or(1.0);
    let samples = p.samples.unwrap_or(100_000);
    let weights = vec![1.0; cfg.ensemble.n];
    let rep = spectra::quadratic_form_laplace_test(&cfg.ensemble, &weights, t, samples)?;
    let coeffs = vec![1.0; cfg.ensemble.n];
    let char_check = crate::stable_laws::removal_char_check(
        &cfg.ensemble.coupling_inputs(),
        &coeffs,
        t,
        (samples / 10).max(1_000),
        &mut crate::rng::scalar_rng(cfg.ensemble.seed, 3),
    )?;
    let csv = out.join("laplace.csv");
    write_csv(
        &csv,
        &["t", "lhs", "rhs", "log_ratio", "error_scale", "char_discrepancy"],
        &[vec![
            fmt_g17(t),
            fmt_g17(rep.lhs),
            fmt_g17(rep.rhs),
            fmt_g17(rep.log_ratio),
            fmt_g17(rep.error_scale),
            fmt_g17(char_check.discrepancy),
        ]],
    )?;
    let mut checks = Vec::new();
    if let Some(tol) = cfg.checks.max_log_ratio_excess {
        let excess = rep.log_ratio.abs() - rep.error_scale * cfg.ensemble.n as f64;
        checks.push(check("Laplace log-ratio excess", excess, tol, excess <= tol));
    }
    Ok((
        vec![csv],
        checks,
        serde_json::json!({"log_ratio": rep.log_ratio, "char_discrepancy": char_check.discrepancy}),
    ))
}

fn dbm_experiment(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutput> {
    let p = &cfg.params;
    let rep = spectra::dbm_regularization_check(
        &cfg.ensemble,
        p.s_flow,
        p.e_center.unwrap_or(1.0),
        p.delta.unwrap_or(0.25),
        cfg.trials,
    )?;
    let rows: Vec<Vec<String>> = rep
        .flow_max
        .iter()
        .zip(&rep.control_max)
        .enumerate()
        .map(|(trial, (f, c))| vec![trial.to_string(), fmt_g17(*f), fmt_g17(*c)])
        .collect();
    let csv = out.join("dbm.csv");
    write_csv(&csv, &["trial", "flow_max_entry", "control_max_entry"], &rows)?;
    let mut checks = Vec::new();
    if let Some(bound) = cfg.checks.max_statistic {
        let frac = rep.flow_max.iter().filter(|&&m| m <= bound).count() as f64
            / rep.flow_max.len() as f64;
        let need = cfg.checks.min_pass_fraction.unwrap_or(0.95);
        checks.push(check("flow max-entry pass fraction", frac, need, frac >= need));
    }
    Ok((
        vec![csv],
        checks,
        serde_json::json!({"eta": rep.eta, "s_flow": rep.s_flow}),
    ))
}

fn validate_experiment(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutput> {
    let e = &cfg.ensemble;
    let diags = validate_params(e.alpha, e.b(), e.nu, e.rho);
    let rows: Vec<Vec<String>> = diags
        .iter()
        .map(|d| {
            vec![
                d.name.to_string(),
                if d.pass { "pass" } else { "fail" }.to_string(),
                fmt_g17(d.margin),
            ]
        })
        .collect();
    let csv = out.join("validate.csv");
    write_csv(&csv, &["constraint", "status", "margin"], &rows)?;
    Ok((vec![csv], Vec::new(), serde_json::json!({"all_pass": true})))
}

/// The quick identity suite behind `rmtlab selftest`: exact, closed-form
/// checks from every module, each reported as one line.
pub fn selftest_lines() -> Vec<(String, bool)> {
    let mut lines = Vec::new();
    let mut push = |name: &str, pass: bool| lines.push((name.to_string(), pass));

    let split_ok = {
        let s = crate::stable_laws::split_removal(0.3, 1.0);
        let b = crate::stable_laws::split_removal(1.0, 1.0);
        s.small_part == 0.3 && s.large_part == 0.0 && b.small_part == 1.0
    };
    push("removal split (boundary to small part)", split_ok);

    let sigma_ok = crate::stable_laws::StableParams::paper_normalized(1.0)
        .map(|p| (p.sigma - std::f64::consts::FRAC_PI_2).abs() < 1e-12)
        .unwrap_or(false);
    push("stable scale sigma(1) = pi/2", sigma_ok);

    let bracket_ok = {
        let u = Complex64::new(3.0, 4.0);
        quadrant::bracket(u, Complex64::new(1.0, 0.0)) == u
    };
    push("pairing identity (u|1) = u", bracket_ok);

    let psi_ok = limit_law::psi_fn(1.5, Complex64::new(1.0, 1.0), Complex64::new(0.0, 0.0))
        .map(|v| (v - Complex64::new(0.5, 0.5)).norm() < 1e-9)
        .unwrap_or(false);
    push("psi(0) = i/z closed form", psi_ok);

    let sc_ok = {
        let m = limit_law::m_semicircle(Complex64::new(0.0, 1.0));
        (m - Complex64::new(0.0, (5f64.sqrt() - 1.0) / 2.0)).norm() < 1e-13
            && (limit_law::rho_semicircle(0.0) - 1.0 / std::f64::consts::PI).abs() < 1e-14
    };
    push("semicircle closed forms", sc_ok);

    let fc_ok = limit_law::free_convolution_mfc(&[0.0; 4], 1.0, Complex64::new(0.0, 1.0))
        .map(|f| (f.m_fc - limit_law::m_semicircle(Complex64::new(0.0, 1.0))).norm() < 1e-9)
        .unwrap_or(false);
    push("free convolution semicircle reduction", fc_ok);

    let resolvent_ok = (|| -> Result<bool> {
        let goe = sample_goe(100, &mut trial_rng(1, 0));
        let rec = crate::resolvent::resolvent(&goe.w, Complex64::new(0.2, 0.4))?;
        let d = rec.diagnostics(&goe.w);
        Ok(d.ward_residual <= 1e-9 && d.entry_bound_excess <= 1e-12 && d.solve_residual <= 1e-9)
    })()
    .unwrap_or(false);
    push("Ward identity and entry bound (N = 100)", resolvent_ok);

    let interp_ok = (|| -> Result<bool> {
        let cfg = crate::ensemble::EnsembleConfig::new(40, 1.5, 0.45, 0.10, 2)?;
        let pair = sample_pair(&cfg, &mut trial_rng(2, 0))?;
        let goe = sample_goe(40, &mut trial_rng(2, 1));
        let h1 = crate::ensemble::interpolate_gamma(&pair, &goe, 0.3, 1.0)?;
        Ok(h1 == pair.h)
    })()
    .unwrap_or(false);
    push("interpolation endpoint H^1 = H", interp_ok);

    let surmise_ok = spectra::wigner_surmise_cdf(0.0) == 0.0
        && (spectra::wigner_surmise_cdf((4.0 * std::f64::consts::LN_2 / std::f64::consts::PI).sqrt())
            - 0.5)
            .abs()
            < 1e-12;
    push("Wigner surmise endpoints and median", surmise_ok);

    let ks_ok = {
        let a = [1.0, 2.0, 3.0];
        spectra::ks_distance(&a, &a).map(|d| d == 0.0).unwrap_or(false)
    };
    push("KS distance of identical samples", ks_ok);

    let validate_ok = validate_params(1.5, 1.0 / 1.5 - 0.45, 0.45, 0.10)
        .iter()
        .all(|d| d.pass);
    push("parameter constraints at the reference point", validate_ok);

    let c_alpha_ok =
        (quadrant::c_alpha(1.0) - 1.0 / (2f64.sqrt() * std::f64::consts::PI)).abs() < 1e-12;
    push("operator constant c_alpha at alpha = 1", c_alpha_ok);

    lines
}

fn selftest_experiment(out: &Path) -> Result<ExperimentOutput> {
    let lines = selftest_lines();
    let rows: Vec<Vec<String>> = lines
        .iter()
        .map(|(name, pass)| vec![name.clone(), if *pass { "pass" } else { "fail" }.to_string()])
        .collect();
    let csv = out.join("selftest.csv");
    write_csv(&csv, &["check", "status"], &rows)?;
    let checks: Vec<CheckResult> = lines
        .iter()
        .map(|(name, pass)| check(name, if *pass { 1.0 } else { 0.0 }, 1.0, *pass))
        .collect();
    let all = lines.iter().all(|(_, p)| *p);
    Ok((vec![csv], checks, serde_json::json!({"all_pass": all})))
}
