//! Eigen-decompositions and experiment-level spectral statistics: empirical
//! spectral distributions against the limit density, local-law sweeps,
//! eigenvector delocalization, unfolded gap statistics, Schur-quantity tail
//! tests, quadratic-form Laplace checks, flow regularization and the
//! interpolation comparison statistic.

use crate::ensemble::{interpolate_gamma, sample_goe, sample_pair, EnsembleConfig};
use crate::error::{Error, Result};
use crate::limit_law::LimitLawSolver;
use crate::resolvent::schur_sweep;
use crate::rng::trial_rng;
use crate::stable_laws::{linear_slope, sample_entry, split_removal};
use ndarray::Array2;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

/// Ascending eigenvalues with orthonormal eigenvector columns.
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Array2<f64>,
}

/// Dense symmetric eigendecomposition (LAPACK).
pub fn eigs(m: &Array2<f64>) -> Result<SpectralDecomposition> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidParams("matrix must be square".into()));
    }
    if m.nrows() > crate::ensemble::DEFAULT_MAX_DIM {
        return Err(Error::InvalidParams(format!(
            "N = {} exceeds the desk-scale guard",
            m.nrows()
        )));
    }
    let (vals, vecs) = m
        .eigh(UPLO::Lower)
        .map_err(|e| Error::linalg("eigs", e))?;
    Ok(SpectralDecomposition {
        eigenvalues: vals.to_vec(),
        eigenvectors: vecs,
    })
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Max relative eigenpair residual and max orthonormality residual.
    pub fn verify(&self, m: &Array2<f64>) -> (f64, f64) {
        let n = self.n();
        let scale = self
            .eigenvalues
            .iter()
            .fold(0.0f64, |a, &l| a.max(l.abs()))
            .max(1e-300);
        let prod = m.dot(&self.eigenvectors);
        let mut pair_res: f64 = 0.0;
        for k in 0..n {
            let mut num = 0.0;
            for i in 0..n {
                let r = prod[[i, k]] - self.eigenvalues[k] * self.eigenvectors[[i, k]];
                num += r * r;
            }
            pair_res = pair_res.max(num.sqrt() / scale);
        }
        let gram = self.eigenvectors.t().dot(&self.eigenvectors);
        let mut ortho: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { 1.0 } else { 0.0 };
                ortho = ortho.max((gram[[i, j]] - expect).abs());
            }
        }
        (pair_res, ortho)
    }

    /// `m_N(z) = N⁻¹ Σ (λ_k - z)⁻¹`.
    pub fn m_n(&self, z: Complex64) -> Complex64 {
        self.eigenvalues
            .iter()
            .map(|&l| (Complex64::new(l, 0.0) - z).inv())
            .sum::<Complex64>()
            / self.n() as f64
    }

    /// Diagonal resolvent entries `G_jj(z) = Σ_k Q_jk² / (λ_k - z)`.
    pub fn resolvent_diag(&self, z: Complex64) -> Vec<Complex64> {
        let n = self.n();
        let d: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .map(|&l| (Complex64::new(l, 0.0) - z).inv())
            .collect();
        (0..n)
            .map(|j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let q = self.eigenvectors[[j, k]];
                    acc += d[k] * (q * q);
                }
                acc
            })
            .collect()
    }

    /// Full resolvent `Q diag(1/(λ-z)) Qᵀ` assembled from two real GEMMs.
    pub fn full_resolvent(&self, z: Complex64) -> Array2<Complex64> {
        let n = self.n();
        let mut q_re = self.eigenvectors.clone();
        let mut q_im = self.eigenvectors.clone();
        for k in 0..n {
            let d = (Complex64::new(self.eigenvalues[k], 0.0) - z).inv();
            let mut col_re = q_re.column_mut(k);
            col_re *= d.re;
            let mut col_im = q_im.column_mut(k);
            col_im *= d.im;
        }
        let re = q_re.dot(&self.eigenvectors.t());
        let im = q_im.dot(&self.eigenvectors.t());
        Array2::from_shape_fn((n, n), |(i, j)| Complex64::new(re[[i, j]], im[[i, j]]))
    }
}

/// Histogram comparison between an empirical spectrum and a reference density.
pub struct EsdComparison {
    pub bin_edges: Vec<f64>,
    /// fraction of eigenvalues per bin
    pub empirical: Vec<f64>,
    /// reference mass per bin (Simpson over the bin)
    pub reference: Vec<f64>,
    pub sup_discrepancy: f64,
    pub l1_discrepancy: f64,
}

pub fn esd_compare(
    eigenvalues: &[f64],
    reference_density: impl Fn(f64) -> f64,
    bins: usize,
    range: (f64, f64),
) -> Result<EsdComparison> {
    if bins == 0 || !(range.1 > range.0) || eigenvalues.is_empty() {
        return Err(Error::InvalidInput("esd_compare: degenerate input".into()));
    }
    let width = (range.1 - range.0) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|k| range.0 + k as f64 * width).collect();
    let mut counts = vec![0usize; bins];
    for &l in eigenvalues {
        if l >= range.0 && l < range.1 {
            let k = ((l - range.0) / width) as usize;
            counts[k.min(bins - 1)] += 1;
        }
    }
    let n = eigenvalues.len() as f64;
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let reference: Vec<f64> = (0..bins)
        .map(|k| {
            let (a, b) = (edges[k], edges[k + 1]);
            (reference_density(a) + 4.0 * reference_density(0.5 * (a + b)) + reference_density(b))
                / 6.0
                * width
        })
        .collect();
    let mut sup: f64 = 0.0;
    let mut l1 = 0.0;
    for k in 0..bins {
        let d = (empirical[k] - reference[k]).abs();
        sup = sup.max(d);
        l1 += d;
    }
    Ok(EsdComparison {
        bin_edges: edges,
        empirical,
        reference,
        sup_discrepancy: sup,
        l1_discrepancy: l1,
    })
}

/// Which matrix of the coupled family a sweep runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalLawArm {
    /// the removal matrix `X`
    Removal,
    /// the full matrix `H`
    Full,
    /// the flow matrix `V = X + √t·W`
    Flow,
}

/// Energy grid and scales for a local-law sweep.
#[derive(Debug, Clone)]
pub struct DomainSpec {
    pub e_grid: Vec<f64>,
    pub eta: f64,
    /// separate scale for the diagonal-resolvent statistics, if requested
    pub rjj_eta: Option<f64>,
}

pub struct LocalLawPoint {
    pub e: f64,
    pub m_alpha: Complex64,
    pub mean_abs_mdiff: f64,
    pub se_abs_mdiff: f64,
    /// 95th percentile over trials of `max_j |R_jj|` at `rjj_eta`
    pub q95_max_rjj: Option<f64>,
}

pub struct LocalLawReport {
    pub arm: LocalLawArm,
    pub eta: f64,
    pub rjj_eta: Option<f64>,
    pub trials: usize,
    pub points: Vec<LocalLawPoint>,
}

/// Per-energy concentration of `m_N` around `m_α` over independent trials,
/// with optional diagonal-entry quantiles at a second scale. The `Flow` arm
/// uses `m_α` as a proxy reference (its own limit differs at order `t`).
pub fn local_law_sweep(
    config: &EnsembleConfig,
    domain: &DomainSpec,
    arm: LocalLawArm,
    trials: usize,
) -> Result<LocalLawReport> {
    if config.alpha > 1.0 && domain.e_grid.iter().any(|e| e.abs() < 1e-9) {
        return Err(Error::InvalidParams(
            "local-law domain must exclude E = 0 for alpha in (1,2)".into(),
        ));
    }
    if !(domain.eta > 0.0) {
        return Err(Error::InvalidParams("eta must be > 0".into()));
    }
    let mut solver = LimitLawSolver::new(config.alpha);
    let m_refs: Vec<Complex64> = domain
        .e_grid
        .iter()
        .map(|&e| solver.m_alpha(Complex64::new(e, domain.eta)))
        .collect::<Result<_>>()?;
    let flow_t = if arm == LocalLawArm::Flow {
        Some(crate::stable_laws::coupling_time_t(&config.coupling_inputs(), 2_000_000)?.value)
    } else {
        None
    };
    let ne = domain.e_grid.len();
    let mut diffs = vec![Vec::with_capacity(trials); ne];
    let mut max_rjj = vec![Vec::with_capacity(trials); ne];
    for trial in 0..trials {
        let mut rng = trial_rng(config.seed, trial as u64);
        let pair = sample_pair(config, &mut rng)?;
        let matrix = match arm {
            LocalLawArm::Removal => pair.x,
            LocalLawArm::Full => pair.h,
            LocalLawArm::Flow => {
                let goe = sample_goe(config.n, &mut rng);
                let mut v = pair.x.clone();
                v.scaled_add(flow_t.unwrap().sqrt(), &goe.w);
                v
            }
        };
        let dec = eigs(&matrix)?;
        for (k, &e) in domain.e_grid.iter().enumerate() {
            let m_n = dec.m_n(Complex64::new(e, domain.eta));
            diffs[k].push((m_n - m_refs[k]).norm());
            if let Some(re) = domain.rjj_eta {
                let diag = dec.resolvent_diag(Complex64::new(e, re));
                max_rjj[k].push(diag.iter().map(|g| g.norm()).fold(0.0f64, f64::max));
            }
        }
    }
    let points = (0..ne)
        .map(|k| {
            let d = &diffs[k];
            let mean = d.iter().sum::<f64>() / trials as f64;
            let var = d.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / trials as f64;
            let q95 = domain.rjj_eta.map(|_| {
                let mut v = max_rjj[k].clone();
                v.sort_by(|a, b| a.total_cmp(b));
                v[((0.95 * trials as f64).ceil() as usize - 1).min(trials - 1)]
            });
            LocalLawPoint {
                e: domain.e_grid[k],
                m_alpha: m_refs[k],
                mean_abs_mdiff: mean,
                se_abs_mdiff: (var / trials as f64).sqrt(),
                q95_max_rjj: q95,
            }
        })
        .collect();
    Ok(LocalLawReport {
        arm,
        eta: domain.eta,
        rjj_eta: domain.rjj_eta,
        trials,
        points,
    })
}

/// Sup-norm statistics of the eigenvectors with eigenvalue in the window.
pub struct DelocalizationReport {
    /// `√N · ‖u‖_∞` per eigenvector in the window
    pub scaled_sup_norms: Vec<f64>,
    pub max: f64,
    pub median: f64,
    pub q95: f64,
}

pub fn delocalization_report(
    dec: &SpectralDecomposition,
    window: (f64, f64),
) -> Result<DelocalizationReport> {
    let n = dec.n();
    let sqrt_n = (n as f64).sqrt();
    let mut scaled: Vec<f64> = Vec::new();
    for (k, &l) in dec.eigenvalues.iter().enumerate() {
        if l >= window.0 && l <= window.1 {
            let sup = (0..n)
                .map(|i| dec.eigenvectors[[i, k]].abs())
                .fold(0.0f64, f64::max);
            scaled.push(sqrt_n * sup);
        }
    }
    if scaled.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no eigenvalues inside the window [{}, {}]",
            window.0, window.1
        )));
    }
    let mut sorted = scaled.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let q = |p: f64| sorted[((p * sorted.len() as f64).ceil() as usize - 1).min(sorted.len() - 1)];
    Ok(DelocalizationReport {
        max: *sorted.last().unwrap(),
        median: q(0.5),
        q95: q(0.95),
        scaled_sup_norms: scaled,
    })
}

/// Unfolded spacings around an energy.
pub struct GapSample {
    pub center: f64,
    pub spacings: Vec<f64>,
    pub mean_spacing: f64,
}

/// The `k` gaps nearest `E`, unfolded by `s_j = N·ρ(E)·(λ_{j+1} - λ_j)`.
pub fn unfolded_gaps(
    eigenvalues: &[f64],
    e: f64,
    k: usize,
    density_at_e: f64,
) -> Result<GapSample> {
    let n = eigenvalues.len();
    if n < k + 1 {
        return Err(Error::InvalidInput(format!(
            "need at least {} eigenvalues for {k} gaps, have {n}",
            k + 1
        )));
    }
    if !(density_at_e > 0.0) {
        return Err(Error::InvalidParams(format!(
            "density at E must be positive, got {density_at_e}"
        )));
    }
    // index of the eigenvalue nearest E
    let center = eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - e).abs().total_cmp(&(b.1 - e).abs()))
        .map(|(i, _)| i)
        .unwrap();
    let half = k / 2;
    let lo = center
        .saturating_sub(half)
        .min(n - 1 - k);
    let scale = n as f64 * density_at_e;
    let spacings: Vec<f64> = (lo..lo + k)
        .map(|j| scale * (eigenvalues[j + 1] - eigenvalues[j]))
        .collect();
    let mean = spacings.iter().sum::<f64>() / k as f64;
    Ok(GapSample {
        center: e,
        spacings,
        mean_spacing: mean,
    })
}

/// Two-sample Kolmogorov–Smirnov statistic; ignores non-finite values.
pub fn ks_distance(sample_a: &[f64], sample_b: &[f64]) -> Result<f64> {
    let mut a: Vec<f64> = sample_a.iter().copied().filter(|x| x.is_finite()).collect();
    let mut b: Vec<f64> = sample_b.iter().copied().filter(|x| x.is_finite()).collect();
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("ks_distance: empty sample".into()));
    }
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut stat: f64 = 0.0;
    while ia < a.len() && ib < b.len() {
        let x = a[ia].min(b[ib]);
        while ia < a.len() && a[ia] <= x {
            ia += 1;
        }
        while ib < b.len() && b[ib] <= x {
            ib += 1;
        }
        stat = stat.max((ia as f64 / na - ib as f64 / nb).abs());
    }
    Ok(stat)
}

/// One-sample Kolmogorov–Smirnov statistic against an analytic CDF.
pub fn ks_distance_to_cdf(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let mut s: Vec<f64> = sample.iter().copied().filter(|x| x.is_finite()).collect();
    if s.is_empty() {
        return Err(Error::InvalidInput("ks_distance_to_cdf: empty sample".into()));
    }
    s.sort_by(|x, y| x.total_cmp(y));
    let n = s.len() as f64;
    let mut stat: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        stat = stat.max((f - i as f64 / n).abs());
        stat = stat.max((f - (i + 1) as f64 / n).abs());
    }
    Ok(stat)
}

/// CDF of the Wigner surmise for GOE spacings: `1 - exp(-π s² / 4)`.
pub fn wigner_surmise_cdf(s: f64) -> f64 {
    debug_assert!(s >= 0.0);
    1.0 - (-std::f64::consts::PI * s * s / 4.0).exp()
}

/// Tail statistics of the scaled Schur quantity `|T_i|·(Nη²)^{1/2}`.
pub struct TiTailReport {
    pub scaled_samples: Vec<f64>,
    /// `(t, P[|T̃| ≥ t])` on a dyadic grid
    pub tail: Vec<(f64, f64)>,
    pub fitted_slope: f64,
    /// mean of the unscaled `T_i` (should vanish by symmetry)
    pub mean_t: f64,
    pub se_mean_t: f64,
}

pub fn ti_tail_test(
    config: &EnsembleConfig,
    z: Complex64,
    trials: usize,
) -> Result<TiTailReport> {
    let scale = (config.n as f64).sqrt() * z.im;
    let mut scaled = Vec::with_capacity(trials * config.n);
    let mut sum_t = 0.0;
    let mut sum_t_sq = 0.0;
    let all: Vec<usize> = (0..config.n).collect();
    for trial in 0..trials {
        let pair = sample_pair(config, &mut trial_rng(config.seed, trial as u64))?;
        let sweep = schur_sweep(&pair.x, pair.stable_part(), z, &all)?;
        for t in &sweep.t {
            scaled.push(t.norm() * scale);
            sum_t += t.re;
            sum_t_sq += t.re * t.re;
        }
    }
    let n = scaled.len() as f64;
    let mean_t = sum_t / n;
    let se_mean_t = ((sum_t_sq / n - mean_t * mean_t).max(0.0) / n).sqrt();
    let mut tail = Vec::new();
    let mut pts = Vec::new();
    for k in 1..=5 {
        let t = 2f64.powi(k);
        let p = scaled.iter().filter(|&&s| s >= t).count() as f64 / n;
        tail.push((t, p));
        if p > 0.0 {
            pts.push((t.ln(), p.ln()));
        }
    }
    Ok(TiTailReport {
        scaled_samples: scaled,
        tail,
        fitted_slope: linear_slope(&pts),
        mean_t,
        se_mean_t,
    })
}

/// Both sides of the quadratic-form Laplace-transform comparison.
pub struct LaplaceReport {
    pub lhs: f64,
    pub rhs: f64,
    pub log_ratio: f64,
    pub lhs_se: f64,
    pub rhs_se: f64,
    /// `t² N^{(2-α)(b-1/α)-1} Tr A`
    pub error_scale: f64,
}

/// Monte Carlo of `E exp(-t²⟨AX,X⟩/2)` against
/// `E exp(-σ^α |t|^α ‖A^{1/2}Y‖_α^α / N)` for a nonnegative diagonal `A`.
pub fn quadratic_form_laplace_test(
    config: &EnsembleConfig,
    diag_weights: &[f64],
    t: f64,
    samples_per_side: usize,
) -> Result<LaplaceReport> {
    if diag_weights.iter().any(|&a| a < 0.0) {
        return Err(Error::InvalidParams(
            "diagonal weights must be nonnegative".into(),
        ));
    }
    let n = diag_weights.len();
    let params = config.stable_params()?;
    let alpha = config.alpha;
    let scale = (config.n as f64).powf(-1.0 / alpha);
    let cutoff = (config.n as f64).powf(-config.nu);
    let mut rng = crate::rng::scalar_rng(config.seed, 2);
    let mut lhs_sum = 0.0;
    let mut lhs_sq = 0.0;
    for _ in 0..samples_per_side {
        let mut q = 0.0;
        for &a in diag_weights {
            let h = scale * sample_entry(&params, &config.deformation, &mut rng);
            let x = h - split_removal(h, cutoff).small_part;
            q += a * x * x;
        }
        let v = (-t * t * q / 2.0).exp();
        lhs_sum += v;
        lhs_sq += v * v;
    }
    let sigma_term = params.sigma.powf(alpha) * t.abs().powf(alpha) / config.n as f64;
    let half = alpha / 2.0;
    let mut rhs_sum = 0.0;
    let mut rhs_sq = 0.0;
    for _ in 0..samples_per_side {
        let mut norm_a = 0.0;
        for &a in diag_weights {
            let y: f64 = StandardNormal.sample(&mut rng);
            norm_a += (a * y * y).powf(half);
        }
        let v = (-sigma_term * norm_a).exp();
        rhs_sum += v;
        rhs_sq += v * v;
    }
    let m = samples_per_side as f64;
    let lhs = lhs_sum / m;
    let rhs = rhs_sum / m;
    let tr_a: f64 = diag_weights.iter().sum();
    let b = config.b();
    Ok(LaplaceReport {
        lhs,
        rhs,
        log_ratio: (lhs / rhs).ln(),
        lhs_se: ((lhs_sq / m - lhs * lhs).max(0.0) / m).sqrt(),
        rhs_se: ((rhs_sq / m - rhs * rhs).max(0.0) / m).sqrt(),
        error_scale: t * t * (config.n as f64).powf((2.0 - alpha) * (b - 1.0 / alpha) - 1.0) * tr_a,
    })
    .map(|r| {
        let _ = n;
        r
    })
}

/// Entry-bound statistics of the flow resolvent `T = (V_s - z)⁻¹`.
pub struct DbmReport {
    pub eta: f64,
    pub s_flow: f64,
    /// per-trial `max_{ij} |T_ij|`
    pub flow_max: Vec<f64>,
    /// control arm: the same statistic on `X` alone
    pub control_max: Vec<f64>,
}

/// Distribution of `max |T_ij(E + iη)|` at `η = 2N^{δ-1}` for
/// `V = X + √s·W`; `s` defaults to the coupling time.
pub fn dbm_regularization_check(
    config: &EnsembleConfig,
    s_flow: Option<f64>,
    e: f64,
    delta: f64,
    trials: usize,
) -> Result<DbmReport> {
    let s = match s_flow {
        Some(s) => s,
        None => crate::stable_laws::coupling_time_t(&config.coupling_inputs(), 2_000_000)?.value,
    };
    let eta = 2.0 * (config.n as f64).powf(delta - 1.0);
    let z = Complex64::new(e, eta);
    let mut flow_max = Vec::with_capacity(trials);
    let mut control_max = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = trial_rng(config.seed, trial as u64);
        let pair = sample_pair(config, &mut rng)?;
        let goe = sample_goe(config.n, &mut rng);
        let mut v = pair.x.clone();
        v.scaled_add(s.sqrt(), &goe.w);
        let dec = eigs(&v)?;
        let t_full = dec.full_resolvent(z);
        flow_max.push(t_full.iter().map(|g| g.norm()).fold(0.0f64, f64::max));
        let dec_x = eigs(&pair.x)?;
        let r_full = dec_x.full_resolvent(z);
        control_max.push(r_full.iter().map(|g| g.norm()).fold(0.0f64, f64::max));
    }
    Ok(DbmReport {
        eta,
        s_flow: s,
        flow_max,
        control_max,
    })
}

/// Per-γ gap between the interpolated ensemble and the flow endpoint.
pub struct ComparisonPoint {
    pub gamma: f64,
    /// `|mean_t mean_a (Im G^γ_aa - Im T_aa)|` over coupled trials
    pub gap: f64,
    pub se: f64,
}

pub struct ComparisonReport {
    pub z: Complex64,
    pub t_flow: f64,
    pub points: Vec<ComparisonPoint>,
}

/// The comparison statistic at `F = identity`: mean diagonal imaginary parts
/// of `G^γ` against the `γ = 0` endpoint, coupled trial by trial.
pub fn comparison_statistic(
    config: &EnsembleConfig,
    z: Complex64,
    gamma_grid: &[f64],
    trials: usize,
) -> Result<ComparisonReport> {
    if !(z.im >= 1.0 / config.n as f64) {
        return Err(Error::InvalidParams(format!(
            "eta must be at least 1/N, got {}",
            z.im
        )));
    }
    let t_flow = crate::stable_laws::coupling_time_t(&config.coupling_inputs(), 2_000_000)?.value;
    let mut per_gamma_diffs = vec![Vec::with_capacity(trials); gamma_grid.len()];
    for trial in 0..trials {
        let mut rng = trial_rng(config.seed, trial as u64);
        let pair = sample_pair(config, &mut rng)?;
        let goe = sample_goe(config.n, &mut rng);
        let base = eigs(&interpolate_gamma(&pair, &goe, t_flow, 0.0)?)?;
        let mean_im_t = base
            .resolvent_diag(z)
            .iter()
            .map(|g| g.im)
            .sum::<f64>()
            / config.n as f64;
        for (k, &gamma) in gamma_grid.iter().enumerate() {
            let mean_im_g = if gamma == 0.0 {
                mean_im_t
            } else {
                let dec = eigs(&interpolate_gamma(&pair, &goe, t_flow, gamma)?)?;
                dec.resolvent_diag(z).iter().map(|g| g.im).sum::<f64>() / config.n as f64
            };
            per_gamma_diffs[k].push(mean_im_g - mean_im_t);
        }
    }
    let points = gamma_grid
        .iter()
        .zip(per_gamma_diffs)
        .map(|(&gamma, d)| {
            let mean = d.iter().sum::<f64>() / trials as f64;
            let var = d.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / trials as f64;
            ComparisonPoint {
                gamma,
                gap: mean.abs(),
                se: (var / trials as f64).sqrt(),
            }
        })
        .collect();
    Ok(ComparisonReport {
        z,
        t_flow,
        points,
    })
}

/// Empirical spacing samples pooled across trials for one ensemble.
pub fn pooled_gaps_levy(
    config: &EnsembleConfig,
    e: f64,
    k_per_trial: usize,
    density_at_e: f64,
    trials: usize,
) -> Result<Vec<f64>> {
    let mut pooled = Vec::with_capacity(trials * k_per_trial);
    for trial in 0..trials {
        let pair = sample_pair(config, &mut trial_rng(config.seed, trial as u64))?;
        let dec = eigs(&pair.h)?;
        let gaps = unfolded_gaps(&dec.eigenvalues, e, k_per_trial, density_at_e)?;
        pooled.extend(gaps.spacings);
    }
    Ok(pooled)
}

/// GOE reference spacings at the same dimension, unfolded by the semicircle.
pub fn pooled_gaps_goe(
    n: usize,
    e: f64,
    k_per_trial: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let rho = crate::limit_law::rho_semicircle(e);
    let mut pooled = Vec::with_capacity(trials * k_per_trial);
    for trial in 0..trials {
        let goe = sample_goe(n, &mut trial_rng(seed, trial as u64));
        let dec = eigs(&goe.w)?;
        let gaps = unfolded_gaps(&dec.eigenvalues, e, k_per_trial, rho)?;
        pooled.extend(gaps.spacings);
    }
    Ok(pooled)
}

/// Dimension-free helper used by the gap experiments: `⌊N^{0.6}⌋`.
pub fn default_gap_count(n: usize) -> usize {
    (n as f64).powf(0.6).floor() as usize
}
