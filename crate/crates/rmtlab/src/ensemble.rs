//! Coupled Lévy/removal matrix pairs, the three-level label decomposition,
//! GOE matrices and the interpolating family `H^γ`.

use crate::error::{Error, Result};
use crate::stable_laws::{sample_entry, DeformationSpec, StableParams};
use ndarray::Array2;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Desk-scale guard on the matrix dimension; dense eigenproblems dominate
/// cost well before memory does.
pub const DEFAULT_MAX_DIM: usize = 8192;

/// All ensemble parameters. The removal exponent `b` is tied to `ν` by
/// `ν = 1/α - b`; `b` may be given explicitly and is checked for consistency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub n: usize,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    pub nu: f64,
    pub rho: f64,
    pub seed: u64,
    #[serde(default)]
    pub deformation: DeformationSpec,
}

/// One parameter constraint with its evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintDiagnostic {
    pub name: &'static str,
    pub pass: bool,
    /// Positive slack when satisfied, negative when violated.
    pub margin: f64,
}

/// Evaluate the full constraint set on `(alpha, b, nu, rho)`.
pub fn validate_params(alpha: f64, b: f64, nu: f64, rho: f64) -> Vec<ConstraintDiagnostic> {
    let mut out = Vec::new();
    let mut push = |name, margin: f64| {
        out.push(ConstraintDiagnostic {
            name,
            pass: margin > 0.0,
            margin,
        });
    };
    push("0 < alpha < 2", alpha.min(2.0 - alpha));
    push(
        "nu = 1/alpha - b > 0",
        if (nu - (1.0 / alpha - b)).abs() <= 1e-12 {
            nu
        } else {
            -(nu - (1.0 / alpha - b)).abs()
        },
    );
    push("0 < rho < nu", rho.min(nu - rho));
    push("nu < 1/2", 0.5 - nu);
    push("1/(4-alpha) < nu", nu - 1.0 / (4.0 - alpha));
    push("nu < 1/(4-2*alpha)", 1.0 / (4.0 - 2.0 * alpha) - nu);
    push("alpha*rho < (2-alpha)*nu", (2.0 - alpha) * nu - alpha * rho);
    out
}

/// A feasible `(b, nu, rho)` for the given `alpha`: `ν` at the midpoint of its
/// admissible window, `ρ` at half its own bound.
pub fn suggest_params(alpha: f64) -> (f64, f64, f64) {
    let lo = 1.0 / (4.0 - alpha);
    let hi = (0.5f64).min(1.0 / (4.0 - 2.0 * alpha));
    let nu = 0.5 * (lo + hi);
    let rho = 0.5 * nu.min((2.0 - alpha) * nu / alpha);
    let b = 1.0 / alpha - nu;
    (b, nu, rho)
}

impl EnsembleConfig {
    pub fn new(n: usize, alpha: f64, nu: f64, rho: f64, seed: u64) -> Result<Self> {
        EnsembleConfig {
            n,
            alpha,
            b: None,
            nu,
            rho,
            seed,
            deformation: DeformationSpec::None,
        }
        .validated()
    }

    /// Config with the suggested feasible parameters for `alpha`.
    pub fn suggested(n: usize, alpha: f64, seed: u64) -> Result<Self> {
        let (_, nu, rho) = suggest_params(alpha);
        Self::new(n, alpha, nu, rho, seed)
    }

    /// The removal exponent `b = 1/α - ν`.
    pub fn b(&self) -> f64 {
        self.b.unwrap_or(1.0 / self.alpha - self.nu)
    }

    /// Check every constraint; the error names the first violated inequality.
    pub fn validated(self) -> Result<Self> {
        self.deformation.validate()?;
        if self.n == 0 {
            return Err(Error::InvalidParams("N must be positive".into()));
        }
        if self.n > DEFAULT_MAX_DIM {
            return Err(Error::InvalidParams(format!(
                "N = {} exceeds the desk-scale guard {}",
                self.n, DEFAULT_MAX_DIM
            )));
        }
        for d in validate_params(self.alpha, self.b(), self.nu, self.rho) {
            if !d.pass {
                return Err(Error::InvalidParams(format!(
                    "constraint violated: {} (margin {:.3e})",
                    d.name, d.margin
                )));
            }
        }
        Ok(self)
    }

    pub fn stable_params(&self) -> Result<StableParams> {
        StableParams::paper_normalized(self.alpha)
    }

    /// Inputs for the coupling time `t` of this configuration.
    pub fn coupling_inputs(&self) -> crate::stable_laws::CouplingTimeInputs {
        crate::stable_laws::CouplingTimeInputs {
            n: self.n,
            alpha: self.alpha,
            nu: self.nu,
            rho: self.rho,
            seed: self.seed,
            deformation: self.deformation,
        }
    }
}

/// A coupled Lévy/removal pair with its three-level decomposition
/// `H = A + B + C`, `X = B + C`, and labels `Ψ` (huge entries) and `χ`
/// (intermediate entries; set to 0 on `Ψ = 1` slots).
pub struct LevyMatrixPair {
    pub config: EnsembleConfig,
    pub h: Array2<f64>,
    pub x: Array2<f64>,
    pub a: Array2<f64>,
    pub b: Array2<f64>,
    pub c: Array2<f64>,
    pub psi: Array2<u8>,
    pub chi: Array2<u8>,
    stable_component: Option<Array2<f64>>,
}

impl LevyMatrixPair {
    /// Pure stable part `Z` of `H = Z + J` under the coupling (equals `H`
    /// when no deformation is present).
    pub fn stable_part(&self) -> &Array2<f64> {
        self.stable_component.as_ref().unwrap_or(&self.h)
    }
}

/// Draw a coupled pair: one deformed stable draw per upper-triangular entry,
/// classified by magnitude into the three levels.
pub fn sample_pair<R: Rng + ?Sized>(config: &EnsembleConfig, rng: &mut R) -> Result<LevyMatrixPair> {
    let config = config.validated()?;
    let n = config.n;
    let params = config.stable_params()?;
    let scale = (n as f64).powf(-1.0 / config.alpha);
    let cut_nu = (n as f64).powf(-config.nu);
    let cut_rho = (n as f64).powf(-config.rho);
    let deformed = config.deformation != DeformationSpec::None;

    let mut h = Array2::zeros((n, n));
    let mut x = Array2::zeros((n, n));
    let mut a = Array2::zeros((n, n));
    let mut b = Array2::zeros((n, n));
    let mut c = Array2::zeros((n, n));
    let mut psi = Array2::zeros((n, n));
    let mut chi = Array2::zeros((n, n));
    let mut z_part = if deformed {
        Some(Array2::zeros((n, n)))
    } else {
        None
    };

    for i in 0..n {
        for j in i..n {
            let z = crate::stable_laws::sample_stable(&params, rng);
            let entry = scale
                * match config.deformation {
                    DeformationSpec::None => z,
                    DeformationSpec::BoundedSymmetric { half_width } => {
                        z + rng.gen_range(-half_width..=half_width)
                    }
                };
            let m = entry.abs();
            h[[i, j]] = entry;
            h[[j, i]] = entry;
            if let Some(zp) = z_part.as_mut() {
                zp[[i, j]] = scale * z;
                zp[[j, i]] = scale * z;
            }
            if m >= cut_rho {
                psi[[i, j]] = 1;
                psi[[j, i]] = 1;
                c[[i, j]] = entry;
                c[[j, i]] = entry;
            } else if m >= cut_nu {
                chi[[i, j]] = 1;
                chi[[j, i]] = 1;
                b[[i, j]] = entry;
                b[[j, i]] = entry;
            } else {
                a[[i, j]] = entry;
                a[[j, i]] = entry;
            }
        }
    }
    for ((bv, cv), xv) in b.iter().zip(c.iter()).zip(x.iter_mut()) {
        *xv = bv + cv;
    }
    Ok(LevyMatrixPair {
        config,
        h,
        x,
        a,
        b,
        c,
        psi,
        chi,
        stable_component: z_part,
    })
}

/// A GOE matrix: independent Gaussians with off-diagonal variance `1/N` and
/// diagonal variance `2/N`.
pub struct GoeMatrix {
    pub w: Array2<f64>,
}

pub fn sample_goe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GoeMatrix {
    assert!(n >= 1);
    let off = Normal::new(0.0, (1.0 / n as f64).sqrt()).unwrap();
    let diag = Normal::new(0.0, (2.0 / n as f64).sqrt()).unwrap();
    let mut w = Array2::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            let v = if i == j {
                diag.sample(rng)
            } else {
                off.sample(rng)
            };
            w[[i, j]] = v;
            w[[j, i]] = v;
        }
    }
    GoeMatrix { w }
}

/// The interpolation `H^γ = γA + X + (1-γ²)^{1/2} t^{1/2} W`;
/// `γ = 0` gives `X + √t·W` and `γ = 1` recovers `H` exactly.
pub fn interpolate_gamma(
    pair: &LevyMatrixPair,
    goe: &GoeMatrix,
    t: f64,
    gamma: f64,
) -> Result<Array2<f64>> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParams(format!(
            "gamma must lie in [0, 1], got {gamma}"
        )));
    }
    if pair.h.dim() != goe.w.dim() {
        return Err(Error::InvalidParams(format!(
            "dimension mismatch: pair is {:?}, GOE is {:?}",
            pair.h.dim(),
            goe.w.dim()
        )));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParams(format!("t must be > 0, got {t}")));
    }
    let gauss_coef = (1.0 - gamma * gamma).sqrt() * t.sqrt();
    let mut out = pair.x.clone();
    if gamma == 1.0 {
        out += &pair.a;
    } else {
        ndarray::Zip::from(&mut out)
            .and(&pair.a)
            .and(&goe.w)
            .for_each(|o, &av, &wv| *o += gamma * av + gauss_coef * wv);
    }
    Ok(out)
}

/// Binary matrix dump: an 8-byte little-endian dimension header followed by
/// row-major little-endian f64 entries.
pub fn dump_matrix(path: &std::path::Path, m: &Array2<f64>) -> Result<()> {
    use std::io::Write;
    let n = m.nrows();
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(&(n as u64).to_le_bytes())?;
    for row in m.rows() {
        for &v in row {
            f.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Read back a matrix written by [`dump_matrix`].
pub fn read_matrix_dump(path: &std::path::Path) -> Result<Array2<f64>> {
    let bytes = std::fs::read(path)?;
    if bytes.len() < 8 {
        return Err(Error::InvalidInput("matrix dump shorter than header".into()));
    }
    let n = u64::from_le_bytes(bytes[0..8].try_into().unwrap()) as usize;
    if bytes.len() != 8 + 8 * n * n {
        return Err(Error::InvalidInput(format!(
            "matrix dump length {} does not match dimension {n}",
            bytes.len()
        )));
    }
    let mut m = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let off = 8 + 8 * (i * n + j);
            m[[i, j]] = f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
        }
    }
    Ok(m)
}

/// Scalar Monte Carlo estimate of `P[|H_ij| ≥ N^{-ρ}]`, the expected `Ψ`
/// density, used by the label-fraction checks.
pub fn psi_probability_estimate(
    config: &EnsembleConfig,
    n_samples: usize,
    seed_ns: u64,
) -> Result<f64> {
    let params = config.stable_params()?;
    let scale = (config.n as f64).powf(-1.0 / config.alpha);
    let cut = (config.n as f64).powf(-config.rho);
    let mut rng = crate::rng::scalar_rng(config.seed, seed_ns);
    let hits = (0..n_samples)
        .filter(|_| (scale * sample_entry(&params, &config.deformation, &mut rng)).abs() >= cut)
        .count();
    Ok(hits as f64 / n_samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;
    use approx::assert_relative_eq;

    fn test_config(n: usize) -> EnsembleConfig {
        EnsembleConfig::new(n, 1.5, 0.45, 0.10, 42).unwrap()
    }

    #[test]
    fn validate_examples() {
        let b = 1.0 / 1.5 - 0.45;
        assert!(validate_params(1.5, b, 0.45, 0.10).iter().all(|d| d.pass));
        // nu below the lower bound 1/(4-alpha) = 0.4
        let bad = validate_params(1.5, 1.0 / 1.5 - 0.39, 0.39, 0.10);
        assert!(bad.iter().any(|d| d.name == "1/(4-alpha) < nu" && !d.pass));
        // rho = nu violates the strict ordering
        let bad = validate_params(1.5, b, 0.45, 0.45);
        assert!(bad.iter().any(|d| d.name == "0 < rho < nu" && !d.pass));
    }

    #[test]
    fn suggest_matches_midpoint_heuristic() {
        let (b, nu, rho) = suggest_params(1.5);
        assert_relative_eq!(nu, 0.45, max_relative = 1e-12);
        assert_relative_eq!(rho, 0.075, max_relative = 1e-12);
        assert_relative_eq!(b, 1.0 / 1.5 - 0.45, max_relative = 1e-12);
        for &alpha in &[0.4, 0.8, 1.0, 1.3, 1.7, 1.95] {
            let (b, nu, rho) = suggest_params(alpha);
            assert!(
                validate_params(alpha, b, nu, rho).iter().all(|d| d.pass),
                "alpha = {alpha}"
            );
            assert!(nu < 0.5);
        }
    }

    #[test]
    fn coupling_identity_and_label_partition() {
        let cfg = test_config(300);
        let pair = sample_pair(&cfg, &mut trial_rng(cfg.seed, 0)).unwrap();
        let cut_nu = (cfg.n as f64).powf(-cfg.nu);
        let cut_rho = (cfg.n as f64).powf(-cfg.rho);
        for i in 0..cfg.n {
            for j in 0..cfg.n {
                let h = pair.h[[i, j]];
                let x = pair.x[[i, j]];
                if h.abs() >= cut_nu {
                    assert_eq!(x, h);
                } else {
                    assert_eq!(x, 0.0);
                }
                assert_eq!(pair.h[[j, i]], h);
                assert_eq!(pair.x[[j, i]], x);
                assert_eq!(pair.a[[i, j]] + pair.b[[i, j]] + pair.c[[i, j]], h);
                assert_eq!(pair.b[[i, j]] + pair.c[[i, j]], x);
                let nonzero = [pair.a[[i, j]], pair.b[[i, j]], pair.c[[i, j]]]
                    .iter()
                    .filter(|v| **v != 0.0)
                    .count();
                assert!(nonzero <= 1);
                if pair.psi[[i, j]] == 1 {
                    assert_eq!(pair.chi[[i, j]], 0);
                    assert_eq!(pair.a[[i, j]], 0.0);
                    assert_eq!(pair.b[[i, j]], 0.0);
                    assert!(pair.c[[i, j]].abs() >= cut_rho);
                } else if pair.chi[[i, j]] == 1 {
                    assert!(pair.b[[i, j]].abs() >= cut_nu && pair.b[[i, j]].abs() < cut_rho);
                    assert_eq!(pair.a[[i, j]], 0.0);
                } else {
                    assert!(pair.a[[i, j]].abs() < cut_nu);
                    assert_eq!(pair.b[[i, j]], 0.0);
                }
            }
        }
    }

    #[test]
    fn determinism_bit_identical() {
        let cfg = test_config(80);
        let p1 = sample_pair(&cfg, &mut trial_rng(cfg.seed, 3)).unwrap();
        let p2 = sample_pair(&cfg, &mut trial_rng(cfg.seed, 3)).unwrap();
        assert_eq!(p1.h, p2.h);
        assert_eq!(p1.psi, p2.psi);
    }

    #[test]
    fn psi_fraction_matches_scalar_tail() {
        let cfg = test_config(500);
        let pair = sample_pair(&cfg, &mut trial_rng(cfg.seed, 4)).unwrap();
        // the upper triangle including the diagonal holds the independent draws
        let mut count = 0usize;
        let mut total = 0usize;
        for i in 0..cfg.n {
            for j in i..cfg.n {
                total += 1;
                count += pair.psi[[i, j]] as usize;
            }
        }
        let p_hat = psi_probability_estimate(&cfg, 400_000, 9).unwrap();
        let se = (p_hat * (1.0 - p_hat) / total as f64).sqrt()
            + (p_hat * (1.0 - p_hat) / 400_000.0).sqrt();
        assert!(
            (count as f64 / total as f64 - p_hat).abs() <= 3.0 * se,
            "fraction {} vs estimate {p_hat} (se {se})",
            count as f64 / total as f64
        );
    }

    #[test]
    fn psi_count_stays_in_chernoff_band() {
        let cfg = test_config(500);
        let expected = (cfg.n as f64).powf(1.0 + cfg.alpha * cfg.rho);
        for trial in 0..100 {
            let pair = sample_pair(&cfg, &mut trial_rng(cfg.seed, 100 + trial)).unwrap();
            let count: usize = pair.psi.iter().map(|&v| v as usize).sum();
            assert!(
                (count as f64) >= expected / 4.0 && (count as f64) <= 4.0 * expected,
                "trial {trial}: count {count}, expected about {expected}"
            );
        }
    }

    #[test]
    fn goe_moments() {
        let n = 1000;
        let goe = sample_goe(n, &mut trial_rng(7, 0));
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let mut count = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                sum += goe.w[[i, j]];
                sum_sq += goe.w[[i, j]] * goe.w[[i, j]];
                count += 1.0;
            }
        }
        // sqrt(N) * mean of ~N²/2 entries with variance 1/N each
        let mean_scaled = sum / count * (n as f64).sqrt();
        let se = 1.0 / count.sqrt();
        assert!(mean_scaled.abs() <= 3.0 * se, "scaled mean {mean_scaled}");
        let var = sum_sq / count * n as f64;
        assert!((var - 1.0).abs() <= 0.05, "offdiag variance {var}");
        let diag_var: f64 =
            (0..n).map(|i| goe.w[[i, i]] * goe.w[[i, i]]).sum::<f64>() / n as f64 * n as f64;
        assert!((diag_var - 2.0).abs() <= 0.3, "diag variance {diag_var}");
    }

    #[test]
    fn interpolation_endpoints_and_midpoint() {
        let cfg = test_config(60);
        let pair = sample_pair(&cfg, &mut trial_rng(cfg.seed, 5)).unwrap();
        let goe = sample_goe(cfg.n, &mut trial_rng(cfg.seed, 6));
        let t = 0.21;
        let h1 = interpolate_gamma(&pair, &goe, t, 1.0).unwrap();
        assert_eq!(h1, pair.h);
        let h0 = interpolate_gamma(&pair, &goe, t, 0.0).unwrap();
        for i in 0..cfg.n {
            for j in 0..cfg.n {
                assert_relative_eq!(
                    h0[[i, j]],
                    pair.x[[i, j]] + t.sqrt() * goe.w[[i, j]],
                    max_relative = 1e-14,
                    epsilon = 1e-15
                );
            }
        }
        let h06 = interpolate_gamma(&pair, &goe, t, 0.6).unwrap();
        for i in 0..cfg.n {
            for j in 0..cfg.n {
                let expect = 0.6 * pair.a[[i, j]] + 0.8 * t.sqrt() * goe.w[[i, j]];
                assert_relative_eq!(
                    h06[[i, j]] - pair.x[[i, j]],
                    expect,
                    max_relative = 1e-12,
                    epsilon = 1e-15
                );
            }
        }
        assert!(interpolate_gamma(&pair, &goe, t, 1.5).is_err());
    }

    #[test]
    fn dump_round_trips() {
        let cfg = test_config(20);
        let pair = sample_pair(&cfg, &mut trial_rng(cfg.seed, 8)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.mat");
        dump_matrix(&path, &pair.h).unwrap();
        let back = read_matrix_dump(&path).unwrap();
        assert_eq!(back, pair.h);
    }

    #[test]
    fn config_rejects_bad_params() {
        assert!(EnsembleConfig::new(100, 1.5, 0.39, 0.10, 1).is_err());
        assert!(EnsembleConfig::new(100, 2.0, 0.45, 0.10, 1).is_err());
        assert!(EnsembleConfig::new(100_000, 1.5, 0.45, 0.10, 1).is_err());
    }
}
