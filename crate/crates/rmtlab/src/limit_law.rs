//! The limiting Stieltjes transform `m_α(z)` and density `ρ_α` via the scalar
//! fixed point `y = φ_{α,z}(y)`, the closed-form semicircle reference, and the
//! free convolution of an empirical spectrum with a semicircle background.
//!
//! Both kernels
//!
//! ```text
//! φ(x) = Γ(α/2)⁻¹ ∫₀^∞ t^{α/2-1} e^{itz} e^{-Γ(1-α/2) t^{α/2} x} dt
//! ψ(x) =          ∫₀^∞          e^{itz} e^{-Γ(1-α/2) t^{α/2} x} dt
//! ```
//!
//! are evaluated after the substitution `t = s^{2/α}` (which removes the
//! endpoint singularity and makes the damping linear in `s`) and a contour
//! rotation `t → e^{iβ} t` that converts the `e^{itz}` oscillation at large
//! `|E|/η` into decay. The rotation stays inside the sector where both
//! exponents have non-positive real part, so the integral is unchanged.

use crate::error::{Error, Result};
use crate::quad::{adaptive_gk, composite_gl, geometric_breaks};
use crate::special::gamma;
use num_complex::Complex64;

const LOG_CUTOFF: f64 = 40.0;
const ROTATION_MARGIN: f64 = 0.25;
const MAX_ROTATION: f64 = 1.1;

/// Solver output for the scalar fixed point.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointResult {
    /// Fixed point `y(z)` with `Re y > 0`.
    pub y: Complex64,
    /// `m_α(z) = i ψ_{α,z}(y(z))`, in the upper half plane.
    pub m_alpha: Complex64,
    /// `|y - φ_{α,z}(y)|` at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

struct Kernel {
    alpha: f64,
    /// rotation angle β (sign follows sign of E)
    beta: f64,
    /// `Γ(1-α/2) e^{iβα/2} x`
    lin: Complex64,
    /// `i e^{iβ} z`
    osc: Complex64,
    truncation: f64,
}

impl Kernel {
    fn new(alpha: f64, z: Complex64, x: Complex64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::InvalidParams(format!("alpha {alpha} outside (0,2)")));
        }
        if !(z.im > 0.0) {
            return Err(Error::InvalidParams(format!("Im z must be > 0, got {z}")));
        }
        if x.re < 0.0 {
            return Err(Error::InvalidParams(format!("Re x must be >= 0, got {x}")));
        }
        let arg_x = if x == Complex64::new(0.0, 0.0) { 0.0 } else { x.arg() };
        let sign = if z.re > 0.0 {
            1.0
        } else if z.re < 0.0 {
            -1.0
        } else {
            0.0
        };
        let mut beta = 0.0;
        if sign != 0.0 {
            let allowed =
                (std::f64::consts::FRAC_PI_2 - ROTATION_MARGIN - sign * arg_x) * 2.0 / alpha;
            if allowed > 0.05 {
                beta = sign * (0.9 * allowed).min(MAX_ROTATION);
            }
        }
        let gamma_tail = gamma(1.0 - alpha / 2.0);
        let lin = Complex64::from_polar(1.0, beta * alpha / 2.0) * x * gamma_tail;
        let osc = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, beta) * z;
        // exponent real part: -lin.re * s - (-osc.re) * s^{2/α}; both decay
        let decay_lin = lin.re.max(0.0);
        let decay_osc = (-osc.re).max(0.0);
        let s_lin = if decay_lin > 0.0 {
            LOG_CUTOFF / decay_lin
        } else {
            f64::INFINITY
        };
        let s_osc = if decay_osc > 0.0 {
            (LOG_CUTOFF / decay_osc).powf(alpha / 2.0)
        } else {
            f64::INFINITY
        };
        let truncation = s_lin.min(s_osc);
        if !truncation.is_finite() {
            return Err(Error::InvalidParams(format!(
                "kernel does not decay at z = {z}, x = {x}"
            )));
        }
        Ok(Kernel {
            alpha,
            beta,
            lin,
            osc,
            truncation,
        })
    }

    fn integrand(&self, s: f64, power: f64) -> Complex64 {
        let e = self.osc * s.powf(2.0 / self.alpha) - self.lin * s;
        let base = e.exp();
        if power == 0.0 {
            base
        } else {
            base * s.powf(power)
        }
    }

    /// `φ` via adaptive Gauss–Kronrod.
    fn phi_adaptive(&self, rel_tol: f64) -> Result<Complex64> {
        let f = |s: f64| self.integrand(s, 0.0);
        let (v, err) = adaptive_gk(&f, 0.0, self.truncation, rel_tol, 1e-300, 4000).map_err(
            |_| Error::QuadratureAccuracy {
                op: "phi",
                estimate: f64::NAN,
                tolerance: rel_tol,
                truncation: self.truncation,
            },
        )?;
        let pre = self.phi_prefactor();
        let out = pre * v;
        if err > 1e-10 * v.norm().max(1e-30) {
            return Err(Error::QuadratureAccuracy {
                op: "phi",
                estimate: err / v.norm().max(1e-30),
                tolerance: 1e-10,
                truncation: self.truncation,
            });
        }
        Ok(out)
    }

    fn psi_adaptive(&self, rel_tol: f64) -> Result<Complex64> {
        let p = 2.0 / self.alpha - 1.0;
        let f = |s: f64| self.integrand(s, p);
        let (v, err) = adaptive_gk(&f, 0.0, self.truncation, rel_tol, 1e-300, 4000).map_err(
            |_| Error::QuadratureAccuracy {
                op: "psi",
                estimate: f64::NAN,
                tolerance: rel_tol,
                truncation: self.truncation,
            },
        )?;
        let out = self.psi_prefactor() * v;
        if err > 1e-9 * v.norm().max(1e-30) {
            return Err(Error::QuadratureAccuracy {
                op: "psi",
                estimate: err / v.norm().max(1e-30),
                tolerance: 1e-9,
                truncation: self.truncation,
            });
        }
        Ok(out)
    }

    fn phi_prefactor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.beta * self.alpha / 2.0) * 2.0
            / (self.alpha * gamma(self.alpha / 2.0))
    }

    fn psi_prefactor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.beta) * 2.0 / self.alpha
    }

    /// Fixed-order composite Gauss–Legendre evaluation, the independent route.
    /// A leading Gauss–Jacobi panel absorbs the `s^{2/α-1}` endpoint kink.
    fn fixed_rule(&self, power: f64, nodes: usize) -> Complex64 {
        let breaks = geometric_breaks(self.truncation * 1e-4, self.truncation, 4);
        if power == 0.0 {
            return composite_gl(&|s| self.integrand(s, power), &breaks, nodes);
        }
        let b0 = breaks[1];
        let head: Complex64 = crate::quad::gauss_jacobi01(nodes, power, 0.0)
            .iter()
            .map(|&(tau, w)| self.integrand(b0 * tau, 0.0) * w)
            .sum::<Complex64>()
            * b0.powf(power + 1.0);
        head + composite_gl(&|s| self.integrand(s, power), &breaks[1..], nodes)
    }
}

/// `φ_{α,z}(x)`: adaptive quadrature with estimated relative error ≤ 1e-10.
pub fn phi(alpha: f64, z: Complex64, x: Complex64) -> Result<Complex64> {
    Kernel::new(alpha, z, x)?.phi_adaptive(1e-12)
}

/// `ψ_{α,z}(x)`.
pub fn psi_fn(alpha: f64, z: Complex64, x: Complex64) -> Result<Complex64> {
    Kernel::new(alpha, z, x)?.psi_adaptive(1e-12)
}

/// `φ` by the fixed high-order rule (for dual-quadrature cross-checks).
pub fn phi_fixed_rule(alpha: f64, z: Complex64, x: Complex64, nodes: usize) -> Result<Complex64> {
    let k = Kernel::new(alpha, z, x)?;
    Ok(k.phi_prefactor() * k.fixed_rule(0.0, nodes))
}

/// `ψ` by the fixed high-order rule.
pub fn psi_fixed_rule(alpha: f64, z: Complex64, x: Complex64, nodes: usize) -> Result<Complex64> {
    let k = Kernel::new(alpha, z, x)?;
    Ok(k.psi_prefactor() * k.fixed_rule(2.0 / alpha - 1.0, nodes))
}

/// Damped Picard iteration for `y = φ_{α,z}(y)` from an optional warm start.
pub fn solve_y_from(
    alpha: f64,
    z: Complex64,
    y0: Option<Complex64>,
    tolerance: f64,
    max_iter: usize,
) -> Result<FixedPointResult> {
    let mut y = match y0 {
        Some(y) => y,
        None => phi(alpha, z, Complex64::new(0.0, 0.0))?,
    };
    if y.re <= 0.0 {
        y = Complex64::new(1e-8, y.im);
    }
    let mut damping: f64 = 0.5;
    let mut prev_res = f64::INFINITY;
    let mut improved = 0usize;
    let mut iterations = 0usize;
    loop {
        let fy = phi(alpha, z, y)?;
        let residual = (fy - y).norm();
        if residual <= tolerance {
            let m_alpha = Complex64::new(0.0, 1.0) * psi_fn(alpha, z, y)?;
            return Ok(FixedPointResult {
                y,
                m_alpha,
                residual,
                iterations,
            });
        }
        if iterations >= max_iter {
            return Err(Error::NonConvergence {
                op: "solve_y",
                residual,
                iterations,
            });
        }
        if residual > prev_res {
            damping = (damping * 0.5).max(0.05);
            improved = 0;
        } else {
            improved += 1;
            if improved >= 4 {
                damping = (damping * 1.3).min(1.0);
                improved = 0;
            }
        }
        prev_res = residual;
        y += damping * (fy - y);
        if y.re <= 0.0 {
            y = Complex64::new(1e-10 * (1.0 + y.norm()), y.im);
        }
        iterations += 1;
    }
}

/// Fixed point at `z` from a cold start.
pub fn solve_y(
    alpha: f64,
    z: Complex64,
    tolerance: f64,
    max_iter: usize,
) -> Result<FixedPointResult> {
    solve_y_from(alpha, z, None, tolerance, max_iter)
}

/// Warm-start continuation solver for `m_α` along paths in `z`.
///
/// Mirrors the large-η to small-η bootstrap: from `Im z = eta_start` the
/// solver descends geometrically to the target, reusing the previous fixed
/// point. Consecutive calls at nearby `z` reuse the cache directly, which
/// makes energy sweeps cheap.
pub struct LimitLawSolver {
    pub alpha: f64,
    pub tolerance: f64,
    pub max_iter: usize,
    pub eta_start: f64,
    pub eta_factor: f64,
    cache: Option<(Complex64, Complex64)>,
}

impl LimitLawSolver {
    pub fn new(alpha: f64) -> Self {
        LimitLawSolver {
            alpha,
            tolerance: 1e-11,
            max_iter: 400,
            eta_start: 10.0,
            eta_factor: 0.7,
            cache: None,
        }
    }

    pub fn solve(&mut self, z: Complex64) -> Result<FixedPointResult> {
        if let Some((zc, yc)) = self.cache {
            // the fixed point varies on the scale of |z|, not η, so energy
            // marches can reuse the previous solution; failures fall back to
            // the continuation ladder below
            if (z - zc).norm() <= 0.25 * (1.0 + zc.norm()) {
                if let Ok(res) = solve_y_from(self.alpha, z, Some(yc), self.tolerance, self.max_iter)
                {
                    self.cache = Some((z, res.y));
                    return Ok(res);
                }
            }
        }
        // continuation ladder in η at fixed E
        let mut eta = self.eta_start.max(2.0 * z.im);
        let mut warm: Option<Complex64> = None;
        loop {
            let zk = Complex64::new(z.re, eta.max(z.im));
            let res = solve_y_from(self.alpha, zk, warm, self.tolerance, self.max_iter)?;
            warm = Some(res.y);
            if zk.im <= z.im {
                self.cache = Some((z, res.y));
                return Ok(res);
            }
            eta *= self.eta_factor;
        }
    }

    pub fn m_alpha(&mut self, z: Complex64) -> Result<Complex64> {
        Ok(self.solve(z)?.m_alpha)
    }
}

/// `m_α(z)` from a cold start with continuation.
pub fn m_alpha(alpha: f64, z: Complex64) -> Result<Complex64> {
    LimitLawSolver::new(alpha).m_alpha(z)
}

/// Density `ρ_α(E)`: linear extrapolation of `Im m_α(E + iη)/π` to `η = 0`
/// over the given decreasing η pair, clipped at zero.
pub fn density_rho_alpha(alpha: f64, e: f64, eta_pair: (f64, f64)) -> Result<f64> {
    let (eta1, eta2) = eta_pair;
    if !(eta1 > eta2 && eta2 > 0.0 && eta1 <= 1e-2) {
        return Err(Error::InvalidParams(format!(
            "eta pair must satisfy 1e-2 >= eta1 > eta2 > 0, got ({eta1}, {eta2})"
        )));
    }
    let mut solver = LimitLawSolver::new(alpha);
    let im1 = solver.m_alpha(Complex64::new(e, eta1))?.im;
    let im2 = solver.m_alpha(Complex64::new(e, eta2))?.im;
    let extrapolated = (eta1 * im2 - eta2 * im1) / (eta1 - eta2) / std::f64::consts::PI;
    if extrapolated < -1e-6 {
        eprintln!(
            "density_rho_alpha: extrapolation dipped to {extrapolated:.3e} at E = {e}; clipping to 0"
        );
    }
    Ok(extrapolated.max(0.0))
}

/// Semicircle Stieltjes transform, branch with `Im m > 0`.
pub fn m_semicircle(z: Complex64) -> Complex64 {
    debug_assert!(z.im > 0.0);
    let r = (z * z - 4.0).sqrt();
    let m1 = (-z + r) / 2.0;
    let m2 = (-z - r) / 2.0;
    if m1.im > 0.0 {
        m1
    } else {
        m2
    }
}

/// Semicircle density `(2π)⁻¹ √(4-E²)` on `[-2, 2]`.
pub fn rho_semicircle(e: f64) -> f64 {
    if e.abs() < 2.0 {
        (4.0 - e * e).sqrt() / (2.0 * std::f64::consts::PI)
    } else {
        0.0
    }
}

/// CDF of the semicircle law.
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        0.0
    } else if x >= 2.0 {
        1.0
    } else {
        0.5 + x * (4.0 - x * x).sqrt() / (4.0 * std::f64::consts::PI)
            + (x / 2.0).asin() / std::f64::consts::PI
    }
}

/// Tabulate `ρ_α` on an ascending energy grid with one warm-started solver
/// march (two η values per energy for the extrapolation).
pub fn density_table(alpha: f64, e_grid: &[f64], eta_pair: (f64, f64)) -> Result<Vec<f64>> {
    let (eta1, eta2) = eta_pair;
    if !(eta1 > eta2 && eta2 > 0.0) {
        return Err(Error::InvalidParams(format!(
            "eta pair must be decreasing and positive, got ({eta1}, {eta2})"
        )));
    }
    let mut solver = LimitLawSolver::new(alpha);
    let mut out = Vec::with_capacity(e_grid.len());
    for &e in e_grid {
        let im1 = solver.m_alpha(Complex64::new(e, eta1))?.im;
        let im2 = solver.m_alpha(Complex64::new(e, eta2))?.im;
        let v = (eta1 * im2 - eta2 * im1) / (eta1 - eta2) / std::f64::consts::PI;
        out.push(v.max(0.0));
    }
    Ok(out)
}

/// Free convolution of an empirical spectrum with `√s · GOE`:
/// the unique upper-half-plane solution of
/// `m = N⁻¹ Σ_j 1/(λ_j - z - s·m)`, plus the per-eigenvalue resolvent factors.
pub struct FreeConvolution {
    pub m_fc: Complex64,
    pub g: Vec<Complex64>,
    pub residual: f64,
}

pub fn free_convolution_mfc(
    eigenvalues: &[f64],
    s: f64,
    z: Complex64,
) -> Result<FreeConvolution> {
    if eigenvalues.is_empty() {
        return Err(Error::InvalidInput("free_convolution_mfc: empty spectrum".into()));
    }
    if !(z.im > 0.0) || s < 0.0 {
        return Err(Error::InvalidParams(format!(
            "need Im z > 0 and s >= 0, got z = {z}, s = {s}"
        )));
    }
    let n = eigenvalues.len() as f64;
    let mean_resolvent = |m: Complex64| -> Complex64 {
        eigenvalues
            .iter()
            .map(|&l| (Complex64::new(l, 0.0) - z - s * m).inv())
            .sum::<Complex64>()
            / n
    };
    let mut m = mean_resolvent(Complex64::new(0.0, 1.0 / z.im));
    if s == 0.0 {
        let g = eigenvalues
            .iter()
            .map(|&l| (Complex64::new(l, 0.0) - z).inv())
            .collect();
        return Ok(FreeConvolution {
            m_fc: mean_resolvent(Complex64::new(0.0, 0.0)),
            g,
            residual: 0.0,
        });
    }
    // a few damped Picard steps to enter the Newton basin
    for _ in 0..40 {
        let f = mean_resolvent(m);
        m += 0.5 * (f - m);
        if m.im <= 0.0 {
            m = Complex64::new(m.re, 1e-12);
        }
    }
    for it in 0..100 {
        let f = mean_resolvent(m) - m;
        let residual = f.norm();
        if residual <= 1e-13 {
            break;
        }
        // derivative of the defect: s·N⁻¹ Σ (λ-z-sm)⁻² - 1
        let d: Complex64 = eigenvalues
            .iter()
            .map(|&l| {
                let g = (Complex64::new(l, 0.0) - z - s * m).inv();
                g * g
            })
            .sum::<Complex64>()
            * (s / n)
            - 1.0;
        let step = -f / d;
        m += step;
        if m.im <= 0.0 {
            m = Complex64::new(m.re, 1e-12);
        }
        if it == 99 {
            return Err(Error::NonConvergence {
                op: "free_convolution_mfc",
                residual,
                iterations: it + 1,
            });
        }
    }
    let final_res = (mean_resolvent(m) - m).norm();
    if final_res > 1e-12 {
        return Err(Error::NonConvergence {
            op: "free_convolution_mfc",
            residual: final_res,
            iterations: 140,
        });
    }
    let g = eigenvalues
        .iter()
        .map(|&l| (Complex64::new(l, 0.0) - z - s * m).inv())
        .collect();
    Ok(FreeConvolution {
        m_fc: m,
        g,
        residual: final_res,
    })
}
