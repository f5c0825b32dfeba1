//! The function-space route to `m_α` at small `|z|`: homogeneous functions on
//! the closed quarter-circle arc, the pairing `(u|v)`, the triple-integral
//! operator `F_{h,g}`, the map `Υ`, the scalar/functional integrals `s_{p,z}`
//! and `r_{p,z}`, and the fixed-point solver for `Ω_z = Υ_{z,Ω_z}`.
//!
//! Discretisation: functions are stored at Gauss–Jacobi angles that absorb
//! the `(sin 2θ)^{α/2-1}` arc weight; off-node angles use local cubic
//! interpolation, and the homogeneous extension `g(λu) = λ^{α/2} g(u)` is
//! applied exactly.

use crate::error::{Error, Result};
use crate::quad::{adaptive_gk, composite_gl, gauss_jacobi, gauss_jacobi01, geometric_breaks};
use crate::special::{cpow, gamma};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

const LOG_CUTOFF: f64 = 40.0;

/// The pairing `(u|v) = u·Re v + ū·Im v`.
#[inline]
pub fn bracket(u: Complex64, v: Complex64) -> Complex64 {
    u * v.re + u.conj() * v.im
}

/// Quadrature rule on the arc for a weight `(sin 2θ)^exponent dθ`.
///
/// Substituting `θ = π(x+1)/4` turns the weight into
/// `[cos(πx/2)/(1-x²)]^e (1-x²)^e (π/4) dx`, whose singular part is the
/// symmetric Jacobi weight.
#[derive(Debug, Clone)]
pub struct ThetaGrid {
    pub exponent: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ThetaGrid {
    pub fn new(exponent: f64, n: usize) -> ThetaGrid {
        let rule = gauss_jacobi(n, exponent, exponent);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (x, w) in rule {
            let smooth = (FRAC_PI_2 * x).cos() / (1.0 - x * x);
            nodes.push(PI * (x + 1.0) / 4.0);
            weights.push(w * smooth.powf(exponent) * PI / 4.0);
        }
        ThetaGrid {
            exponent,
            nodes,
            weights,
        }
    }
}

/// A degree-`w` homogeneous function on the closed positive quadrant,
/// stored by its values on the quarter-circle arc.
#[derive(Debug, Clone)]
pub struct HalfQuadrantFunction {
    pub theta: Vec<f64>,
    pub values: Vec<Complex64>,
    /// homogeneity degree (here `α/2`)
    pub degree: f64,
}

impl HalfQuadrantFunction {
    /// Sample a closure at the Gauss–Jacobi angles for stability index `alpha`.
    pub fn from_fn(alpha: f64, n: usize, f: impl Fn(Complex64) -> Complex64) -> Self {
        let grid = ThetaGrid::new(alpha / 2.0 - 1.0, n);
        let values = grid
            .nodes
            .iter()
            .map(|&t| f(Complex64::from_polar(1.0, t)))
            .collect();
        HalfQuadrantFunction {
            theta: grid.nodes,
            values,
            degree: alpha / 2.0,
        }
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Value on the arc at angle `t` by local cubic interpolation
    /// (clamped toward the arc endpoints).
    pub fn eval_angle(&self, t: f64) -> Complex64 {
        let n = self.theta.len();
        debug_assert!(n >= 4, "grid too coarse for cubic interpolation");
        let pos = self.theta.partition_point(|&x| x < t);
        if pos < n && self.theta[pos] == t {
            return self.values[pos];
        }
        let start = pos.saturating_sub(2).min(n - 4);
        let xs = &self.theta[start..start + 4];
        let ys = &self.values[start..start + 4];
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            let mut l = 1.0;
            for j in 0..4 {
                if i != j {
                    l *= (t - xs[j]) / (xs[i] - xs[j]);
                }
            }
            acc += ys[i] * l;
        }
        acc
    }

    /// Homogeneous evaluation `g(w) = |w|^degree · g(e^{i arg w})` for `w`
    /// in the closed positive quadrant; `w = 0` maps to 0.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        if w == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        let r = w.norm();
        let t = w.arg().clamp(0.0, FRAC_PI_2);
        r.powf(self.degree) * self.eval_angle(t)
    }

    /// Smallest real part over the grid (> 0 means admissible).
    pub fn min_re(&self) -> f64 {
        self.values.iter().map(|v| v.re).fold(f64::INFINITY, f64::min)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn sup_distance(&self, other: &HalfQuadrantFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn assert_admissible(&self, op: &'static str) -> Result<()> {
        let m = self.min_re();
        if m <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "{op}: inadmissible function, min Re = {m:.3e}"
            )));
        }
        Ok(())
    }
}

/// Resolution knobs for the nested quadratures.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// nodes of the θ-rule inside `F` and `r_{p,z}`
    pub theta_nodes: usize,
    /// nodes of each y-half-rule ((0,1] and the mapped [1,∞))
    pub y_nodes: usize,
    /// Gauss–Legendre nodes per radial panel
    pub r_nodes: usize,
    /// radial panels per decade
    pub r_per_decade: usize,
}

impl QuadratureSpec {
    pub fn default_spec() -> Self {
        QuadratureSpec {
            theta_nodes: 48,
            y_nodes: 16,
            r_nodes: 12,
            r_per_decade: 2,
        }
    }

    pub fn fine() -> Self {
        QuadratureSpec {
            theta_nodes: 72,
            y_nodes: 24,
            r_nodes: 18,
            r_per_decade: 3,
        }
    }
}

/// `(2/α) ∫_0^∞ exp(-s·lin - s^{2/α}·sub) ds` — the radial integral after
/// the `r = s^{2/α}` substitution removes the `r^{α/2-1}` endpoint weight;
/// `Re lin > 0` required, `Re sub ≥ 0` adds decay.
fn radial_integral(alpha: f64, lin: Complex64, sub: Complex64, spec: &QuadratureSpec) -> Complex64 {
    let decay_lin = lin.re.max(0.0);
    let decay_sub = sub.re.max(0.0);
    let t_lin = if decay_lin > 0.0 {
        LOG_CUTOFF / decay_lin
    } else {
        f64::INFINITY
    };
    let t_sub = if decay_sub > 0.0 {
        (LOG_CUTOFF / decay_sub).powf(alpha / 2.0)
    } else {
        f64::INFINITY
    };
    let t_end = t_lin.min(t_sub);
    debug_assert!(t_end.is_finite());
    let breaks = geometric_breaks(t_end * 1e-3, t_end, spec.r_per_decade);
    let p = 2.0 / alpha;
    composite_gl(
        &|s: f64| (-lin * s - sub * s.powf(p)).exp(),
        &breaks,
        spec.r_nodes,
    ) * (2.0 / alpha)
}

/// The operator kernel
/// `F_{h,g}(u) = ∫∫∫ (e^{-r^{α/2}g(e^{iθ}) - r(h|e^{iθ})}
///             - e^{-r^{α/2}g(e^{iθ}+uy) - yr(h|u) - r(h|e^{iθ})})
///             r^{α/2-1} dr · y^{-α/2-1} dy · (sin 2θ)^{α/2-1} dθ`.
///
/// The y-integral is split at 1: on (0,1] the difference structure cancels
/// the `y^{-α/2-1}` singularity (one `y` factor is absorbed into a Jacobi
/// weight), while on [1,∞) the first term integrates exactly to `(2/α)·t1`
/// and the second is mapped back to (0,1] by `y → 1/v`.
pub fn eval_f(
    alpha: f64,
    h: Complex64,
    g: &HalfQuadrantFunction,
    u: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if h.re <= 0.0 {
        return Err(Error::InvalidParams(format!("Re h must be > 0, got {h}")));
    }
    g.assert_admissible("eval_f")?;
    let theta = ThetaGrid::new(alpha / 2.0 - 1.0, spec.theta_nodes);
    let y_rule = gauss_jacobi01(spec.y_nodes, -alpha / 2.0, 0.0);
    let v_rule = gauss_jacobi01(spec.y_nodes, alpha / 2.0 - 1.0, 0.0);
    let h_u = bracket(h, u);
    let mut total = Complex64::new(0.0, 0.0);
    for (&t, &w) in theta.nodes.iter().zip(&theta.weights) {
        let e_it = Complex64::from_polar(1.0, t);
        let g_arc = g.eval_angle(t);
        let h_arc = bracket(h, e_it);
        let t1 = radial_integral(alpha, g_arc, h_arc, spec);
        let t2_at = |y: f64| -> Complex64 {
            let point = e_it + u * y;
            let g_pt =
                point.norm().powf(alpha / 2.0) * g.eval_angle(point.arg().clamp(0.0, FRAC_PI_2));
            radial_integral(alpha, g_pt, h_arc + h_u * y, spec)
        };
        // (0, 1]: ∫ (t1 - t2) y^{-α/2-1} dy = ∫ [(t1 - t2)/y] y^{-α/2} dy
        let mut inner = Complex64::new(0.0, 0.0);
        for &(y, wy) in &y_rule {
            inner += (t1 - t2_at(y)) / y * wy;
        }
        // [1, ∞): t1 part integrates exactly; t2 part via y = 1/v
        inner += t1 * (2.0 / alpha);
        for &(v, wv) in &v_rule {
            inner -= t2_at(1.0 / v) * wv;
        }
        total += inner * w;
    }
    Ok(total)
}

/// `c_α = α / (2^{α/2} Γ(α/2)²)`.
pub fn c_alpha(alpha: f64) -> f64 {
    alpha / (2f64.powf(alpha / 2.0) * gamma(alpha / 2.0).powi(2))
}

/// `Υ_{z,f}(u) = c_α F_{-iz,f}(i ū)` evaluated on the function's own grid.
pub fn upsilon(
    alpha: f64,
    z: Complex64,
    f: &HalfQuadrantFunction,
    spec: &QuadratureSpec,
) -> Result<HalfQuadrantFunction> {
    if !(z.im > 0.0) {
        return Err(Error::InvalidParams(format!("Im z must be > 0, got {z}")));
    }
    f.assert_admissible("upsilon")?;
    let h = Complex64::new(z.im, -z.re); // -iz
    let c = c_alpha(alpha);
    let mut values = Vec::with_capacity(f.len());
    for &t in &f.theta {
        // ũ = i·conj(u) reflects the angle across π/4
        let u_tilde = Complex64::from_polar(1.0, FRAC_PI_2 - t);
        values.push(eval_f(alpha, h, f, u_tilde, spec)? * c);
    }
    Ok(HalfQuadrantFunction {
        theta: f.theta.clone(),
        values,
        degree: f.degree,
    })
}

/// `s_{p,z}(x) = Γ(p)⁻¹ ∫_0^∞ y^{p-1} e^{iyz - x y^{α/2}} dy`.
///
/// The exponent carries `+iyz` (decaying for `Im z > 0`), the convention
/// under which `i·s_{1,z}(Γ(1-α/2)·y(z))` reproduces `m_α(z)`.
pub fn s_pz(alpha: f64, p: f64, z: Complex64, x: Complex64) -> Result<Complex64> {
    if !(p > 0.0) || !(z.im > 0.0) || x.re < 0.0 {
        return Err(Error::InvalidParams(format!(
            "s_pz needs p > 0, Im z > 0, Re x >= 0 (p = {p}, z = {z}, x = {x})"
        )));
    }
    let t_end = (LOG_CUTOFF / z.im).min(if x.re > 0.0 {
        (LOG_CUTOFF / x.re).powf(2.0 / alpha)
    } else {
        f64::INFINITY
    });
    let iz = Complex64::new(0.0, 1.0) * z;
    let f = |y: f64| -> Complex64 { (iz * y - x * y.powf(alpha / 2.0)).exp() };
    let quad_err = |_| Error::QuadratureAccuracy {
        op: "s_pz",
        estimate: f64::NAN,
        tolerance: 1e-9,
        truncation: t_end,
    };
    let value = if p >= 1.0 {
        let g = |y: f64| f(y) * y.powf(p - 1.0);
        adaptive_gk(&g, 0.0, t_end, 1e-12, 1e-300, 4000).map_err(quad_err)?.0
    } else {
        // substitute w = y^{α/2} so the x-term is entire; a Jacobi head panel
        // absorbs the leftover w^{2p/α-1} weight when it is singular
        let q = 2.0 * p / alpha - 1.0;
        let w_end = t_end.powf(alpha / 2.0);
        let fw = |w: f64| -> Complex64 { (iz * w.powf(2.0 / alpha) - x * w).exp() };
        let gw = |w: f64| fw(w) * w.powf(q);
        let inner = if q >= 0.0 {
            adaptive_gk(&gw, 0.0, w_end, 1e-12, 1e-300, 4000).map_err(quad_err)?.0
        } else {
            let b0 = (w_end * 1e-3).min(1.0);
            let head: Complex64 = gauss_jacobi01(32, q, 0.0)
                .iter()
                .map(|&(tau, w)| fw(b0 * tau) * w)
                .sum::<Complex64>()
                * b0.powf(q + 1.0);
            head + adaptive_gk(&gw, b0, w_end, 1e-12, 1e-300, 4000).map_err(quad_err)?.0
        };
        inner * 2.0 / alpha
    };
    Ok(value / gamma(p))
}

/// Fixed-rule variant of [`s_pz`] for dual-quadrature checks.
pub fn s_pz_fixed(
    alpha: f64,
    p: f64,
    z: Complex64,
    x: Complex64,
    nodes: usize,
) -> Result<Complex64> {
    let t_end = (LOG_CUTOFF / z.im).min(if x.re > 0.0 {
        (LOG_CUTOFF / x.re).powf(2.0 / alpha)
    } else {
        f64::INFINITY
    });
    let iz = Complex64::new(0.0, 1.0) * z;
    if p >= 1.0 {
        let breaks = geometric_breaks(t_end * 1e-4, t_end, 4);
        let b0 = breaks[1];
        let f = |y: f64| -> Complex64 { (iz * y - x * y.powf(alpha / 2.0)).exp() };
        let head: Complex64 = gauss_jacobi01(nodes, p - 1.0, 0.0)
            .iter()
            .map(|&(tau, w)| f(b0 * tau) * w)
            .sum::<Complex64>()
            * b0.powf(p);
        let tail = composite_gl(&|y: f64| f(y) * y.powf(p - 1.0), &breaks[1..], nodes);
        Ok((head + tail) / gamma(p))
    } else {
        // same w = y^{α/2} substitution as the adaptive route
        let q = 2.0 * p / alpha - 1.0;
        let w_end = t_end.powf(alpha / 2.0);
        let fw = |w: f64| -> Complex64 { (iz * w.powf(2.0 / alpha) - x * w).exp() };
        let breaks = geometric_breaks(w_end * 1e-4, w_end, 4);
        let b0 = breaks[1];
        let head: Complex64 = gauss_jacobi01(nodes, q, 0.0)
            .iter()
            .map(|&(tau, w)| fw(b0 * tau) * w)
            .sum::<Complex64>()
            * b0.powf(q + 1.0);
        let tail = composite_gl(&|w: f64| fw(w) * w.powf(q), &breaks[1..], nodes);
        Ok((head + tail) * (2.0 / alpha) / gamma(p))
    }
}

/// `r_{p,z}(f) = 2^{1-p/2} Γ(p/2)⁻² ∫∫ y^{p-1} e^{(iyz|e^{iθ}) - y^{α/2} f(e^{iθ})}
/// (sin 2θ)^{p/2-1} dy dθ`.
pub fn r_pz(
    alpha: f64,
    p: f64,
    z: Complex64,
    f: &HalfQuadrantFunction,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(p > 0.0) || !(z.im > 0.0) {
        return Err(Error::InvalidParams(format!(
            "r_pz needs p > 0 and Im z > 0 (p = {p}, z = {z})"
        )));
    }
    f.assert_admissible("r_pz")?;
    let theta = ThetaGrid::new(p / 2.0 - 1.0, spec.theta_nodes);
    let iz = Complex64::new(0.0, 1.0) * z;
    let mut total = Complex64::new(0.0, 0.0);
    for (&t, &w) in theta.nodes.iter().zip(&theta.weights) {
        let e_it = Complex64::from_polar(1.0, t);
        let damp = bracket(iz, e_it); // Re = -η(cosθ + sinθ) < 0
        let f_arc = f.eval_angle(t);
        let t_end = (LOG_CUTOFF / (-damp.re)).min(if f_arc.re > 0.0 {
            (LOG_CUTOFF / f_arc.re).powf(2.0 / alpha)
        } else {
            f64::INFINITY
        });
        let integrand =
            |y: f64| -> Complex64 { (damp * y - f_arc * y.powf(alpha / 2.0)).exp() * y.powf(p - 1.0) };
        let (v, _) = adaptive_gk(&integrand, 0.0, t_end, 1e-10, 1e-300, 2000).map_err(|_| {
            Error::QuadratureAccuracy {
                op: "r_pz",
                estimate: f64::NAN,
                tolerance: 1e-6,
                truncation: t_end,
            }
        })?;
        total += v * w;
    }
    Ok(total * 2f64.powf(1.0 - p / 2.0) / gamma(p / 2.0).powi(2))
}

/// `‖f‖_r = ‖f‖_∞ + sup_u |(i|u)|^r |∇f(u)|` with the gradient of the
/// degree-`α/2` homogeneous extension taken on the unit arc.
pub fn norm_r(f: &HalfQuadrantFunction, r: f64) -> f64 {
    assert!(f.len() >= 32, "norm_r needs at least 32 grid nodes");
    let n = f.len();
    let w = f.degree;
    let mut grad_sup: f64 = 0.0;
    for k in 0..n {
        // non-uniform three-point derivative of the arc restriction
        let (i0, i1, i2) = if k == 0 {
            (0, 1, 2)
        } else if k == n - 1 {
            (n - 3, n - 2, n - 1)
        } else {
            (k - 1, k, k + 1)
        };
        let (x0, x1, x2) = (f.theta[i0], f.theta[i1], f.theta[i2]);
        let (y0, y1, y2) = (f.values[i0], f.values[i1], f.values[i2]);
        let xk = f.theta[k];
        let d = y0 * ((2.0 * xk - x1 - x2) / ((x0 - x1) * (x0 - x2)))
            + y1 * ((2.0 * xk - x0 - x2) / ((x1 - x0) * (x1 - x2)))
            + y2 * ((2.0 * xk - x0 - x1) / ((x2 - x0) * (x2 - x1)));
        let (s, c) = xk.sin_cos();
        let g = f.values[k];
        // chain rule at |u| = 1: ∂x = w cosθ·g - sinθ·g', ∂y = w sinθ·g + cosθ·g'
        let d1 = w * c * g - s * d;
        let d2 = w * s * g + c * d;
        let weight = (c - s).abs().powf(r);
        grad_sup = grad_sup.max(weight * (d1.norm_sqr() + d2.norm_sqr()).sqrt());
    }
    f.sup_norm() + grad_sup
}

/// Result of the Ω_z solve with its diagnostics.
pub struct OmegaSolution {
    pub omega: HalfQuadrantFunction,
    /// `‖Ω - ΥΩ‖_∞` over the grid
    pub residual_sup: f64,
    /// `‖Ω - ΥΩ‖_r` at `r = 1 - α/2 + 0.1`
    pub residual_r: f64,
    pub iterations: usize,
    /// `Re Ω(e^{iπ/4})`, positive for an admissible solution
    pub admissibility_at_diagonal: f64,
}

/// Solve `Ω = Υ_{z,Ω}` by damped Picard iteration with continuation in η,
/// starting from the scalar route's `Γ(1-α/2)·y(z)·(1|u)^{α/2}`.
pub fn solve_omega(
    alpha: f64,
    z: Complex64,
    grid_size: usize,
    tolerance: f64,
    max_iter: usize,
    spec: &QuadratureSpec,
) -> Result<OmegaSolution> {
    if !(z.im > 0.0) {
        return Err(Error::InvalidParams(format!("Im z must be > 0, got {z}")));
    }
    let gamma_tail = gamma(1.0 - alpha / 2.0);
    let mut eta = (2.0 * z.im).max(1.0);
    let mut f: Option<HalfQuadrantFunction> = None;
    let mut total_iterations = 0usize;
    loop {
        let zk = Complex64::new(z.re, eta.max(z.im));
        let mut cur = match f.take() {
            Some(prev) => prev,
            None => {
                let y = crate::limit_law::solve_y(alpha, zk, 1e-11, 400)?.y;
                HalfQuadrantFunction::from_fn(alpha, grid_size, |u| {
                    cpow(bracket(Complex64::new(1.0, 0.0), u), alpha / 2.0) * (gamma_tail * y)
                })
            }
        };
        let mut damping: f64 = 0.5;
        let mut prev_res = f64::INFINITY;
        let mut converged = false;
        for _ in 0..max_iter {
            let mapped = upsilon(alpha, zk, &cur, spec)?;
            let res = cur.sup_distance(&mapped);
            total_iterations += 1;
            if res <= tolerance {
                converged = true;
                break;
            }
            if res > prev_res {
                damping = (damping * 0.5).max(0.05);
            }
            prev_res = res;
            for (c, m) in cur.values.iter_mut().zip(&mapped.values) {
                *c += damping * (m - *c);
            }
            if cur.min_re() <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "solve_omega: iterate lost admissibility at z = {zk} (min Re = {:.3e})",
                    cur.min_re()
                )));
            }
        }
        if !converged {
            let mapped = upsilon(alpha, zk, &cur, spec)?;
            return Err(Error::NonConvergence {
                op: "solve_omega",
                residual: cur.sup_distance(&mapped),
                iterations: total_iterations,
            });
        }
        if zk.im <= z.im {
            let mapped = upsilon(alpha, z, &cur, spec)?;
            let residual_sup = cur.sup_distance(&mapped);
            let diff = HalfQuadrantFunction {
                theta: cur.theta.clone(),
                values: cur
                    .values
                    .iter()
                    .zip(&mapped.values)
                    .map(|(a, b)| a - b)
                    .collect(),
                degree: cur.degree,
            };
            let residual_r = norm_r(&diff, 1.0 - alpha / 2.0 + 0.1);
            let admissibility_at_diagonal = cur.eval_angle(FRAC_PI_4).re;
            if admissibility_at_diagonal <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "solve_omega: solution not admissible at the diagonal (Re = {admissibility_at_diagonal:.3e})"
                )));
            }
            return Ok(OmegaSolution {
                omega: cur,
                residual_sup,
                residual_r,
                iterations: total_iterations,
                admissibility_at_diagonal,
            });
        }
        eta *= 0.7;
        f = Some(cur);
    }
}

/// `m_α(z) = i·s_{1,z}(Ω_z(1))` — the small-`|z|` route to the Stieltjes
/// transform.
pub fn m_alpha_small(
    alpha: f64,
    z: Complex64,
    grid_size: usize,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let sol = solve_omega(alpha, z, grid_size, 1e-7, 300, spec)?;
    let omega_at_one = sol.omega.eval(Complex64::new(1.0, 0.0));
    let m = Complex64::new(0.0, 1.0) * s_pz(alpha, 1.0, z, omega_at_one)?;
    if m.im <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "m_alpha_small produced a value outside the upper half plane: {m}"
        )));
    }
    Ok(m)
}
