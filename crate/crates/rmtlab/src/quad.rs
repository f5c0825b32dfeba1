//! Quadrature toolkit: adaptive Gauss–Kronrod panels for complex integrands,
//! fixed composite Gauss–Legendre rules as an independent cross-check route,
//! and Golub–Welsch Gauss–Jacobi rules for endpoint-singular weights.

use crate::error::{Error, Result};
use crate::special::gamma;
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

/// 15-point Kronrod abscissae on [0, 1] side (symmetric), QUADPACK values.
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG7: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let s = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if s < 1.0 { res_asc * s } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One Gauss–Kronrod 7/15 panel; returns (integral, error estimate).
pub fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK15[7];
    let mut res_g = fc * WG7[3];
    let mut res_abs = fc.norm() * WGK15[7];
    let mut fv = [Complex64::new(0.0, 0.0); 14];
    for j in 0..7 {
        let x = half * XGK15[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[j + 7] = f2;
        res_k += (f1 + f2) * WGK15[j];
        res_abs += (f1.norm() + f2.norm()) * WGK15[j];
        if j % 2 == 1 {
            res_g += (f1 + f2) * WG7[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK15[7] * (fc - mean).norm();
    for j in 0..7 {
        res_asc += WGK15[j] * ((fv[j] - mean).norm() + (fv[j + 7] - mean).norm());
    }
    let err = ((res_k - res_g) * half).norm();
    (
        res_k * half,
        rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
    )
}

/// Adaptive Gauss–Kronrod on [a, b]. Bisects the worst panel until the summed
/// error estimate is below `abs_tol + rel_tol * |integral|`.
pub fn adaptive_gk<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<(Complex64, f64)> {
    let (v, e) = kronrod15(f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total: Complex64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= abs_tol + rel_tol * total.norm() {
            return Ok((total, err));
        }
        if panels.len() >= max_panels {
            return Err(Error::QuadratureAccuracy {
                op: "adaptive_gk",
                estimate: err,
                tolerance: abs_tol + rel_tol * total.norm(),
                truncation: b,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (pa, pb, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        let (v1, e1) = kronrod15(f, pa, mid);
        let (v2, e2) = kronrod15(f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

fn legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((-x, w));
        if !(n % 2 == 1 && i == (n - 1) / 2) {
            out.push((x, w));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Cached Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> &'static [(f64, f64)] {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static [(f64, f64)]>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n)
        .or_insert_with(|| Box::leak(legendre_nodes(n).into_boxed_slice()))
}

/// Fixed composite Gauss–Legendre over given panel breakpoints; the
/// independent second quadrature route used by the cross-check oracles.
pub fn composite_gl<F: Fn(f64) -> Complex64>(f: &F, breaks: &[f64], n: usize) -> Complex64 {
    let rule = gauss_legendre(n);
    let mut total = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        for &(x, wt) in rule {
            total += f(c + h * x) * (wt * h);
        }
    }
    total
}

/// Geometric panel breakpoints `[0, t0, t0*q, ..., T]` used for kernels that
/// decay over several scales.
pub fn geometric_breaks(t0: f64, t_end: f64, per_decade: usize) -> Vec<f64> {
    let mut breaks = vec![0.0, t0];
    let q = 10.0_f64.powf(1.0 / per_decade as f64);
    let mut t = t0;
    while t < t_end {
        t = (t * q).min(t_end);
        breaks.push(t);
    }
    breaks
}

/// Eigenvalues and first-row eigenvector components of a symmetric
/// tridiagonal matrix (implicit-shift QL), the Golub–Welsch workhorse.
fn tridiag_ql_first_row(d: &mut [f64], e: &mut [f64], z: &mut [f64]) {
    let n = d.len();
    if n == 1 {
        return;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 60, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if r == 0.0 && m > l + 1 {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Gauss–Jacobi rule for the weight `(1-x)^a (1+x)^b` on [-1, 1].
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    assert!(a > -1.0 && b > -1.0 && n >= 1);
    let mu0 = 2f64.powf(a + b + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(a + b + 2.0);
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n);
    for k in 0..n {
        let kf = k as f64;
        let denom = (2.0 * kf + a + b) * (2.0 * kf + a + b + 2.0);
        let alpha = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / denom
        };
        diag.push(alpha);
        let beta = if k == 0 {
            0.0
        } else if k == 1 {
            4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0).powi(2) * (a + b + 3.0))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + a + b)
                / ((2.0 * kf + a + b).powi(2) * (2.0 * kf + a + b + 1.0) * (2.0 * kf + a + b - 1.0))
        };
        off.push(beta.sqrt());
    }
    // sub-diagonal for the Jacobi matrix is off[1..n]
    let mut e = vec![0.0; n];
    for k in 1..n {
        e[k - 1] = off[k];
    }
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    tridiag_ql_first_row(&mut diag, &mut e, &mut z);
    let mut rule: Vec<(f64, f64)> = diag
        .into_iter()
        .zip(z.into_iter().map(|zi| mu0 * zi * zi))
        .collect();
    rule.sort_by(|p, q| p.0.total_cmp(&q.0));
    rule
}

/// Gauss–Jacobi rule on [0, 1] for the weight `t^e0 (1-t)^e1`.
pub fn gauss_jacobi01(n: usize, e0: f64, e1: f64) -> Vec<(f64, f64)> {
    let scale = 2f64.powf(-e0 - e1 - 1.0);
    gauss_jacobi(n, e1, e0)
        .into_iter()
        .map(|(x, w)| (0.5 * (x + 1.0), w * scale))
        .collect()
}

/// Simpson's rule on a uniform grid (odd number of points preferred; a
/// trapezoid patch covers a trailing even interval).
pub fn simpson_uniform(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    assert!(n >= 2);
    let mut total = 0.0;
    let pairs = (n - 1) / 2;
    for k in 0..pairs {
        total += h / 3.0 * (values[2 * k] + 4.0 * values[2 * k + 1] + values[2 * k + 2]);
    }
    if (n - 1) % 2 == 1 {
        total += 0.5 * h * (values[n - 2] + values[n - 1]);
    }
    total
}
