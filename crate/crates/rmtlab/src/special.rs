//! Small special-function kernel: real gamma and complex principal powers.

use num_complex::Complex64;

/// Lanczos coefficients for g = 7, n = 9 (Godfrey's tabulation).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for real arguments (poles at 0, -1, -2, ... return NaN-free
/// ±inf via the reflection formula's sine zero; callers here only use x > 0
/// or non-integer x in (-1, 1)).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x) Γ(1-x) = π / sin(πx)
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Principal-branch complex power `base^p` for real exponent `p`.
///
/// Uses log/exp on the principal branch; `base` must avoid the negative real
/// axis for continuity, which holds for all uses here (arguments have
/// positive real part).
pub fn cpow(base: Complex64, p: f64) -> Complex64 {
    if base == Complex64::new(0.0, 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    (base.ln() * p).exp()
}

/// `(-iz)^p` on the principal branch, convenient for Stieltjes-type kernels.
pub fn neg_i_pow(z: Complex64, p: f64) -> Complex64 {
    cpow(Complex64::new(z.im, -z.re), p)
}
