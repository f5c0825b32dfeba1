//! The Stieltjes transform by two independent fixed points: the scalar
//! equation `y = φ_{α,z}(y)` and the function-space equation `Ω = Υ_Ω` on
//! the quarter circle, which must agree through `m = i·s_{1,z}(Ω(1))`.
//!
//! Run with `cargo run --release --example two_route_fixed_points`
//! (the function-space solve takes a minute or two).

use num_complex::Complex64;
use rmtlab::limit_law;
use rmtlab::quadrant::*;
use rmtlab::special::gamma;

fn main() -> rmtlab::Result<()> {
    let alpha = 0.8;
    let z = Complex64::new(0.05, 0.5);

    let scalar = limit_law::solve_y(alpha, z, 1e-11, 400)?;
    println!(
        "scalar route:     y(z) = {:.6}, m = {:.6} ({} iterations, residual {:.1e})",
        scalar.y, scalar.m_alpha, scalar.iterations, scalar.residual
    );

    let spec = QuadratureSpec::default_spec();
    let sol = solve_omega(alpha, z, 64, 1e-7, 300, &spec)?;
    let omega1 = sol.omega.eval(Complex64::new(1.0, 0.0));
    let m_functional = Complex64::new(0.0, 1.0) * s_pz(alpha, 1.0, z, omega1)?;
    println!(
        "functional route: Omega(1) = {:.6}, m = {:.6} ({} iterations, residual {:.1e})",
        omega1, m_functional, sol.iterations, sol.residual_sup
    );
    println!(
        "identities: |Omega(1) - Gamma(1-a/2) y| = {:.2e}, |m difference| = {:.2e}",
        (omega1 - gamma(1.0 - alpha / 2.0) * scalar.y).norm(),
        (m_functional - scalar.m_alpha).norm()
    );
    println!(
        "admissibility at the diagonal: Re Omega(e^{{i pi/4}}) = {:.4}",
        sol.admissibility_at_diagonal
    );
    Ok(())
}
