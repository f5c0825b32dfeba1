//! The limiting spectral density via the scalar fixed point, with its
//! normalization and tail checks, written out as CSV and SVG.
//!
//! Run with `cargo run --release --example limit_density`.

use rmtlab::limit_law::*;
use rmtlab::report::{fmt_g17, write_csv, SvgPlot};

fn main() -> rmtlab::Result<()> {
    let alpha = 1.5;
    let h = 0.05;
    let grid: Vec<f64> = (0..=200).map(|k| -5.0 + k as f64 * h).collect();
    let rho = density_table(alpha, &grid, (1e-3, 5e-4))?;

    println!("rho_alpha(0) = {:.5}", rho[100]);
    for &x in &[10.0, 20.0] {
        let v = density_rho_alpha(alpha, x, (1e-3, 5e-4))?;
        println!(
            "x^(a+1) rho(x) at x = {x}: {:.4} (tail constant alpha/2 = {:.2})",
            x.powf(alpha + 1.0) * v,
            alpha / 2.0
        );
    }
    let m = m_alpha(alpha, num_complex::Complex64::new(0.0, 20.0))?;
    println!("m_alpha(20i) = {m:.5} (Stieltjes asymptotics -1/z = 0.05i)");

    let rows: Vec<Vec<String>> = grid
        .iter()
        .zip(&rho)
        .map(|(&e, &r)| vec![fmt_g17(e), fmt_g17(r)])
        .collect();
    let csv = std::path::Path::new("limit_density.csv");
    write_csv(csv, &["E", "rho_alpha"], &rows)?;

    let y_max = rho.iter().cloned().fold(0.0f64, f64::max) * 1.1;
    let mut plot = SvgPlot::new(
        &format!("limiting spectral density, alpha = {alpha}"),
        (-5.0, 5.0),
        (0.0, y_max),
    )?;
    plot.polyline(
        &grid.iter().cloned().zip(rho.iter().cloned()).collect::<Vec<_>>(),
        "crimson",
        None,
    )?;
    plot.polyline(
        &grid
            .iter()
            .map(|&e| (e, rho_semicircle(e)))
            .collect::<Vec<_>>(),
        "gray",
        Some("4,3"),
    )?;
    plot.label(-4.8, y_max * 0.92, "dashed: semicircle reference", "gray");
    let svg = std::path::Path::new("limit_density.svg");
    plot.write(svg)?;
    println!("wrote limit_density.csv and limit_density.svg");
    Ok(())
}
