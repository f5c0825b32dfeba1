//! Deterministic artifact writers: RFC-4180 CSV with 17-significant-digit
//! floats, standalone SVG plots, and the run manifest.

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// A float with 17 significant digits, locale-independent.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write an RFC-4180 CSV: a header row, then rows of preformatted cells.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push_str("\r\n");
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        out.push_str(&row.join(","));
        out.push_str("\r\n");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Minimal deterministic SVG canvas addressed in data-space coordinates.
pub struct SvgPlot {
    width: f64,
    height: f64,
    margin: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    body: String,
}

impl SvgPlot {
    pub fn new(title: &str, x_range: (f64, f64), y_range: (f64, f64)) -> Result<SvgPlot> {
        if !(x_range.1 > x_range.0 && y_range.1 > y_range.0) {
            return Err(Error::InvalidInput("svg: empty axis range".into()));
        }
        let mut plot = SvgPlot {
            width: 720.0,
            height: 480.0,
            margin: 56.0,
            x_range,
            y_range,
            body: String::new(),
        };
        let _ = write!(
            plot.body,
            r#"<text x="{:.1}" y="24" font-family="monospace" font-size="15" text-anchor="middle">{}</text>"#,
            plot.width / 2.0,
            xml_escape(title)
        );
        plot.draw_axes();
        Ok(plot)
    }

    fn x_px(&self, x: f64) -> f64 {
        self.margin
            + (x - self.x_range.0) / (self.x_range.1 - self.x_range.0)
                * (self.width - 2.0 * self.margin)
    }

    fn y_px(&self, y: f64) -> f64 {
        self.height
            - self.margin
            - (y - self.y_range.0) / (self.y_range.1 - self.y_range.0)
                * (self.height - 2.0 * self.margin)
    }

    fn draw_axes(&mut self) {
        let (x0, x1) = (self.margin, self.width - self.margin);
        let (y0, y1) = (self.height - self.margin, self.margin);
        let _ = write!(
            self.body,
            r#"<rect x="{x0:.1}" y="{y1:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black" stroke-width="1"/>"#,
            x1 - x0,
            y0 - y1
        );
        for k in 0..=4 {
            let fx = self.x_range.0 + k as f64 / 4.0 * (self.x_range.1 - self.x_range.0);
            let fy = self.y_range.0 + k as f64 / 4.0 * (self.y_range.1 - self.y_range.0);
            let px = self.x_px(fx);
            let py = self.y_px(fy);
            let _ = write!(
                self.body,
                r#"<line x1="{px:.1}" y1="{y0:.1}" x2="{px:.1}" y2="{:.1}" stroke="black" stroke-width="1"/><text x="{px:.1}" y="{:.1}" font-family="monospace" font-size="11" text-anchor="middle">{}</text>"#,
                y0 + 5.0,
                y0 + 18.0,
                format_tick(fx)
            );
            let _ = write!(
                self.body,
                r#"<line x1="{:.1}" y1="{py:.1}" x2="{x0:.1}" y2="{py:.1}" stroke="black" stroke-width="1"/><text x="{:.1}" y="{:.1}" font-family="monospace" font-size="11" text-anchor="end">{}</text>"#,
                x0 - 5.0,
                x0 - 8.0,
                py + 4.0,
                format_tick(fy)
            );
        }
    }

    /// Polyline through data-space points.
    pub fn polyline(&mut self, pts: &[(f64, f64)], color: &str, dash: Option<&str>) -> Result<()> {
        if pts.is_empty() {
            return Err(Error::InvalidInput("svg: empty series".into()));
        }
        let mut d = String::new();
        for (k, &(x, y)) in pts.iter().enumerate() {
            let _ = write!(
                d,
                "{}{:.2},{:.2} ",
                if k == 0 { "M" } else { "L" },
                self.x_px(x),
                self.y_px(y)
            );
        }
        let dash_attr = dash
            .map(|p| format!(r#" stroke-dasharray="{p}""#))
            .unwrap_or_default();
        let _ = write!(
            self.body,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash_attr}/>"#,
            d.trim_end()
        );
        Ok(())
    }

    /// Histogram bars from bin edges and heights.
    pub fn bars(&mut self, edges: &[f64], heights: &[f64], color: &str) -> Result<()> {
        if heights.is_empty() || edges.len() != heights.len() + 1 {
            return Err(Error::InvalidInput(
                "svg: empty or mismatched histogram".into(),
            ));
        }
        let base = self.y_px(self.y_range.0.max(0.0));
        for (k, &h) in heights.iter().enumerate() {
            let x = self.x_px(edges[k]);
            let w = self.x_px(edges[k + 1]) - x;
            let y = self.y_px(h);
            let _ = write!(
                self.body,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{:.2}" fill="{color}" fill-opacity="0.55"/>"#,
                (base - y).max(0.0)
            );
        }
        Ok(())
    }

    /// Scatter markers.
    pub fn scatter(&mut self, pts: &[(f64, f64)], color: &str) -> Result<()> {
        if pts.is_empty() {
            return Err(Error::InvalidInput("svg: empty series".into()));
        }
        for &(x, y) in pts {
            let _ = write!(
                self.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{color}"/>"#,
                self.x_px(x),
                self.y_px(y)
            );
        }
        Ok(())
    }

    /// Colored cell grid for sweep heatmaps; `values` row-major over
    /// `(ys.len()-1) × (xs.len()-1)` cells, mapped on a blue→red ramp.
    pub fn heat_cells(&mut self, xs: &[f64], ys: &[f64], values: &[f64]) -> Result<()> {
        if values.is_empty() || (xs.len() - 1) * (ys.len() - 1) != values.len() {
            return Err(Error::InvalidInput(
                "svg: empty or mismatched heatmap".into(),
            ));
        }
        let lo = values.iter().cloned().fold(f64::MAX, f64::min);
        let hi = values
            .iter()
            .cloned()
            .fold(f64::MIN, f64::max)
            .max(lo + 1e-300);
        for row in 0..ys.len() - 1 {
            for col in 0..xs.len() - 1 {
                let v = (values[row * (xs.len() - 1) + col] - lo) / (hi - lo);
                let r = (255.0 * v) as u8;
                let b = (255.0 * (1.0 - v)) as u8;
                let x = self.x_px(xs[col]);
                let y = self.y_px(ys[row + 1]);
                let w = self.x_px(xs[col + 1]) - x;
                let h = self.y_px(ys[row]) - y;
                let _ = write!(
                    self.body,
                    r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="rgb({r},40,{b})"/>"#
                );
            }
        }
        Ok(())
    }

    pub fn label(&mut self, x: f64, y: f64, text: &str, color: &str) {
        let _ = write!(
            self.body,
            r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="12" fill="{color}">{}</text>"#,
            self.x_px(x),
            self.y_px(y),
            xml_escape(text)
        );
    }

    /// Serialize to a standalone SVG document.
    pub fn finish(self) -> String {
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" "#,
                r#"viewBox="0 0 {w} {h}"><rect width="{w}" height="{h}" fill="white"/>{body}</svg>"#,
                "\n"
            ),
            w = self.width,
            h = self.height,
            body = self.body
        )
    }

    pub fn write(self, path: &Path) -> Result<()> {
        std::fs::write(path, self.finish())?;
        Ok(())
    }
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 0.01 && v.abs() < 10_000.0 {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_round_trips() {
        for &x in &[1.0, -0.1, 3.141592653589793e-12, 6.02e23] {
            let s = fmt_g17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            assert!(!s.contains(','));
        }
    }

    #[test]
    fn csv_is_crlf_terminated() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_csv(&path, &["a", "b"], &[vec![fmt_g17(1.0), fmt_g17(2.0)]]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("a,b\r\n"));
        assert!(text.ends_with("\r\n"));
    }

    #[test]
    fn svg_rejects_empty_series_and_is_deterministic() {
        let mut p = SvgPlot::new("t", (0.0, 1.0), (0.0, 1.0)).unwrap();
        assert!(p.polyline(&[], "red", None).is_err());
        p.polyline(&[(0.0, 0.0), (1.0, 1.0)], "blue", None).unwrap();
        let a = p.finish();
        let mut q = SvgPlot::new("t", (0.0, 1.0), (0.0, 1.0)).unwrap();
        q.polyline(&[(0.0, 0.0), (1.0, 1.0)], "blue", None).unwrap();
        assert_eq!(a, q.finish());
        assert!(a.starts_with("<svg"));
    }
}
