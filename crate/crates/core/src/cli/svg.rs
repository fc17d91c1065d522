//! Minimal log-log scatter plots with a fitted power law.

use std::fmt::Write as _;
use std::path::Path;

use crate::corefn::{fit_power_law, GrowthFit};
use crate::error::{Error, Result};
use crate::experiments::ExperimentReport;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 50.0;

/// Least-squares fit for three or more points, the exact line for two.
pub fn loglog_line(xs: &[f64], ys: &[f64]) -> Result<GrowthFit> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch { expected: xs.len(), got: ys.len() });
    }
    if xs.len() < 2 {
        return Err(Error::DegenerateInput);
    }
    if xs.len() > 2 {
        return fit_power_law(xs, ys);
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) || xs[0] == xs[1] {
        return Err(Error::DegenerateInput);
    }
    let slope = (ys[1] / ys[0]).ln() / (xs[1] / xs[0]).ln();
    Ok(GrowthFit { slope, intercept: ys[0].ln() - slope * xs[0].ln(), r_squared: 1.0 })
}

/// Standalone SVG: points `(x, y)` and the fitted line on log-log axes.
pub fn render_loglog(title: &str, xs: &[f64], ys: &[f64]) -> Result<(String, GrowthFit)> {
    let fit = loglog_line(xs, ys)?;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (x0, x1) = bounds(&lx);
    let line_y = [fit.intercept + fit.slope * x0, fit.intercept + fit.slope * x1];
    let (y0, y1) = bounds(&[ly.as_slice(), &line_y].concat());
    let px = |v: f64| MARGIN + (v - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |v: f64| HEIGHT - MARGIN - (v - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{m:.3} {t:.3} L{m:.3} {b:.3} L{r:.3} {b:.3}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="steelblue" stroke-width="1.5"/>"#,
        px(x0),
        py(line_y[0]),
        px(x1),
        py(line_y[1])
    );
    for (x, y) in lx.iter().zip(&ly) {
        let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="3.5" fill="crimson"/>"#, px(*x), py(*y));
    }
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="30" font-family="monospace" font-size="13">{}</text>"#, escape(title));
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="30" font-family="monospace" font-size="13" text-anchor="end">slope = {:.3}</text>"#,
        WIDTH - MARGIN,
        fit.slope
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" font-family="monospace" font-size="11" text-anchor="middle">ln param [{:.3}, {:.3}]</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        x0,
        x1
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.3}" font-family="monospace" font-size="11" transform="rotate(-90 15 {:.3})" text-anchor="middle">ln ratio [{:.3}, {:.3}]</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        y0,
        y1
    );
    s.push_str("</svg>\n");
    Ok((s, fit))
}

/// Writes the ratio curve of `report` to `path`; needs at least two rows.
pub fn emit_svg_loglog(report: &ExperimentReport, path: &Path) -> Result<GrowthFit> {
    let (svg, fit) = render_loglog(&report.experiment, &report.params(), &report.ratios())?;
    std::fs::write(path, svg)?;
    Ok(fit)
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points_give_the_line_through_both() {
        let fit = loglog_line(&[2.0, 8.0], &[3.0, 12.0]).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-15);
        assert!((fit.predict(2.0) - 3.0).abs() < 1e-12);
        assert!((fit.predict(8.0) - 12.0).abs() < 1e-12);
        assert!(loglog_line(&[1.0], &[1.0]).is_err());
        assert!(loglog_line(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn deterministic_with_slope_annotation() {
        let xs = [4.0, 8.0, 16.0, 32.0];
        let ys = [0.4, 0.5, 0.6, 0.7];
        let (a, fit) = render_loglog("demo <1>", &xs, &ys).unwrap();
        let (b, _) = render_loglog("demo <1>", &xs, &ys).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(&format!("slope = {:.3}", fit.slope)));
        assert!(a.contains("demo &lt;1&gt;"));
        assert_eq!(a.matches("<circle").count(), 4);
    }
}
