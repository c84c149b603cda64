//! Static scatter plots of root sets.

use std::fmt::Write;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guide {
    UnitCircle,
    CriticalLine,
}

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (SIZE - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        SIZE - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (SIZE - 2.0 * MARGIN)
    }
}

fn frame(points: &[Complex64], guide: Guide) -> Frame {
    match guide {
        Guide::UnitCircle => {
            let r = points.iter().map(|p| p.norm()).fold(1.0, f64::max) * 1.15;
            Frame { x0: -r, x1: r, y0: -r, y1: r }
        }
        Guide::CriticalLine => {
            let h = points.iter().map(|p| p.im.abs()).fold(1.0, f64::max) * 1.1;
            let w = points.iter().map(|p| (p.re - 0.5).abs()).fold(0.0, f64::max).max(h / 4.0).max(1.0);
            Frame { x0: 0.5 - w, x1: 0.5 + w, y0: -h, y1: h }
        }
    }
}

/// Scatter of `points` over axes with either the unit circle or the line
/// `Re(s) = 1/2` drawn as a guide.
pub fn scatter(title: &str, points: &[Complex64], guide: Guide) -> String {
    let f = frame(points, guide);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        SIZE / 2.0,
        escape(title)
    );
    let axis = r##"stroke="#888" stroke-width="1""##;
    if f.y0 <= 0.0 && f.y1 >= 0.0 {
        let y = f.py(0.0);
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" {axis}/>"#, MARGIN, SIZE - MARGIN);
    }
    if f.x0 <= 0.0 && f.x1 >= 0.0 {
        let x = f.px(0.0);
        let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" {axis}/>"#, MARGIN, SIZE - MARGIN);
    }
    let guide_style = r##"stroke="#3366cc" stroke-width="1.2" fill="none" stroke-dasharray="4 3""##;
    match guide {
        Guide::UnitCircle => {
            let r = f.px(1.0) - f.px(0.0);
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="{r:.2}" {guide_style}/>"#, f.px(0.0), f.py(0.0));
        }
        Guide::CriticalLine => {
            let x = f.px(0.5);
            let _ = writeln!(
                out,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" {guide_style}/>"#,
                MARGIN,
                SIZE - MARGIN
            );
        }
    }
    for p in points {
        let _ = writeln!(out, r##"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="#cc3333"/>"##, f.px(p.re), f.py(p.im));
    }
    let label = |v: f64| format!("{v:.2}");
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{}</text>"#,
        MARGIN,
        SIZE - 12.0,
        escape(&format!("Re [{}, {}]  Im [{}, {}]", label(f.x0), label(f.x1), label(f.y0), label(f.y1)))
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_marker_per_point() {
        let pts = [Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), Complex64::new(-1.0, 0.0)];
        let svg = scatter("roots <R>", &pts, Guide::UnitCircle);
        assert_eq!(svg.matches(r##"fill="#cc3333""##).count(), 3);
        assert!(svg.contains("&lt;R&gt;"));
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn critical_line_points_sit_on_guide() {
        let pts = [Complex64::new(0.5, 3.0), Complex64::new(0.5, -3.0)];
        let svg = scatter("z", &pts, Guide::CriticalLine);
        let f = frame(&pts, Guide::CriticalLine);
        assert!(svg.contains(&format!(r#"x1="{:.2}""#, f.px(0.5))));
        assert!(svg.contains(&format!(r#"cx="{:.2}""#, f.px(0.5))));
    }
}
