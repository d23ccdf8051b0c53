//! Deterministic SVG 1.1 figures: fixed styling and fixed-precision coordinates.

use std::fmt::Write;

use fblab_core::Vec3;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;
const MAX_MARKS: usize = 20_000;
const PLUS: &str = "#b2182b";
const MINUS: &str = "#2166ac";

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Doc {
    body: String,
    width: f64,
    height: f64,
}

impl Doc {
    fn new(width: f64, height: f64) -> Self {
        Self { body: String::new(), width, height }
    }

    fn text(&mut self, x: f64, y: f64, s: &str) {
        let _ = writeln!(self.body, r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12">{}</text>"#, escape(s));
    }

    fn polyline(&mut self, pts: &[(f64, f64)], colour: &str, closed: bool) {
        if pts.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (i, (x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{x:.2} {y:.2}", if i == 0 { "M" } else { " L" });
        }
        if closed {
            d.push_str(" Z");
        }
        let _ = writeln!(self.body, r#"<path d="{d}" fill="none" stroke="{colour}" stroke-width="1"/>"#);
    }

    fn frame(&mut self, x: f64, y: f64, w: f64, h: f64) {
        let _ = writeln!(self.body, r##"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#999999" stroke-width="0.5"/>"##);
    }

    fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n{}</svg>\n",
            self.body,
            w = self.width,
            h = self.height
        )
    }
}

/// Map `[-extent, extent]^2` onto the square plot area, `y` upwards.
fn to_screen(x: f64, y: f64, extent: f64) -> (f64, f64) {
    let s = (SIZE - 2.0 * MARGIN) / (2.0 * extent);
    (MARGIN + (x + extent) * s, MARGIN + (extent - y) * s)
}

/// Orthographic view down the z-axis; points above and below `z = 0` in two colours.
pub fn z_projection(points: &[Vec3], title: &str) -> String {
    let mut doc = Doc::new(SIZE, SIZE + 20.0);
    let extent = points.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max).max(1e-300) * 1.05;
    doc.frame(MARGIN, MARGIN, SIZE - 2.0 * MARGIN, SIZE - 2.0 * MARGIN);
    let stride = points.len().div_ceil(MAX_MARKS).max(1);
    for (colour, upper) in [(MINUS, false), (PLUS, true)] {
        let mut d = String::new();
        for p in points.iter().step_by(stride).filter(|p| (p.z > 0.0) == upper) {
            let (x, y) = to_screen(p.x, p.y, extent);
            let _ = write!(d, "M{x:.2} {y:.2}h0.01");
        }
        if !d.is_empty() {
            let _ = writeln!(doc.body, r#"<path d="{d}" stroke="{colour}" stroke-width="1.2" stroke-linecap="round"/>"#);
        }
    }
    doc.text(MARGIN, SIZE + 8.0, &format!("{title} (view from the z-axis, half-width {extent:.3e})"));
    doc.finish()
}

/// Nested copies `t c` of a closed curve on the sphere, viewed from the z-axis.
pub fn cone_figure(curve: &[Vec3], title: &str) -> String {
    let mut doc = Doc::new(SIZE, SIZE + 20.0);
    doc.frame(MARGIN, MARGIN, SIZE - 2.0 * MARGIN, SIZE - 2.0 * MARGIN);
    let stride = curve.len().div_ceil(2000).max(1);
    for t in [0.25, 0.5, 0.75, 1.0] {
        let pts: Vec<(f64, f64)> = curve.iter().step_by(stride).map(|c| to_screen(t * c.x, t * c.y, 1.05)).collect();
        doc.polyline(&pts, PLUS, true);
    }
    doc.text(MARGIN, SIZE + 8.0, title);
    doc.finish()
}

/// Side-by-side panels of curves `(x, z)` on a common frame `[-1, 1] x [-zmax, zmax]`.
pub struct Panel {
    pub title: String,
    pub curves: Vec<Vec<(f64, f64)>>,
}

pub fn panels(panels: &[Panel], zmax: f64) -> String {
    let w = SIZE * 0.6;
    let mut doc = Doc::new(w * panels.len() as f64, w + 30.0);
    let zmax = zmax.max(1e-12);
    for (i, panel) in panels.iter().enumerate() {
        let x0 = i as f64 * w;
        let inner = w - 2.0 * MARGIN;
        doc.frame(x0 + MARGIN, MARGIN, inner, inner);
        let axis = [(x0 + MARGIN, MARGIN + inner / 2.0), (x0 + MARGIN + inner, MARGIN + inner / 2.0)];
        doc.polyline(&axis, "#cccccc", false);
        for (j, c) in panel.curves.iter().enumerate() {
            let pts: Vec<(f64, f64)> = c
                .iter()
                .map(|(x, z)| (x0 + MARGIN + (x + 1.0) / 2.0 * inner, MARGIN + (zmax - z.clamp(-zmax, zmax)) / (2.0 * zmax) * inner))
                .collect();
            doc.polyline(&pts, if j == 0 { PLUS } else { MINUS }, false);
        }
        doc.text(x0 + MARGIN, w + 14.0, &panel.title);
    }
    doc.finish()
}
