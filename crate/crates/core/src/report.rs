//! Static SVG views of convergence curves and spectral sets. Every plotted
//! series also exists as CSV elsewhere; these are renderings only.

use std::fmt::Write;

use crate::linalg::c64;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
    "#7f7f7f", "#bcbd22",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn colour(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

fn header(title: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    )
}

fn polyline(pts: &[(f64, f64)], stroke: &str, dash: bool, width: f64) -> String {
    let mut s = String::from("<polyline fill=\"none\" points=\"");
    for (x, y) in pts {
        let _ = write!(s, "{x:.2},{y:.2} ");
    }
    let _ = write!(s, "\" stroke=\"{stroke}\" stroke-width=\"{width}\"");
    if dash {
        s.push_str(" stroke-dasharray=\"6,4\"");
    }
    s.push_str("/>\n");
    s
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    /// `values[k]` at iteration `k`.
    pub values: Vec<f64>,
    /// Drawn dashed.
    pub dashed: bool,
}

/// Log-scale plot of per-iteration series.
#[derive(Debug, Clone, Default)]
pub struct ConvergencePlot {
    pub title: String,
    pub series: Vec<Series>,
    /// Iteration marked with an asterisk on the first series.
    pub marker: Option<usize>,
    /// Lower clip of the y axis.
    pub floor: Option<f64>,
}

impl ConvergencePlot {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Self::default()
        }
    }

    pub fn add(&mut self, label: impl Into<String>, values: Vec<f64>, dashed: bool) -> &mut Self {
        self.series.push(Series {
            label: label.into(),
            values,
            dashed,
        });
        self
    }

    pub fn to_svg(&self) -> String {
        let floor = self.floor.unwrap_or(1e-16);
        let positive = self
            .series
            .iter()
            .flat_map(|s| s.values.iter().copied())
            .filter(|v| v.is_finite() && *v > 0.0);
        let (lo, hi) = positive.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
        let (lo, hi) = if lo.is_finite() {
            (lo.max(floor), hi.max(1.0))
        } else {
            (floor, 1.0)
        };
        let (dlo, dhi) = (
            lo.log10().floor(),
            hi.log10().ceil().max(lo.log10().floor() + 1.0),
        );
        let kmax = self
            .series
            .iter()
            .map(|s| s.values.len().saturating_sub(1))
            .max()
            .unwrap_or(1)
            .max(1);
        let (x0, x1, y0, y1) = (MARGIN, WIDTH - 150.0, HEIGHT - MARGIN, MARGIN);
        let sx = |k: f64| x0 + (x1 - x0) * k / kmax as f64;
        let sy = |v: f64| {
            let l = v.max(10f64.powf(dlo)).log10();
            y0 + (y1 - y0) * (l - dlo) / (dhi - dlo)
        };

        let mut s = header(&self.title);
        let _ = writeln!(
            s,
            "<rect x=\"{x0}\" y=\"{y1}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
            x1 - x0,
            y0 - y1
        );
        let mut d = dlo as i32;
        let step = (((dhi - dlo) / 8.0).ceil() as i32).max(1);
        while d as f64 <= dhi {
            let y = sy(10f64.powi(d));
            let _ = writeln!(
                s,
                "<line x1=\"{x0}\" y1=\"{y:.2}\" x2=\"{x1}\" y2=\"{y:.2}\" stroke=\"#ddd\"/>"
            );
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">1e{d}</text>",
                x0 - 4.0,
                y + 4.0
            );
            d += step;
        }
        let kstep = (kmax / 10).max(1);
        for k in (0..=kmax).step_by(kstep) {
            let _ = writeln!(
                s,
                "<text x=\"{:.2}\" y=\"{}\" text-anchor=\"middle\">{k}</text>",
                sx(k as f64),
                y0 + 16.0
            );
        }
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">iteration k</text>",
            (x0 + x1) / 2.0,
            y0 + 34.0
        );

        for (i, ser) in self.series.iter().enumerate() {
            let pts: Vec<(f64, f64)> = ser
                .values
                .iter()
                .enumerate()
                .filter(|(_, v)| v.is_finite())
                .map(|(k, &v)| (sx(k as f64), sy(v)))
                .collect();
            s.push_str(&polyline(&pts, colour(i), ser.dashed, 1.5));
            let ly = y1 + 14.0 * i as f64 + 8.0;
            let _ = writeln!(
                s,
                "<line x1=\"{}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{}\" stroke-width=\"2\"/>",
                x1 + 8.0,
                x1 + 28.0,
                colour(i)
            );
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\">{}</text>",
                x1 + 32.0,
                ly + 4.0,
                escape(&ser.label)
            );
        }
        if let (Some(k), Some(first)) = (self.marker, self.series.first()) {
            if let Some(&v) = first.values.get(k) {
                let _ = writeln!(
                    s,
                    "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"18\">*</text>",
                    sx(k as f64),
                    sy(v) + 6.0
                );
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Overlay of eigenvalues, polygons and level curves in the complex plane.
#[derive(Debug, Clone, Default)]
pub struct SetPlot {
    pub title: String,
    pub points: Vec<c64>,
    /// `(label, closed polylines, dashed)`.
    pub curves: Vec<(String, Vec<Vec<c64>>, bool)>,
}

impl SetPlot {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Self::default()
        }
    }

    pub fn add_curve(
        &mut self,
        label: impl Into<String>,
        loops: Vec<Vec<c64>>,
        dashed: bool,
    ) -> &mut Self {
        self.curves.push((label.into(), loops, dashed));
        self
    }

    pub fn to_svg(&self) -> String {
        let all = self
            .points
            .iter()
            .chain(self.curves.iter().flat_map(|c| c.1.iter().flatten()));
        let (mut lo, mut hi) = (
            c64::new(f64::INFINITY, f64::INFINITY),
            c64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for z in all.chain(std::iter::once(&c64::new(0.0, 0.0))) {
            lo = c64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = c64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12) * 1.1;
        let mid = (lo + hi) / 2.0;
        let (x0, x1, y0, y1) = (MARGIN, WIDTH - 150.0, HEIGHT - MARGIN, MARGIN);
        let side = (x1 - x0).min(y0 - y1);
        let cx = (x0 + x1) / 2.0;
        let cy = (y0 + y1) / 2.0;
        let map = |z: c64| {
            (
                cx + side * (z.re - mid.re) / span,
                cy - side * (z.im - mid.im) / span,
            )
        };

        let mut s = header(&self.title);
        let (ox, oy) = map(c64::new(0.0, 0.0));
        let _ = writeln!(
            s,
            "<line x1=\"{x0}\" y1=\"{oy:.2}\" x2=\"{x1}\" y2=\"{oy:.2}\" stroke=\"#bbb\"/>"
        );
        let _ = writeln!(
            s,
            "<line x1=\"{ox:.2}\" y1=\"{y1}\" x2=\"{ox:.2}\" y2=\"{y0}\" stroke=\"#bbb\"/>"
        );
        let _ = writeln!(
            s,
            "<text x=\"{x0}\" y=\"{}\">re [{:.3e}, {:.3e}], im [{:.3e}, {:.3e}]</text>",
            y0 + 20.0,
            mid.re - span / 2.0,
            mid.re + span / 2.0,
            mid.im - span / 2.0,
            mid.im + span / 2.0
        );
        for (i, (label, loops, dashed)) in self.curves.iter().enumerate() {
            for l in loops {
                let pts: Vec<(f64, f64)> = l.iter().map(|&z| map(z)).collect();
                s.push_str(&polyline(&pts, colour(i), *dashed, 1.2));
            }
            let ly = y1 + 14.0 * i as f64 + 8.0;
            let _ = writeln!(
                s,
                "<line x1=\"{}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{}\" stroke-width=\"2\"/>",
                x1 + 8.0,
                x1 + 28.0,
                colour(i)
            );
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\">{}</text>",
                x1 + 32.0,
                ly + 4.0,
                escape(label)
            );
        }
        for &z in &self.points {
            let (x, y) = map(z);
            let _ = writeln!(
                s,
                "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2\" fill=\"black\"/>"
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_escaped() {
        let mut p = ConvergencePlot::new("a < b & c");
        p.add("x<y", vec![1.0, 0.1, 0.01], false);
        let svg = p.to_svg();
        assert!(svg.contains("a &lt; b &amp; c"));
        assert!(svg.contains("x&lt;y"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
