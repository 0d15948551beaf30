//! Self-contained SVG line charts.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// One polyline, optionally with a shaded ± standard-error band.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    /// Half-width of the band at each point.
    pub band: Option<Vec<f64>>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
            band: None,
        }
    }

    pub fn with_band(mut self, band: Vec<f64>) -> Self {
        assert_eq!(band.len(), self.points.len(), "band must match points");
        self.band = Some(band);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
    /// Dashed horizontal reference line.
    pub reference_y: Option<f64>,
}

pub fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = if log { v.log10() } else { v };
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
            lo -= pad;
            hi += pad;
        }
        Self { lo, hi, log }
    }

    fn frac(&self, v: f64) -> Option<f64> {
        let v = if self.log { v.log10() } else { v };
        v.is_finite().then(|| (v - self.lo) / (self.hi - self.lo))
    }

    fn label(&self, i: usize) -> String {
        let t = self.lo + (self.hi - self.lo) * i as f64 / TICKS as f64;
        let v = if self.log { 10f64.powf(t) } else { t };
        let a = v.abs();
        if v == 0.0 || (1e-3..1e5).contains(&a) {
            let s = format!("{v:.3}");
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            format!("{v:.2e}")
        }
    }
}

impl LineChart {
    pub fn render(&self) -> String {
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let usable = |v: f64, log: bool| v.is_finite() && (!log || v > 0.0);
        let xs = self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
        let ys = self.series.iter().flat_map(|s| {
            s.points.iter().enumerate().flat_map(move |(i, p)| {
                let b = s.band.as_ref().map_or(0.0, |b| b[i]);
                [p.1 - b, p.1 + b]
            })
        });
        let x_axis = Axis::fit(xs.filter(|&v| usable(v, self.log_x)), self.log_x);
        let y_axis = Axis::fit(
            ys.chain(self.reference_y).filter(|&v| usable(v, self.log_y)),
            self.log_y,
        );
        let px = |x: f64| x_axis.frac(x).map(|f| LEFT + f * plot_w);
        let py = |y: f64| y_axis.frac(y).map(|f| TOP + (1.0 - f) * plot_h);

        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + plot_w / 2.0,
            escape_xml(&self.title)
        );
        // axes and ticks
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        );
        for i in 0..=TICKS {
            let f = i as f64 / TICKS as f64;
            let x = LEFT + f * plot_w;
            let y = TOP + (1.0 - f) * plot_h;
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#,
                TOP + plot_h,
                TOP + plot_h + 5.0,
                TOP + plot_h + 18.0,
                escape_xml(&x_axis.label(i))
            );
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 5.0,
                LEFT - 8.0,
                y + 4.0,
                escape_xml(&y_axis.label(i))
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 15.0,
            escape_xml(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{1}</text>"#,
            TOP + plot_h / 2.0,
            escape_xml(&self.y_label)
        );
        if let Some((y, true)) = self.reference_y.and_then(py).map(|y| (y, y >= TOP && y <= TOP + plot_h)) {
            let _ = writeln!(
                s,
                r#"<line x1="{LEFT}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
                LEFT + plot_w
            );
        }

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            if let Some(band) = &series.band {
                let upper: Vec<(f64, f64)> = series
                    .points
                    .iter()
                    .zip(band)
                    .filter_map(|(&(x, y), &b)| Some((px(x)?, py(y + b)?)))
                    .collect();
                let lower: Vec<(f64, f64)> = series
                    .points
                    .iter()
                    .zip(band)
                    .rev()
                    .filter_map(|(&(x, y), &b)| Some((px(x)?, py(y - b)?)))
                    .collect();
                if !upper.is_empty() && !lower.is_empty() {
                    let _ = writeln!(
                        s,
                        r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
                        points_attr(upper.iter().chain(&lower))
                    );
                }
            }
            let pts: Vec<(f64, f64)> = series.points.iter().filter_map(|&(x, y)| Some((px(x)?, py(y)?))).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"><title>{}</title></polyline>"#,
                points_attr(pts.iter()),
                escape_xml(&series.name)
            );
            let ly = TOP + 10.0 + 20.0 * i as f64;
            let lx = LEFT + plot_w + 15.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/><text x="{}" y="{}">{}</text>"#,
                lx + 20.0,
                lx + 26.0,
                ly + 4.0,
                escape_xml(&series.name)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn points_attr<'a>(pts: impl Iterator<Item = &'a (f64, f64)>) -> String {
    pts.map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(escape_xml("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }

    #[test]
    fn one_polyline_per_series() {
        let chart = LineChart {
            title: "t & u".into(),
            log_y: true,
            series: vec![
                Series::new("a", vec![(1.0, 1.0), (2.0, 10.0)]).with_band(vec![0.5, 1.0]),
                Series::new("b", vec![(1.0, 0.0), (2.0, 3.0)]),
            ],
            ..Default::default()
        };
        let svg = chart.render();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(svg.contains("t &amp; u"));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
