//! Minimal SVG charts: scatter, histogram, line with band, stacked bars.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 440.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 58.0;

pub const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

#[derive(Debug, Clone)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub log: bool,
    pub label: String,
}

impl Axis {
    pub fn linear(lo: f64, hi: f64, label: &str) -> Self {
        let (lo, hi) = if hi - lo > 0.0 {
            (lo, hi)
        } else {
            (lo - 0.5, lo + 0.5)
        };
        Self {
            lo,
            hi,
            log: false,
            label: label.into(),
        }
    }

    /// Padded linear range covering `values`.
    pub fn fit(values: impl IntoIterator<Item = f64>, label: &str) -> Self {
        let (lo, hi) = bounds(values);
        let pad = 0.05 * (hi - lo).max(1e-12);
        Self::linear(lo - pad, hi + pad, label)
    }

    /// Log range over whole decades covering the positive `values`.
    pub fn fit_log(values: impl IntoIterator<Item = f64>, label: &str) -> Self {
        let (lo, hi) = bounds(values.into_iter().filter(|v| *v > 0.0));
        let lo = if lo.is_finite() {
            lo.log10().floor()
        } else {
            -3.0
        };
        let hi = if hi.is_finite() {
            hi.log10().ceil().max(lo + 1.0)
        } else {
            0.0
        };
        Self {
            lo,
            hi,
            log: true,
            label: label.into(),
        }
    }

    fn t(&self, v: f64) -> f64 {
        let v = if self.log { v.max(1e-300).log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            return (self.lo as i32..=self.hi as i32)
                .map(|e| (10f64.powi(e), format!("1e{e}")))
                .collect();
        }
        let span = self.hi - self.lo;
        let raw = span / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let mut out = Vec::new();
        let mut v = (self.lo / step).ceil() * step;
        while v <= self.hi + 1e-9 * step {
            let shown = if v.abs() < 1e-12 * step { 0.0 } else { v };
            out.push((shown, fmt_num(shown)));
            v += step;
        }
        out
    }
}

fn bounds(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        })
}

fn fmt_num(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// A single chart; elements are drawn in data coordinates.
pub struct Plot {
    title: String,
    x: Axis,
    y: Axis,
    body: String,
    legend: Vec<(String, String)>,
}

impl Plot {
    pub fn new(title: &str, x: Axis, y: Axis) -> Self {
        Self {
            title: title.into(),
            x,
            y,
            body: String::new(),
            legend: Vec::new(),
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + self.x.t(x) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - self.y.t(y) * (H - TOP - BOTTOM)
    }

    fn path(&self, pts: &[(f64, f64)]) -> String {
        pts.iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn points(&mut self, pts: &[(f64, f64)], color: &str) {
        for &(x, y) in pts {
            let _ = writeln!(
                self.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}" fill-opacity="0.8"/>"#,
                self.px(x),
                self.py(y)
            );
        }
    }

    pub fn line(&mut self, pts: &[(f64, f64)], color: &str, dashed: bool) {
        let dash = if dashed {
            r#" stroke-dasharray="6,4""#
        } else {
            ""
        };
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#,
            self.path(pts)
        );
    }

    pub fn band(&mut self, xs: &[f64], lo: &[f64], hi: &[f64], color: &str) {
        let mut pts: Vec<(f64, f64)> = xs.iter().copied().zip(hi.iter().copied()).collect();
        pts.extend(xs.iter().copied().zip(lo.iter().copied()).rev());
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
            self.path(&pts)
        );
    }

    pub fn rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, color: &str) {
        let (a, b) = (self.px(x0), self.px(x1));
        let (c, d) = (self.py(y1), self.py(y0));
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}" stroke="white" stroke-width="0.5"/>"#,
            a.min(b),
            c.min(d),
            (b - a).abs(),
            (d - c).abs()
        );
    }

    pub fn legend(&mut self, name: &str, color: &str) {
        self.legend.push((name.into(), color.into()));
    }

    fn axes(&self, out: &mut String) {
        let (x0, x1) = (LEFT, W - RIGHT);
        let (y0, y1) = (H - BOTTOM, TOP);
        let _ = writeln!(
            out,
            r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        );
        for (v, label) in self.x.ticks() {
            let p = self.px(v);
            let _ = writeln!(
                out,
                r#"<line x1="{p:.2}" y1="{y0}" x2="{p:.2}" y2="{}" stroke="black"/>"#,
                y0 + 5.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{p:.2}" y="{}" text-anchor="middle" font-size="12">{label}</text>"#,
                y0 + 19.0
            );
        }
        for (v, label) in self.y.ticks() {
            let p = self.py(v);
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{p:.2}" x2="{x0}" y2="{p:.2}" stroke="black"/>"#,
                x0 - 5.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{:.2}" text-anchor="end" font-size="12">{label}</text>"#,
                x0 - 8.0,
                p + 4.0
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
            (x0 + x1) / 2.0,
            H - 14.0,
            esc(&self.x.label)
        );
        let _ = writeln!(
            out,
            r#"<text x="18" y="{0}" text-anchor="middle" font-size="14" transform="rotate(-90 18 {0})">{1}</text>"#,
            (y0 + y1) / 2.0,
            esc(&self.y.label)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="26" text-anchor="middle" font-size="15">{}</text>"#,
            W / 2.0,
            esc(&self.title)
        );
    }

    pub fn finish(self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif">"#
        );
        let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{}" height="{}"/></clipPath>"#,
            W - LEFT - RIGHT,
            H - TOP - BOTTOM
        );
        let _ = writeln!(out, r#"<g clip-path="url(#plot)">"#);
        out.push_str(&self.body);
        out.push_str("</g>\n");
        self.axes(&mut out);
        for (i, (name, color)) in self.legend.iter().enumerate() {
            let y = TOP + 14.0 + 18.0 * i as f64;
            let x = W - RIGHT - 150.0;
            let _ = writeln!(
                out,
                r#"<rect x="{x}" y="{}" width="12" height="12" fill="{color}"/>"#,
                y - 10.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{y}" font-size="12">{}</text>"#,
                x + 18.0,
                esc(name)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Log-log scatter with the `y = x` reference line.
pub fn scatter_loglog(pts: &[(f64, f64)], xlabel: &str, ylabel: &str, title: &str) -> String {
    let all = pts.iter().flat_map(|&(x, y)| [x, y]).collect::<Vec<_>>();
    let ax = Axis::fit_log(all.iter().copied(), xlabel);
    let ay = Axis {
        label: ylabel.into(),
        ..ax.clone()
    };
    let (lo, hi) = (10f64.powf(ax.lo), 10f64.powf(ax.hi));
    let mut p = Plot::new(title, ax, ay);
    p.line(&[(lo, lo), (hi, hi)], "#777777", true);
    let shown: Vec<_> = pts
        .iter()
        .copied()
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .collect();
    p.points(&shown, PALETTE[0]);
    p.finish()
}

pub fn histogram(values: &[f64], bins: usize, xlabel: &str, title: &str) -> String {
    let bins = bins.max(1);
    let (lo, hi) = bounds(values.iter().copied());
    let (lo, hi) = if lo.is_finite() && hi > lo {
        (lo, hi)
    } else if lo.is_finite() {
        (lo - 0.5, lo + 0.5)
    } else {
        (0.0, 1.0)
    };
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for v in values {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let top = *counts.iter().max().unwrap_or(&1) as f64;
    let mut p = Plot::new(
        title,
        Axis::linear(lo, hi, xlabel),
        Axis::linear(0.0, top.max(1.0) * 1.1, "count"),
    );
    for (k, &c) in counts.iter().enumerate() {
        let x0 = lo + k as f64 * width;
        p.rect(x0, 0.0, x0 + width, c as f64, PALETTE[0]);
    }
    p.finish()
}

pub struct Series<'a> {
    pub name: &'a str,
    pub xs: Vec<f64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

/// Lines with a ±std band, plus an optional dashed reference level.
pub fn line_with_band(
    series: &[Series],
    reference: Option<f64>,
    xlabel: &str,
    ylabel: &str,
    title: &str,
) -> String {
    let xs = series.iter().flat_map(|s| s.xs.iter().copied());
    let ys = series
        .iter()
        .flat_map(|s| s.mean.iter().zip(&s.std).flat_map(|(m, d)| [m - d, m + d]))
        .chain(reference);
    let ax = Axis::fit(xs, xlabel);
    let mut p = Plot::new(title, ax.clone(), Axis::fit(ys, ylabel));
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let lo: Vec<f64> = s.mean.iter().zip(&s.std).map(|(m, d)| m - d).collect();
        let hi: Vec<f64> = s.mean.iter().zip(&s.std).map(|(m, d)| m + d).collect();
        p.band(&s.xs, &lo, &hi, color);
        let pts: Vec<_> = s.xs.iter().copied().zip(s.mean.iter().copied()).collect();
        p.line(&pts, color, false);
        p.points(&pts, color);
        p.legend(s.name, color);
    }
    if let Some(r) = reference {
        p.line(&[(ax.lo, r), (ax.hi, r)], "black", true);
    }
    p.finish()
}

/// A named group of `(x, shares)` bars.
pub type Panel<'a> = (&'a str, Vec<(f64, Vec<f64>)>);

/// One stacked bar per `(x, shares)` entry, grouped side by side per
/// panel name.
pub fn stacked_bars(
    panels: &[Panel<'_>],
    stack_labels: &[String],
    xlabel: &str,
    title: &str,
) -> String {
    let xs: Vec<f64> = panels
        .iter()
        .flat_map(|(_, b)| b.iter().map(|(x, _)| *x))
        .collect();
    let (lo, hi) = bounds(xs.iter().copied());
    let (lo, hi) = if lo.is_finite() {
        (lo - 0.6, hi + 0.6)
    } else {
        (0.0, 1.0)
    };
    let mut p = Plot::new(
        title,
        Axis::linear(lo, hi, xlabel),
        Axis::linear(0.0, 1.0, "probability"),
    );
    let group = panels.len().max(1) as f64;
    let w = 0.8 / group;
    for (g, (_, bars)) in panels.iter().enumerate() {
        for (x, shares) in bars {
            let x0 = x - 0.4 + g as f64 * w;
            let mut acc = 0.0;
            for (k, s) in shares.iter().enumerate() {
                p.rect(x0, acc, x0 + w * 0.92, acc + s, PALETTE[k % PALETTE.len()]);
                acc += s;
            }
        }
    }
    for (k, l) in stack_labels.iter().enumerate() {
        p.legend(l, PALETTE[k % PALETTE.len()]);
    }
    let order = panels
        .iter()
        .map(|(n, _)| *n)
        .collect::<Vec<_>>()
        .join(" | ");
    let mut svg = p.finish();
    let note = format!(
        r#"<text x="{}" y="40" text-anchor="middle" font-size="11">bars left to right: {}</text>"#,
        W / 2.0,
        esc(&order)
    );
    svg.insert_str(svg.len() - "</svg>\n".len(), &format!("{note}\n"));
    svg
}

/// Scatter with the fitted line `y = slope·x + intercept`.
pub fn scatter_with_fit(
    pts: &[(f64, f64)],
    slope: f64,
    intercept: f64,
    xlabel: &str,
    ylabel: &str,
    title: &str,
) -> String {
    let ax = Axis::fit(pts.iter().map(|p| p.0), xlabel);
    let ys = pts
        .iter()
        .map(|p| p.1)
        .chain([slope * ax.lo + intercept, slope * ax.hi + intercept]);
    let mut p = Plot::new(title, ax.clone(), Axis::fit(ys, ylabel));
    p.line(
        &[
            (ax.lo, slope * ax.lo + intercept),
            (ax.hi, slope * ax.hi + intercept),
        ],
        PALETTE[1],
        false,
    );
    p.points(pts, PALETTE[0]);
    p.legend(
        &format!(
            "y = {}x {} {}",
            fmt_num(slope),
            if intercept < 0.0 { '-' } else { '+' },
            fmt_num(intercept.abs())
        ),
        PALETTE[1],
    );
    p.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charts_are_well_formed() {
        let svgs = [
            scatter_loglog(&[(0.1, 0.05), (0.2, 0.3)], "qaoa", "hqw", "gaps"),
            histogram(&[1.0, 2.0, 2.5, 9.0], 4, "improvement", "hist"),
            line_with_band(
                &[Series {
                    name: "a",
                    xs: vec![1.0, 2.0],
                    mean: vec![-1.0, -2.0],
                    std: vec![0.1, 0.2],
                }],
                Some(-3.0),
                "p",
                "E",
                "sweep",
            ),
            stacked_bars(
                &[("a", vec![(1.0, vec![0.2, 0.3])])],
                &["E1".into(), "E2".into()],
                "p",
                "proj",
            ),
            scatter_with_fit(&[(0.0, 1.0), (1.0, 3.0)], 2.0, 1.0, "x", "y", "fit"),
        ];
        for s in svgs {
            assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
            assert!(!s.contains("NaN"));
        }
    }

    #[test]
    fn ticks_cover_range() {
        let t = Axis::linear(0.0, 1.0, "").ticks();
        assert_eq!(t.first().unwrap().1, "0");
        assert_eq!(t.last().unwrap().1, "1");
        let l = Axis::fit_log([0.02, 0.3], "").ticks();
        assert_eq!(
            l.iter().map(|t| t.1.as_str()).collect::<Vec<_>>(),
            vec!["1e-2", "1e-1", "1e0"]
        );
    }
}
