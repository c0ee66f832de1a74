//! Static SVG plots: per-cluster parallel coordinates and the elbow curve.

use std::fmt::Write;

use fabrik::bench::ElbowPoint;
use fabrik::eval::LabeledDataset;

const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];
const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 220.0;
const MARGIN: f64 = 36.0;

struct Frame {
    x0: f64,
    y0: f64,
    xr: (f64, f64),
    yr: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.x0 + MARGIN + (x - self.xr.0) / span(self.xr) * (PANEL_W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        self.y0 + PANEL_H - MARGIN - (y - self.yr.0) / span(self.yr) * (PANEL_H - 2.0 * MARGIN)
    }

    fn axes(&self, out: &mut String, title: &str) {
        let (l, r) = (self.x0 + MARGIN, self.x0 + PANEL_W - MARGIN);
        let (t, b) = (self.y0 + MARGIN, self.y0 + PANEL_H - MARGIN);
        let _ = writeln!(
            out,
            r##"<rect x="{l:.2}" y="{t:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#999"/>"##,
            r - l,
            b - t
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{title}</text>"#,
            (l + r) / 2.0,
            t - 10.0
        );
        for (v, anchor, x, y) in [(self.xr.0, "start", l, b + 16.0), (self.xr.1, "end", r, b + 16.0)] {
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}">{}</text>"#,
                tick(v)
            );
        }
        for (v, y) in [(self.yr.0, b), (self.yr.1, t + 8.0)] {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{y:.2}" text-anchor="end">{}</text>"#,
                l - 4.0,
                tick(v)
            );
        }
    }
}

fn span(r: (f64, f64)) -> f64 {
    if r.1 > r.0 {
        r.1 - r.0
    } else {
        1.0
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Polylines through consecutive finite points; a missing value breaks the line.
fn polylines(out: &mut String, frame: &Frame, xs: &[f64], ys: &[f64], style: &str) {
    let mut current: Vec<String> = Vec::new();
    let flush = |pts: &mut Vec<String>, out: &mut String| {
        if pts.len() > 1 {
            let _ = writeln!(out, r#"<polyline points="{}" {style}/>"#, pts.join(" "));
        }
        pts.clear();
    };
    for (&x, &y) in xs.iter().zip(ys) {
        if y.is_finite() {
            current.push(format!("{:.2},{:.2}", frame.px(x), frame.py(y)));
        } else {
            flush(&mut current, out);
        }
    }
    flush(&mut current, out);
}

fn header(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\" font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// One panel per cluster: member curves drawn thin, the cluster mean curve
/// (observed cells only) drawn heavy on top. Panels share the vertical scale.
pub fn parallel_coordinates(ds: &LabeledDataset, labels: &[usize], k: usize) -> String {
    let grid = ds.grid.points();
    let d = grid.len();
    let observed = |i: usize, j: usize| ds.mask.as_ref().is_none_or(|m| m.is_observed(i, j));
    let value = |i: usize, j: usize| if observed(i, j) { ds.data.get(i, j) } else { f64::NAN };
    let yr = range(
        (0..ds.data.nrows())
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| value(i, j)),
    );
    let xr = (grid[0], grid[d - 1]);
    let cols = k.clamp(1, 4);
    let rows = k.div_ceil(cols).max(1);
    let mut out = header(PANEL_W * cols as f64, PANEL_H * rows as f64);

    for c in 0..k {
        let frame = Frame {
            x0: PANEL_W * (c % cols) as f64,
            y0: PANEL_H * (c / cols) as f64,
            xr,
            yr,
        };
        let members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == c).collect();
        frame.axes(&mut out, &format!("cluster {} (n = {})", c + 1, members.len()));
        let colour = PALETTE[c % PALETTE.len()];
        let thin = format!(r#"fill="none" stroke="{colour}" stroke-opacity="0.35" stroke-width="0.8""#);
        for &i in &members {
            let ys: Vec<f64> = (0..d).map(|j| value(i, j)).collect();
            polylines(&mut out, &frame, grid, &ys, &thin);
        }
        let centre: Vec<f64> = (0..d)
            .map(|j| {
                let vals: Vec<f64> = members.iter().map(|&i| value(i, j)).filter(|v| v.is_finite()).collect();
                if vals.is_empty() {
                    f64::NAN
                } else {
                    vals.iter().sum::<f64>() / vals.len() as f64
                }
            })
            .collect();
        polylines(
            &mut out,
            &frame,
            grid,
            &centre,
            r#"fill="none" stroke="black" stroke-width="2.5""#,
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Distortion against df, with the suggested knee circled.
pub fn elbow_plot(curve: &[ElbowPoint], knee: Option<usize>) -> String {
    let xs: Vec<f64> = curve.iter().map(|p| p.df as f64).collect();
    let ys: Vec<f64> = curve.iter().map(|p| p.distortion).collect();
    let frame = Frame {
        x0: 0.0,
        y0: 0.0,
        xr: range(xs.iter().copied()),
        yr: range(ys.iter().copied()),
    };
    let mut out = header(PANEL_W, PANEL_H);
    frame.axes(&mut out, "distortion against df");
    polylines(
        &mut out,
        &frame,
        &xs,
        &ys,
        r##"fill="none" stroke="#1b9e77" stroke-width="1.5""##,
    );
    for p in curve {
        let r = if Some(p.df) == knee { 4.0 } else { 2.0 };
        let fill = if Some(p.df) == knee { "#d95f02" } else { "#1b9e77" };
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{fill}"/>"#,
            frame.px(p.df as f64),
            frame.py(p.distortion)
        );
    }
    out.push_str("</svg>\n");
    out
}
