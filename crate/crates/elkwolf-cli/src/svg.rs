//! Hand-rolled standalone SVG rendering: line/marker series, classified
//! parameter-plane grids, and grouped bar charts, each with axes, tick
//! labels, and a legend. No external assets; white background throughout.

use elkwolf::scan::{CellClass, ScanGrid};

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 560.0;
const LEFT: f64 = 72.0;
const RIGHT_PAD: f64 = 168.0;
const TOP: f64 = 42.0;
const BOTTOM_PAD: f64 = 58.0;

/// One named polyline (or single marker) in a series plot. With `markers`
/// set the points render as individual dots instead of a connected line.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
    pub markers: bool,
}

impl Series {
    pub fn line(name: &str, color: &'static str, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.to_owned(), color, points, markers: false }
    }

    pub fn scatter(name: &str, color: &'static str, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.to_owned(), color, points, markers: true }
    }
}

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        LEFT + (v - self.x_lo) / (self.x_hi - self.x_lo) * (WIDTH - LEFT - RIGHT_PAD)
    }

    fn y(&self, v: f64) -> f64 {
        let h = HEIGHT - TOP - BOTTOM_PAD;
        HEIGHT - BOTTOM_PAD - (v - self.y_lo) / (self.y_hi - self.y_lo) * h
    }
}

fn pad_range(lo: f64, hi: f64) -> (f64, f64) {
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

/// Tick positions on a 1-2-5 grid covering `[lo, hi]`, with their decimals.
fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let raw = (hi - lo) / 5.0;
    let magnitude = 10f64.powf(raw.abs().log10().floor());
    let residual = raw / magnitude;
    let step = magnitude
        * if residual > 5.0 {
            10.0
        } else if residual > 2.0 {
            5.0
        } else if residual > 1.0 {
            2.0
        } else {
            1.0
        };
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let mut positions = Vec::new();
    let mut tick = (lo / step).ceil() * step;
    while tick <= hi + step * 1e-9 {
        positions.push(tick);
        tick += step;
    }
    (positions, decimals)
}

fn fmt_tick(value: f64, decimals: usize) -> String {
    let text = format!("{value:.decimals$}");
    // Avoid the negative-zero label.
    if text.starts_with('-') && text.trim_matches(|c| c == '-' || c == '0' || c == '.').is_empty() {
        text[1..].to_owned()
    } else {
        text
    }
}

fn open_svg(out: &mut String, title: &str) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        (LEFT + WIDTH - RIGHT_PAD) / 2.0,
        escape(title)
    ));
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let (x0, x1) = (LEFT, WIDTH - RIGHT_PAD);
    let (y0, y1) = (HEIGHT - BOTTOM_PAD, TOP);
    out.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    ));
    let (xticks, xdec) = ticks(frame.x_lo, frame.x_hi);
    for t in xticks {
        let px = frame.x(t);
        out.push_str(&format!(
            "<line x1=\"{px:.1}\" y1=\"{y0}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n\
             <text x=\"{px:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            y0 + 5.0,
            y0 + 18.0,
            fmt_tick(t, xdec)
        ));
    }
    let (yticks, ydec) = ticks(frame.y_lo, frame.y_hi);
    for t in yticks {
        let py = frame.y(t);
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{x0}\" y2=\"{py:.1}\" stroke=\"black\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0,
            fmt_tick(t, ydec)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 16.0,
        escape(x_label)
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.1})\">{}</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    ));
}

fn legend_entry(out: &mut String, slot: usize, color: &str, label: &str, marker_class: &str) {
    let x = WIDTH - RIGHT_PAD + 18.0;
    let y = TOP + 14.0 + slot as f64 * 22.0;
    out.push_str(&format!(
        "<rect class=\"{marker_class}\" x=\"{x:.1}\" y=\"{:.1}\" width=\"14\" height=\"14\" \
         fill=\"{color}\" stroke=\"black\" stroke-width=\"0.5\"/>\n\
         <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">{}</text>\n",
        y - 11.0,
        x + 20.0,
        y,
        escape(label)
    ));
}

/// Line plot of one or more series. A series with a single point renders as
/// one circular marker; longer series render as polylines. `vline` draws a
/// labeled dashed vertical rule (e.g. a located bifurcation value).
pub fn series_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    vline: Option<(f64, &str)>,
) -> Result<String, String> {
    if series.iter().all(|s| s.points.is_empty()) {
        return Err("nothing to plot: every series is empty".into());
    }
    let finite = |f: fn(&(f64, f64)) -> f64| {
        series
            .iter()
            .flat_map(move |s| s.points.iter().map(f))
            .filter(|v| v.is_finite())
    };
    let x_lo = finite(|p| p.0).fold(f64::INFINITY, f64::min);
    let x_hi = finite(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let y_lo = finite(|p| p.1).fold(f64::INFINITY, f64::min);
    let y_hi = finite(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    if !x_lo.is_finite() || !y_lo.is_finite() {
        return Err("nothing to plot: no finite points".into());
    }
    let (x_lo, x_hi) = pad_range(x_lo, vline.map_or(x_hi, |(v, _)| x_hi.max(v)));
    let (y_lo, y_hi) = pad_range(y_lo, y_hi);
    let frame = Frame { x_lo, x_hi, y_lo, y_hi };

    let mut out = String::new();
    open_svg(&mut out, title);
    axes(&mut out, &frame, x_label, y_label);
    for (slot, s) in series.iter().enumerate() {
        if s.points.len() == 1 {
            let (x, y) = s.points[0];
            out.push_str(&format!(
                "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"{}\"/>\n",
                frame.x(x),
                frame.y(y),
                s.color
            ));
        } else if s.markers {
            for (x, y) in &s.points {
                out.push_str(&format!(
                    "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"2\" fill=\"{}\"/>\n",
                    frame.x(*x),
                    frame.y(*y),
                    s.color
                ));
            }
        } else if !s.points.is_empty() {
            let coords: Vec<String> = s
                .points
                .iter()
                .map(|(x, y)| format!("{:.1},{:.1}", frame.x(*x), frame.y(*y)))
                .collect();
            out.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                s.color,
                coords.join(" ")
            ));
        }
        legend_entry(&mut out, slot, s.color, &s.name, "legend");
    }
    if let Some((value, label)) = vline {
        let px = frame.x(value);
        out.push_str(&format!(
            "<line x1=\"{px:.1}\" y1=\"{:.1}\" x2=\"{px:.1}\" y2=\"{TOP}\" stroke=\"black\" \
             stroke-dasharray=\"5 4\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\">{}</text>\n",
            HEIGHT - BOTTOM_PAD,
            px + 4.0,
            TOP + 12.0,
            escape(label)
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn class_color(class: CellClass) -> &'static str {
    match class {
        CellClass::Absent => "white",
        CellClass::Stable => "red",
        CellClass::Unstable => "blue",
        CellClass::Marginal => "black",
    }
}

/// Classified parameter-plane grid; one filled rectangle per cell, colored
/// white/red/blue for Absent/Stable/Unstable (black for Marginal).
pub fn grid_plot(title: &str, grid: &ScanGrid) -> Result<String, String> {
    if grid.cells.is_empty() {
        return Err("nothing to plot: the grid has no cells".into());
    }
    let (nx, ny) = (grid.x_axis.resolution, grid.y_axis.resolution);
    let frame = Frame {
        x_lo: grid.x_axis.lo,
        x_hi: grid.x_axis.hi,
        y_lo: grid.y_axis.lo,
        y_hi: grid.y_axis.hi,
    };
    let cell_w = (WIDTH - LEFT - RIGHT_PAD) / nx as f64;
    let cell_h = (HEIGHT - TOP - BOTTOM_PAD) / ny as f64;

    let mut out = String::new();
    open_svg(&mut out, title);
    for (idx, cell) in grid.cells.iter().enumerate() {
        let (ix, iy) = (idx % nx, idx / nx);
        let px = LEFT + ix as f64 * cell_w;
        let py = HEIGHT - BOTTOM_PAD - (iy + 1) as f64 * cell_h;
        out.push_str(&format!(
            "<rect class=\"cell\" x=\"{px:.2}\" y=\"{py:.2}\" width=\"{cell_w:.2}\" \
             height=\"{cell_h:.2}\" fill=\"{}\"/>\n",
            class_color(cell.class)
        ));
    }
    axes(&mut out, &frame, &grid.x_axis.name, &grid.y_axis.name);
    let mut classes = vec![CellClass::Absent, CellClass::Stable, CellClass::Unstable];
    if grid.cells.iter().any(|c| c.class == CellClass::Marginal) {
        classes.push(CellClass::Marginal);
    }
    for (slot, class) in classes.iter().enumerate() {
        legend_entry(&mut out, slot, class_color(*class), class.label(), "legend");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Grouped bar chart: one group per row label, one bar per column, values
/// on a symmetric axis when negatives are present.
pub fn bar_chart(
    title: &str,
    y_label: &str,
    columns: &[(&str, &'static str)],
    groups: &[(String, Vec<f64>)],
) -> Result<String, String> {
    if groups.is_empty() || columns.is_empty() {
        return Err("nothing to plot: no bars".into());
    }
    let all = groups.iter().flat_map(|(_, vs)| vs.iter().copied());
    let lo = all.clone().fold(0.0f64, f64::min);
    let hi = all.fold(0.0f64, f64::max);
    let (y_lo, y_hi) = pad_range(lo.min(0.0), hi.max(0.0));
    let frame = Frame { x_lo: 0.0, x_hi: groups.len() as f64, y_lo, y_hi };

    let mut out = String::new();
    open_svg(&mut out, title);
    let group_w = (WIDTH - LEFT - RIGHT_PAD) / groups.len() as f64;
    let bar_w = group_w * 0.8 / columns.len() as f64;
    let zero = frame.y(0.0);
    for (g, (label, values)) in groups.iter().enumerate() {
        for (c, value) in values.iter().enumerate() {
            let px = LEFT + g as f64 * group_w + group_w * 0.1 + c as f64 * bar_w;
            let py = frame.y(*value);
            let (top, height) = if py <= zero { (py, zero - py) } else { (zero, py - zero) };
            out.push_str(&format!(
                "<rect class=\"bar\" x=\"{px:.2}\" y=\"{top:.2}\" width=\"{bar_w:.2}\" \
                 height=\"{height:.2}\" fill=\"{}\"/>\n",
                columns[c].1
            ));
        }
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            LEFT + (g as f64 + 0.5) * group_w,
            HEIGHT - BOTTOM_PAD + 18.0,
            escape(label)
        ));
    }
    // Zero line over the bars, then the y axis and ticks.
    out.push_str(&format!(
        "<line x1=\"{LEFT}\" y1=\"{zero:.1}\" x2=\"{:.1}\" y2=\"{zero:.1}\" stroke=\"black\"/>\n",
        WIDTH - RIGHT_PAD
    ));
    let (yticks, ydec) = ticks(y_lo, y_hi);
    out.push_str(&format!(
        "<line x1=\"{LEFT}\" y1=\"{:.1}\" x2=\"{LEFT}\" y2=\"{TOP}\" stroke=\"black\"/>\n",
        HEIGHT - BOTTOM_PAD
    ));
    for t in yticks {
        let py = frame.y(t);
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{LEFT}\" y2=\"{py:.1}\" stroke=\"black\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            fmt_tick(t, ydec)
        ));
    }
    out.push_str(&format!(
        "<text x=\"18\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.1})\">{}</text>\n",
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    ));
    for (slot, (name, color)) in columns.iter().enumerate() {
        legend_entry(&mut out, slot, color, name, "legend");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
