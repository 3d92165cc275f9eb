//! File emitters: JSON documents `{meta, rows}`, CSV tables, and two plain SVG
//! plots. All output is a pure function of its input, so repeated runs are
//! byte-identical.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

use crate::harness::{ErrorTable, TableMeta, Trend};

/// JSON formatter printing every float with 17 significant digits.
struct Precise;

impl Formatter for Precise {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", format_f64(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// `value` with 17 significant digits, or `null` when not finite.
pub fn format_f64(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.16e}")
    } else {
        "null".into()
    }
}

/// Writes `value` as compact JSON with [`format_f64`] numbers and a trailing newline.
pub fn write_json<T: Serialize + ?Sized, W: Write>(mut w: W, value: &T) -> io::Result<()> {
    let mut ser = Serializer::with_formatter(&mut w, Precise);
    value.serialize(&mut ser).map_err(io::Error::other)?;
    writeln!(w)
}

#[derive(Serialize)]
struct Document<'a, M: Serialize, R: Serialize> {
    meta: &'a M,
    rows: &'a [R],
}

/// Writes the document `{meta, rows}`.
pub fn write_document<M: Serialize, R: Serialize, W: Write>(w: W, meta: &M, rows: &[R]) -> io::Result<()> {
    write_json(w, &Document { meta, rows })
}

#[derive(Serialize)]
struct TableHeader<'a> {
    #[serde(flatten)]
    meta: &'a TableMeta,
    all_decreasing: bool,
    trends: &'a [Trend],
}

/// An error table as `{meta, rows}`, with the trend flags in `meta`.
pub fn write_table_json<W: Write>(w: W, table: &ErrorTable) -> io::Result<()> {
    let header = TableHeader { meta: &table.meta, all_decreasing: table.all_decreasing(), trends: &table.trends };
    write_document(w, &header, &table.rows)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

/// One line per row: `len,quantity,error,discrete,reference`.
pub fn write_table_csv<W: Write>(mut w: W, table: &ErrorTable) -> io::Result<()> {
    writeln!(w, "len,quantity,error,discrete,reference")?;
    for r in &table.rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.len,
            csv_field(&r.quantity),
            format_f64(r.error),
            csv_opt(r.discrete),
            csv_opt(r.reference)
        )?;
    }
    Ok(())
}

/// Trend summary: `quantity,first,last,exact,decreasing`.
pub fn write_trends_csv<W: Write>(mut w: W, table: &ErrorTable) -> io::Result<()> {
    writeln!(w, "quantity,first,last,exact,decreasing")?;
    for t in &table.trends {
        let first = t.errors.first().copied().unwrap_or(f64::NAN);
        let last = t.errors.last().copied().unwrap_or(f64::NAN);
        writeln!(
            w,
            "{},{},{},{},{}",
            csv_field(&t.quantity),
            format_f64(first),
            format_f64(last),
            t.exact,
            t.decreasing
        )?;
    }
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Piecewise-linear dark-blue to yellow ramp on `t ∈ [0, 1]`.
pub fn colour(t: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 5] = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.25, [59.0, 82.0, 139.0]),
        (0.5, [33.0, 145.0, 140.0]),
        (0.75, [94.0, 201.0, 98.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let i = STOPS.iter().position(|s| s.0 >= t).unwrap_or(4).max(1);
    let (t0, c0) = STOPS[i - 1];
    let (t1, c1) = STOPS[i];
    let u = (t - t0) / (t1 - t0);
    let c: Vec<u8> = (0..3).map(|j| (c0[j] + u * (c1[j] - c0[j])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// A value at a point of the plane, drawn as a square of side `size`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub title: String,
    pub cells: Vec<Cell>,
    /// Side of each square, in plane units.
    pub size: f64,
    /// Colour by `log10` of the value.
    pub log: bool,
}

const MARGIN: f64 = 40.0;

/// SVG heatmap, `y` pointing up, with a colour bar on the right.
pub fn heatmap_svg(map: &Heatmap) -> String {
    let key = |v: f64| if map.log { v.max(1e-300).log10() } else { v };
    let finite: Vec<&Cell> = map.cells.iter().filter(|c| c.value.is_finite()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in &finite {
        x0 = x0.min(c.x);
        x1 = x1.max(c.x);
        y0 = y0.min(c.y);
        y1 = y1.max(c.y);
        lo = lo.min(key(c.value));
        hi = hi.max(key(c.value));
    }
    if finite.is_empty() {
        (x0, x1, y0, y1, lo, hi) = (0.0, 1.0, 0.0, 1.0, 0.0, 1.0);
    }
    let (w, h) = (x1 - x0 + map.size, y1 - y0 + map.size);
    // fit the longer side to 480 px
    let scale = 480.0 / w.max(h);
    let (pw, ph) = (w * scale, h * scale);
    let width = pw + 2.0 * MARGIN + 70.0;
    let height = ph + 2.0 * MARGIN;
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{:.1}" font-family="sans-serif" font-size="14">{}</text>"#,
        MARGIN - 12.0,
        escape(&map.title)
    );
    for c in &finite {
        let px = MARGIN + (c.x - x0) * scale;
        let py = MARGIN + (y1 - c.y) * scale;
        let side = map.size * scale;
        let _ = writeln!(
            s,
            r#"<rect x="{px:.2}" y="{py:.2}" width="{side:.2}" height="{side:.2}" fill="{}"/>"#,
            colour((key(c.value) - lo) / span)
        );
    }
    // colour bar
    let bx = MARGIN + pw + 20.0;
    for i in 0..64 {
        let t = i as f64 / 63.0;
        let y = MARGIN + ph * (1.0 - (i + 1) as f64 / 64.0);
        let _ = writeln!(
            s,
            r#"<rect x="{bx:.1}" y="{y:.2}" width="14" height="{:.2}" fill="{}"/>"#,
            ph / 64.0 + 0.5,
            colour(t)
        );
    }
    let label = |v: f64| if map.log { format!("1e{v:.1}") } else { format!("{v:.3e}") };
    for (v, y) in [(hi, MARGIN + 10.0), (lo, MARGIN + ph)] {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{y:.1}" font-family="sans-serif" font-size="10">{}</text>"#,
            bx + 18.0,
            label(v)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// A named polyline of positive `(x, y)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

/// Log-log line plot with decade grid lines and a legend.
pub fn loglog_svg(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let pts = || series.iter().flat_map(|s| s.points.iter()).filter(|(x, y)| *x > 0.0 && *y > 0.0);
    let (mut lx0, mut lx1, mut ly0, mut ly1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts() {
        lx0 = lx0.min(x.log10());
        lx1 = lx1.max(x.log10());
        ly0 = ly0.min(y.log10());
        ly1 = ly1.max(y.log10());
    }
    if !lx0.is_finite() {
        (lx0, lx1, ly0, ly1) = (0.0, 1.0, 0.0, 1.0);
    }
    let (lx0, lx1) = (lx0.floor(), lx1.ceil().max(lx0.floor() + 1.0));
    let (ly0, ly1) = (ly0.floor(), ly1.ceil().max(ly0.floor() + 1.0));
    let (pw, ph) = (480.0, 320.0);
    let (left, top) = (70.0, 40.0);
    let width = left + pw + 170.0;
    let height = top + ph + 50.0;
    let px = |x: f64| left + (x.log10() - lx0) / (lx1 - lx0) * pw;
    let py = |y: f64| top + (ly1 - y.log10()) / (ly1 - ly0) * ph;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{left}" y="24" font-family="sans-serif" font-size="14">{}</text>"#, escape(title));
    let _ = writeln!(s, r##"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##);
    for d in (lx0 as i32)..=(lx1 as i32) {
        let x = px(10f64.powi(d));
        let _ = writeln!(
            s,
            r##"<line x1="{x:.1}" y1="{top}" x2="{x:.1}" y2="{:.1}" stroke="#ddd"/><text x="{x:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="middle">1e{d}</text>"##,
            top + ph,
            top + ph + 14.0
        );
    }
    for d in (ly0 as i32)..=(ly1 as i32) {
        let y = py(10f64.powi(d));
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="end">1e{d}</text>"##,
            left + pw,
            left - 6.0,
            y + 3.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        left + pw / 2.0,
        top + ph + 34.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        top + ph / 2.0,
        top + ph / 2.0,
        escape(y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let c = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = ser
            .points
            .iter()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0)
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="1.5"/>"#, path.join(" "));
        for p in &path {
            let (x, y) = p.split_once(',').unwrap();
            let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="2.5" fill="{c}"/>"#);
        }
        let ly = top + 12.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{c}" stroke-width="2"/><text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{}</text>"#,
            left + pw + 12.0,
            left + pw + 32.0,
            left + pw + 38.0,
            ly + 4.0,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// One series per trend of `table`, error against width.
pub fn table_series(table: &ErrorTable) -> Vec<Series> {
    table
        .trends
        .iter()
        .map(|t| {
            let points =
                table.rows.iter().filter(|r| r.quantity == t.quantity).map(|r| (r.len as f64, r.error)).collect();
            Series { label: t.quantity.clone(), points }
        })
        .collect()
}
