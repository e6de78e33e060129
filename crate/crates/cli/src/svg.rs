//! Self-contained SVG line plots of a [`Table`].
//!
//! The picture depends only on the table contents, so a table read back from
//! CSV renders to the same bytes as the original.

use std::fmt::Write;

use crate::table::Table;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

/// Dash patterns: `None` is a solid line.
const SOLID: Option<&str> = None;
const DOTTED: Option<&str> = Some("2,3");
const DASHED: Option<&str> = Some("8,4");
const SHORT_DASH: Option<&str> = Some("4,3");
const LONG_DASH: Option<&str> = Some("12,4");

/// Line styles for `n` series: one solid line; solid then dotted for two;
/// dashed, dotted, solid for three; dotted, short-dashed, long-dashed, solid
/// for four. Larger plots cycle through all five patterns.
pub fn line_styles(n: usize) -> Vec<Option<&'static str>> {
    match n {
        0 => vec![],
        1 => vec![SOLID],
        2 => vec![SOLID, DOTTED],
        3 => vec![DASHED, DOTTED, SOLID],
        4 => vec![DOTTED, SHORT_DASH, LONG_DASH, SOLID],
        _ => [SOLID, DASHED, DOTTED, SHORT_DASH, LONG_DASH].iter().cycle().take(n).copied().collect(),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Renders every series of `table` against the fidelity column.
pub fn render(table: &Table) -> String {
    let (x0, x1) = range(table.fidelity.iter().copied());
    let (y0, y1) = range(table.rows.iter().flatten().copied());
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#).unwrap();

    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let (px, py) = (sx(xv), sy(yv));
        writeln!(s, r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, TOP + ph, TOP + ph + 5.0).unwrap();
        writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.3}</text>"#, TOP + ph + 18.0).unwrap();
        writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/>"#, LEFT - 5.0).unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.3}</text>"#, LEFT - 8.0, py + 4.0).unwrap();
    }
    writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">F</text>"#, LEFT + pw / 2.0, HEIGHT - 10.0).unwrap();
    writeln!(
        s,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">value</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    )
    .unwrap();

    let styles = line_styles(table.columns.len());
    for (j, name) in table.columns.iter().enumerate() {
        let mut d = String::new();
        let mut pen_down = false;
        for (f, v) in table.series(j) {
            if !v.is_finite() {
                pen_down = false;
                continue;
            }
            let cmd = if pen_down { 'L' } else { 'M' };
            write!(d, "{cmd}{:.2},{:.2} ", sx(f), sy(v)).unwrap();
            pen_down = true;
        }
        let dash = styles[j].map(|p| format!(r#" stroke-dasharray="{p}""#)).unwrap_or_default();
        writeln!(s, r#"<path d="{}" fill="none" stroke="black" stroke-width="1.5"{dash}><title>{}</title></path>"#, d.trim_end(), escape(name)).unwrap();
    }

    // legend
    let lx = LEFT + 10.0;
    for (j, name) in table.columns.iter().enumerate() {
        let ly = TOP + 16.0 + 16.0 * j as f64;
        let dash = styles[j].map(|p| format!(r#" stroke-dasharray="{p}""#)).unwrap_or_default();
        writeln!(s, r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1.5"{dash}/>"#, ly - 4.0, lx + 30.0, ly - 4.0).unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#, lx + 36.0, escape(name)).unwrap();
    }
    s.push_str("</svg>\n");
    s
}
