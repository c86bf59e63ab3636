//! Standalone SVG line chart of `j_soc` against `p`.

use std::fmt::Write;

use crate::format;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;

/// Vertical marker at penetration rate `p`.
pub struct Marker {
    pub p: f64,
    pub label: String,
}

/// Chart of `points` with vertical markers. Each marker line carries its
/// exact rate in a `data-p` attribute.
pub fn chart(title: &str, points: &[(f64, f64)], markers: &[Marker]) -> String {
    let (p_lo, p_hi) = span(points.iter().map(|p| p.0));
    let (j_lo, j_hi) = span(points.iter().map(|p| p.1));
    let x = |p: f64| MARGIN + (p - p_lo) / (p_hi - p_lo) * (WIDTH - 2.0 * MARGIN);
    let y = |j: f64| HEIGHT - MARGIN - (j - j_lo) / (j_hi - j_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{left:.2},{top:.2} L{left:.2},{bottom:.2} L{right:.2},{bottom:.2}" fill="none" stroke="black"/>"#
    );
    for (value, anchor_x, anchor_y, align) in [
        (p_lo, x(p_lo), bottom + 18.0, "middle"),
        (p_hi, x(p_hi), bottom + 18.0, "middle"),
        (j_lo, left - 6.0, y(j_lo) + 4.0, "end"),
        (j_hi, left - 6.0, y(j_hi) + 4.0, "end"),
    ] {
        let _ = writeln!(
            s,
            r#"<text x="{anchor_x:.2}" y="{anchor_y:.2}" text-anchor="{align}" font-family="sans-serif" font-size="11">{}</text>"#,
            format::human(value)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12">p</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 14 {:.2})">j_soc</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for m in markers {
        let mx = x(m.p);
        let _ = writeln!(
            s,
            r##"<line class="marker" data-p="{}" x1="{mx:.2}" y1="{top:.2}" x2="{mx:.2}" y2="{bottom:.2}" stroke="#c0392b" stroke-dasharray="4 3"/>"##,
            format::csv(m.p)
        );
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" fill="#c0392b">{}</text>"##,
            mx + 3.0,
            top + 10.0,
            escape(&m.label)
        );
    }
    let path: Vec<String> = points
        .iter()
        .map(|&(p, j)| format!("{:.2},{:.2}", x(p), y(j)))
        .collect();
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#1f4e79" stroke-width="1.5"/>"##,
        path.join(" ")
    );
    s.push_str("</svg>\n");
    s
}

/// Finite, nonempty range; a flat series gets a unit-width band.
fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-12 * (1.0 + lo.abs()) {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
