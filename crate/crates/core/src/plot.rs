//! Static SVG convergence plots: relative gap of the best value on a log
//! axis against iterates computed, with vertical restart markers.

use std::fmt::Write;

use crate::problem::relative_gap;
use crate::trace::TraceRecord;
use crate::{Error, Result};

/// Gaps at or below this value are drawn at this value.
pub const GAP_FLOOR: f64 = 1e-16;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

pub struct Series<'a> {
    pub label: &'a str,
    pub trace: &'a [TraceRecord],
}

fn log_gap(r: &TraceRecord, f_star: f64, f_slb: f64) -> f64 {
    relative_gap(r.f_best, f_star, f_slb).max(GAP_FLOOR).log10()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders one curve per series. Requires the certified `f*`.
pub fn render_svg(series: &[Series<'_>], f_star: Option<f64>, f_slb: f64) -> Result<String> {
    let f_star = f_star.ok_or(Error::MissingCertificate("f_star"))?;
    if !(f_star > f_slb) {
        return Err(Error::NotStrictLowerBound { f_slb, f_star });
    }
    let x_max = series
        .iter()
        .flat_map(|s| s.trace.iter().map(|r| r.iterate_count))
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let ys: Vec<f64> = series
        .iter()
        .flat_map(|s| s.trace.iter().map(|r| log_gap(r, f_star, f_slb)))
        .collect();
    let y_lo = ys.iter().copied().fold(f64::INFINITY, f64::min).floor().min(-1.0);
    let y_hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil().max(y_lo + 1.0);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + pw * x / x_max;
    let sy = |y: f64| TOP + ph * (y_hi - y) / (y_hi - y_lo);

    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<rect class="frame" x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let step = ((y_hi - y_lo) / 8.0).ceil().max(1.0) as i64;
    let mut e = y_lo as i64;
    while e as f64 <= y_hi {
        let y = sy(e as f64);
        let _ = writeln!(
            w,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{e}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            y + 4.0
        );
        e += step;
    }
    for k in 0..=4 {
        let xv = x_max * k as f64 / 4.0;
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(xv),
            TOP + ph + 18.0,
            xv.round()
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">iterates computed</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        w,
        r#"<text transform="translate(16 {:.2}) rotate(-90)" text-anchor="middle">(f_best - f*)/(f* - f_slb)</text>"#,
        TOP + ph / 2.0
    );

    for (idx, se) in series.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        for r in se.trace.iter().filter(|r| r.restart) {
            let x = sx(r.iterate_count as f64);
            let _ = writeln!(
                w,
                r#"<line class="restart" x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="{color}" stroke-dasharray="4 3" stroke-opacity="0.6"/>"#,
                TOP + ph
            );
        }
        // Best value so far is monotone in iterate count, so one point per
        // count (the last) suffices.
        let mut pts: Vec<(u64, f64)> = Vec::new();
        for r in se.trace {
            let y = log_gap(r, f_star, f_slb);
            match pts.last_mut() {
                Some(last) if last.0 == r.iterate_count => last.1 = last.1.min(y),
                _ => pts.push((r.iterate_count, y)),
            }
        }
        let path: Vec<String> = pts
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x as f64), sy(*y)))
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline class="curve" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        let ly = TOP + 16.0 + 18.0 * idx as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            w,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.2}" y2="{ly}" stroke="{color}" stroke-width="2"/><text class="legend" x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(se.label)
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::Stream;

    fn rec(count: u64, f_best: f64, restart: bool) -> TraceRecord {
        TraceRecord {
            outer: 1,
            inner: count as usize,
            stream: Stream::Single,
            iterate_count: count,
            f: f_best,
            f_best,
            restart,
            step: None,
            grad_norm: None,
        }
    }

    #[test]
    fn curves_markers_and_legend() {
        let a = vec![rec(0, 4.0, false), rec(1, 1.0, true), rec(2, 0.0, false)];
        let b = vec![rec(0, 4.0, false), rec(3, 2.0, false)];
        let svg = render_svg(
            &[
                Series { label: "a.csv", trace: &a },
                Series { label: "b<1>.csv", trace: &b },
            ],
            Some(0.0),
            -1.0,
        )
        .unwrap();
        assert_eq!(svg.matches("class=\"curve\"").count(), 2);
        assert_eq!(svg.matches("class=\"restart\"").count(), 1);
        assert!(svg.contains(">a.csv<"));
        assert!(svg.contains("b&lt;1&gt;.csv"));
        assert!(svg.contains("1e-16"));
    }

    #[test]
    fn needs_optimum() {
        assert!(matches!(render_svg(&[], None, 0.0), Err(Error::MissingCertificate(_))));
    }
}
