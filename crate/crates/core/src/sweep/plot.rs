//! Bare single-axes SVG line plot of a sweep.

use std::fmt::Write as _;

use super::run::SweepResult;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) {
        format!("{v:.3e}")
    } else {
        format!("{v:.4}")
    }
}

pub fn render_svg(result: &SweepResult) -> String {
    let rows = &result.rows;
    let (x0, x1) = (result.config.grid.start, result.config.grid.stop);
    let values: Vec<f64> = rows.iter().filter_map(|r| r.value).collect();
    let (mut y0, mut y1) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !y0.is_finite() {
        (y0, y1) = (0.0, 1.0);
    }
    if y1 - y0 <= f64::EPSILON * y0.abs().max(1.0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    // Polylines break at undefined points.
    let mut segment: Vec<String> = Vec::new();
    let flush = |segment: &mut Vec<String>, svg: &mut String| {
        if segment.len() > 1 {
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
                segment.join(" ")
            );
        }
        segment.clear();
    };
    for row in rows {
        match row.value {
            Some(v) => segment.push(format!("{:.2},{:.2}", sx(row.axis), sy(v))),
            None => flush(&mut segment, &mut svg),
        }
    }
    flush(&mut segment, &mut svg);

    for row in rows.iter().filter(|r| r.flags.sector_crossing) {
        if let Some(v) = row.value {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="none" stroke="crimson"/>"#,
                sx(row.axis),
                sy(v)
            );
        }
    }

    let label = |svg: &mut String, x: f64, y: f64, anchor: &str, text: &str| {
        let _ = writeln!(
            svg,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{text}</text>"#
        );
    };
    label(&mut svg, MARGIN, HEIGHT - MARGIN + 16.0, "start", &fmt_tick(x0));
    label(&mut svg, WIDTH - MARGIN, HEIGHT - MARGIN + 16.0, "end", &fmt_tick(x1));
    label(&mut svg, MARGIN - 6.0, HEIGHT - MARGIN, "end", &fmt_tick(y0));
    label(&mut svg, MARGIN - 6.0, MARGIN + 10.0, "end", &fmt_tick(y1));
    label(&mut svg, WIDTH / 2.0, HEIGHT - 16.0, "middle", result.config.axis.name());
    let title = match &result.config.label {
        Some(l) => format!("{} ({l})", result.config.quantity.name()),
        None => result.config.quantity.name().to_string(),
    };
    label(&mut svg, WIDTH / 2.0, MARGIN - 16.0, "middle", &title);
    svg.push_str("</svg>\n");
    svg
}
