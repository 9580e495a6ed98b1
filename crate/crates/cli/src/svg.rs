//! Static SVG figure of a symmetrization: directions, tangent images and the
//! reflected figure, in the tangent plane at the point.

use std::fmt::Write;

use ftquad::config::{AngularConfig, Vertex};
use ftquad::symmetry::ParallelogramReport;

const LABELS: [&str; 4] = ["A", "B", "C", "D"];

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// SVG y grows downwards; the figure keeps the mathematical orientation.
fn pt(p: [f64; 2]) -> (String, String) {
    (num(p[0]), num(-p[1]))
}

pub fn symmetrization_figure(cfg: &AngularConfig, report: &ParallelogramReport) -> String {
    let image = report.image.points;
    let figure = report.reflected_points;
    let reach = image.iter().chain(figure.iter()).map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
    let ray = 1.15 * reach;
    let rays: Vec<[f64; 2]> = Vertex::ALL
        .iter()
        .map(|v| {
            let t = cfg.directions().get(*v) + cfg.orientation();
            [ray * t.cos(), ray * t.sin()]
        })
        .collect();

    let all: Vec<[f64; 2]> =
        rays.iter().chain(image.iter()).chain(figure.iter()).copied().chain([[0.0, 0.0]]).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in &all {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(-p[1]);
        y1 = y1.max(-p[1]);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let margin = 0.05 * span;
    let legend_h = 0.22 * span;
    let (vx, vy, vw, vh) = (x0 - margin, y0 - margin, x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin + legend_h);
    let stroke = 0.004 * span;
    let font = 0.035 * span;

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="600" height="{}">"#,
        num(vx),
        num(vy),
        num(vw),
        num(vh),
        (600.0 * vh / vw).round()
    )
    .unwrap();
    writeln!(s, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#, num(vx), num(vy), num(vw), num(vh))
        .unwrap();

    writeln!(s, r##"<g id="arcs" stroke="#1f77b4" stroke-width="{}" fill="none">"##, num(stroke)).unwrap();
    for (i, r) in rays.iter().enumerate() {
        let (x, y) = pt(*r);
        writeln!(s, r#"<line x1="0.000000" y1="0.000000" x2="{x}" y2="{y}"/>"#).unwrap();
        writeln!(
            s,
            r##"<text x="{x}" y="{y}" font-size="{}" fill="#1f77b4" stroke="none">{}</text>"##,
            num(font),
            LABELS[i]
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();

    writeln!(
        s,
        r##"<g id="tangent-images" stroke="#2ca02c" stroke-width="{}" stroke-dasharray="{} {}" fill="none">"##,
        num(stroke),
        num(4.0 * stroke),
        num(3.0 * stroke)
    )
    .unwrap();
    for (i, p) in image.iter().enumerate() {
        let (x, y) = pt(*p);
        writeln!(s, r#"<line x1="0.000000" y1="0.000000" x2="{x}" y2="{y}"/>"#).unwrap();
        writeln!(s, r##"<circle cx="{x}" cy="{y}" r="{}" fill="#2ca02c" stroke="none"/>"##, num(2.0 * stroke)).unwrap();
        writeln!(
            s,
            r##"<text x="{x}" y="{y}" font-size="{}" fill="#2ca02c" stroke="none">{}′</text>"##,
            num(font),
            LABELS[i]
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();

    let path: Vec<String> = figure
        .iter()
        .map(|p| {
            let (x, y) = pt(*p);
            format!("{x},{y}")
        })
        .collect();
    writeln!(
        s,
        r##"<g id="parallelogram" stroke="#d62728" stroke-width="{}" fill="none"><polygon points="{}"/></g>"##,
        num(3.0 * stroke),
        path.join(" ")
    )
    .unwrap();
    writeln!(s, r#"<circle cx="0.000000" cy="0.000000" r="{}" fill="black"/>"#, num(2.5 * stroke)).unwrap();

    let lx = x0;
    let ly = y1 + margin + 0.5 * font;
    let figure_label = format!("class {:?} figure", report.class);
    let entries = [
        ("#1f77b4", "none", 1.0, "arc directions"),
        ("#2ca02c", "dashed", 1.0, "tangent images w·u"),
        ("#d62728", "none", 3.0, figure_label.as_str()),
    ];
    writeln!(s, r#"<g id="legend" font-size="{}">"#, num(font)).unwrap();
    for (i, (color, dash, width, label)) in entries.iter().enumerate() {
        let y = ly + 1.4 * font * i as f64;
        let dash = if *dash == "dashed" {
            format!(r#" stroke-dasharray="{} {}""#, num(4.0 * stroke), num(3.0 * stroke))
        } else {
            String::new()
        };
        writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="{}"{dash}/>"#,
            num(lx),
            num(y),
            num(lx + 3.0 * font),
            num(y),
            num(width * stroke)
        )
        .unwrap();
        writeln!(s, r#"<text x="{}" y="{}">{label}</text>"#, num(lx + 3.5 * font), num(y + 0.35 * font)).unwrap();
    }
    writeln!(s, "</g>").unwrap();
    writeln!(s, "</svg>").unwrap();
    s
}
