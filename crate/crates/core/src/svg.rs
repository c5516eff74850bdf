//! Static SVG plots of a search: barriers, visited states, path, endpoints and
//! waypoints. The y axis points up; one lattice unit is ten SVG units.

use std::fmt::Write;

use crate::env::{Environment, Point};
use crate::guided::TargetList;
use crate::search::SearchResult;

const UNIT: f64 = 10.0;
const MARGIN: f64 = 10.0;

struct Frame {
    x0: i64,
    y1: i64,
}

impl Frame {
    fn x(&self, p: Point) -> f64 {
        MARGIN + (p.x - self.x0) as f64 * UNIT
    }

    fn y(&self, p: Point) -> f64 {
        MARGIN + (self.y1 - p.y) as f64 * UNIT
    }
}

fn star(cx: f64, cy: f64, r: f64) -> String {
    let pts: Vec<String> = (0..10)
        .map(|i| {
            let rad = if i % 2 == 0 { r } else { r * 0.4 };
            let a = std::f64::consts::PI * (i as f64 / 5.0 - 0.5);
            format!("{:.2},{:.2}", cx + rad * a.cos(), cy + rad * a.sin())
        })
        .collect();
    pts.join(" ")
}

pub fn render_svg(
    env: &Environment,
    result: &SearchResult,
    s0: Point,
    sg: Point,
    targets: Option<&TargetList>,
) -> String {
    let [x0, _] = env.x_range();
    let [_, y1] = env.y_range();
    let frame = Frame { x0, y1 };
    let w = env.width() as f64 * UNIT + 2.0 * MARGIN;
    let h = env.height() as f64 * UNIT + 2.0 * MARGIN;

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(out, r#"<rect class="background" x="0" y="0" width="{w}" height="{h}" fill="white"/>"#).unwrap();

    for p in result.closed() {
        writeln!(
            out,
            r##"<rect class="closed" x="{:.1}" y="{:.1}" width="{UNIT}" height="{UNIT}" fill="#c8c8c8"/>"##,
            frame.x(*p) - UNIT / 2.0,
            frame.y(*p) - UNIT / 2.0
        )
        .unwrap();
    }

    for b in env.barriers() {
        let (a, c) = b.endpoints();
        writeln!(
            out,
            r#"<line class="barrier" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="2"/>"#,
            frame.x(a),
            frame.y(a),
            frame.x(c),
            frame.y(c)
        )
        .unwrap();
    }

    if let Some(path) = &result.path {
        let pts: Vec<String> = path.iter().map(|&p| format!("{},{}", frame.x(p), frame.y(p))).collect();
        writeln!(out, r#"<polyline class="path" points="{}" fill="none" stroke="red" stroke-width="2"/>"#, pts.join(" "))
            .unwrap();
    }

    if let Some(targets) = targets {
        let interior = targets.waypoints().iter().filter(|&&p| p != s0 && p != sg);
        for &p in interior {
            writeln!(out, r#"<polygon class="waypoint" points="{}" fill="orange" stroke="black"/>"#, star(frame.x(p), frame.y(p), 8.0))
                .unwrap();
        }
    }

    for (class, p, color) in [("start", s0, "blue"), ("goal", sg, "green")] {
        writeln!(out, r#"<circle class="{class}" cx="{}" cy="{}" r="5" fill="{color}"/>"#, frame.x(p), frame.y(p)).unwrap();
    }
    out.push_str("</svg>\n");
    out
}
