//! SVG figures of instances, complexes, surfaces and tours.

use std::collections::HashMap;
use std::fmt::Write;

use thiserror::Error;

use crate::complex::{Edge, Triangle, TriangleSet};
use crate::instance::{Point, TspInstance};
use crate::pipeline::RunReport;

#[derive(Debug, Error, PartialEq)]
pub enum PlotError {
    #[error("instance {0} has no coordinates to plot")]
    NoCoordinates(String),
    #[error("plot input refers to city {city} but the instance has {n}")]
    CityOutOfRange { city: usize, n: usize },
}

const SIZE: f64 = 800.0;
const MARGIN: f64 = 24.0;

struct Frame {
    min: Point,
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(pts: &[Point]) -> Self {
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in pts {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        Frame {
            min: lo,
            scale,
            height: (hi.y - lo.y) * scale + 2.0 * MARGIN,
        }
    }

    fn xy(&self, p: Point) -> (f64, f64) {
        (
            MARGIN + (p.x - self.min.x) * self.scale,
            self.height - MARGIN - (p.y - self.min.y) * self.scale,
        )
    }
}

fn polygon(out: &mut String, f: &Frame, pts: &[Point], t: &Triangle, style: &str) {
    let coords: Vec<String> = t
        .vertices()
        .iter()
        .map(|&v| {
            let (x, y) = f.xy(pts[v]);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(out, r#"    <polygon points="{}" {style}/>"#, coords.join(" "));
}

fn centroid(pts: &[Point], t: &Triangle) -> Point {
    let [a, b, c] = t.vertices();
    Point::new(
        (pts[a].x + pts[b].x + pts[c].x) / 3.0,
        (pts[a].y + pts[b].y + pts[c].y) / 3.0,
    )
}

/// Layers, bottom to top: candidate triangles, selected triangles, dual
/// tree (dashed, between centroids of selected triangles sharing an edge),
/// tour, cities.
pub fn render_svg(
    inst: &TspInstance,
    complex: Option<&TriangleSet>,
    report: Option<&RunReport>,
) -> Result<String, PlotError> {
    let pts = inst
        .coords()
        .ok_or_else(|| PlotError::NoCoordinates(inst.name().to_string()))?;
    let n = inst.n();
    let check = |city: usize| {
        if city < n {
            Ok(())
        } else {
            Err(PlotError::CityOutOfRange { city, n })
        }
    };
    let selected: Vec<Triangle> = report
        .and_then(|r| r.selected_triangles.clone())
        .unwrap_or_default();
    let tour: Vec<usize> = report.and_then(|r| r.tour.clone()).unwrap_or_default();
    for t in complex.map(|c| c.triangles()).unwrap_or_default().iter().chain(&selected) {
        check(t.vertices()[2])?;
    }
    for &c in &tour {
        check(c)?;
    }

    let f = Frame::new(pts);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE:.0}" height="{:.0}" viewBox="0 0 {SIZE:.0} {:.0}">"#,
        f.height, f.height
    );
    let _ = writeln!(out, "  <title>{}</title>", inst.name());
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);

    out.push_str("  <g id=\"candidates\">\n");
    if let Some(c) = complex {
        for t in c.triangles() {
            polygon(&mut out, &f, pts, t, r##"fill="#e6ecf5" stroke="#a9b6c8" stroke-width="0.6""##);
        }
    }
    out.push_str("  </g>\n  <g id=\"surface\">\n");
    for t in &selected {
        polygon(&mut out, &f, pts, t, r##"fill="#f5a623" fill-opacity="0.85" stroke="#b36b00" stroke-width="0.8""##);
    }
    out.push_str("  </g>\n  <g id=\"dual-tree\">\n");
    let mut owner: HashMap<Edge, usize> = HashMap::new();
    for (i, t) in selected.iter().enumerate() {
        for e in t.edges() {
            if let Some(&j) = owner.get(&e) {
                let (x1, y1) = f.xy(centroid(pts, &selected[j]));
                let (x2, y2) = f.xy(centroid(pts, t));
                let _ = writeln!(
                    out,
                    r##"    <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#444444" stroke-width="1" stroke-dasharray="4 3"/>"##
                );
            } else {
                owner.insert(e, i);
            }
        }
    }
    out.push_str("  </g>\n  <g id=\"tour\">\n");
    if !tour.is_empty() {
        let coords: Vec<String> = tour
            .iter()
            .map(|&v| {
                let (x, y) = f.xy(pts[v]);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r##"    <polygon points="{}" fill="none" stroke="#d0021b" stroke-width="2.2"/>"##,
            coords.join(" ")
        );
    }
    out.push_str("  </g>\n  <g id=\"cities\">\n");
    for p in pts {
        let (x, y) = f.xy(*p);
        let _ = writeln!(out, r##"    <circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#111111"/>"##);
    }
    out.push_str("  </g>\n</svg>\n");
    Ok(out)
}
