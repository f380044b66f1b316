//! Static map of one planning instant: footprints, shadows, sunny candidates
//! and the relay chain. North is up.

use std::fmt::Write;

use chrono::{DateTime, Utc};
use sunhop::planner::PlacementPlan;
use sunhop::solar::{ShadowMap, SunnyPointSet};
use sunhop::{Point2D, Scenario};

const WIDTH_PX: f64 = 800.0;
const MARGIN_M: f64 = 25.0;

pub struct MapView<'a> {
    pub scenario: &'a Scenario,
    pub timestamp: DateTime<Utc>,
    pub shadows: &'a ShadowMap,
    pub sunny_points: &'a SunnyPointSet,
    pub plan: Option<&'a PlacementPlan>,
}

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn around(points: impl Iterator<Item = Point2D>) -> Self {
        let (mut lo, mut hi) = (Point2D::new(f64::INFINITY, f64::INFINITY), Point2D::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in points {
            lo = Point2D::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2D::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let (min_x, min_y) = (lo.x - MARGIN_M, lo.y - MARGIN_M);
        let (max_x, max_y) = (hi.x + MARGIN_M, hi.y + MARGIN_M);
        let scale = WIDTH_PX / (max_x - min_x);
        Self { min_x, max_y, scale, width: WIDTH_PX, height: ((max_y - min_y) * scale).ceil() }
    }

    fn xy(&self, p: Point2D) -> (f64, f64) {
        ((p.x - self.min_x) * self.scale, (self.max_y - p.y) * self.scale)
    }

    fn points(&self, ring: &[Point2D]) -> String {
        ring.iter()
            .map(|&p| {
                let (x, y) = self.xy(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn render_svg(view: &MapView) -> String {
    let s = view.scenario;
    let mut extent: Vec<Point2D> = s.buildings.iter().flat_map(|b| b.vertices.iter().copied()).collect();
    extent.extend([s.mbs, s.hotspot]);
    if let Some(plan) = view.plan {
        extent.extend(plan.waypoints.iter().copied());
    }
    extent.extend(view.sunny_points.locations());
    let f = Frame::around(extent.into_iter());

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#,
        w = f.width,
        h = f.height + 60.0
    );
    let _ = writeln!(out, r##"<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>"##);

    let sun = view.shadows.sun();
    if sun.is_up() && !view.shadows.shadows().is_empty() {
        let _ = writeln!(out, r##"<g id="shadows" fill="#404040" opacity="0.3">"##);
        for shadow in view.shadows.shadows() {
            for piece in &shadow.pieces {
                let _ = writeln!(out, r#"<polygon points="{}"/>"#, f.points(piece));
            }
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r##"<g id="buildings" fill="#8ea4c2" stroke="#2f3e56" stroke-width="1">"##);
    for (i, b) in s.buildings.iter().enumerate() {
        let _ = writeln!(out, r#"<polygon points="{}"><title>building {i}, {:.1} m</title></polygon>"#, f.points(&b.vertices), b.height);
    }
    let _ = writeln!(out, "</g>");

    if !view.sunny_points.is_empty() {
        let _ = writeln!(out, r##"<g id="sunny-points" fill="#f2b705">"##);
        for p in view.sunny_points.locations() {
            let (x, y) = f.xy(p);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5"/>"#);
        }
        let _ = writeln!(out, "</g>");
    }

    if let Some(plan) = view.plan {
        let _ = writeln!(
            out,
            r##"<polyline id="path" points="{}" fill="none" stroke="#c0392b" stroke-width="2"/>"##,
            f.points(&plan.waypoints)
        );
        let _ = writeln!(out, r#"<g id="relays">"#);
        for (p, &sunny) in plan.relay_positions.iter().zip(&plan.relay_sunny) {
            let (x, y) = f.xy(*p);
            let (class, fill) = if sunny { ("sunny", "#ff8c00") } else { ("unlit", "#7f8c8d") };
            let _ = writeln!(
                out,
                r##"<circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="6" fill="{fill}" stroke="#000000"><title>relay ({:.1}, {:.1}) {class}</title></circle>"##,
                p.x,
                p.y
            );
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r##"<g id="terminals" stroke="#000000">"##);
    for (label, p, fill) in [("MBS", s.mbs, "#1f77b4"), ("hotspot", s.hotspot, "#2ca02c")] {
        let (x, y) = f.xy(p);
        let _ = writeln!(out, r#"<circle class="terminal" cx="{x:.2}" cy="{y:.2}" r="7" fill="{fill}"><title>{label}</title></circle>"#);
    }
    let _ = writeln!(out, "</g>");

    let relays = view.plan.map_or(0, PlacementPlan::relay_count);
    let hops = view.plan.map_or(0, |p| p.hop_count);
    let sky = if sun.is_up() {
        format!("sun {:.1} deg alt, {:.1} deg az", sun.altitude, sun.azimuth)
    } else {
        "night".to_string()
    };
    let base = f.height + 22.0;
    let _ = writeln!(out, r##"<g id="legend" font-family="sans-serif" font-size="13" fill="#000000">"##);
    let _ = writeln!(out, r#"<text x="10" y="{base:.0}">{} UTC, {sky}</text>"#, view.timestamp.format("%Y-%m-%d %H:%M"));
    let _ = writeln!(out, r#"<text x="10" y="{:.0}">{relays} relays, {hops} hops</text>"#, base + 20.0);
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}
