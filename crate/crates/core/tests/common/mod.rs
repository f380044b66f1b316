//! Scene generators and independent reference implementations shared by the
//! integration and acceptance tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sunhop::geometry::{point_in_polygon, BuildingPolygon, Containment, Point2D};
use sunhop::planner::CostParams;
use sunhop::solar::SunPosition;
use sunhop::visibility::{SceneGraph, VisibilityGraph};
use sunhop::Scenario;

/// Random convex polygon: sorted angles on a circle.
pub fn random_convex(rng: &mut ChaCha8Rng, max_vertices: usize) -> BuildingPolygon {
    let cx = rng.gen_range(-80.0..80.0);
    let cy = rng.gen_range(-80.0..80.0);
    let r = rng.gen_range(4.0..22.0);
    let n = rng.gen_range(3..=max_vertices.max(3));
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let verts = angles
        .into_iter()
        .map(|a| Point2D::new(cx + r * a.cos(), cy + r * a.sin()))
        .collect();
    BuildingPolygon::new(verts, rng.gen_range(25.0..90.0)).unwrap_or_else(|_| random_convex(rng, max_vertices))
}

/// Axis-aligned rectangle snapped to a 10 m lattice, which produces many
/// collinear corner triples.
pub fn lattice_rect(rng: &mut ChaCha8Rng) -> BuildingPolygon {
    let x0 = 10.0 * rng.gen_range(-8..7) as f64;
    let y0 = 10.0 * rng.gen_range(-8..7) as f64;
    let w = 10.0 * rng.gen_range(1..4) as f64;
    let h = 10.0 * rng.gen_range(1..4) as f64;
    BuildingPolygon::new(
        vec![
            Point2D::new(x0, y0),
            Point2D::new(x0 + w, y0),
            Point2D::new(x0 + w, y0 + h),
            Point2D::new(x0, y0 + h),
        ],
        40.0,
    )
    .unwrap()
}

/// Disjoint buildings (at most 8, at most 40 corners in total).
pub fn random_buildings(rng: &mut ChaCha8Rng, lattice: bool) -> Vec<BuildingPolygon> {
    let target = rng.gen_range(1..=8);
    let mut buildings: Vec<BuildingPolygon> = Vec::new();
    let mut total = 0;
    let mut attempts = 0;
    while buildings.len() < target && attempts < 500 {
        attempts += 1;
        let remaining = 40 - total;
        if remaining < 3 {
            break;
        }
        let cand = if lattice { lattice_rect(rng) } else { random_convex(rng, remaining.min(7)) };
        if cand.len() > remaining || buildings.iter().any(|b| b.touches_or_overlaps(&cand)) {
            continue;
        }
        total += cand.len();
        buildings.push(cand);
    }
    buildings
}

pub fn is_free(q: Point2D, buildings: &[BuildingPolygon]) -> bool {
    buildings.iter().all(|b| point_in_polygon(q, b) == Containment::Outside)
}

/// A scene plus four free points that are not corners.
pub fn random_scene(seed: u64) -> (SceneGraph, Vec<Point2D>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lattice = seed.is_multiple_of(3);
    let buildings = random_buildings(&mut rng, lattice);
    let scene = SceneGraph::from_buildings(&buildings);
    let mut extras = Vec::new();
    while extras.len() < 4 {
        let q = if lattice {
            Point2D::new(5.0 * rng.gen_range(-20..20) as f64, 5.0 * rng.gen_range(-20..20) as f64)
        } else {
            Point2D::new(rng.gen_range(-110.0..110.0), rng.gen_range(-110.0..110.0))
        };
        if is_free(q, &buildings) && !extras.contains(&q) && !scene.vertices.contains(&q) {
            extras.push(q);
        }
    }
    (scene, extras)
}

/// Random graph on at most 12 nodes with random sunny flags. Source is node
/// 0 and target the last node.
pub fn random_small_graph(seed: u64) -> (VisibilityGraph, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=12);
    let nodes: Vec<Point2D> =
        (0..n).map(|_| Point2D::new(rng.gen_range(0.0..500.0), rng.gen_range(0.0..500.0))).collect();
    let density = rng.gen_range(0.15..0.7);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    let sunny = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    (VisibilityGraph::from_edges(nodes, &edges), sunny)
}

/// Best path by exhaustive enumeration of simple paths: (cost, hops).
pub fn brute_force_best(
    graph: &VisibilityGraph,
    source: usize,
    target: usize,
    sunny: &[bool],
    solar: bool,
    params: &CostParams,
) -> Option<(f64, usize)> {
    fn hop_cost(len: f64, head: usize, target: usize, sunny: &[bool], solar: bool, c: &CostParams) -> f64 {
        let dist = (len / c.d_max).min(1.0);
        let shadowed = solar && head != target && !sunny[head];
        dist + if shadowed { c.shadow_hop_penalty } else { c.sunny_hop_penalty }
    }
    #[allow(clippy::too_many_arguments)]
    fn walk(
        g: &VisibilityGraph,
        at: usize,
        target: usize,
        sunny: &[bool],
        solar: bool,
        c: &CostParams,
        seen: &mut Vec<bool>,
        cost: f64,
        hops: usize,
        best: &mut Option<(f64, usize)>,
    ) {
        if at == target {
            let better = match *best {
                None => true,
                Some((bc, bh)) => cost < bc - 1e-12 || ((cost - bc).abs() <= 1e-12 && hops < bh),
            };
            if better {
                *best = Some((cost, hops));
            }
            return;
        }
        for &(v, len) in g.neighbours(at) {
            if seen[v] || c.max_link_length.is_some_and(|r| len > r) {
                continue;
            }
            seen[v] = true;
            let step = hop_cost(len, v, target, sunny, solar, c);
            walk(g, v, target, sunny, solar, c, seen, cost + step, hops + 1, best);
            seen[v] = false;
        }
    }
    let mut seen = vec![false; graph.node_count()];
    seen[source] = true;
    let mut best = None;
    walk(graph, source, target, sunny, solar, params, &mut seen, 0.0, 0, &mut best);
    best
}

/// Occlusion by direct ray casting: a ray leaves `p` at the hover height
/// toward the sun and is tested against every building prism.
pub fn sunlit_by_ray(p: Point2D, scenario: &Scenario, sun: SunPosition) -> bool {
    if sun.altitude <= 0.0 {
        return false;
    }
    let (az, alt) = (sun.azimuth.to_radians(), sun.altitude.to_radians());
    let dir = [az.sin() * alt.cos(), az.cos() * alt.cos(), alt.sin()];
    let origin = [p.x, p.y, scenario.uav_height];
    for b in &scenario.buildings {
        if b.height <= scenario.uav_height {
            continue;
        }
        // The ray is inside the prism's height band for t in [0, t_top].
        let t_top = (b.height - origin[2]) / dir[2];
        let a = (origin[0], origin[1]);
        let e = (origin[0] + dir[0] * t_top, origin[1] + dir[1] * t_top);
        if segment_touches_polygon(a, e, &b.vertices) {
            return false;
        }
    }
    true
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn closed_segments_meet(p1: (f64, f64), p2: (f64, f64), q1: (f64, f64), q2: (f64, f64)) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: (f64, f64), b: (f64, f64), c: (f64, f64), d: f64| {
        d == 0.0 && c.0 >= a.0.min(b.0) && c.0 <= a.0.max(b.0) && c.1 >= a.1.min(b.1) && c.1 <= a.1.max(b.1)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn segment_touches_polygon(a: (f64, f64), b: (f64, f64), ring: &[Point2D]) -> bool {
    let pts: Vec<(f64, f64)> = ring.iter().map(|v| (v.x, v.y)).collect();
    if winding_number(Point2D::new(a.0, a.1), ring) != 0 || winding_number(Point2D::new(b.0, b.1), ring) != 0 {
        return true;
    }
    (0..pts.len()).any(|i| closed_segments_meet(a, b, pts[i], pts[(i + 1) % pts.len()]))
}

/// Winding number of a closed ring around `p` (crossing-based, Sunday's
/// formulation).
pub fn winding_number(p: Point2D, ring: &[Point2D]) -> i32 {
    let mut wn = 0;
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        let side = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
        if a.y <= p.y {
            if b.y > p.y && side > 0.0 {
                wn += 1;
            }
        } else if b.y <= p.y && side < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// Two interlocking comb-shaped footprints leave a serpentine corridor
/// between the terminals. Any route needs a relay at each of the three tooth
/// tips; going around the combs takes more relays still.
pub fn three_relay_scenario() -> Scenario {
    let p = Point2D::new;
    let lower = BuildingPolygon::new(
        vec![
            p(-300., -110.),
            p(600., -110.),
            p(600., -100.),
            p(242., -100.),
            p(240., 20.),
            p(238., -100.),
            p(2., -100.),
            p(0., 20.),
            p(-2., -100.),
            p(-300., -100.),
        ],
        60.0,
    )
    .unwrap();
    let upper = BuildingPolygon::new(
        vec![p(-300., 100.), p(118., 100.), p(120., -20.), p(122., 100.), p(600., 100.), p(600., 110.), p(-300., 110.)],
        60.0,
    )
    .unwrap();
    Scenario::new(vec![lower, upper], p(-120., 0.), p(360., 0.), 40.41872533, -3.70427144, 20.0).unwrap()
}
