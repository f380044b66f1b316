//! Planar predicates and the building footprint type.
//!
//! Coordinates live in a local east/north frame measured in meters. All
//! predicates share one relative collinearity tolerance so that the sweep,
//! the brute-force visibility check and the shadow tests agree on degenerate
//! configurations.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::GeometryError;

/// Relative tolerance applied to cross products, scaled by the squared
/// magnitude of the largest coordinate involved.
pub const COLLINEAR_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point2D) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point2D) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }
}

impl fmt::Display for Point2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point2D {
    type Output = Point2D;
    fn add(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2D {
    type Output = Point2D;
    fn sub(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2D {
    type Output = Point2D;
    fn mul(self, rhs: f64) -> Point2D {
        Point2D::new(self.x * rhs, self.y * rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Sign of `(b - a) x (c - a)`, with `|cross| <= 1e-9 * max(|coords|)^2`
/// reported as collinear.
pub fn orientation(a: Point2D, b: Point2D, c: Point2D) -> Orientation {
    let cross = (b - a).cross(c - a);
    let scale = a.max_abs().max(b.max_abs()).max(c.max_abs());
    let tol = COLLINEAR_EPS * scale * scale;
    if cross > tol {
        Orientation::CounterClockwise
    } else if cross < -tol {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

pub fn euclidean_distance(a: Point2D, b: Point2D) -> f64 {
    (a - b).norm()
}

/// `p` is collinear with `a`-`b` and lies within their closed bounding box.
pub fn on_segment(p: Point2D, a: Point2D, b: Point2D) -> bool {
    orientation(a, b, p) == Orientation::Collinear && within_box(p, a, b)
}

/// `p` is collinear with `a`-`b` and strictly between the two endpoints.
pub fn strictly_inside_segment(p: Point2D, a: Point2D, b: Point2D) -> bool {
    if p == a || p == b || orientation(a, b, p) != Orientation::Collinear {
        return false;
    }
    let d = b - a;
    let t = (p - a).dot(d);
    t > 0.0 && t < d.dot(d)
}

/// Closed bounding-box test, padded by the relative tolerance.
fn within_box(p: Point2D, a: Point2D, b: Point2D) -> bool {
    let tol = COLLINEAR_EPS * p.max_abs().max(a.max_abs()).max(b.max_abs());
    p.x >= a.x.min(b.x) - tol
        && p.x <= a.x.max(b.x) + tol
        && p.y >= a.y.min(b.y) - tol
        && p.y <= a.y.max(b.y) + tol
}

fn opposite(o1: Orientation, o2: Orientation) -> bool {
    matches!(
        (o1, o2),
        (Orientation::Clockwise, Orientation::CounterClockwise)
            | (Orientation::CounterClockwise, Orientation::Clockwise)
    )
}

/// Both segments cross at a single point interior to each of them.
pub fn segments_cross_properly(a: Point2D, b: Point2D, c: Point2D, d: Point2D) -> bool {
    opposite(orientation(a, b, c), orientation(a, b, d))
        && opposite(orientation(c, d, a), orientation(c, d, b))
}

/// Closed-segment intersection test: any shared point, including touching
/// endpoints and collinear overlap.
pub fn segments_intersect(a: Point2D, b: Point2D, c: Point2D, d: Point2D) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if opposite(o1, o2) && opposite(o3, o4) {
        return true;
    }
    (o1 == Orientation::Collinear && within_box(c, a, b))
        || (o2 == Orientation::Collinear && within_box(d, a, b))
        || (o3 == Orientation::Collinear && within_box(a, c, d))
        || (o4 == Orientation::Collinear && within_box(b, c, d))
}

/// Whether edge `e1`-`e2` obstructs the line of sight `a`-`b`.
///
/// A proper crossing blocks, and so does a collinear overlap of positive
/// length. Contact in a single point (shared endpoints, an endpoint touching
/// the other segment) does not.
pub fn segments_block(a: Point2D, b: Point2D, e1: Point2D, e2: Point2D) -> bool {
    if segments_cross_properly(a, b, e1, e2) {
        return true;
    }
    if orientation(a, b, e1) != Orientation::Collinear
        || orientation(a, b, e2) != Orientation::Collinear
    {
        return false;
    }
    // Collinear: project onto ab and measure the overlap.
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return false;
    }
    let t1 = (e1 - a).dot(d) / len2;
    let t2 = (e2 - a).dot(d) / len2;
    let lo = t1.min(t2).max(0.0);
    let hi = t1.max(t2).min(1.0);
    hi - lo > 1e-12
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Containment {
    Inside,
    OnBoundary,
    Outside,
}

/// Even-odd classification of `p` against a closed ring, with explicit
/// boundary detection. Works for either orientation.
pub fn point_in_ring(p: Point2D, ring: &[Point2D]) -> Containment {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        if on_segment(p, a, b) {
            return Containment::OnBoundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    if inside {
        Containment::Inside
    } else {
        Containment::Outside
    }
}

pub fn point_in_polygon(p: Point2D, poly: &BuildingPolygon) -> Containment {
    point_in_ring(p, &poly.vertices)
}

/// Twice the signed area; positive for counter-clockwise rings.
pub fn signed_area2(ring: &[Point2D]) -> f64 {
    let n = ring.len();
    (0..n).map(|i| ring[i].cross(ring[(i + 1) % n])).sum()
}

/// Extruded building footprint. Vertices are stored counter-clockwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuildingPolygon {
    pub vertices: Vec<Point2D>,
    pub height: f64,
}

impl BuildingPolygon {
    /// Validates the footprint. Clockwise input is reversed so the stored
    /// ring is always counter-clockwise.
    pub fn new(vertices: Vec<Point2D>, height: f64) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite(*p));
        }
        if !(height.is_finite() && height > 0.0) {
            return Err(GeometryError::NonPositiveHeight(height));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(GeometryError::RepeatedVertex(i));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if vertices[i] == vertices[j] {
                    return Err(GeometryError::SelfIntersecting);
                }
            }
        }
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            for j in (i + 1)..n {
                let (c, d) = (vertices[j], vertices[(j + 1) % n]);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let hit = if adjacent {
                    segments_block(a, b, c, d)
                } else {
                    segments_intersect(a, b, c, d)
                };
                if hit {
                    return Err(GeometryError::SelfIntersecting);
                }
            }
        }
        let area2 = signed_area2(&vertices);
        if area2.abs() <= f64::EPSILON {
            return Err(GeometryError::ZeroArea);
        }
        let mut vertices = vertices;
        if area2 < 0.0 {
            vertices.reverse();
        }
        Ok(Self { vertices, height })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(start, end)` pairs in ring order.
    pub fn edges(&self) -> impl Iterator<Item = (Point2D, Point2D)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn prev(&self, i: usize) -> Point2D {
        let n = self.vertices.len();
        self.vertices[(i + n - 1) % n]
    }

    pub fn next(&self, i: usize) -> Point2D {
        self.vertices[(i + 1) % self.vertices.len()]
    }

    /// Whether two closed footprints share any point.
    pub fn touches_or_overlaps(&self, other: &BuildingPolygon) -> bool {
        for (a, b) in self.edges() {
            for (c, d) in other.edges() {
                if segments_intersect(a, b, c, d) {
                    return true;
                }
            }
        }
        // No boundary contact: one can only contain the other entirely.
        point_in_polygon(other.vertices[0], self) != Containment::Outside
            || point_in_polygon(self.vertices[0], other) != Containment::Outside
    }
}

impl<'de> Deserialize<'de> for BuildingPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            vertices: Vec<Point2D>,
            height: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        BuildingPolygon::new(raw.vertices, raw.height).map_err(serde::de::Error::custom)
    }
}

/// Whether a ray leaving the corner `at` in direction `dir` enters the polygon
/// interior immediately. `prev` and `next` are the neighbouring ring vertices
/// of a counter-clockwise polygon. Directions along either wall do not count.
pub(crate) fn enters_interior_at_corner(
    prev: Point2D,
    at: Point2D,
    next: Point2D,
    dir: Point2D,
) -> bool {
    let target = at + dir;
    let to_next = orientation(at, next, target);
    let to_prev = orientation(at, target, prev);
    match orientation(prev, at, next) {
        // Convex corner: interior wedge runs counter-clockwise from `next` to `prev`.
        Orientation::CounterClockwise => {
            to_next == Orientation::CounterClockwise && to_prev == Orientation::CounterClockwise
        }
        // Reflex corner: everything except the closed exterior wedge.
        Orientation::Clockwise => {
            let in_exterior = orientation(at, prev, target) != Orientation::Clockwise
                && orientation(at, target, next) != Orientation::Clockwise;
            !in_exterior
        }
        Orientation::Collinear => to_next == Orientation::CounterClockwise,
    }
}
