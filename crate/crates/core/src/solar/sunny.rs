use serde::{Deserialize, Serialize};

use super::{ShadowMap, SunPosition};
use crate::geometry::{euclidean_distance, orientation, point_in_polygon, BuildingPolygon, Containment, Orientation, Point2D};
use crate::scenario::Scenario;

/// Test-grid shape around each building corner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchParams {
    /// Points per grid axis.
    pub grid_width: u32,
    /// Grid pitch, meters.
    pub grid_spacing: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self { grid_width: 5, grid_spacing: 7.0 }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<(), String> {
        if self.grid_width < 1 {
            return Err("grid_width must be at least 1".into());
        }
        if !(self.grid_spacing.is_finite() && self.grid_spacing > 0.0) {
            return Err(format!("grid_spacing must be positive, got {}", self.grid_spacing));
        }
        Ok(())
    }
}

/// A sunlit hover spot and the corner it was searched from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SunnyPoint {
    pub point: Point2D,
    pub building: usize,
    pub corner: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SunnyPointSet {
    pub points: Vec<SunnyPoint>,
}

impl SunnyPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn locations(&self) -> impl Iterator<Item = Point2D> + '_ {
        self.points.iter().map(|s| s.point)
    }
}

/// Point inside the footprint at distance `spacing` from both walls meeting
/// at `corner`. `None` for a straight (collinear) corner.
pub fn interior_anchor(building: &BuildingPolygon, corner: usize, spacing: f64) -> Option<Point2D> {
    let v = building.vertices[corner];
    let prev = building.prev(corner);
    let next = building.next(corner);
    let turn = orientation(prev, v, next);
    if turn == Orientation::Collinear {
        return None;
    }
    let to_prev = prev - v;
    let to_next = next - v;
    let a = to_prev * (1.0 / to_prev.norm());
    let b = to_next * (1.0 / to_next.norm());
    let half_angle = 0.5 * a.dot(b).clamp(-1.0, 1.0).acos();
    let bisector = a + b;
    let bisector = bisector * (1.0 / bisector.norm());
    let inward = if turn == Orientation::CounterClockwise { bisector } else { bisector * -1.0 };
    Some(v + inward * (spacing / half_angle.sin()))
}

/// Candidate hover points around one corner, in search order.
///
/// The grid is axis-aligned, offset from the interior anchor by whole
/// multiples of the spacing in the direction pointing past the corner.
/// Points inside or on any footprint are dropped. Ordered by ring
/// `max(nx, ny)`, then by distance to the corner. Returns `None` (and logs a
/// warning) for a straight corner.
pub fn candidate_grid(
    buildings: &[BuildingPolygon],
    building: usize,
    corner: usize,
    params: SearchParams,
) -> Option<Vec<Point2D>> {
    let poly = &buildings[building];
    let v = poly.vertices[corner];
    let Some(anchor) = interior_anchor(poly, corner, params.grid_spacing) else {
        log::warn!("building {building} corner {corner} is straight; skipping sunny-point search");
        return None;
    };
    let sx = if v.x < anchor.x { -1.0 } else { 1.0 };
    let sy = if v.y < anchor.y { -1.0 } else { 1.0 };
    let excluded = [anchor, Point2D::new(anchor.x, v.y), Point2D::new(v.x, anchor.y), v];
    let d = params.grid_spacing;
    let c = params.grid_width;

    // Distances are compared at nanometre resolution so rounding noise in the
    // anchor does not reorder equidistant candidates.
    let mut out: Vec<(u32, i64, u32, u32, Point2D)> = Vec::new();
    for nx in 1..=c {
        for ny in 1..=c {
            let q = Point2D::new(anchor.x + sx * f64::from(nx) * d, anchor.y + sy * f64::from(ny) * d);
            if excluded.contains(&q) {
                continue;
            }
            if buildings.iter().any(|b| point_in_polygon(q, b) != Containment::Outside) {
                continue;
            }
            out.push((nx.max(ny), (euclidean_distance(q, v) * 1e9).round() as i64, nx, ny, q));
        }
    }
    out.sort_by_key(|t| (t.0, t.1, t.2, t.3));
    Some(out.into_iter().map(|t| t.4).collect())
}

/// First sunlit candidate of every corner, in (building, corner) order.
/// Empty while the sun is down.
pub fn find_sunny_points(scenario: &Scenario, sun: SunPosition, params: SearchParams) -> SunnyPointSet {
    find_sunny_points_in(scenario, &ShadowMap::new(scenario, sun), params)
}

pub fn find_sunny_points_in(scenario: &Scenario, shadows: &ShadowMap, params: SearchParams) -> SunnyPointSet {
    let mut set = SunnyPointSet::default();
    if !shadows.sun().is_up() {
        return set;
    }
    for (bi, b) in scenario.buildings.iter().enumerate() {
        for ci in 0..b.len() {
            let Some(grid) = candidate_grid(&scenario.buildings, bi, ci, params) else {
                continue;
            };
            if let Some(&q) = grid.iter().find(|&&q| shadows.is_sunny(q)) {
                set.points.push(SunnyPoint { point: q, building: bi, corner: ci });
            }
        }
    }
    set
}
