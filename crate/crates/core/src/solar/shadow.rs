use serde::{Deserialize, Serialize};

use super::SunPosition;
use crate::error::SolarError;
use crate::geometry::{orientation, point_in_ring, BuildingPolygon, Containment, Orientation, Point2D};
use crate::scenario::Scenario;

/// Horizontal reach of a roof edge's shadow on the hover plane.
pub fn shadow_length(building_height: f64, uav_height: f64, altitude_deg: f64) -> f64 {
    (building_height - uav_height) / altitude_deg.to_radians().tan()
}

/// Unit vector of a compass bearing in the east/north frame.
pub fn bearing_vector(bearing_deg: f64) -> Point2D {
    let b = bearing_deg.to_radians();
    Point2D::new(b.sin(), b.cos())
}

/// Region of the hover plane shadowed by one building: the footprint swept
/// along the shadow vector. Stored as the footprint plus one quadrilateral per
/// wall facing away from the sun; their union is the shadow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowPolygon {
    pub source_building: usize,
    /// Displacement from a roof corner to where its shadow lands.
    pub offset: Point2D,
    pub pieces: Vec<Vec<Point2D>>,
}

impl ShadowPolygon {
    /// Inside or on the boundary of the shadow.
    pub fn contains(&self, p: Point2D) -> bool {
        self.pieces.iter().any(|ring| point_in_ring(p, ring) != Containment::Outside)
    }
}

/// Shadow cast by `building` onto the plane at `uav_height`; `None` when the
/// roof is not above the hover plane.
pub fn shadow_polygon(
    building: &BuildingPolygon,
    source_building: usize,
    sun: SunPosition,
    uav_height: f64,
) -> Result<Option<ShadowPolygon>, SolarError> {
    if sun.altitude <= 0.0 {
        return Err(SolarError::SunBelowHorizon(sun.altitude));
    }
    if building.height <= uav_height {
        return Ok(None);
    }
    let length = shadow_length(building.height, uav_height, sun.altitude);
    let offset = bearing_vector((sun.azimuth + 180.0).rem_euclid(360.0)) * length;

    let mut pieces = vec![building.vertices.clone()];
    for (a, b) in building.edges() {
        // Counter-clockwise ring: the offset lies to the right of a wall that
        // faces away from the sun.
        if orientation(a, b, a + offset) == Orientation::Clockwise {
            pieces.push(vec![a, a + offset, b + offset, b]);
        }
    }
    Ok(Some(ShadowPolygon { source_building, offset, pieces }))
}

/// Shadows of every building at one sun position.
#[derive(Debug, Clone)]
pub struct ShadowMap {
    sun: SunPosition,
    shadows: Vec<ShadowPolygon>,
}

impl ShadowMap {
    pub fn new(scenario: &Scenario, sun: SunPosition) -> Self {
        let shadows = if sun.is_up() {
            scenario
                .buildings
                .iter()
                .enumerate()
                .filter_map(|(i, b)| shadow_polygon(b, i, sun, scenario.uav_height).ok().flatten())
                .collect()
        } else {
            Vec::new()
        };
        Self { sun, shadows }
    }

    pub fn sun(&self) -> SunPosition {
        self.sun
    }

    pub fn shadows(&self) -> &[ShadowPolygon] {
        &self.shadows
    }

    /// Sunlit at night is always false; shadow boundaries count as shadowed.
    pub fn is_sunny(&self, p: Point2D) -> bool {
        self.sun.is_up() && !self.shadows.iter().any(|s| s.contains(p))
    }
}

pub fn is_sunny(p: Point2D, scenario: &Scenario, sun: SunPosition) -> bool {
    ShadowMap::new(scenario, sun).is_sunny(p)
}
