use serde::{Deserialize, Serialize};

use crate::error::ScenarioIssue;
use crate::geometry::{point_in_polygon, BuildingPolygon, Containment, Point2D};

/// Environment for one backhaul problem: obstacles, the macro base station
/// (chain source) and the hotspot (chain sink).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub buildings: Vec<BuildingPolygon>,
    pub mbs: Point2D,
    pub hotspot: Point2D,
    /// Degrees, north positive.
    pub latitude: f64,
    /// Degrees, east positive.
    pub longitude: f64,
    /// Hover altitude of every relay, meters.
    pub uav_height: f64,
}

impl Scenario {
    /// Builds a scenario, rejecting it if any issue is found.
    pub fn new(
        buildings: Vec<BuildingPolygon>,
        mbs: Point2D,
        hotspot: Point2D,
        latitude: f64,
        longitude: f64,
        uav_height: f64,
    ) -> Result<Self, Vec<ScenarioIssue>> {
        let scenario = Self { buildings, mbs, hotspot, latitude, longitude, uav_height };
        let issues = scenario.validate();
        if issues.is_empty() {
            Ok(scenario)
        } else {
            Err(issues)
        }
    }

    /// Lists every violated invariant; an empty list means the scenario is
    /// usable. A hover height at or above the lowest roof only logs a warning.
    pub fn validate(&self) -> Vec<ScenarioIssue> {
        let mut issues = Vec::new();
        if !(-90.0..=90.0).contains(&self.latitude) {
            issues.push(ScenarioIssue::Latitude(self.latitude));
        }
        if !(-180.0..=180.0).contains(&self.longitude) {
            issues.push(ScenarioIssue::Longitude(self.longitude));
        }
        if !(self.uav_height.is_finite() && self.uav_height >= 0.0) {
            issues.push(ScenarioIssue::UavHeight(self.uav_height));
        }
        for (name, p) in [("mbs", self.mbs), ("hotspot", self.hotspot)] {
            if !p.is_finite() {
                issues.push(ScenarioIssue::NonFiniteTerminal { terminal: name });
                continue;
            }
            for (index, b) in self.buildings.iter().enumerate() {
                if point_in_polygon(p, b) != Containment::Outside {
                    issues.push(ScenarioIssue::TerminalInObstacle {
                        terminal: name,
                        point: p,
                        building: index,
                    });
                }
            }
        }
        if self.mbs == self.hotspot {
            issues.push(ScenarioIssue::CoincidentTerminals);
        }
        for i in 0..self.buildings.len() {
            for j in (i + 1)..self.buildings.len() {
                if self.buildings[i].touches_or_overlaps(&self.buildings[j]) {
                    issues.push(ScenarioIssue::OverlappingBuildings { first: i, second: j });
                }
            }
        }
        if let Some(lowest) = self.min_building_height() {
            if self.uav_height >= lowest {
                log::warn!(
                    "uav height {} m is not below the lowest building ({} m); such buildings still block links",
                    self.uav_height,
                    lowest
                );
            }
        }
        issues
    }

    pub fn min_building_height(&self) -> Option<f64> {
        self.buildings.iter().map(|b| b.height).min_by(f64::total_cmp)
    }

    /// Whether `p` is strictly outside every footprint.
    pub fn is_free(&self, p: Point2D) -> bool {
        self.buildings.iter().all(|b| point_in_polygon(p, b) == Containment::Outside)
    }
}
