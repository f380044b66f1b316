use thiserror::Error;

use crate::geometry::Point2D;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("non-finite coordinate {0}")]
    NonFinite(Point2D),
    #[error("building height must be positive, got {0}")]
    NonPositiveHeight(f64),
    #[error("vertex {0} repeats its successor")]
    RepeatedVertex(usize),
    #[error("polygon is self-intersecting")]
    SelfIntersecting,
    #[error("polygon has zero area")]
    ZeroArea,
}

/// A single scenario consistency violation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioIssue {
    #[error("building {index}: {source}")]
    InvalidBuilding { index: usize, source: GeometryError },
    #[error("buildings {first} and {second} overlap or touch")]
    OverlappingBuildings { first: usize, second: usize },
    #[error("{terminal} {point} is not strictly outside building {building}")]
    TerminalInObstacle { terminal: &'static str, point: Point2D, building: usize },
    #[error("{terminal} has a non-finite coordinate")]
    NonFiniteTerminal { terminal: &'static str },
    #[error("mbs and hotspot coincide")]
    CoincidentTerminals,
    #[error("latitude {0} outside [-90, 90]")]
    Latitude(f64),
    #[error("longitude {0} outside [-180, 180]")]
    Longitude(f64),
    #[error("uav height must be finite and non-negative, got {0}")]
    UavHeight(f64),
}

impl ScenarioIssue {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ScenarioIssue::InvalidBuilding { .. } => "invalid-building",
            ScenarioIssue::OverlappingBuildings { .. } => "overlapping-buildings",
            ScenarioIssue::TerminalInObstacle { .. } => "terminal-in-obstacle",
            ScenarioIssue::NonFiniteTerminal { .. } | ScenarioIssue::CoincidentTerminals => {
                "invalid-terminal"
            }
            ScenarioIssue::Latitude(_) | ScenarioIssue::Longitude(_) => "invalid-location",
            ScenarioIssue::UavHeight(_) => "invalid-uav-height",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VisibilityError {
    #[error("nodes {first} and {second} share the location {point}")]
    DuplicatePoint { first: usize, second: usize, point: Point2D },
    #[error("auxiliary point {point} lies inside building {building}")]
    PointInsideBuilding { point: Point2D, building: usize },
    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolarError {
    #[error("sun below horizon (altitude {0} deg)")]
    SunBelowHorizon(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("no backhaul path from node {source_node} to node {target}; source component: {component:?}")]
    NoBackhaulPath { source_node: usize, target: usize, component: Vec<usize> },
    #[error("source and target must differ")]
    SameEndpoints,
    #[error(transparent)]
    Visibility(#[from] VisibilityError),
    #[error("invalid scenario: {0}")]
    Scenario(#[from] ScenarioIssue),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("epoch {epoch} ({timestamp}): {source}")]
    Epoch { epoch: usize, timestamp: chrono::DateTime<chrono::Utc>, source: PlanError },
    #[error("invalid simulation config: {0}")]
    Config(String),
}
