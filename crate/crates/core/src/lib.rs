//! Placement of solar-powered drone relay stations forming an obstacle-free
//! free-space-optics backhaul chain among buildings, plus a day-long energy
//! simulation counting battery-swap trips.

pub mod energy;
pub mod error;
pub mod geometry;
pub mod planner;
pub mod scenario;
pub mod simulation;
pub mod solar;
pub mod visibility;

pub use error::{GeometryError, PlanError, ScenarioIssue, SimulationError, SolarError, VisibilityError};
pub use geometry::{BuildingPolygon, Containment, Orientation, Point2D};
pub use scenario::Scenario;
