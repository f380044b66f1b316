//! On-disk scenario format: JSON with terminals, buildings and optional
//! parameter overrides. Coordinates are meters east/north of an arbitrary
//! local origin.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sunhop::energy::EnergyParams;
use sunhop::planner::CostParams;
use sunhop::solar::SearchParams;
use sunhop::{BuildingPolygon, Point2D, Scenario, ScenarioIssue};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildingSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Roof height, meters.
    pub height: f64,
    /// Footprint corners as `[east, north]` pairs.
    pub footprint: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub latitude: f64,
    pub longitude: f64,
    /// Relay hover height, meters.
    pub uav_height: f64,
    pub mbs: [f64; 2],
    pub hotspot: [f64; 2],
    #[serde(default)]
    pub buildings: Vec<BuildingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergyParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostParams>,
}

/// A validated scenario together with the parameters to run it with.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub file: ScenarioFile,
    pub scenario: Scenario,
    pub energy: EnergyParams,
    pub search: SearchParams,
    pub cost: CostParams,
}

fn point([x, y]: [f64; 2]) -> Point2D {
    Point2D::new(x, y)
}

fn remap(issue: ScenarioIssue, original: &[usize]) -> ScenarioIssue {
    match issue {
        ScenarioIssue::OverlappingBuildings { first, second } => {
            ScenarioIssue::OverlappingBuildings { first: original[first], second: original[second] }
        }
        ScenarioIssue::TerminalInObstacle { terminal, point, building } => {
            ScenarioIssue::TerminalInObstacle { terminal, point, building: original[building] }
        }
        other => other,
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::SchemaVersion { found: file.schema_version, expected: SCHEMA_VERSION });
        }
        Ok(file)
    }

    pub fn from_scenario(name: Option<String>, scenario: &Scenario) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            name,
            latitude: scenario.latitude,
            longitude: scenario.longitude,
            uav_height: scenario.uav_height,
            mbs: [scenario.mbs.x, scenario.mbs.y],
            hotspot: [scenario.hotspot.x, scenario.hotspot.y],
            buildings: scenario
                .buildings
                .iter()
                .map(|b| BuildingSpec {
                    name: None,
                    height: b.height,
                    footprint: b.vertices.iter().map(|v| [v.x, v.y]).collect(),
                })
                .collect(),
            energy: None,
            search: None,
            cost: None,
        }
    }

    /// Every consistency problem in the document, with building indices as
    /// they appear in the file.
    pub fn issues(&self) -> Vec<ScenarioIssue> {
        self.build().err().unwrap_or_default()
    }

    fn build(&self) -> Result<Scenario, Vec<ScenarioIssue>> {
        let mut issues = Vec::new();
        let mut buildings = Vec::new();
        let mut original = Vec::new();
        for (index, spec) in self.buildings.iter().enumerate() {
            match BuildingPolygon::new(spec.footprint.iter().copied().map(point).collect(), spec.height) {
                Ok(b) => {
                    buildings.push(b);
                    original.push(index);
                }
                Err(source) => issues.push(ScenarioIssue::InvalidBuilding { index, source }),
            }
        }
        let scenario = Scenario {
            buildings,
            mbs: point(self.mbs),
            hotspot: point(self.hotspot),
            latitude: self.latitude,
            longitude: self.longitude,
            uav_height: self.uav_height,
        };
        issues.extend(scenario.validate().into_iter().map(|i| remap(i, &original)));
        if issues.is_empty() {
            Ok(scenario)
        } else {
            Err(issues)
        }
    }

    pub fn into_loaded(self) -> Result<LoadedScenario, CliError> {
        let scenario = self.build().map_err(CliError::Invalid)?;
        let energy = self.energy.unwrap_or_default();
        let search = self.search.unwrap_or_default();
        let cost = self.cost.unwrap_or_default();
        energy.validate().map_err(CliError::Parameters)?;
        search.validate().map_err(CliError::Parameters)?;
        cost.validate().map_err(CliError::Parameters)?;
        Ok(LoadedScenario { file: self, scenario, energy, search, cost })
    }
}

pub fn load_scenario(path: &Path) -> Result<LoadedScenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    ScenarioFile::parse(&text)?.into_loaded()
}
