//! Command-line front end: scenario files, report files and SVG maps.

pub mod app;
pub mod error;
pub mod report;
pub mod scenario_file;
pub mod svg;

pub use app::run_cli;
pub use error::CliError;
pub use scenario_file::{load_scenario, LoadedScenario, ScenarioFile};
