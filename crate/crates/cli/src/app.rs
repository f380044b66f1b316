use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Duration, NaiveDate, Utc};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sunhop::planner::{planning_context, PlacementPlan};
use sunhop::simulation::{compare_modes, run_day_simulation, SimulationConfig, SimulationReport};
use sunhop::solar::{SunPosition, SunnyPoint};

use crate::error::CliError;
use crate::report::{hourly_csv, Comparison};
use crate::scenario_file::{load_scenario, LoadedScenario};
use crate::svg::{render_svg, MapView};

#[derive(Debug, Parser)]
#[command(name = "sunhop", version, about = "Plan and simulate solar-powered drone relay chains among buildings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Relay placement at one instant.
    Plan(PlanArgs),
    /// Simulate a full local day and count drone trips.
    Simulate(SimulateArgs),
    /// Hourly sun position, shadows and sunny hover spots for one day.
    Sunmap(SunmapArgs),
    /// Check a scenario file and list every problem found.
    Validate(ScenarioArg),
}

#[derive(Debug, Args)]
struct ScenarioArg {
    #[arg(long)]
    scenario: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Solar,
    Baseline,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlanMode {
    Solar,
    Baseline,
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[command(flatten)]
    scenario: ScenarioArg,
    /// RFC 3339 instant, e.g. 2021-06-21T12:00:00Z.
    #[arg(long, value_parser = parse_instant)]
    at: DateTime<Utc>,
    #[arg(long, value_enum, default_value = "solar")]
    mode: PlanMode,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write plan.svg (into --out, or the working directory).
    #[arg(long)]
    svg: bool,
}

#[derive(Debug, Args)]
struct DayArgs {
    #[command(flatten)]
    scenario: ScenarioArg,
    /// Local calendar date, YYYY-MM-DD.
    #[arg(long)]
    date: NaiveDate,
    /// Local time minus UTC, hours.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    tz_offset: f64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    day: DayArgs,
    #[arg(long, value_enum, default_value = "both")]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 60)]
    replan_min: u32,
    #[arg(long, default_value_t = 1)]
    step_min: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SunmapArgs {
    #[command(flatten)]
    day: DayArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write one sunmap-HH.svg per hour (into --out, or the working directory).
    #[arg(long)]
    svg: bool,
}

fn parse_instant(s: &str) -> Result<DateTime<Utc>, String> {
    DateTime::parse_from_rfc3339(s)
        .map(|t| t.with_timezone(&Utc))
        .map_err(|e| format!("expected an RFC 3339 timestamp such as 2021-06-21T12:00:00Z: {e}"))
}

#[derive(Debug, Serialize)]
struct PlanOutput<'a> {
    timestamp: DateTime<Utc>,
    mode: &'static str,
    sun: SunPosition,
    relay_count: usize,
    sunny_relays: usize,
    sunny_points: &'a [SunnyPoint],
    plan: &'a PlacementPlan,
}

#[derive(Debug, Serialize)]
struct SunmapHour {
    hour: u32,
    timestamp: DateTime<Utc>,
    sun: SunPosition,
    night: bool,
    shadowing_buildings: usize,
    sunlit_corners: usize,
    sunny_points: Vec<SunnyPoint>,
}

#[derive(Debug, Serialize)]
struct ValidateOutput {
    valid: bool,
    buildings: usize,
    corners: usize,
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("outputs serialize") + "\n"
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.to_path_buf(), source })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Write { path: path.clone(), source })?;
    log::info!("wrote {}", path.display());
    Ok(path)
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|source| CliError::Write { path: PathBuf::from("<stdout>"), source })
}

fn run_plan(args: &PlanArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load_scenario(&args.scenario.scenario)?;
    let solar = args.mode == PlanMode::Solar;
    let ctx = planning_context(&loaded.scenario, args.at, solar, loaded.search)?;
    let plan = ctx.plan(solar, &loaded.cost)?;
    let doc = json(&PlanOutput {
        timestamp: args.at,
        mode: if solar { "solar" } else { "baseline" },
        sun: ctx.sun,
        relay_count: plan.relay_count(),
        sunny_relays: plan.sunny_relay_count(),
        sunny_points: &ctx.sunny_points.points,
        plan: &plan,
    });
    if let Some(dir) = &args.out {
        write_file(dir, "plan.json", &doc)?;
    }
    if args.svg {
        let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
        let svg = render_svg(&MapView {
            scenario: &loaded.scenario,
            timestamp: args.at,
            shadows: &ctx.shadows,
            sunny_points: &ctx.sunny_points,
            plan: Some(&plan),
        });
        write_file(&dir, "plan.svg", &svg)?;
    }
    emit(stdout, &doc)
}

fn simulation_config(args: &SimulateArgs, loaded: &LoadedScenario) -> SimulationConfig {
    SimulationConfig {
        timestep_min: args.step_min,
        replan_interval_min: args.replan_min,
        seed: args.seed,
        tz_offset_hours: args.day.tz_offset,
        energy: loaded.energy,
        search: loaded.search,
        cost: loaded.cost,
        ..SimulationConfig::default()
    }
}

fn write_report(dir: &Path, tag: &str, report: &SimulationReport) -> Result<(), CliError> {
    write_file(dir, &format!("report-{tag}.json"), &json(report))?;
    write_file(dir, &format!("hourly-{tag}.csv"), &hourly_csv(report))?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct SingleSummary<'a> {
    date: NaiveDate,
    mode: &'static str,
    seed: u64,
    totals: &'a sunhop::simulation::SimulationTotals,
    hourly: &'a [sunhop::simulation::HourlyStats],
}

fn run_simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load_scenario(&args.day.scenario.scenario)?;
    let config = simulation_config(args, &loaded);
    let date = args.day.date;
    match args.mode {
        Mode::Both => {
            let (baseline, solar) = compare_modes(&loaded.scenario, date, &config)?;
            let cmp = Comparison::new(&baseline, &solar);
            if let Some(dir) = &args.out {
                write_report(dir, "baseline", &baseline)?;
                write_report(dir, "solar", &solar)?;
                write_file(dir, "comparison.json", &json(&cmp))?;
                write_file(dir, "comparison.csv", &cmp.csv())?;
                write_file(dir, "comparison.txt", &cmp.table())?;
            }
            emit(stdout, &json(&cmp))
        }
        mode => {
            let solar = mode == Mode::Solar;
            let tag = if solar { "solar" } else { "baseline" };
            let report = run_day_simulation(&loaded.scenario, date, solar, &config)?;
            if let Some(dir) = &args.out {
                write_report(dir, tag, &report)?;
            }
            emit(
                stdout,
                &json(&SingleSummary { date, mode: tag, seed: args.seed, totals: &report.totals, hourly: &report.hourly }),
            )
        }
    }
}

fn run_sunmap(args: &SunmapArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load_scenario(&args.day.scenario.scenario)?;
    let config = SimulationConfig { tz_offset_hours: args.day.tz_offset, ..SimulationConfig::default() };
    config.validate()?;
    let start = config.day_start(args.day.date);
    let svg_dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut hours = Vec::new();
    for hour in 0..24u32 {
        let t = start + Duration::hours(i64::from(hour));
        let ctx = planning_context(&loaded.scenario, t, true, loaded.search)?;
        let corners = loaded.scenario.buildings.iter().flat_map(|b| b.vertices.iter());
        hours.push(SunmapHour {
            hour,
            timestamp: t,
            sun: ctx.sun,
            night: !ctx.sun.is_up(),
            shadowing_buildings: ctx.shadows.shadows().len(),
            sunlit_corners: corners.filter(|&&v| ctx.shadows.is_sunny(v)).count(),
            sunny_points: ctx.sunny_points.points.clone(),
        });
        if args.svg {
            let svg = render_svg(&MapView {
                scenario: &loaded.scenario,
                timestamp: t,
                shadows: &ctx.shadows,
                sunny_points: &ctx.sunny_points,
                plan: None,
            });
            write_file(&svg_dir, &format!("sunmap-{hour:02}.svg"), &svg)?;
        }
    }
    let doc = json(&hours);
    if let Some(dir) = &args.out {
        write_file(dir, "sunmap.json", &doc)?;
    }
    emit(stdout, &doc)
}

fn run_validate(args: &ScenarioArg, stdout: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load_scenario(&args.scenario)?;
    let s = &loaded.scenario;
    if let Some(lowest) = s.min_building_height() {
        if s.uav_height >= lowest {
            log::warn!("hover height {} m is not below the lowest roof ({lowest} m)", s.uav_height);
        }
    }
    emit(
        stdout,
        &json(&ValidateOutput {
            valid: true,
            buildings: s.buildings.len(),
            corners: s.buildings.iter().map(|b| b.len()).sum(),
        }),
    )
}

/// Runs the command line and returns the process exit code. Errors are
/// reported on `stderr` as a JSON document.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = CliError::Usage(e.to_string().trim_end().to_string());
            let _ = writeln!(stderr, "{}", err.to_json());
            return err.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Plan(a) => run_plan(a, stdout),
        Command::Simulate(a) => run_simulate(a, stdout),
        Command::Sunmap(a) => run_sunmap(a, stdout),
        Command::Validate(a) => run_validate(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(stderr, "{}", err.to_json());
            err.exit_code()
        }
    }
}
