//! Report files: full JSON reports, hourly CSV tables and the baseline versus
//! solar comparison.

use serde::{Deserialize, Serialize};
use sunhop::simulation::{trip_reduction_percent, SimulationReport};

pub const HOURLY_CSV_HEADER: &str = "hour,arrivals,returns,relays,sunny_relays";

pub fn hourly_csv(report: &SimulationReport) -> String {
    let mut out = String::from(HOURLY_CSV_HEADER);
    out.push('\n');
    for h in &report.hourly {
        out.push_str(&format!("{},{},{},{},{}\n", h.hour, h.arrivals, h.returns, h.relays, h.sunny_relays));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub hour: u32,
    pub night: bool,
    pub baseline_arrivals: u32,
    pub baseline_returns: u32,
    pub solar_arrivals: u32,
    pub solar_returns: u32,
    pub baseline_relays: u32,
    pub solar_relays: u32,
    pub solar_sunny_relays: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub trips: u32,
    pub arrivals: u32,
    pub returns: u32,
    pub swaps: u32,
    pub energy_drawn_wh: f64,
    pub energy_harvested_wh: f64,
}

impl From<&SimulationReport> for ModeSummary {
    fn from(r: &SimulationReport) -> Self {
        let t = &r.totals;
        Self {
            trips: t.trips,
            arrivals: t.arrivals,
            returns: t.returns,
            swaps: t.swaps,
            energy_drawn_wh: t.energy_drawn_wh,
            energy_harvested_wh: t.energy_harvested_wh,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub date: chrono::NaiveDate,
    pub seed: u64,
    pub baseline: ModeSummary,
    pub solar: ModeSummary,
    pub trip_reduction_percent: f64,
    /// Net base energy saved by harvesting, Wh.
    pub energy_saved_wh: f64,
    pub hourly: Vec<ComparisonRow>,
}

impl Comparison {
    pub fn new(baseline: &SimulationReport, solar: &SimulationReport) -> Self {
        let hourly = baseline
            .hourly
            .iter()
            .zip(&solar.hourly)
            .map(|(b, s)| ComparisonRow {
                hour: b.hour,
                night: b.night,
                baseline_arrivals: b.arrivals,
                baseline_returns: b.returns,
                solar_arrivals: s.arrivals,
                solar_returns: s.returns,
                baseline_relays: b.relays,
                solar_relays: s.relays,
                solar_sunny_relays: s.sunny_relays,
            })
            .collect();
        Self {
            date: baseline.date,
            seed: baseline.config.seed,
            baseline: baseline.into(),
            solar: solar.into(),
            trip_reduction_percent: trip_reduction_percent(baseline, solar),
            energy_saved_wh: baseline.totals.energy_drawn_wh - solar.totals.energy_drawn_wh,
            hourly,
        }
    }

    pub fn csv(&self) -> String {
        let mut out = String::from(
            "hour,night,baseline_arrivals,baseline_returns,solar_arrivals,solar_returns,baseline_relays,solar_relays,solar_sunny_relays\n",
        );
        for r in &self.hourly {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.hour,
                r.night,
                r.baseline_arrivals,
                r.baseline_returns,
                r.solar_arrivals,
                r.solar_returns,
                r.baseline_relays,
                r.solar_relays,
                r.solar_sunny_relays
            ));
        }
        out
    }

    /// Fixed-width table for terminals.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:>4} {:>5} | {:>9} {:>8} | {:>9} {:>8}\n",
            "hour", "night", "base arr", "base ret", "solar arr", "solar ret"
        );
        for r in &self.hourly {
            out.push_str(&format!(
                "{:>4} {:>5} | {:>9} {:>8} | {:>9} {:>8}\n",
                r.hour,
                if r.night { "yes" } else { "" },
                r.baseline_arrivals,
                r.baseline_returns,
                r.solar_arrivals,
                r.solar_returns
            ));
        }
        out.push_str(&format!(
            "trips: baseline {}, solar {} ({:.1}% fewer)\n",
            self.baseline.trips, self.solar.trips, self.trip_reduction_percent
        ));
        out
    }
}
