//! Minute-resolution day simulation of a relay fleet: hourly replanning,
//! battery integration and reactive battery swaps.

use chrono::{DateTime, Duration, NaiveDate, Utc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::energy::{battery_step, draw_cloud_factor, net_energy, BatteryState, EnergyParams};
use crate::error::SimulationError;
use crate::geometry::{euclidean_distance, Point2D};
use crate::planner::{planning_context, CostParams, PlacementPlan};
use crate::scenario::Scenario;
use crate::solar::{sun_position, SearchParams};

const MINUTES_PER_DAY: u32 = 24 * 60;
/// Plan positions closer than this are the same hover spot.
const SAME_SPOT_M: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    pub timestep_min: u32,
    pub replan_interval_min: u32,
    pub seed: u64,
    /// Local civil time minus UTC, hours. The simulated day runs from local
    /// midnight to local midnight.
    pub tz_offset_hours: f64,
    /// Fraction of capacity kept in reserve when deciding to swap.
    pub return_reserve_fraction: f64,
    pub energy: EnergyParams,
    pub search: SearchParams,
    pub cost: CostParams,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            timestep_min: 1,
            replan_interval_min: 60,
            seed: 0,
            tz_offset_hours: 2.0,
            return_reserve_fraction: 0.0,
            energy: EnergyParams::default(),
            search: SearchParams::default(),
            cost: CostParams::default(),
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<(), SimulationError> {
        let bad = |msg: String| Err(SimulationError::Config(msg));
        if self.timestep_min == 0 || self.replan_interval_min == 0 {
            return bad("timestep and replanning interval must be positive".into());
        }
        if !self.replan_interval_min.is_multiple_of(self.timestep_min) {
            return bad(format!(
                "timestep ({} min) must divide the replanning interval ({} min)",
                self.timestep_min, self.replan_interval_min
            ));
        }
        if 60 % self.timestep_min != 0 {
            return bad(format!("timestep ({} min) must divide one hour", self.timestep_min));
        }
        if !(self.tz_offset_hours.is_finite() && self.tz_offset_hours.abs() <= 14.0) {
            return bad(format!("timezone offset {} h out of range", self.tz_offset_hours));
        }
        if !(0.0..1.0).contains(&self.return_reserve_fraction) {
            return bad(format!("return reserve fraction {} must lie in [0, 1)", self.return_reserve_fraction));
        }
        self.energy.validate().map_err(SimulationError::Config)?;
        self.search.validate().map_err(SimulationError::Config)?;
        self.cost.validate().map_err(SimulationError::Config)?;
        Ok(())
    }

    /// UTC instant of local midnight starting `date`.
    pub fn day_start(&self, date: NaiveDate) -> DateTime<Utc> {
        let midnight = date.and_hms_opt(0, 0, 0).expect("midnight exists").and_utc();
        midnight - Duration::seconds((self.tz_offset_hours * 3600.0).round() as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DrsStatus {
    Active,
    Returning,
    Arriving,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrsUnit {
    pub id: u32,
    pub position: Point2D,
    pub battery: BatteryState,
    pub status: DrsStatus,
    /// Cloudiness factor of the current hour.
    pub cloud_factor: f64,
    /// Lighting of the hover spot at the last replanning epoch.
    pub sunny: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripReason {
    Deployment,
    Replan,
    Swap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripEvent {
    /// Minutes since the start of the simulated day.
    pub minute: u32,
    pub reason: TripReason,
    pub unit: DrsUnit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlyStats {
    /// Local hour of day, 0 to 23.
    pub hour: u32,
    pub start: DateTime<Utc>,
    pub arrivals: u32,
    pub returns: u32,
    pub swaps: u32,
    /// Active relays at the start of the hour.
    pub relays: u32,
    pub sunny_relays: u32,
    /// Sun altitude at the start of the hour, degrees.
    pub sun_altitude: f64,
    pub night: bool,
    pub energy_consumed_wh: f64,
    pub energy_harvested_wh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub minute: u32,
    pub timestamp: DateTime<Utc>,
    pub sun_altitude: f64,
    pub sun_azimuth: f64,
    pub sunny_points: usize,
    pub plan: PlacementPlan,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimulationTotals {
    pub arrivals: u32,
    pub returns: u32,
    pub trips: u32,
    pub swaps: u32,
    pub initial_deployments: u32,
    /// Charged batteries sent out, Wh.
    pub energy_dispatched_wh: f64,
    /// Charge left in batteries flown back, Wh.
    pub energy_returned_wh: f64,
    /// Net energy taken from the charging base, Wh.
    pub energy_drawn_wh: f64,
    pub energy_consumed_wh: f64,
    pub energy_harvested_wh: f64,
    pub final_energy_wh: f64,
    /// Steps where a unit ran flat; zero unless one step exceeds a full charge.
    pub depletions: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub date: NaiveDate,
    pub solar_mode: bool,
    pub config: SimulationConfig,
    pub start: DateTime<Utc>,
    pub hourly: Vec<HourlyStats>,
    pub totals: SimulationTotals,
    pub epochs: Vec<EpochRecord>,
    pub events: Vec<TripEvent>,
    pub final_units: Vec<DrsUnit>,
}

struct Fleet<'a> {
    params: &'a EnergyParams,
    rng: ChaCha8Rng,
    next_id: u32,
    active: Vec<DrsUnit>,
    arrived_at: Vec<u32>,
    events: Vec<TripEvent>,
    totals: SimulationTotals,
    hourly: Vec<HourlyStats>,
}

impl Fleet<'_> {
    fn arrive(&mut self, minute: u32, now: DateTime<Utc>, position: Point2D, sunny: bool, reason: TripReason) -> DrsUnit {
        let unit = DrsUnit {
            id: self.next_id,
            position,
            battery: BatteryState::full(self.params, now),
            status: DrsStatus::Active,
            cloud_factor: draw_cloud_factor(&mut self.rng, self.params),
            sunny,
        };
        self.next_id += 1;
        self.totals.arrivals += 1;
        self.totals.energy_dispatched_wh += self.params.battery_capacity;
        if minute == 0 {
            self.totals.initial_deployments += 1;
        }
        let hour = &mut self.hourly[(minute / 60) as usize];
        hour.arrivals += 1;
        if reason == TripReason::Swap {
            hour.swaps += 1;
            self.totals.swaps += 1;
        }
        self.events.push(TripEvent { minute, reason, unit: DrsUnit { status: DrsStatus::Arriving, ..unit.clone() } });
        unit
    }

    fn retire(&mut self, minute: u32, unit: DrsUnit, reason: TripReason) {
        self.totals.returns += 1;
        self.totals.energy_returned_wh += unit.battery.energy;
        self.hourly[(minute / 60) as usize].returns += 1;
        self.events.push(TripEvent { minute, reason, unit: DrsUnit { status: DrsStatus::Returning, ..unit } });
    }

    /// Staffs the relay spots of `plan`. Units already on a spot stay; units
    /// whose spot disappeared move to new spots (fullest battery first) at no
    /// trip cost; the rest of the difference is made up by arrivals or
    /// returns.
    fn reconcile(&mut self, minute: u32, now: DateTime<Utc>, plan: &PlacementPlan) {
        let reason = if minute == 0 { TripReason::Deployment } else { TripReason::Replan };
        let mut pool: Vec<Option<DrsUnit>> = std::mem::take(&mut self.active).into_iter().map(Some).collect();
        let mut arrived: Vec<u32> = std::mem::take(&mut self.arrived_at);
        let mut slots: Vec<Option<(DrsUnit, u32)>> = vec![None; plan.relay_positions.len()];

        for (slot, &spot) in slots.iter_mut().zip(&plan.relay_positions) {
            let found = pool
                .iter()
                .position(|u| u.as_ref().is_some_and(|u| euclidean_distance(u.position, spot) <= SAME_SPOT_M));
            if let Some(i) = found {
                *slot = pool[i].take().map(|u| (u, arrived[i]));
            }
        }

        let mut idle: Vec<(DrsUnit, u32)> =
            pool.into_iter().zip(arrived.drain(..)).filter_map(|(u, a)| u.map(|u| (u, a))).collect();
        idle.sort_by(|a, b| b.0.battery.energy.total_cmp(&a.0.battery.energy).then(a.0.id.cmp(&b.0.id)));
        let mut idle = idle.into_iter();
        for (j, slot) in slots.iter_mut().enumerate() {
            if slot.is_none() {
                if let Some((mut unit, a)) = idle.next() {
                    unit.position = plan.relay_positions[j];
                    *slot = Some((unit, a));
                }
            }
        }
        for (unit, _) in idle {
            self.retire(minute, unit, reason);
        }

        for (j, slot) in slots.into_iter().enumerate() {
            let sunny = plan.relay_sunny[j];
            let (mut unit, a) = match slot {
                Some(s) => s,
                None => (self.arrive(minute, now, plan.relay_positions[j], sunny, reason), minute),
            };
            unit.sunny = sunny;
            self.active.push(unit);
            self.arrived_at.push(a);
        }
    }
}

/// Simulates one local day of the relay chain between the scenario's base
/// station and hotspot.
pub fn run_day_simulation(
    scenario: &Scenario,
    date: NaiveDate,
    solar_mode: bool,
    config: &SimulationConfig,
) -> Result<SimulationReport, SimulationError> {
    config.validate()?;
    let issues = scenario.validate();
    if let Some(issue) = issues.into_iter().next() {
        return Err(SimulationError::Epoch {
            epoch: 0,
            timestamp: config.day_start(date),
            source: issue.into(),
        });
    }

    let params = &config.energy;
    let start = config.day_start(date);
    let step_h = f64::from(config.timestep_min) / 60.0;
    let reserve = config.return_reserve_fraction * params.battery_capacity;

    let hourly = (0..24)
        .map(|h| {
            let t = start + Duration::hours(i64::from(h));
            let alt = sun_position(scenario.latitude, scenario.longitude, t).altitude;
            HourlyStats {
                hour: h,
                start: t,
                arrivals: 0,
                returns: 0,
                swaps: 0,
                relays: 0,
                sunny_relays: 0,
                sun_altitude: alt,
                night: alt < 0.0,
                energy_consumed_wh: 0.0,
                energy_harvested_wh: 0.0,
            }
        })
        .collect();
    let mut fleet = Fleet {
        params,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        next_id: 0,
        active: Vec::new(),
        arrived_at: Vec::new(),
        events: Vec::new(),
        totals: SimulationTotals::default(),
        hourly,
    };
    let mut epochs = Vec::new();

    for minute in (0..MINUTES_PER_DAY).step_by(config.timestep_min as usize) {
        let now = start + Duration::minutes(i64::from(minute));
        let hour = (minute / 60) as usize;

        if minute % config.replan_interval_min == 0 {
            let epoch = epochs.len();
            let ctx = planning_context(scenario, now, solar_mode, config.search)
                .map_err(|source| SimulationError::Epoch { epoch, timestamp: now, source })?;
            let plan = ctx.plan(solar_mode, &config.cost).map_err(|source| SimulationError::Epoch {
                epoch,
                timestamp: now,
                source,
            })?;
            log::debug!("epoch {epoch} at {now}: {} relays, {} sunny", plan.relay_count(), plan.sunny_relay_count());
            fleet.reconcile(minute, now, &plan);
            epochs.push(EpochRecord {
                minute,
                timestamp: now,
                sun_altitude: ctx.sun.altitude,
                sun_azimuth: ctx.sun.azimuth,
                sunny_points: ctx.sunny_points.len(),
                plan,
            });
        }

        if minute % 60 == 0 {
            for (unit, &arrived) in fleet.active.iter_mut().zip(&fleet.arrived_at) {
                if arrived != minute {
                    unit.cloud_factor = draw_cloud_factor(&mut fleet.rng, params);
                }
            }
            let stats = &mut fleet.hourly[hour];
            stats.relays = fleet.active.len() as u32;
            stats.sunny_relays = fleet.active.iter().filter(|u| u.sunny).count() as u32;
        }

        let altitude = sun_position(scenario.latitude, scenario.longitude, now).altitude;
        for i in 0..fleet.active.len() {
            let unit = &fleet.active[i];
            let harvesting = solar_mode && unit.sunny && altitude > 0.0;
            let net = net_energy(step_h, harvesting, altitude, unit.cloud_factor, params);
            if unit.battery.energy + net < reserve {
                let (position, sunny) = (unit.position, unit.sunny);
                let fresh = fleet.arrive(minute, now, position, sunny, TripReason::Swap);
                let old = std::mem::replace(&mut fleet.active[i], fresh);
                fleet.arrived_at[i] = minute;
                fleet.retire(minute, old, TripReason::Swap);
            }
            let unit = &mut fleet.active[i];
            let out = battery_step(unit.battery, step_h, harvesting, altitude, unit.cloud_factor, params);
            unit.battery = out.state;
            if out.depleted {
                log::warn!("unit {} ran flat at minute {minute}", unit.id);
                fleet.totals.depletions += 1;
            }
            fleet.totals.energy_consumed_wh += out.consumed;
            fleet.totals.energy_harvested_wh += out.stored;
            fleet.hourly[hour].energy_consumed_wh += out.consumed;
            fleet.hourly[hour].energy_harvested_wh += out.stored;
        }
    }

    let mut totals = fleet.totals;
    totals.trips = totals.arrivals + totals.returns;
    totals.energy_drawn_wh = totals.energy_dispatched_wh - totals.energy_returned_wh;
    totals.final_energy_wh = fleet.active.iter().map(|u| u.battery.energy).sum();
    Ok(SimulationReport {
        date,
        solar_mode,
        config: *config,
        start,
        hourly: fleet.hourly,
        totals,
        epochs,
        events: fleet.events,
        final_units: fleet.active,
    })
}

/// Baseline and solar runs of the same day, computed concurrently.
pub fn compare_modes(
    scenario: &Scenario,
    date: NaiveDate,
    config: &SimulationConfig,
) -> Result<(SimulationReport, SimulationReport), SimulationError> {
    let (baseline, solar) = rayon::join(
        || run_day_simulation(scenario, date, false, config),
        || run_day_simulation(scenario, date, true, config),
    );
    Ok((baseline?, solar?))
}

/// Percentage of baseline trips saved by the solar run.
pub fn trip_reduction_percent(baseline: &SimulationReport, solar: &SimulationReport) -> f64 {
    let base = f64::from(baseline.totals.trips);
    if base == 0.0 {
        return 0.0;
    }
    100.0 * (base - f64::from(solar.totals.trips)) / base
}
