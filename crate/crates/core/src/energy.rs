//! Hover consumption, photovoltaic harvest and battery bookkeeping for one
//! relay drone.

use chrono::{DateTime, Utc};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergyParams {
    /// kg
    pub mass: f64,
    /// m/s²
    pub gravity: f64,
    /// m
    pub propeller_radius: f64,
    pub propeller_count: u32,
    /// kg/m³
    pub air_density: f64,
    /// Power of the optical backhaul link, W.
    pub backhaul_power: f64,
    /// Wh
    pub battery_capacity: f64,
    pub pv_efficiency: f64,
    /// m²
    pub pv_area: f64,
    /// W/m²
    pub solar_constant: f64,
    pub atmospheric_transmittance: f64,
    /// Bounds of the uniform cloudiness factor.
    pub cloud_factor_range: [f64; 2],
}

impl Default for EnergyParams {
    fn default() -> Self {
        Self {
            mass: 4.0,
            gravity: 9.81,
            propeller_radius: 0.25,
            propeller_count: 4,
            air_density: 1.225,
            backhaul_power: 0.2,
            battery_capacity: 222.0,
            pv_efficiency: 0.2,
            pv_area: 1.0,
            solar_constant: 1353.0,
            atmospheric_transmittance: 0.7,
            cloud_factor_range: [0.8, 1.0],
        }
    }
}

impl EnergyParams {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("mass", self.mass),
            ("gravity", self.gravity),
            ("propeller_radius", self.propeller_radius),
            ("air_density", self.air_density),
            ("battery_capacity", self.battery_capacity),
            ("pv_efficiency", self.pv_efficiency),
            ("pv_area", self.pv_area),
            ("solar_constant", self.solar_constant),
            ("atmospheric_transmittance", self.atmospheric_transmittance),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.backhaul_power.is_finite() && self.backhaul_power >= 0.0) {
            return Err(format!("backhaul_power must be non-negative, got {}", self.backhaul_power));
        }
        if self.propeller_count == 0 {
            return Err("propeller_count must be positive".into());
        }
        if self.pv_efficiency > 1.0 || self.atmospheric_transmittance > 1.0 {
            return Err("pv_efficiency and atmospheric_transmittance must not exceed 1".into());
        }
        let [lo, hi] = self.cloud_factor_range;
        if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
            return Err(format!("cloud_factor_range must satisfy 0 < low <= high <= 1, got [{lo}, {hi}]"));
        }
        Ok(())
    }

    /// Hover plus backhaul draw, W.
    pub fn load_power(&self) -> f64 {
        hover_power(self) + self.backhaul_power
    }
}

/// Momentum-theory hover power, W.
pub fn hover_power(params: &EnergyParams) -> f64 {
    let thrust = params.mass * params.gravity;
    let disc_area = std::f64::consts::PI * params.propeller_radius.powi(2) * f64::from(params.propeller_count);
    (thrust.powi(3) / (2.0 * disc_area * params.air_density)).sqrt()
}

/// Power collected by a horizontal panel, W. Zero with the sun at or below
/// the horizon.
pub fn pv_power(params: &EnergyParams, altitude_deg: f64, cloud_factor: f64) -> f64 {
    if altitude_deg <= 0.0 {
        return 0.0;
    }
    params.atmospheric_transmittance
        * params.solar_constant
        * cloud_factor
        * params.pv_efficiency
        * params.pv_area
        * altitude_deg.to_radians().sin()
}

/// Flight time on one charge with no harvesting, hours.
pub fn endurance_without_sun(params: &EnergyParams) -> f64 {
    params.battery_capacity / params.load_power()
}

pub fn draw_cloud_factor<R: Rng + ?Sized>(rng: &mut R, params: &EnergyParams) -> f64 {
    let [lo, hi] = params.cloud_factor_range;
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatteryState {
    /// Wh
    pub energy: f64,
    pub timestamp: DateTime<Utc>,
}

impl BatteryState {
    pub fn full(params: &EnergyParams, timestamp: DateTime<Utc>) -> Self {
        Self { energy: params.battery_capacity, timestamp }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub state: BatteryState,
    /// The load could not be covered and the battery hit zero.
    pub depleted: bool,
    /// Hover and backhaul energy, Wh.
    pub consumed: f64,
    /// Harvest actually stored after the capacity clamp, Wh.
    pub stored: f64,
}

/// Net energy change over `hours` before clamping, Wh.
pub fn net_energy(hours: f64, harvesting: bool, altitude_deg: f64, cloud_factor: f64, params: &EnergyParams) -> f64 {
    let gain = if harvesting { pv_power(params, altitude_deg, cloud_factor) * hours } else { 0.0 };
    gain - params.load_power() * hours
}

/// Advances a battery by `hours`, clamping the level to `[0, capacity]`.
pub fn battery_step(
    state: BatteryState,
    hours: f64,
    harvesting: bool,
    altitude_deg: f64,
    cloud_factor: f64,
    params: &EnergyParams,
) -> StepOutcome {
    let gain = if harvesting { pv_power(params, altitude_deg, cloud_factor) * hours } else { 0.0 };
    let consumed = params.load_power() * hours;
    let raw = state.energy + gain - consumed;
    let energy = raw.clamp(0.0, params.battery_capacity);
    let wasted = (raw - params.battery_capacity).max(0.0);
    let ms = (hours * 3_600_000.0).round() as i64;
    StepOutcome {
        state: BatteryState { energy, timestamp: state.timestamp + chrono::Duration::milliseconds(ms) },
        depleted: raw <= 0.0,
        consumed,
        stored: gain - wasted,
    }
}
