use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

/// Apparent sun direction seen from one place at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SunPosition {
    /// Degrees above the horizon; negative at night.
    pub altitude: f64,
    /// Degrees clockwise from north, in `[0, 360)`.
    pub azimuth: f64,
}

impl SunPosition {
    pub fn is_up(&self) -> bool {
        self.altitude > 0.0
    }
}

fn julian_century(t: DateTime<Utc>) -> f64 {
    let unix = t.timestamp() as f64 + f64::from(t.timestamp_subsec_nanos()) * 1e-9;
    let jd = unix / 86_400.0 + 2_440_587.5;
    (jd - 2_451_545.0) / 36_525.0
}

/// Sun position from the NOAA low-precision solar ephemeris (Meeus series
/// truncated), good to about 0.01 deg for 1950-2050. Refraction is not
/// applied: the altitude is geometric.
pub fn sun_position(latitude: f64, longitude: f64, t: DateTime<Utc>) -> SunPosition {
    let jc = julian_century(t);

    let mean_long = (280.46646 + jc * (36000.76983 + jc * 0.0003032)).rem_euclid(360.0);
    let mean_anom = 357.52911 + jc * (35999.05029 - 0.0001537 * jc);
    let eccent = 0.016708634 - jc * (0.000042037 + 0.0000001267 * jc);
    let m = mean_anom.to_radians();
    let center = m.sin() * (1.914602 - jc * (0.004817 + 0.000014 * jc))
        + (2.0 * m).sin() * (0.019993 - 0.000101 * jc)
        + (3.0 * m).sin() * 0.000289;
    let true_long = mean_long + center;
    let omega = (125.04 - 1934.136 * jc).to_radians();
    let apparent_long = (true_long - 0.00569 - 0.00478 * omega.sin()).to_radians();

    let mean_obliq = 23.0 + (26.0 + (21.448 - jc * (46.815 + jc * (0.00059 - jc * 0.001813))) / 60.0) / 60.0;
    let obliq = (mean_obliq + 0.00256 * omega.cos()).to_radians();
    let decl = (obliq.sin() * apparent_long.sin()).asin();

    let y = (obliq / 2.0).tan().powi(2);
    let l0 = mean_long.to_radians();
    let eq_time_min = 4.0
        * (y * (2.0 * l0).sin() - 2.0 * eccent * m.sin()
            + 4.0 * eccent * y * m.sin() * (2.0 * l0).cos()
            - 0.5 * y * y * (4.0 * l0).sin()
            - 1.25 * eccent * eccent * (2.0 * m).sin())
        .to_degrees();

    let secs_of_day = t.timestamp().rem_euclid(86_400) as f64 + f64::from(t.timestamp_subsec_nanos()) * 1e-9;
    let true_solar_min = (secs_of_day / 60.0 + eq_time_min + 4.0 * longitude).rem_euclid(1440.0);
    let hour_angle = (true_solar_min / 4.0 - 180.0).to_radians();

    let lat = latitude.to_radians();
    let sin_alt = lat.sin() * decl.sin() + lat.cos() * decl.cos() * hour_angle.cos();
    let altitude = sin_alt.clamp(-1.0, 1.0).asin().to_degrees();

    let east = -decl.cos() * hour_angle.sin();
    let north = decl.sin() * lat.cos() - decl.cos() * hour_angle.cos() * lat.sin();
    let mut azimuth = east.atan2(north).to_degrees().rem_euclid(360.0);
    if azimuth >= 360.0 {
        azimuth = 0.0;
    }
    SunPosition { altitude, azimuth }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{Duration, TimeZone};

    const MADRID: (f64, f64) = (40.41872533, -3.70427144);

    fn peak_altitude(lat: f64, lon: f64, day: DateTime<Utc>) -> f64 {
        (0..1440)
            .map(|m| sun_position(lat, lon, day + Duration::minutes(m)).altitude)
            .fold(f64::MIN, f64::max)
    }

    #[test]
    fn madrid_solstice_noon_altitude() {
        let day = Utc.with_ymd_and_hms(2021, 6, 21, 0, 0, 0).unwrap();
        let expected = 90.0 - MADRID.0 + 23.44;
        let peak = peak_altitude(MADRID.0, MADRID.1, day);
        assert!((peak - expected).abs() < 0.5, "peak {peak}");
        assert!((peak - 73.0).abs() < 0.5);
    }

    #[test]
    fn madrid_night() {
        let t = Utc.with_ymd_and_hms(2021, 6, 21, 1, 0, 0).unwrap();
        assert!(sun_position(MADRID.0, MADRID.1, t).altitude < 0.0);
    }

    #[test]
    fn equator_equinox_zenith() {
        let day = Utc.with_ymd_and_hms(2021, 3, 20, 0, 0, 0).unwrap();
        assert!((peak_altitude(0.0, 0.0, day) - 90.0).abs() < 0.5);
    }

    // Reference values published with the geo-shadows crate (SunCalc based).
    #[test]
    fn new_york_reference_positions() {
        let nyc = (40.712784, -74.005941);
        let winter = Utc.timestamp_millis_opt(1_419_184_800_000).unwrap();
        let s = sun_position(nyc.0, nyc.1, winter);
        assert!((s.altitude - 24.0).abs() < 1.0, "{s:?}");
        assert!((s.azimuth - 196.0).abs() < 1.0, "{s:?}");
        let summer = Utc.timestamp_millis_opt(1_655_830_800_000).unwrap();
        let s = sun_position(nyc.0, nyc.1, summer);
        assert!((s.altitude - 73.0).abs() < 1.0, "{s:?}");
        assert!((s.azimuth - 181.0).abs() < 1.0, "{s:?}");
    }

    #[test]
    fn morning_sun_is_east_evening_west() {
        let morning = Utc.with_ymd_and_hms(2021, 6, 21, 7, 0, 0).unwrap();
        let evening = Utc.with_ymd_and_hms(2021, 6, 21, 18, 0, 0).unwrap();
        let a = sun_position(MADRID.0, MADRID.1, morning);
        let b = sun_position(MADRID.0, MADRID.1, evening);
        assert!(a.azimuth > 45.0 && a.azimuth < 135.0, "{a:?}");
        assert!(b.azimuth > 225.0 && b.azimuth < 315.0, "{b:?}");
    }
}
