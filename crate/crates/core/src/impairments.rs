//! Propagation delay, Doppler shift, and the residual Doppler left after
//! compensating with an imperfect satellite-position estimate.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{angular_velocity, slant_range};
use crate::scenario::{PhysicalConstants, ScenarioConfig};

/// Round-trip delay split into its legs. `round_trip_s` is the exact sum of
/// the component values.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayBudget {
    pub one_way_s: f64,
    pub round_trip_s: f64,
    pub components: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerResult {
    pub carrier_hz: f64,
    pub elevation_rad: f64,
    pub position_error_m: f64,
    pub true_doppler_hz: f64,
    pub estimated_doppler_hz: f64,
    pub residual_doppler_hz: f64,
}

/// Relay-to-donor round trip through the satellite, with the satellite to
/// donor distance approximated by the altitude plus the configured extra
/// feeder delay. Accepts a zero altitude.
pub fn round_trip_time(cfg: &ScenarioConfig) -> DelayBudget {
    let c = cfg.constants.light_speed_ms;
    let service = 2.0 * cfg.altitude_m / c;
    let feeder = 2.0 * (cfg.altitude_m / c + cfg.feeder_extra_delay_s);
    let round_trip_s = service + feeder;
    DelayBudget {
        one_way_s: round_trip_s / 2.0,
        round_trip_s,
        components: vec![
            ("relay_satellite".to_string(), service),
            ("satellite_donor".to_string(), feeder),
        ],
    }
}

/// Maximum Doppler seen by a terminal moving at `speed_ms`, `angle_rad`
/// being the angle between its velocity and the line of sight.
pub fn ue_doppler(
    constants: &PhysicalConstants,
    speed_ms: f64,
    carrier_hz: f64,
    angle_rad: f64,
) -> Result<f64> {
    if !(speed_ms >= 0.0) {
        return Err(Error::Domain {
            quantity: "speed_ms",
            value: speed_ms,
            domain: "[0, inf)",
        });
    }
    Ok(speed_ms * carrier_hz * angle_rad.cos() / constants.light_speed_ms)
}

/// Peak Doppler scale `f_c * w_sat * R_E / c`; the Doppler at elevation
/// `theta` is this times `cos(theta)`.
fn doppler_scale(cfg: &ScenarioConfig) -> f64 {
    cfg.carrier_hz * angular_velocity(cfg) * cfg.constants.earth_radius_m
        / cfg.constants.light_speed_ms
}

/// Doppler on the satellite link for a fixed ground terminal.
pub fn sat_doppler(cfg: &ScenarioConfig, elevation_rad: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2).contains(&elevation_rad) {
        return Err(Error::Domain {
            quantity: "elevation_rad",
            value: elevation_rad,
            domain: "[0, pi/2]",
        });
    }
    Ok(doppler_scale(cfg) * elevation_rad.cos())
}

fn apparent_cos_elevation(slant_range_m: f64, elevation_rad: f64, position_error_m: f64) -> f64 {
    let projected = slant_range_m * elevation_rad.cos();
    let num = projected + position_error_m;
    let den = (slant_range_m * slant_range_m
        + position_error_m * position_error_m
        + 2.0 * position_error_m * projected)
        .sqrt();
    (num / den).clamp(-1.0, 1.0)
}

/// Elevation implied by a satellite position displaced by `position_error_m`
/// along the ground projection of the line of sight.
pub fn apparent_elevation(
    slant_range_m: f64,
    elevation_rad: f64,
    position_error_m: f64,
) -> Result<f64> {
    if !(slant_range_m > 0.0) {
        return Err(Error::Domain {
            quantity: "slant_range_m",
            value: slant_range_m,
            domain: "(0, inf)",
        });
    }
    if !(position_error_m >= 0.0) {
        return Err(Error::Domain {
            quantity: "position_error_m",
            value: position_error_m,
            domain: "[0, inf)",
        });
    }
    if position_error_m == 0.0 {
        return Ok(elevation_rad);
    }
    Ok(apparent_cos_elevation(slant_range_m, elevation_rad, position_error_m).acos())
}

/// True, estimated and residual Doppler at one elevation and position error.
pub fn residual_doppler(
    cfg: &ScenarioConfig,
    elevation_rad: f64,
    position_error_m: f64,
) -> Result<DopplerResult> {
    if !(elevation_rad >= cfg.min_elevation_rad && elevation_rad <= FRAC_PI_2) {
        return Err(Error::Domain {
            quantity: "elevation_rad",
            value: elevation_rad,
            domain: "[min_elevation_rad, pi/2]",
        });
    }
    let d = slant_range(cfg, elevation_rad)?;
    // validates the error term
    apparent_elevation(d, elevation_rad, position_error_m)?;

    let scale = doppler_scale(cfg);
    let true_doppler_hz = scale * elevation_rad.cos();
    let estimated_doppler_hz = if position_error_m == 0.0 {
        true_doppler_hz
    } else {
        scale * apparent_cos_elevation(d, elevation_rad, position_error_m)
    };
    Ok(DopplerResult {
        carrier_hz: cfg.carrier_hz,
        elevation_rad,
        position_error_m,
        true_doppler_hz,
        estimated_doppler_hz,
        residual_doppler_hz: (true_doppler_hz - estimated_doppler_hz).abs(),
    })
}

/// Residual Doppler over an elevation x position-error grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DopplerSurface {
    pub elevations_rad: Vec<f64>,
    pub position_errors_m: Vec<f64>,
    /// Row-major: one row per elevation, one column per position error.
    pub cells: Vec<DopplerResult>,
}

impl DopplerSurface {
    pub fn at(&self, elevation_idx: usize, error_idx: usize) -> &DopplerResult {
        &self.cells[elevation_idx * self.position_errors_m.len() + error_idx]
    }
}

pub fn residual_doppler_surface(
    cfg: &ScenarioConfig,
    elevations_rad: &[f64],
    position_errors_m: &[f64],
) -> Result<DopplerSurface> {
    if elevations_rad.is_empty() || position_errors_m.is_empty() {
        return Err(Error::Domain {
            quantity: "grid length",
            value: 0.0,
            domain: "non-empty grids",
        });
    }
    let rows: Vec<Vec<DopplerResult>> = elevations_rad
        .par_iter()
        .map(|&th| {
            position_errors_m
                .iter()
                .map(|&rb| residual_doppler(cfg, th, rb))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(DopplerSurface {
        elevations_rad: elevations_rad.to_vec(),
        position_errors_m: position_errors_m.to_vec(),
        cells: rows.into_iter().flatten().collect(),
    })
}

/// Elevations 45..=90 degrees in 1 degree steps.
pub fn default_elevation_grid() -> Vec<f64> {
    (45..=90).map(|d| f64::from(d).to_radians()).collect()
}

/// Position errors 0..=50 km in 1 km steps.
pub fn default_error_grid() -> Vec<f64> {
    (0..=50).map(|k| f64::from(k) * 1e3).collect()
}
