//! Circular-orbit geometry over a spherical Earth.
//!
//! All angles are radians; the ground terminal sits on the surface and the
//! satellite at `earth_radius + altitude`. Nothing here rotates the Earth.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::scenario::ScenarioConfig;

/// Line-of-sight solution for one ground terminal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySolution {
    pub slant_range_m: f64,
    pub elevation_rad: f64,
    /// Great-circle distance from the sub-satellite point to the terminal.
    pub ground_arc_m: f64,
}

/// Far and near relay of the worst-case pair inside one beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferentialGeometry {
    pub d1_m: f64,
    pub d2_m: f64,
    pub differential_m: f64,
}

/// Orbital angular velocity `sqrt(mu / (R_E + h)^3)`.
pub fn angular_velocity(cfg: &ScenarioConfig) -> f64 {
    let r = cfg.constants.earth_radius_m + cfg.altitude_m;
    (cfg.constants.earth_mu_m3s2 / (r * r * r)).sqrt()
}

/// Speed of the sub-satellite point along the ground.
pub fn ground_track_speed(cfg: &ScenarioConfig) -> f64 {
    angular_velocity(cfg) * cfg.constants.earth_radius_m
}

fn check_elevation(elevation_rad: f64) -> Result<()> {
    if elevation_rad > 0.0 && elevation_rad <= FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::Domain {
            quantity: "elevation_rad",
            value: elevation_rad,
            domain: "(0, pi/2]",
        })
    }
}

/// Terminal-to-satellite distance at a given elevation: the positive root of
/// `(R+h)^2 - R^2 - d^2 = 2 R d sin(elevation)`.
pub fn slant_range(cfg: &ScenarioConfig, elevation_rad: f64) -> Result<f64> {
    check_elevation(elevation_rad)?;
    let re = cfg.constants.earth_radius_m;
    let h = cfg.altitude_m;
    let b = re * elevation_rad.sin();
    let c = h * (2.0 * re + h);
    // -b + sqrt(b^2 + c), rearranged to avoid cancellation
    Ok(c / (b + (b * b + c).sqrt()))
}

/// Earth-central angle between the sub-satellite point and a terminal that
/// sees the satellite at `elevation_rad`.
pub fn central_angle(cfg: &ScenarioConfig, elevation_rad: f64) -> f64 {
    let re = cfg.constants.earth_radius_m;
    let r = re + cfg.altitude_m;
    (FRAC_PI_2 - elevation_rad - (re * elevation_rad.cos() / r).asin()).max(0.0)
}

/// Full solution for a terminal at the given elevation.
pub fn solve_elevation(cfg: &ScenarioConfig, elevation_rad: f64) -> Result<GeometrySolution> {
    let slant_range_m = slant_range(cfg, elevation_rad)?;
    Ok(GeometrySolution {
        slant_range_m,
        elevation_rad,
        ground_arc_m: central_angle(cfg, elevation_rad) * cfg.constants.earth_radius_m,
    })
}

/// Full solution for a terminal at a given ground distance from the
/// sub-satellite point. The arc must keep the satellite above the horizon.
pub fn solve_ground_arc(cfg: &ScenarioConfig, ground_arc_m: f64) -> Result<GeometrySolution> {
    let re = cfg.constants.earth_radius_m;
    let r = re + cfg.altitude_m;
    let psi = ground_arc_m / re;
    let elevation_rad = (r * psi.cos() - re).atan2(r * psi.sin());
    if ground_arc_m < 0.0 || elevation_rad <= 0.0 {
        return Err(Error::Domain {
            quantity: "ground_arc_m",
            value: ground_arc_m,
            domain: "the visible cap above the horizon",
        });
    }
    Ok(GeometrySolution {
        slant_range_m: slant_range(cfg, elevation_rad)?,
        elevation_rad,
        ground_arc_m,
    })
}

/// Worst-case slant-range spread between two relays in one beam.
///
/// The far relay sits at the minimum elevation; the near one lies on the same
/// great circle, one beam diameter closer to the sub-satellite point.
pub fn differential_distance(cfg: &ScenarioConfig) -> Result<DifferentialGeometry> {
    let far = solve_elevation(cfg, cfg.min_elevation_rad)?;
    let near_arc = far.ground_arc_m - cfg.beam_diameter_m;
    if near_arc < 0.0 {
        return Err(Error::BeamExceedsArc {
            beam_m: cfg.beam_diameter_m,
            arc_m: far.ground_arc_m,
        });
    }
    let near = if cfg.beam_diameter_m == 0.0 {
        far
    } else {
        solve_ground_arc(cfg, near_arc)?
    };
    Ok(DifferentialGeometry {
        d1_m: far.slant_range_m,
        d2_m: near.slant_range_m,
        differential_m: far.slant_range_m - near.slant_range_m,
    })
}

/// Time an overhead pass keeps the satellite above the minimum elevation.
pub fn visibility_pass_duration(cfg: &ScenarioConfig) -> f64 {
    2.0 * central_angle(cfg, cfg.min_elevation_rad) / angular_velocity(cfg)
}
