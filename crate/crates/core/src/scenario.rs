//! Physical constants and the study configuration.
//!
//! Scenario files are flat `key = value` text. Keys are the field names of
//! [`ScenarioConfig`] (constants included, without nesting), values are SI
//! (meters, radians, hertz, seconds) and `#` starts a comment.
//!
//! ```text
//! # Ku-band upper edge, default geometry
//! altitude_m = 1.2e6
//! carrier_hz = 14e9
//! ```

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Earth and propagation constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub earth_radius_m: f64,
    /// Gravitational parameter G·M_E.
    pub earth_mu_m3s2: f64,
    pub light_speed_ms: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            earth_radius_m: 6.371e6,
            earth_mu_m3s2: 3.986004418e14,
            light_speed_ms: 2.99792458e8,
        }
    }
}

/// One study: constellation shell, beam, radio parameters and constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub altitude_m: f64,
    pub beam_diameter_m: f64,
    pub min_elevation_rad: f64,
    pub carrier_hz: f64,
    /// Delay of the satellite to donor leg beyond the `altitude / c` approximation.
    pub feeder_extra_delay_s: f64,
    /// Tolerated frequency offset as a fraction of the subcarrier spacing.
    pub scs_doppler_ratio: f64,
    pub constants: PhysicalConstants,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            altitude_m: 1.2e6,
            beam_diameter_m: 3.2e5,
            min_elevation_rad: 45f64.to_radians(),
            carrier_hz: 14e9,
            feeder_extra_delay_s: 0.0,
            scs_doppler_ratio: 0.063,
            constants: PhysicalConstants::default(),
        }
    }
}

/// Every key a scenario file may contain, in render order.
pub const SCENARIO_KEYS: [&str; 9] = [
    "altitude_m",
    "beam_diameter_m",
    "min_elevation_rad",
    "carrier_hz",
    "feeder_extra_delay_s",
    "scs_doppler_ratio",
    "earth_radius_m",
    "earth_mu_m3s2",
    "light_speed_ms",
];

impl ScenarioConfig {
    /// Checks every invariant, naming the first one violated.
    pub fn validate(&self) -> Result<()> {
        for key in SCENARIO_KEYS {
            let v = self.get(key).expect("known key");
            if !v.is_finite() {
                return Err(Error::Validation(format!("{key} must be finite, got {v}")));
            }
        }
        let positive = [
            ("altitude_m", self.altitude_m),
            ("beam_diameter_m", self.beam_diameter_m),
            ("carrier_hz", self.carrier_hz),
            ("earth_radius_m", self.constants.earth_radius_m),
            ("earth_mu_m3s2", self.constants.earth_mu_m3s2),
            ("light_speed_ms", self.constants.light_speed_ms),
        ];
        for (key, v) in positive {
            if v <= 0.0 {
                return Err(Error::Validation(format!("{key} must be > 0, got {v}")));
            }
        }
        if !(self.min_elevation_rad > 0.0 && self.min_elevation_rad <= FRAC_PI_2) {
            return Err(Error::Validation(format!(
                "min_elevation_rad must be in (0, pi/2], got {}",
                self.min_elevation_rad
            )));
        }
        if self.feeder_extra_delay_s < 0.0 {
            return Err(Error::Validation(format!(
                "feeder_extra_delay_s must be >= 0, got {}",
                self.feeder_extra_delay_s
            )));
        }
        if !(self.scs_doppler_ratio > 0.0 && self.scs_doppler_ratio < 1.0) {
            return Err(Error::Validation(format!(
                "scs_doppler_ratio must be in (0, 1), got {}",
                self.scs_doppler_ratio
            )));
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "altitude_m" => self.altitude_m,
            "beam_diameter_m" => self.beam_diameter_m,
            "min_elevation_rad" => self.min_elevation_rad,
            "carrier_hz" => self.carrier_hz,
            "feeder_extra_delay_s" => self.feeder_extra_delay_s,
            "scs_doppler_ratio" => self.scs_doppler_ratio,
            "earth_radius_m" => self.constants.earth_radius_m,
            "earth_mu_m3s2" => self.constants.earth_mu_m3s2,
            "light_speed_ms" => self.constants.light_speed_ms,
            _ => return None,
        })
    }

    /// Sets a field by its file key. Returns `false` for an unknown key.
    pub fn set(&mut self, key: &str, value: f64) -> bool {
        let slot = match key {
            "altitude_m" => &mut self.altitude_m,
            "beam_diameter_m" => &mut self.beam_diameter_m,
            "min_elevation_rad" => &mut self.min_elevation_rad,
            "carrier_hz" => &mut self.carrier_hz,
            "feeder_extra_delay_s" => &mut self.feeder_extra_delay_s,
            "scs_doppler_ratio" => &mut self.scs_doppler_ratio,
            "earth_radius_m" => &mut self.constants.earth_radius_m,
            "earth_mu_m3s2" => &mut self.constants.earth_mu_m3s2,
            "light_speed_ms" => &mut self.constants.light_speed_ms,
            _ => return false,
        };
        *slot = value;
        true
    }

    /// Renders the config in the scenario file format. Floats use the
    /// shortest representation that parses back to the same value.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for key in SCENARIO_KEYS {
            let _ = writeln!(out, "{key} = {:?}", self.get(key).expect("known key"));
        }
        out
    }
}

/// Parses and validates a scenario document. Missing keys keep their defaults.
pub fn load_scenario(text: &str) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::default();
    let mut seen: Vec<&str> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                key: line.to_string(),
                message: "expected `key = value`".into(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            key: key.to_string(),
            message,
        };
        if seen.contains(&key) {
            return Err(parse_err("duplicate key".into()));
        }
        let number: f64 = value
            .parse()
            .map_err(|_| parse_err(format!("`{value}` is not a number")))?;
        if !cfg.set(key, number) {
            return Err(parse_err("unknown key".into()));
        }
        seen.push(key);
    }

    cfg.validate()?;
    Ok(cfg)
}
