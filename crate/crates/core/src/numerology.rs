//! Subcarrier-spacing grid and the position error each spacing tolerates.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::impairments::residual_doppler;
use crate::scenario::ScenarioConfig;

/// Base subcarrier spacing, n = 0.
pub const BASE_SCS_HZ: f64 = 15e3;

/// Resolution of the position-error bisection.
pub const POSITION_ERROR_QUANTUM_M: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumerologyEntry {
    pub index_n: u32,
    pub scs_hz: f64,
    pub tolerated_doppler_hz: f64,
    pub max_position_error_m: f64,
}

pub fn scs_from_index(n: u32) -> f64 {
    BASE_SCS_HZ * 2f64.powi(n as i32)
}

/// Largest frequency offset a spacing tolerates: `ratio * scs`.
pub fn tolerated_doppler(scs_hz: f64, ratio: f64) -> Result<f64> {
    if !(scs_hz > 0.0) {
        return Err(Error::Domain {
            quantity: "scs_hz",
            value: scs_hz,
            domain: "(0, inf)",
        });
    }
    Ok(ratio * scs_hz)
}

/// Largest position error whose residual Doppler at zenith stays within the
/// spacing's tolerance, to [`POSITION_ERROR_QUANTUM_M`].
pub fn max_position_error(cfg: &ScenarioConfig, scs_hz: f64) -> Result<f64> {
    let tolerance = tolerated_doppler(scs_hz, cfg.scs_doppler_ratio)?;
    let residual = |rb: f64| -> Result<f64> {
        Ok(residual_doppler(cfg, FRAC_PI_2, rb)?.residual_doppler_hz)
    };

    let mut lo = 0.0;
    let mut hi = 1e3;
    while residual(hi)? <= tolerance {
        lo = hi;
        hi *= 2.0;
        // residual at zenith saturates at the peak Doppler; past ~1e12 m the
        // tolerance exceeds anything reachable
        if hi > 1e12 {
            return Err(Error::UnboundedPositionError {
                tolerance_hz: tolerance,
            });
        }
    }
    while hi - lo > POSITION_ERROR_QUANTUM_M {
        let mid = 0.5 * (lo + hi);
        if residual(mid)? <= tolerance {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

pub fn numerology_entry(cfg: &ScenarioConfig, index_n: u32) -> Result<NumerologyEntry> {
    let scs_hz = scs_from_index(index_n);
    Ok(NumerologyEntry {
        index_n,
        scs_hz,
        tolerated_doppler_hz: tolerated_doppler(scs_hz, cfg.scs_doppler_ratio)?,
        max_position_error_m: max_position_error(cfg, scs_hz)?,
    })
}

/// Entries for `n = 0..=max_index`, sorted by spacing.
pub fn numerology_table(cfg: &ScenarioConfig, max_index: u32) -> Result<Vec<NumerologyEntry>> {
    (0..=max_index).map(|n| numerology_entry(cfg, n)).collect()
}

/// Smallest spacing whose tolerance covers `required_doppler_hz`.
/// `available` must be sorted by spacing.
pub fn select_numerology(
    required_doppler_hz: f64,
    available: &[NumerologyEntry],
) -> Result<NumerologyEntry> {
    available
        .iter()
        .find(|e| e.tolerated_doppler_hz >= required_doppler_hz)
        .copied()
        .ok_or(Error::NoNumerology {
            required_hz: required_doppler_hz,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn spacing_grid() {
        assert_eq!(scs_from_index(0), 15e3);
        assert_eq!(scs_from_index(2), 60e3);
        assert_eq!(scs_from_index(5), 480e3);
    }

    #[test]
    fn tolerance_is_six_point_three_percent() {
        let t = |s| tolerated_doppler(s, 0.063).unwrap();
        assert!((t(15e3) - 945.0).abs() < 1e-9);
        assert!((t(30e3) - 1890.0).abs() < 1e-9);
        assert!((t(120e3) - 7560.0).abs() < 1e-9);
        // printed as 30.4 kHz, exact ratio gives 30.24 kHz
        assert!((t(480e3) - 30240.0).abs() < 1e-9);
        assert!(tolerated_doppler(0.0, 0.063).is_err());
    }

    #[test]
    fn table_position_errors() {
        let cfg = ScenarioConfig::default();
        let rb15 = max_position_error(&cfg, 15e3).unwrap();
        assert!(rel(rb15, 3.95e3) < 0.03, "{rb15}");
        let rb60 = max_position_error(&cfg, 60e3).unwrap();
        assert!(rel(rb60, 15.8e3) < 0.03, "{rb60}");
    }

    #[test]
    fn unreachable_tolerance_is_unbounded() {
        let cfg = ScenarioConfig {
            scs_doppler_ratio: 0.9,
            ..Default::default()
        };
        // 0.9 * 480 kHz = 432 kHz, above the 285 kHz peak Doppler
        assert!(matches!(
            max_position_error(&cfg, 480e3),
            Err(Error::UnboundedPositionError { .. })
        ));
    }

    #[test]
    fn selection() {
        let cfg = ScenarioConfig::default();
        let grid = numerology_table(&cfg, 5).unwrap();
        // the 1.9 kHz requirement is the rounded 500 km/h, 4 GHz UE Doppler (~1853 Hz)
        let ue = crate::impairments::ue_doppler(&cfg.constants, 500.0 / 3.6, 4e9, 0.0).unwrap();
        assert_eq!(select_numerology(ue, &grid).unwrap().scs_hz, 30e3);
        // taken literally, 1900 Hz is above 0.063 * 30 kHz = 1890 Hz
        assert_eq!(select_numerology(1.9e3, &grid).unwrap().scs_hz, 60e3);
        assert_eq!(select_numerology(0.0, &grid).unwrap().scs_hz, 15e3);
        assert!(matches!(
            select_numerology(31e3, &grid),
            Err(Error::NoNumerology { .. })
        ));
    }
}
