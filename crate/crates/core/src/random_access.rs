//! Timing budgets of contention-based random access, for UEs attaching to a
//! relay and for relays attaching to the donor across the satellite.

use std::fmt;

use crate::error::{Error, Result};
use crate::scenario::PhysicalConstants;

/// Random-access preamble layout. The guard time bounds the round-trip
/// timing spread, so the supported cell radius is `guard_time * c / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreambleFormat {
    pub name: String,
    pub cp_duration_s: f64,
    pub sequence_duration_s: f64,
    pub guard_time_s: f64,
    pub max_cell_radius_m: f64,
}

impl PreambleFormat {
    pub fn from_guard_time(
        name: impl Into<String>,
        cp_duration_s: f64,
        sequence_duration_s: f64,
        guard_time_s: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        check_non_negative("guard_time_s", guard_time_s)?;
        Self::checked(PreambleFormat {
            name: name.into(),
            cp_duration_s,
            sequence_duration_s,
            guard_time_s,
            max_cell_radius_m: guard_time_s * constants.light_speed_ms / 2.0,
        })
    }

    /// Format whose guard time supports exactly `radius_m`.
    pub fn from_radius(
        name: impl Into<String>,
        cp_duration_s: f64,
        sequence_duration_s: f64,
        radius_m: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        check_non_negative("max_cell_radius_m", radius_m)?;
        Self::checked(PreambleFormat {
            name: name.into(),
            cp_duration_s,
            sequence_duration_s,
            guard_time_s: timing_advance(radius_m, constants),
            max_cell_radius_m: radius_m,
        })
    }

    fn checked(self) -> Result<Self> {
        check_non_negative("cp_duration_s", self.cp_duration_s)?;
        check_non_negative("sequence_duration_s", self.sequence_duration_s)?;
        Ok(self)
    }
}

fn check_non_negative(quantity: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            quantity,
            value,
            domain: "[0, inf)",
        })
    }
}

/// The four LTE preamble formats.
///
/// Only `lte-3`, the 100 km format, is pinned to an external reference
/// value; its guard time is derived from that radius. The other three carry
/// the nominal LTE cyclic-prefix, sequence and guard durations and are
/// placeholders for configuration.
pub fn lte_preamble_formats(constants: &PhysicalConstants) -> Vec<PreambleFormat> {
    let us = 1e-6;
    let mut formats: Vec<PreambleFormat> = [
        ("lte-0", 103.13, 800.0, 96.88),
        ("lte-1", 684.38, 800.0, 515.63),
        ("lte-2", 203.13, 1600.0, 196.88),
    ]
    .into_iter()
    .map(|(name, cp, seq, gt)| {
        PreambleFormat::from_guard_time(name, cp * us, seq * us, gt * us, constants)
            .expect("static table")
    })
    .collect();
    formats.push(
        PreambleFormat::from_radius("lte-3", 684.38 * us, 1600.0 * us, 100e3, constants)
            .expect("static table"),
    );
    formats
}

/// The LTE format with the largest supported radius (100 km).
pub fn lte_max_preamble(constants: &PhysicalConstants) -> PreambleFormat {
    lte_preamble_formats(constants)
        .into_iter()
        .max_by(|a, b| a.max_cell_radius_m.total_cmp(&b.max_cell_radius_m))
        .expect("non-empty table")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaTimers {
    pub rar_window_s: f64,
    pub contention_timer_s: f64,
}

impl RaTimers {
    pub fn new(rar_window_s: f64, contention_timer_s: f64) -> Result<Self> {
        for (quantity, v) in [
            ("rar_window_s", rar_window_s),
            ("contention_timer_s", contention_timer_s),
        ] {
            if !(v > 0.0) {
                return Err(Error::Domain {
                    quantity,
                    value: v,
                    domain: "(0, inf)",
                });
            }
        }
        Ok(Self {
            rar_window_s,
            contention_timer_s,
        })
    }

    /// LTE upper values: 15 ms RAR window, 64 ms contention resolution.
    pub fn lte() -> Self {
        Self {
            rar_window_s: 15e-3,
            contention_timer_s: 64e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaStage {
    UeRa,
    RnAttach,
}

impl fmt::Display for RaStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RaStage::UeRa => "ue_ra",
            RaStage::RnAttach => "rn_attach",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Budget {
    RarWindow,
    ContentionTimer,
    TimingAdvance,
}

impl Budget {
    pub fn name(self) -> &'static str {
        match self {
            Budget::RarWindow => "rar_window",
            Budget::ContentionTimer => "contention_timer",
            Budget::TimingAdvance => "timing_advance",
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub budget: Budget,
    pub required_s: f64,
    pub available_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RaVerdict {
    pub stage: RaStage,
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl RaVerdict {
    fn from_violations(stage: RaStage, violations: Vec<Violation>) -> Self {
        Self {
            stage,
            feasible: violations.is_empty(),
            violations,
        }
    }

    pub fn violated(&self) -> Vec<Budget> {
        self.violations.iter().map(|v| v.budget).collect()
    }
}

/// Round-trip timing advance for a one-way distance difference.
pub fn timing_advance(differential_distance_m: f64, constants: &PhysicalConstants) -> f64 {
    2.0 * differential_distance_m / constants.light_speed_ms
}

/// UE to relay random access. Preamble and response stay on the terrestrial
/// hop; only contention resolution crosses the satellite.
pub fn check_ue_ra(timers: &RaTimers, satellite_rtt_s: f64) -> RaVerdict {
    let mut violations = Vec::new();
    if !(timers.contention_timer_s > satellite_rtt_s) {
        violations.push(Violation {
            budget: Budget::ContentionTimer,
            required_s: satellite_rtt_s,
            available_s: timers.contention_timer_s,
        });
    }
    RaVerdict::from_violations(RaStage::UeRa, violations)
}

/// Relay attach to the donor: every step crosses the satellite, and the
/// preamble guard must absorb the round-trip spread between relays.
pub fn check_rn_attach(
    timers: &RaTimers,
    satellite_rtt_s: f64,
    preamble: &PreambleFormat,
    differential_distance_m: f64,
    constants: &PhysicalConstants,
) -> RaVerdict {
    let mut violations = Vec::new();
    if !(timers.rar_window_s > satellite_rtt_s) {
        violations.push(Violation {
            budget: Budget::RarWindow,
            required_s: satellite_rtt_s,
            available_s: timers.rar_window_s,
        });
    }
    if !(timers.contention_timer_s > satellite_rtt_s) {
        violations.push(Violation {
            budget: Budget::ContentionTimer,
            required_s: satellite_rtt_s,
            available_s: timers.contention_timer_s,
        });
    }
    if !(differential_distance_m <= preamble.max_cell_radius_m) {
        violations.push(Violation {
            budget: Budget::TimingAdvance,
            required_s: timing_advance(differential_distance_m, constants),
            available_s: timing_advance(preamble.max_cell_radius_m, constants),
        });
    }
    RaVerdict::from_violations(RaStage::RnAttach, violations)
}

/// Smallest RAR window (plus margin) that covers the satellite round trip.
pub fn required_rar_window(satellite_rtt_s: f64, margin_s: f64) -> f64 {
    satellite_rtt_s + margin_s
}

/// How the relay's RAR window is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RarWindowPolicy {
    /// One window for every deployment, sized for the worst satellite round trip.
    FixedWorstCase { worst_rtt_s: f64, margin_s: f64 },
    /// A one-bit control-channel flag tells the relay whether a satellite
    /// link is present; the window switches accordingly.
    SatelliteFlag {
        terrestrial_window_s: f64,
        satellite_window_s: f64,
        satellite_link: bool,
    },
}

impl RarWindowPolicy {
    pub fn window_s(&self) -> f64 {
        match *self {
            RarWindowPolicy::FixedWorstCase {
                worst_rtt_s,
                margin_s,
            } => required_rar_window(worst_rtt_s, margin_s),
            RarWindowPolicy::SatelliteFlag {
                terrestrial_window_s,
                satellite_window_s,
                satellite_link,
            } => {
                if satellite_link {
                    satellite_window_s
                } else {
                    terrestrial_window_s
                }
            }
        }
    }

    /// `timers` with the RAR window replaced by this policy's choice.
    pub fn apply(&self, timers: &RaTimers) -> RaTimers {
        RaTimers {
            rar_window_s: self.window_s(),
            ..*timers
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnssTaOutcome {
    pub residual_ta_s: f64,
    pub feasible: bool,
}

/// Timing advance pre-compensated from a position estimate. What remains for
/// the preamble guard is bounded by the estimation error, independent of
/// the geometric spread itself.
pub fn gnss_assisted_ta(
    differential_distance_m: f64,
    position_error_m: f64,
    preamble: &PreambleFormat,
    constants: &PhysicalConstants,
) -> Result<GnssTaOutcome> {
    check_non_negative("differential_distance_m", differential_distance_m)?;
    check_non_negative("position_error_m", position_error_m)?;
    Ok(GnssTaOutcome {
        residual_ta_s: timing_advance(position_error_m, constants),
        feasible: position_error_m <= preamble.max_cell_radius_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    #[test]
    fn ta_anchor() {
        assert!((timing_advance(100e3, &k()) - 0.667e-3).abs() < 1e-6);
        assert_eq!(timing_advance(0.0, &k()), 0.0);
        assert!((timing_advance(208e3, &k()) - 1.388e-3).abs() < 1e-6);
    }

    #[test]
    fn lte_table() {
        let formats = lte_preamble_formats(&k());
        assert_eq!(formats.len(), 4);
        for f in &formats {
            let radius = f.guard_time_s * k().light_speed_ms / 2.0;
            assert!((radius - f.max_cell_radius_m).abs() < 1e-6, "{}", f.name);
        }
        let max = lte_max_preamble(&k());
        assert_eq!(max.name, "lte-3");
        assert_eq!(max.max_cell_radius_m, 100e3);
    }

    #[test]
    fn ue_ra_contention() {
        let rtt = 16e-3;
        assert!(check_ue_ra(&RaTimers::lte(), rtt).feasible);
        let short = RaTimers::new(15e-3, 10e-3).unwrap();
        let v = check_ue_ra(&short, rtt);
        assert!(!v.feasible);
        assert_eq!(v.violated(), vec![Budget::ContentionTimer]);
        assert!(check_ue_ra(&short, 0.0).feasible);
    }

    #[test]
    fn rn_attach_lte_fails_twice() {
        let v = check_rn_attach(&RaTimers::lte(), 16e-3, &lte_max_preamble(&k()), 208e3, &k());
        assert_eq!(v.stage, RaStage::RnAttach);
        assert_eq!(v.violated(), vec![Budget::RarWindow, Budget::TimingAdvance]);
        assert!(!v.feasible);
    }

    #[test]
    fn rn_attach_larger_budgets_pass() {
        let pre = PreambleFormat::from_radius("big", 0.0, 0.0, 250e3, &k()).unwrap();
        let timers = RaTimers::new(20e-3, 64e-3).unwrap();
        assert!(check_rn_attach(&timers, 16e-3, &pre, 208e3, &k()).feasible);
        let tiny = RaTimers::new(1e-6, 1e-6).unwrap();
        assert!(check_rn_attach(&tiny, 0.0, &lte_max_preamble(&k()), 0.0, &k()).feasible);
    }

    #[test]
    fn timers_must_be_positive() {
        assert!(RaTimers::new(0.0, 1.0).is_err());
        assert!(RaTimers::new(1.0, -1.0).is_err());
    }

    #[test]
    fn rar_window_sizing() {
        assert_eq!(required_rar_window(16e-3, 0.0), 16e-3);
        assert_eq!(required_rar_window(0.0, 2e-3), 2e-3);
    }

    #[test]
    fn rar_policies() {
        let rtt = 16.01e-3;
        let fixed = RarWindowPolicy::FixedWorstCase {
            worst_rtt_s: rtt,
            margin_s: 1e-3,
        };
        let v = check_rn_attach(&fixed.apply(&RaTimers::lte()), rtt, &lte_max_preamble(&k()), 0.0, &k());
        assert!(v.feasible);

        let flagged = |sat| RarWindowPolicy::SatelliteFlag {
            terrestrial_window_s: 10e-3,
            satellite_window_s: 20e-3,
            satellite_link: sat,
        };
        assert_eq!(flagged(true).window_s(), 20e-3);
        assert_eq!(flagged(false).window_s(), 10e-3);
        let v = check_rn_attach(&flagged(false).apply(&RaTimers::lte()), rtt, &lte_max_preamble(&k()), 0.0, &k());
        assert_eq!(v.violated(), vec![Budget::RarWindow]);
    }

    #[test]
    fn gnss_ta() {
        let pre = lte_max_preamble(&k());
        let at_edge = gnss_assisted_ta(208e3, 100e3, &pre, &k()).unwrap();
        assert!(at_edge.feasible);
        assert!((at_edge.residual_ta_s - timing_advance(100e3, &k())).abs() < 1e-15);
        let perfect = gnss_assisted_ta(208e3, 0.0, &pre, &k()).unwrap();
        assert_eq!(perfect.residual_ta_s, 0.0);
        assert!(perfect.feasible);
        assert!(!gnss_assisted_ta(208e3, 150e3, &pre, &k()).unwrap().feasible);
        assert!(gnss_assisted_ta(-1.0, 0.0, &pre, &k()).is_err());
    }
}
