//! Parallel stop-and-wait HARQ over a long-delay link: closed-form
//! dimensioning and a seeded discrete-event simulator.

mod sim;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use sim::{simulate, simulate_with_log, EventKind, EventRecord, HarqReport};

/// Retransmission strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// 1-bit ACK/NACK with as many processes as needed.
    Full,
    /// 2-bit feedback: a failed decode reports one of four margin levels,
    /// and the level picks the success probability of the retransmission.
    Multibit,
    /// 1-bit ACK/NACK with a deliberately small process count.
    Capped,
    /// No feedback; every TB is sent `replication_factor` times back to back.
    Replication,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Full => "full",
            Strategy::Multibit => "multibit",
            Strategy::Capped => "capped",
            Strategy::Replication => "replication",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Strategy::Full),
            "multibit" => Ok(Strategy::Multibit),
            "capped" => Ok(Strategy::Capped),
            "replication" => Ok(Strategy::Replication),
            other => Err(Error::HarqConfig(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Number of margin levels a 2-bit feedback word carries.
pub const FEEDBACK_LEVELS: usize = 4;

/// Per-attempt Bernoulli decoding model.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorModel {
    /// Success probability of attempt `i + 1`. The last value repeats for
    /// later attempts.
    pub attempt_success: Vec<f64>,
    /// Multibit only. Row `i` covers attempt `i + 2`; the column is the
    /// margin level reported for the previous attempt, 0 being closest to
    /// a successful decode. The last row repeats.
    pub level_success: Vec<[f64; FEEDBACK_LEVELS]>,
}

impl ErrorModel {
    pub fn error_free() -> Self {
        Self::constant(1.0)
    }

    pub fn constant(p: f64) -> Self {
        Self {
            attempt_success: vec![p],
            level_success: Vec::new(),
        }
    }

    /// Level table whose every column equals the attempt column; multibit
    /// then behaves exactly like 1-bit feedback.
    pub fn with_flat_levels(mut self, max_transmissions: u32) -> Self {
        self.level_success = (2..=max_transmissions.max(2))
            .map(|a| [self.attempt_probability(a); FEEDBACK_LEVELS])
            .collect();
        self
    }

    pub fn attempt_probability(&self, attempt: u32) -> f64 {
        pick(&self.attempt_success, attempt as usize - 1)
    }

    pub fn level_probability(&self, attempt: u32, level: usize) -> f64 {
        let row = (attempt as usize).saturating_sub(2).min(self.level_success.len() - 1);
        self.level_success[row][level]
    }
}

fn pick(values: &[f64], idx: usize) -> f64 {
    values[idx.min(values.len() - 1)]
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarqConfig {
    pub tti_s: f64,
    /// Receiver processing time.
    pub proc_rx_s: f64,
    /// Transmitter processing time.
    pub proc_tx_s: f64,
    pub ack_duration_s: f64,
    /// One-way propagation delay.
    pub propagation_s: f64,
    pub num_processes: usize,
    pub feedback_bits: u8,
    pub max_transmissions: u32,
    pub strategy: Strategy,
    pub replication_factor: u32,
    pub error_model: ErrorModel,
    pub seed: u64,
    /// Forward link rate; one TTI of it is the soft-bit size of one TB.
    pub link_rate_bits_per_s: f64,
}

impl Default for HarqConfig {
    /// 16 ms satellite round trip, 8 ms total processing, 1 ms TTI,
    /// 24 processes, error-free channel.
    fn default() -> Self {
        Self {
            tti_s: 1e-3,
            proc_rx_s: 4e-3,
            proc_tx_s: 4e-3,
            ack_duration_s: 0.0,
            propagation_s: 8e-3,
            num_processes: 24,
            feedback_bits: 1,
            max_transmissions: 4,
            strategy: Strategy::Full,
            replication_factor: 1,
            error_model: ErrorModel::error_free(),
            seed: 0,
            link_rate_bits_per_s: 100e6,
        }
    }
}

impl HarqConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::HarqConfig(m));
        for (name, v) in [
            ("tti_s", self.tti_s),
            ("proc_rx_s", self.proc_rx_s),
            ("proc_tx_s", self.proc_tx_s),
            ("ack_duration_s", self.ack_duration_s),
            ("propagation_s", self.propagation_s),
            ("link_rate_bits_per_s", self.link_rate_bits_per_s),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be finite and >= 0, got {v}"));
            }
        }
        if self.tti_s <= 0.0 {
            return bad("tti_s must be > 0".into());
        }
        if self.num_processes == 0 {
            return bad("num_processes must be >= 1".into());
        }
        if self.max_transmissions == 0 {
            return bad("max_transmissions must be >= 1".into());
        }
        if self.replication_factor == 0 {
            return bad("replication_factor must be >= 1".into());
        }
        if !matches!(self.feedback_bits, 1 | 2) {
            return bad(format!("feedback_bits must be 1 or 2, got {}", self.feedback_bits));
        }
        match self.strategy {
            Strategy::Multibit if self.feedback_bits != 2 => {
                return bad("multibit strategy needs 2 feedback bits".into());
            }
            Strategy::Full | Strategy::Capped | Strategy::Replication if self.feedback_bits != 1 => {
                return bad(format!("{} strategy uses 1 feedback bit", self.strategy));
            }
            _ => {}
        }
        if self.strategy != Strategy::Replication && self.replication_factor != 1 {
            return bad("replication_factor applies to the replication strategy only".into());
        }
        if self.strategy == Strategy::Multibit && self.error_model.level_success.is_empty() {
            return bad("multibit strategy needs level-indexed success probabilities".into());
        }
        if self.error_model.attempt_success.is_empty() {
            return bad("error model needs at least one attempt probability".into());
        }
        let probs = self
            .error_model
            .attempt_success
            .iter()
            .chain(self.error_model.level_success.iter().flatten());
        for &p in probs {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("success probability {p} outside [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn cycle_time(&self) -> f64 {
        harq_cycle_time(self)
    }
}

/// Time from the end of a TB until its process may transmit again:
/// `2 T_p + T_rx + T_tx + T_ack`.
pub fn harq_cycle_time(cfg: &HarqConfig) -> f64 {
    2.0 * cfg.propagation_s + cfg.proc_rx_s + cfg.proc_tx_s + cfg.ack_duration_s
}

/// `ceil(t_harq / tti)`, at least one. Ratios within 1e-9 of an integer
/// count as that integer so that decimal inputs like 24 ms / 1 ms give 24.
pub fn min_processes(t_harq_s: f64, tti_s: f64) -> usize {
    let ratio = t_harq_s / tti_s;
    let nearest = ratio.round();
    let n = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        ratio.ceil()
    };
    (n as usize).max(1)
}

/// Soft-buffer size: one TTI worth of soft bits per process.
pub fn buffer_requirement(num_processes: usize, tti_s: f64, link_rate_bits_per_s: f64) -> f64 {
    num_processes as f64 * tti_s * link_rate_bits_per_s
}

/// Bits needed in the DCI to address a process: `ceil(log2 N)`.
pub fn dci_process_field_width(num_processes: usize) -> u32 {
    assert!(num_processes >= 1, "at least one HARQ process");
    usize::BITS - (num_processes - 1).leading_zeros()
}

/// Fraction of TTIs a fully backlogged error-free link fills:
/// `min(1, N * TTI / (T_HARQ + TTI))`.
pub fn theoretical_utilization(num_processes: usize, t_harq_s: f64, tti_s: f64) -> f64 {
    (num_processes as f64 * tti_s / (t_harq_s + tti_s)).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_time_examples() {
        let sat = HarqConfig::default();
        assert!((harq_cycle_time(&sat) - 24e-3).abs() < 1e-15);
        let zero = HarqConfig {
            proc_rx_s: 0.0,
            proc_tx_s: 0.0,
            propagation_s: 0.0,
            ..sat.clone()
        };
        assert_eq!(harq_cycle_time(&zero), 0.0);
        let terrestrial = HarqConfig {
            propagation_s: 0.0,
            ..sat
        };
        let t = harq_cycle_time(&terrestrial);
        assert!((t - 8e-3).abs() < 1e-15);
        assert_eq!(min_processes(t, 1e-3), 8);
    }

    #[test]
    fn process_counts() {
        assert_eq!(min_processes(24e-3, 1e-3), 24);
        assert_eq!(min_processes(8e-3, 1e-3), 8);
        assert_eq!(min_processes(0.0, 1e-3), 1);
        assert_eq!(min_processes(24.5e-3, 1e-3), 25);
        assert_eq!(min_processes(2.0 * 8.0069e-3 + 8e-3, 1e-3), 25);
    }

    #[test]
    fn buffers() {
        let sat = buffer_requirement(24, 1e-3, 100e6);
        let lte = buffer_requirement(8, 1e-3, 100e6);
        assert_eq!(sat, 3.0 * lte);
        assert_eq!(buffer_requirement(24, 1e-3, 0.0), 0.0);
        assert!((sat - 2.4e6).abs() < 1e-6);
    }

    #[test]
    fn dci_widths() {
        assert_eq!(dci_process_field_width(8), 3);
        assert_eq!(dci_process_field_width(24), 5);
        assert_eq!(dci_process_field_width(1), 0);
        assert_eq!(dci_process_field_width(2), 1);
        assert_eq!(dci_process_field_width(9), 4);
    }

    #[test]
    fn utilization_closed_form() {
        assert!((theoretical_utilization(24, 24e-3, 1e-3) - 0.96).abs() < 1e-12);
        assert_eq!(theoretical_utilization(25, 24e-3, 1e-3), 1.0);
        assert!((theoretical_utilization(1, 24e-3, 1e-3) - 0.04).abs() < 1e-12);
        assert_eq!(theoretical_utilization(1, 0.0, 1e-3), 1.0);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [Strategy::Full, Strategy::Multibit, Strategy::Capped, Strategy::Replication] {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("bogus".parse::<Strategy>().is_err());
    }

    #[test]
    fn config_mismatches_rejected() {
        let multibit_one_bit = HarqConfig {
            strategy: Strategy::Multibit,
            error_model: ErrorModel::constant(0.5).with_flat_levels(4),
            ..Default::default()
        };
        assert!(multibit_one_bit.validate().is_err());
        assert!(HarqConfig {
            feedback_bits: 2,
            ..multibit_one_bit.clone()
        }
        .validate()
        .is_ok());
        assert!(HarqConfig {
            feedback_bits: 2,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(HarqConfig {
            feedback_bits: 2,
            error_model: ErrorModel::constant(0.5),
            ..multibit_one_bit
        }
        .validate()
        .is_err());
        assert!(HarqConfig {
            replication_factor: 3,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(HarqConfig {
            error_model: ErrorModel::constant(1.5),
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(HarqConfig {
            num_processes: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(HarqConfig {
            tti_s: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
