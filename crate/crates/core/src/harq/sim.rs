//! Event-driven HARQ simulator.
//!
//! Time is kept in integer nanoseconds. The forward link is slotted: at every
//! TTI boundary the scheduler hands the slot to the next ready process in
//! round-robin order, starting a new TB or a retransmission. A TB sent at `t`
//! reaches the receiver at `t + TTI + T_p`, is decoded `T_rx` later, its
//! feedback lands at the transmitter after `T_ack + T_p`, and the process is
//! ready again after another `T_tx`.
//!
//! The source is always backlogged until the horizon. Past the horizon no new
//! TBs are offered, but outstanding ones are driven to completion, so every
//! offered TB ends up delivered or dropped. Utilization counts only slots
//! inside the horizon.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{buffer_requirement, HarqConfig, Strategy, FEEDBACK_LEVELS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HarqReport {
    pub offered_tb: u64,
    pub delivered_tb: u64,
    pub dropped_tb: u64,
    /// Fraction of TTIs inside the horizon that carried a TB.
    pub utilization: f64,
    /// TBs delivered (feedback received) inside the horizon, per second.
    pub goodput_tb_per_s: f64,
    /// First transmission to ACK receipt, over delivered TBs. For the
    /// replication strategy, first copy sent to last copy decoded.
    pub mean_latency_s: f64,
    pub p95_latency_s: f64,
    pub peak_soft_buffer_bits: f64,
    /// Entry `i` counts TBs that terminated after `i + 1` transmissions.
    pub retransmission_histogram: Vec<u64>,
}

impl HarqReport {
    pub fn delivery_ratio(&self) -> f64 {
        if self.offered_tb == 0 {
            0.0
        } else {
            self.delivered_tb as f64 / self.offered_tb as f64
        }
    }

    /// Mean transmissions per terminated TB.
    pub fn mean_transmissions(&self) -> f64 {
        let total: u64 = self.retransmission_histogram.iter().sum();
        if total == 0 {
            return 0.0;
        }
        let weighted: u64 = self
            .retransmission_histogram
            .iter()
            .enumerate()
            .map(|(i, n)| (i as u64 + 1) * n)
            .sum();
        weighted as f64 / total as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Tx,
    Rx,
    Decode,
    Feedback,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Tx => "tx",
            EventKind::Rx => "rx",
            EventKind::Decode => "decode",
            EventKind::Feedback => "feedback",
        })
    }
}

/// One line of the event log: `time_s,process_id,event,attempt,outcome`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub time_ns: u64,
    pub process_id: usize,
    pub event: EventKind,
    pub attempt: u32,
    pub outcome: String,
}

impl EventRecord {
    pub const CSV_HEADER: &'static str = "time_s,process_id,event,attempt,outcome";

    pub fn time_s(&self) -> f64 {
        self.time_ns as f64 * 1e-9
    }
}

impl fmt::Display for EventRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}.{:09},{},{},{},{}",
            self.time_ns / 1_000_000_000,
            self.time_ns % 1_000_000_000,
            self.process_id,
            self.event,
            self.attempt,
            self.outcome
        )
    }
}

fn to_ns(seconds: f64) -> u64 {
    (seconds * 1e9).round() as u64
}

// Same-instant events run in this order, so a process that becomes ready on
// a slot boundary can use that slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Class {
    Arrive,
    Decode,
    Feedback,
    Ready,
    Slot,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time_ns: u64,
    class: Class,
    seq: u64,
    process: usize,
    tb: u64,
    attempt: u32,
    success: bool,
    terminal: bool,
}

impl Event {
    fn key(&self) -> (u64, Class, u64) {
        (self.time_ns, self.class, self.seq)
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.key().cmp(&self.key())
    }
}

#[derive(Debug, Clone, Copy)]
struct Tb {
    id: u64,
    first_tx_ns: u64,
    /// Transmissions made so far.
    attempts: u32,
    /// Margin level reported for the last failed attempt.
    level: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct Process {
    tb: Option<Tb>,
    ready: bool,
}

#[derive(Debug, Clone, Copy)]
struct ReplicaTb {
    first_tx_ns: u64,
    decoded: u32,
    success: bool,
}

struct Timing {
    tti: u64,
    prop: u64,
    rx: u64,
    tx: u64,
    ack: u64,
    horizon: u64,
}

struct Sim<'a> {
    cfg: &'a HarqConfig,
    t: Timing,
    rng: ChaCha8Rng,
    queue: BinaryHeap<Event>,
    seq: u64,
    log: Option<Vec<EventRecord>>,

    processes: Vec<Process>,
    rr_next: usize,
    replicas: BTreeMap<u64, ReplicaTb>,
    /// TB being replicated: (id, copies sent).
    replicating: Option<(u64, u32)>,

    next_tb: u64,
    offered: u64,
    delivered: u64,
    delivered_in_horizon: u64,
    dropped: u64,
    busy_slots: u64,
    latencies_ns: Vec<u64>,
    histogram: Vec<u64>,
    buffered: usize,
    peak_buffered: usize,
}

impl<'a> Sim<'a> {
    fn new(cfg: &'a HarqConfig, duration_s: f64, with_log: bool) -> Self {
        let slots = match cfg.strategy {
            Strategy::Replication => cfg.replication_factor,
            _ => cfg.max_transmissions,
        };
        Sim {
            cfg,
            t: Timing {
                tti: to_ns(cfg.tti_s),
                prop: to_ns(cfg.propagation_s),
                rx: to_ns(cfg.proc_rx_s),
                tx: to_ns(cfg.proc_tx_s),
                ack: to_ns(cfg.ack_duration_s),
                horizon: to_ns(duration_s),
            },
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            queue: BinaryHeap::new(),
            seq: 0,
            log: with_log.then(Vec::new),
            processes: vec![Process { tb: None, ready: true }; cfg.num_processes],
            rr_next: 0,
            replicas: BTreeMap::new(),
            replicating: None,
            next_tb: 0,
            offered: 0,
            delivered: 0,
            delivered_in_horizon: 0,
            dropped: 0,
            busy_slots: 0,
            latencies_ns: Vec::new(),
            histogram: vec![0; slots as usize],
            buffered: 0,
            peak_buffered: 0,
        }
    }

    fn push(&mut self, time_ns: u64, class: Class, process: usize, tb: u64, attempt: u32) {
        self.push_outcome(time_ns, class, process, tb, attempt, false, false);
    }

    #[allow(clippy::too_many_arguments)]
    fn push_outcome(
        &mut self,
        time_ns: u64,
        class: Class,
        process: usize,
        tb: u64,
        attempt: u32,
        success: bool,
        terminal: bool,
    ) {
        self.seq += 1;
        self.queue.push(Event {
            time_ns,
            class,
            seq: self.seq,
            process,
            tb,
            attempt,
            success,
            terminal,
        });
    }

    fn record(&mut self, time_ns: u64, process_id: usize, event: EventKind, attempt: u32, outcome: impl Into<String>) {
        if let Some(log) = self.log.as_mut() {
            log.push(EventRecord {
                time_ns,
                process_id,
                event,
                attempt,
                outcome: outcome.into(),
            });
        }
    }

    fn outstanding(&self) -> u64 {
        self.offered - self.delivered - self.dropped
    }

    fn run(mut self) -> (HarqReport, Vec<EventRecord>) {
        self.push(0, Class::Slot, 0, 0, 0);
        while let Some(ev) = self.queue.pop() {
            match ev.class {
                Class::Slot => self.on_slot(ev.time_ns),
                Class::Arrive => self.on_arrive(ev),
                Class::Decode => self.on_decode(ev),
                Class::Feedback => self.on_feedback(ev),
                Class::Ready => self.processes[ev.process].ready = true,
            }
        }
        self.finish()
    }

    fn on_slot(&mut self, now: u64) {
        let sent = match self.cfg.strategy {
            Strategy::Replication => self.replication_slot(now),
            _ => self.harq_slot(now),
        };
        if sent && now < self.t.horizon {
            self.busy_slots += 1;
        }
        let next = now + self.t.tti;
        if next < self.t.horizon || self.outstanding() > 0 {
            self.push(next, Class::Slot, 0, 0, 0);
        }
    }

    fn harq_slot(&mut self, now: u64) -> bool {
        let n = self.processes.len();
        let open = now < self.t.horizon;
        let chosen = (0..n)
            .map(|i| (self.rr_next + i) % n)
            .find(|&p| self.processes[p].ready && (open || self.processes[p].tb.is_some()));
        let Some(p) = chosen else {
            return false;
        };
        self.rr_next = (p + 1) % n;

        let tb = match self.processes[p].tb {
            Some(mut tb) => {
                tb.attempts += 1;
                tb
            }
            None => {
                let tb = Tb {
                    id: self.next_tb,
                    first_tx_ns: now,
                    attempts: 1,
                    level: 0,
                };
                self.next_tb += 1;
                self.offered += 1;
                tb
            }
        };
        self.processes[p] = Process {
            tb: Some(tb),
            ready: false,
        };
        self.record(now, p, EventKind::Tx, tb.attempts, if tb.attempts == 1 { "new" } else { "retx" });
        self.push(now + self.t.tti + self.t.prop, Class::Arrive, p, tb.id, tb.attempts);
        true
    }

    fn replication_slot(&mut self, now: u64) -> bool {
        let k = self.cfg.replication_factor;
        let (id, copy) = match self.replicating {
            Some((id, sent)) if sent < k => (id, sent + 1),
            _ if now < self.t.horizon => {
                let id = self.next_tb;
                self.next_tb += 1;
                self.offered += 1;
                self.replicas.insert(
                    id,
                    ReplicaTb {
                        first_tx_ns: now,
                        decoded: 0,
                        success: false,
                    },
                );
                (id, 1)
            }
            _ => return false,
        };
        self.replicating = Some((id, copy));
        self.record(now, 0, EventKind::Tx, copy, if copy == 1 { "new" } else { "copy" });
        self.push(now + self.t.tti + self.t.prop, Class::Arrive, 0, id, copy);
        true
    }

    fn on_arrive(&mut self, ev: Event) {
        self.record(ev.time_ns, ev.process, EventKind::Rx, ev.attempt, "-");
        // soft bits are kept from the first reception until the TB terminates;
        // replicas are decoded independently and never combined
        if ev.attempt == 1 && self.cfg.strategy != Strategy::Replication {
            self.buffered += 1;
            self.peak_buffered = self.peak_buffered.max(self.buffered);
        }
        self.push(ev.time_ns + self.t.rx, Class::Decode, ev.process, ev.tb, ev.attempt);
    }

    fn success_probability(&self, tb: &Tb) -> f64 {
        let model = &self.cfg.error_model;
        if self.cfg.strategy == Strategy::Multibit && tb.attempts > 1 {
            model.level_probability(tb.attempts, tb.level)
        } else {
            model.attempt_probability(tb.attempts)
        }
    }

    fn on_decode(&mut self, ev: Event) {
        let u: f64 = self.rng.random();
        if self.cfg.strategy == Strategy::Replication {
            self.decode_replica(ev, u);
            return;
        }

        let p = ev.process;
        let mut tb = self.processes[p].tb.expect("decoding process holds a TB");
        let prob = self.success_probability(&tb);
        let success = u < prob;
        let terminal = success || tb.attempts >= self.cfg.max_transmissions;
        let outcome = if success {
            "ack".to_string()
        } else {
            // margin quantised over the failure region, 0 = nearest to success
            let level = (((u - prob) / (1.0 - prob)) * FEEDBACK_LEVELS as f64) as usize;
            tb.level = level.min(FEEDBACK_LEVELS - 1);
            self.processes[p].tb = Some(tb);
            if self.cfg.strategy == Strategy::Multibit {
                format!("nack{}", tb.level)
            } else {
                "nack".to_string()
            }
        };
        if terminal {
            self.buffered -= 1;
        }
        self.record(ev.time_ns, p, EventKind::Decode, tb.attempts, outcome);
        self.push_outcome(
            ev.time_ns + self.t.ack + self.t.prop,
            Class::Feedback,
            p,
            tb.id,
            tb.attempts,
            success,
            terminal,
        );
    }

    fn decode_replica(&mut self, ev: Event, u: f64) {
        let success = u < self.cfg.error_model.attempt_probability(1);
        let k = self.cfg.replication_factor;
        let entry = self.replicas.get_mut(&ev.tb).expect("replica in flight");
        entry.decoded += 1;
        entry.success |= success;
        let state = *entry;
        self.record(ev.time_ns, 0, EventKind::Decode, ev.attempt, if success { "ok" } else { "fail" });
        if state.decoded < k {
            return;
        }
        self.replicas.remove(&ev.tb);
        self.histogram[k as usize - 1] += 1;
        if state.success {
            self.delivered += 1;
            if ev.time_ns <= self.t.horizon {
                self.delivered_in_horizon += 1;
            }
            self.latencies_ns.push(ev.time_ns - state.first_tx_ns);
        } else {
            self.dropped += 1;
        }
    }

    fn on_feedback(&mut self, ev: Event) {
        let p = ev.process;
        let tb = self.processes[p].tb.expect("feedback for a held TB");
        let outcome = match (ev.success, ev.terminal) {
            (true, _) => "delivered",
            (false, true) => "dropped",
            (false, false) => "retransmit",
        };
        self.record(ev.time_ns, p, EventKind::Feedback, ev.attempt, outcome);
        if ev.terminal {
            self.histogram[tb.attempts as usize - 1] += 1;
            if ev.success {
                self.delivered += 1;
                if ev.time_ns <= self.t.horizon {
                    self.delivered_in_horizon += 1;
                }
                self.latencies_ns.push(ev.time_ns - tb.first_tx_ns);
            } else {
                self.dropped += 1;
            }
            self.processes[p].tb = None;
        }
        self.push(ev.time_ns + self.t.tx, Class::Ready, p, ev.tb, ev.attempt);
    }

    fn finish(mut self) -> (HarqReport, Vec<EventRecord>) {
        let horizon_s = self.t.horizon as f64 * 1e-9;
        let total_slots = self.t.horizon.div_ceil(self.t.tti);
        self.latencies_ns.sort_unstable();
        let (mean, p95) = if self.latencies_ns.is_empty() {
            (0.0, 0.0)
        } else {
            let n = self.latencies_ns.len();
            let sum: u128 = self.latencies_ns.iter().map(|&x| u128::from(x)).sum();
            let rank = (n * 95).div_ceil(100).max(1) - 1;
            (
                sum as f64 / n as f64 * 1e-9,
                self.latencies_ns[rank] as f64 * 1e-9,
            )
        };
        let report = HarqReport {
            offered_tb: self.offered,
            delivered_tb: self.delivered,
            dropped_tb: self.dropped,
            utilization: self.busy_slots as f64 / total_slots as f64,
            goodput_tb_per_s: self.delivered_in_horizon as f64 / horizon_s,
            mean_latency_s: mean,
            p95_latency_s: p95,
            peak_soft_buffer_bits: buffer_requirement(
                self.peak_buffered,
                self.cfg.tti_s,
                self.cfg.link_rate_bits_per_s,
            ),
            retransmission_histogram: self.histogram,
        };
        (report, self.log.unwrap_or_default())
    }
}

fn check(cfg: &HarqConfig, duration_s: f64) -> Result<()> {
    cfg.validate()?;
    let min = 10.0 * (cfg.cycle_time() + cfg.tti_s);
    if !(duration_s >= min) || !duration_s.is_finite() {
        return Err(Error::HarqConfig(format!(
            "duration {duration_s} s is shorter than 10 HARQ cycles ({min} s)"
        )));
    }
    Ok(())
}

/// Runs the simulator for `duration_s` of offered traffic.
pub fn simulate(cfg: &HarqConfig, duration_s: f64) -> Result<HarqReport> {
    check(cfg, duration_s)?;
    Ok(Sim::new(cfg, duration_s, false).run().0)
}

/// Like [`simulate`], also returning the full event log in time order.
pub fn simulate_with_log(cfg: &HarqConfig, duration_s: f64) -> Result<(HarqReport, Vec<EventRecord>)> {
    check(cfg, duration_s)?;
    Ok(Sim::new(cfg, duration_s, true).run())
}
