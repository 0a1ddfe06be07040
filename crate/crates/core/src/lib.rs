//! Feasibility analysis for running NR PHY/MAC procedures across a LEO
//! satellite backhaul between relay nodes and a donor base station.
//!
//! The crate is organised bottom-up:
//!
//! * [`scenario`] holds physical constants and the study configuration.
//! * [`geometry`] is pure orbital/ground geometry (slant range, beam-edge
//!   relay separation, visibility pass).
//! * [`impairments`] models propagation delay, Doppler and the residual
//!   Doppler left after position-based pre-compensation.
//! * [`numerology`] maps subcarrier spacing to Doppler tolerance and to the
//!   largest position error that tolerance allows.
//! * [`random_access`] checks the random-access timing budgets.
//! * [`harq`] dimensions parallel HARQ and simulates it event by event.
//! * [`report`] renders fixed-format CSV tables and plain-text reports.

pub mod error;
pub mod geometry;
pub mod harq;
pub mod impairments;
pub mod numerology;
pub mod random_access;
pub mod report;
pub mod scenario;

pub use error::{Error, Result};
pub use scenario::{PhysicalConstants, ScenarioConfig};
