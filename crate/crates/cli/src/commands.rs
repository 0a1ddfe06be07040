use std::fs;
use std::path::PathBuf;

use clap::Args;

use satnr_core::geometry::{
    angular_velocity, differential_distance, ground_track_speed, slant_range, visibility_pass_duration,
};
use satnr_core::harq::{
    buffer_requirement, dci_process_field_width, harq_cycle_time, min_processes, simulate_with_log,
    theoretical_utilization, ErrorModel, EventRecord, HarqConfig, Strategy, FEEDBACK_LEVELS,
};
use satnr_core::impairments::{residual_doppler_surface, round_trip_time, sat_doppler, ue_doppler};
use satnr_core::numerology::{numerology_table, select_numerology};
use satnr_core::random_access::{
    check_rn_attach, check_ue_ra, gnss_assisted_ta, lte_preamble_formats, required_rar_window,
    PreambleFormat, RaTimers, RaVerdict, RarWindowPolicy,
};
use satnr_core::report::{Cell, Section, Table};
use satnr_core::ScenarioConfig;

use crate::{table_section, CliError};

/// Text sections plus the machine-readable table of one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub sections: Vec<Section>,
    pub table: Table,
}

fn degree_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || stop < start {
        return Err(CliError::Usage(format!("bad grid {start}:{stop}:{step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

#[derive(Debug, Clone, Args)]
pub struct ImpairmentsArgs {
    /// Altitudes for the delay rows; defaults to the scenario altitude.
    /// Zero is accepted here.
    #[arg(long = "altitude-m", value_delimiter = ',')]
    pub altitude_m: Vec<f64>,
    #[arg(long = "elevation-step-deg", default_value_t = 5.0)]
    pub elevation_step_deg: f64,
    #[arg(long = "ue-speed-ms", default_value_t = 500.0 / 3.6)]
    pub ue_speed_ms: f64,
    #[arg(long = "ue-carrier-hz", default_value_t = 4e9)]
    pub ue_carrier_hz: f64,
}

pub fn impairments(cfg: &ScenarioConfig, a: &ImpairmentsArgs) -> Result<Output, CliError> {
    let altitudes = if a.altitude_m.is_empty() {
        vec![cfg.altitude_m]
    } else {
        a.altitude_m.clone()
    };
    if let Some(h) = altitudes.iter().find(|h| !(**h >= 0.0)) {
        return Err(CliError::Config(format!("altitude_m must be >= 0, got {h}")));
    }
    let lowest_deg = cfg.min_elevation_rad.to_degrees();
    let elevations = degree_grid(lowest_deg, 90.0, a.elevation_step_deg)?;

    let mut table = Table::new([
        "altitude_m",
        "round_trip_s",
        "elevation_deg",
        "slant_range_m",
        "sat_doppler_hz",
    ]);
    let mut delay = Table::new(["altitude_m", "relay_satellite_s", "satellite_donor_s", "round_trip_s"]);
    for &h in &altitudes {
        let at = ScenarioConfig {
            altitude_m: h,
            ..*cfg
        };
        let budget = round_trip_time(&at);
        let mut row: Vec<Cell> = vec![h.into()];
        row.extend(budget.components.iter().map(|(_, s)| Cell::from(*s)));
        row.push(budget.round_trip_s.into());
        delay.push(row);
        for &deg in &elevations {
            let th = deg.min(90.0).to_radians();
            table.push(vec![
                h.into(),
                budget.round_trip_s.into(),
                deg.into(),
                slant_range(&at, th)?.into(),
                sat_doppler(&at, th)?.into(),
            ]);
        }
    }

    let ue = ue_doppler(&cfg.constants, a.ue_speed_ms, a.ue_carrier_hz, 0.0)?;
    let mut doppler = Table::new(["elevation_deg", "slant_range_m", "sat_doppler_hz"]);
    for &deg in &elevations {
        let th = deg.to_radians();
        doppler.push(vec![deg.into(), slant_range(cfg, th)?.into(), sat_doppler(cfg, th)?.into()]);
    }

    let sections = vec![
        table_section("delay budget", &delay),
        Section::new("satellite Doppler")
            .note(format!(
                "angular velocity {:.6e} rad/s, ground-track speed {:.1} m/s",
                angular_velocity(cfg),
                ground_track_speed(cfg)
            ))
            .with_table(doppler),
        Section::new("UE Doppler").note(format!(
            "{:.1} m/s at {:.3e} Hz, velocity along line of sight: {:.1} Hz",
            a.ue_speed_ms, a.ue_carrier_hz, ue
        )),
        Section::new("visibility").note(format!(
            "overhead pass above {:.1} deg lasts {:.1} s",
            lowest_deg,
            visibility_pass_duration(cfg)
        )),
    ];
    Ok(Output { sections, table })
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    #[arg(long = "elevation-step-deg", default_value_t = 1.0)]
    pub elevation_step_deg: f64,
    #[arg(long = "max-error-m", default_value_t = 50e3)]
    pub max_error_m: f64,
    #[arg(long = "error-step-m", default_value_t = 1e3)]
    pub error_step_m: f64,
}

pub fn doppler_surface(cfg: &ScenarioConfig, a: &SurfaceArgs) -> Result<Output, CliError> {
    let els: Vec<f64> = degree_grid(cfg.min_elevation_rad.to_degrees(), 90.0, a.elevation_step_deg)?
        .into_iter()
        .map(|d| d.min(90.0).to_radians())
        .collect();
    let errs = degree_grid(0.0, a.max_error_m, a.error_step_m)?;
    let surface = residual_doppler_surface(cfg, &els, &errs)?;

    let mut table = Table::new([
        "elevation_deg",
        "position_error_m",
        "true_doppler_hz",
        "estimated_doppler_hz",
        "residual_doppler_hz",
    ]);
    for c in &surface.cells {
        table.push(vec![
            c.elevation_rad.to_degrees().into(),
            c.position_error_m.into(),
            c.true_doppler_hz.into(),
            c.estimated_doppler_hz.into(),
            c.residual_doppler_hz.into(),
        ]);
    }
    let peak = surface
        .cells
        .iter()
        .max_by(|x, y| x.residual_doppler_hz.total_cmp(&y.residual_doppler_hz))
        .expect("non-empty grid");
    let sections = vec![Section::new("residual Doppler surface")
        .note(format!("{} x {} grid", els.len(), errs.len()))
        .note(format!(
            "peak residual {:.1} Hz at elevation {:.1} deg, position error {:.0} m",
            peak.residual_doppler_hz,
            peak.elevation_rad.to_degrees(),
            peak.position_error_m
        ))];
    Ok(Output { sections, table })
}

#[derive(Debug, Clone, Args)]
pub struct NumerologyArgs {
    /// Largest spacing index n (15 kHz * 2^n).
    #[arg(long = "max-index", default_value_t = 3)]
    pub max_index: u32,
    /// Report the smallest spacing that tolerates this Doppler.
    #[arg(long = "required-doppler-hz")]
    pub required_doppler_hz: Option<f64>,
}

pub fn numerology(cfg: &ScenarioConfig, a: &NumerologyArgs) -> Result<Output, CliError> {
    let entries = numerology_table(cfg, a.max_index)?;
    let mut table = Table::new(["scs_khz", "max_doppler_khz", "max_position_error_km"]);
    for e in &entries {
        table.push(vec![
            (e.scs_hz / 1e3).into(),
            (e.tolerated_doppler_hz / 1e3).into(),
            (e.max_position_error_m / 1e3).into(),
        ]);
    }
    let mut section = Section::new("numerology").note(format!(
        "tolerance {:.1}% of spacing, evaluated at 90 deg elevation, carrier {:.3e} Hz",
        cfg.scs_doppler_ratio * 100.0,
        cfg.carrier_hz
    ));
    if let Some(req) = a.required_doppler_hz {
        section = section.note(match select_numerology(req, &entries) {
            Ok(e) => format!("{req} Hz needs SCS {} kHz", e.scs_hz / 1e3),
            Err(e) => e.to_string(),
        });
    }
    Ok(Output {
        sections: vec![section.with_table(table.clone())],
        table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RarPolicyArg {
    /// Use `--rar-window-s` as given.
    AsGiven,
    /// One window for every deployment, sized for the worst round trip.
    FixedWorstCase,
    /// A control-channel bit switches between terrestrial and satellite windows.
    SatelliteFlag,
}

#[derive(Debug, Clone, Args)]
pub struct RaArgs {
    #[arg(long = "rar-window-s", default_value_t = 15e-3)]
    pub rar_window_s: f64,
    #[arg(long = "contention-timer-s", default_value_t = 64e-3)]
    pub contention_timer_s: f64,
    /// Built-in preamble format (lte-0 .. lte-3).
    #[arg(long, default_value = "lte-3")]
    pub preamble: String,
    /// Custom preamble supporting this cell radius; overrides `--preamble`.
    #[arg(long = "preamble-radius-m")]
    pub preamble_radius_m: Option<f64>,
    /// Satellite round trip; defaults to the scenario's.
    #[arg(long = "rtt-s")]
    pub rtt_s: Option<f64>,
    #[arg(long = "rar-policy", value_enum, default_value_t = RarPolicyArg::AsGiven)]
    pub rar_policy: RarPolicyArg,
    /// Added to the round trip when a policy sizes the window.
    #[arg(long = "rar-margin-s", default_value_t = 1e-3)]
    pub rar_margin_s: f64,
    #[arg(long = "satellite-window-s")]
    pub satellite_window_s: Option<f64>,
    /// Value of the control-channel satellite bit.
    #[arg(long = "satellite-link", default_value_t = true, action = clap::ArgAction::Set)]
    pub satellite_link: bool,
    /// Pre-compensate the timing advance from a position estimate with this error.
    #[arg(long = "gnss-position-error-m")]
    pub gnss_position_error_m: Option<f64>,
}

fn verdict_row(table: &mut Table, label: &str, v: &RaVerdict, timers: &RaTimers, rtt: f64, spread_m: f64, radius: f64) {
    let names: Vec<&str> = v.violations.iter().map(|x| x.budget.name()).collect();
    table.push(vec![
        label.into(),
        v.feasible.into(),
        names.join(";").into(),
        rtt.into(),
        timers.rar_window_s.into(),
        timers.contention_timer_s.into(),
        spread_m.into(),
        radius.into(),
    ]);
}

fn verdict_notes(mut section: Section, v: &RaVerdict) -> Section {
    section = section.note(format!("{}: feasible={}", v.stage, v.feasible));
    for x in &v.violations {
        section = section.note(format!(
            "  {} violated: needs {:.4} ms, has {:.4} ms",
            x.budget,
            x.required_s * 1e3,
            x.available_s * 1e3
        ));
    }
    section
}

pub fn ra_check(cfg: &ScenarioConfig, a: &RaArgs) -> Result<Output, CliError> {
    let k = &cfg.constants;
    let rtt = a.rtt_s.unwrap_or_else(|| round_trip_time(cfg).round_trip_s);
    let given = RaTimers::new(a.rar_window_s, a.contention_timer_s)?;
    let preamble = match a.preamble_radius_m {
        Some(r) => PreambleFormat::from_radius("custom", 0.0, 0.0, r, k)?,
        None => lte_preamble_formats(k)
            .into_iter()
            .find(|p| p.name == a.preamble)
            .ok_or_else(|| CliError::Usage(format!("unknown preamble `{}`", a.preamble)))?,
    };
    let policy = match a.rar_policy {
        RarPolicyArg::AsGiven => None,
        RarPolicyArg::FixedWorstCase => Some(RarWindowPolicy::FixedWorstCase {
            worst_rtt_s: rtt,
            margin_s: a.rar_margin_s,
        }),
        RarPolicyArg::SatelliteFlag => Some(RarWindowPolicy::SatelliteFlag {
            terrestrial_window_s: a.rar_window_s,
            satellite_window_s: a
                .satellite_window_s
                .unwrap_or_else(|| required_rar_window(rtt, a.rar_margin_s)),
            satellite_link: a.satellite_link,
        }),
    };
    let timers = match policy {
        Some(p) => p.apply(&given),
        None => given,
    };
    let spread = differential_distance(cfg)?.differential_m;

    let mut table = Table::new([
        "stage",
        "feasible",
        "violations",
        "rtt_s",
        "rar_window_s",
        "contention_timer_s",
        "timing_spread_m",
        "max_cell_radius_m",
    ]);
    let ue = check_ue_ra(&timers, rtt);
    verdict_row(&mut table, "ue_ra", &ue, &timers, rtt, 0.0, preamble.max_cell_radius_m);
    let rn = check_rn_attach(&timers, rtt, &preamble, spread, k);
    verdict_row(&mut table, "rn_attach", &rn, &timers, rtt, spread, preamble.max_cell_radius_m);

    let mut section = Section::new("random access")
        .note(format!(
            "rtt {:.4} ms, relay spread {:.1} km, preamble {} ({:.1} km), RAR window {:.4} ms",
            rtt * 1e3,
            spread / 1e3,
            preamble.name,
            preamble.max_cell_radius_m / 1e3,
            timers.rar_window_s * 1e3
        ));
    section = verdict_notes(section, &ue);
    section = verdict_notes(section, &rn);

    if let Some(err) = a.gnss_position_error_m {
        let ta = gnss_assisted_ta(spread, err, &preamble, k)?;
        let gnss = check_rn_attach(&timers, rtt, &preamble, err, k);
        verdict_row(&mut table, "rn_attach_gnss_ta", &gnss, &timers, rtt, err, preamble.max_cell_radius_m);
        section = section.note(format!(
            "with position-based TA: residual {:.4} ms, within guard: {}",
            ta.residual_ta_s * 1e3,
            ta.feasible
        ));
        section = verdict_notes(section, &gnss);
    }
    if !rn.feasible {
        section = section.note("relays that lose sync re-attach together and contend for the same occasions");
    }
    Ok(Output {
        sections: vec![section],
        table,
    })
}

#[derive(Debug, Clone, Args)]
pub struct HarqTimingArgs {
    #[arg(long = "tti-s", default_value_t = 1e-3)]
    pub tti_s: f64,
    #[arg(long = "proc-rx-s", default_value_t = 4e-3)]
    pub proc_rx_s: f64,
    #[arg(long = "proc-tx-s", default_value_t = 4e-3)]
    pub proc_tx_s: f64,
    #[arg(long = "ack-duration-s", default_value_t = 0.0)]
    pub ack_duration_s: f64,
    /// One-way propagation; 8 ms (16 ms round trip) unless given or derived.
    #[arg(long = "propagation-s")]
    pub propagation_s: Option<f64>,
    /// Use half the scenario round trip as propagation delay.
    #[arg(long = "propagation-from-scenario", conflicts_with = "propagation_s")]
    pub propagation_from_scenario: bool,
    #[arg(long = "link-rate-bps", default_value_t = 100e6)]
    pub link_rate_bps: f64,
}

impl HarqTimingArgs {
    fn apply(&self, cfg: &ScenarioConfig, base: HarqConfig) -> HarqConfig {
        let propagation_s = if self.propagation_from_scenario {
            round_trip_time(cfg).one_way_s
        } else {
            self.propagation_s.unwrap_or(base.propagation_s)
        };
        HarqConfig {
            tti_s: self.tti_s,
            proc_rx_s: self.proc_rx_s,
            proc_tx_s: self.proc_tx_s,
            ack_duration_s: self.ack_duration_s,
            propagation_s,
            link_rate_bits_per_s: self.link_rate_bps,
            ..base
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct HarqDimArgs {
    #[command(flatten)]
    pub timing: HarqTimingArgs,
    /// Reference process count for the buffer comparison.
    #[arg(long = "baseline-processes", default_value_t = 8)]
    pub baseline_processes: usize,
}

pub fn harq_dim(cfg: &ScenarioConfig, a: &HarqDimArgs) -> Result<Output, CliError> {
    let h = a.timing.apply(cfg, HarqConfig::default());
    h.validate()?;
    if a.baseline_processes == 0 {
        return Err(CliError::Usage("--baseline-processes must be >= 1".into()));
    }
    let t_harq = harq_cycle_time(&h);
    let n = min_processes(t_harq, h.tti_s);
    let buffer = buffer_requirement(n, h.tti_s, h.link_rate_bits_per_s);
    let baseline = buffer_requirement(a.baseline_processes, h.tti_s, h.link_rate_bits_per_s);
    let ratio = if baseline > 0.0 { buffer / baseline } else { f64::NAN };
    let dci = dci_process_field_width(n);

    let mut table = Table::new([
        "t_harq_s",
        "n_min",
        "dci_bits",
        "buffer_bits",
        "baseline_buffer_bits",
        "buffer_ratio",
        "utilization_at_n_min",
    ]);
    table.push(vec![
        t_harq.into(),
        n.into(),
        dci.into(),
        buffer.into(),
        baseline.into(),
        ratio.into(),
        theoretical_utilization(n, t_harq, h.tti_s).into(),
    ]);
    let section = Section::new("HARQ dimensioning")
        .note(format!(
            "T_HARQ = 2 x {:.4} ms + {:.4} ms + {:.4} ms + {:.4} ms = {:.4} ms",
            h.propagation_s * 1e3,
            h.proc_rx_s * 1e3,
            h.proc_tx_s * 1e3,
            h.ack_duration_s * 1e3,
            t_harq * 1e3
        ))
        .note(format!("N_min = {n}"))
        .note(format!("DCI process field = {dci} bits"))
        .note(format!(
            "soft buffer = {buffer:.4e} bits, {ratio:.3}x the {}-process baseline",
            a.baseline_processes
        ))
        .with_table(table.clone());
    Ok(Output {
        sections: vec![section],
        table,
    })
}

#[derive(Debug, Clone, Args)]
pub struct HarqSimArgs {
    #[command(flatten)]
    pub timing: HarqTimingArgs,
    #[arg(long, default_value_t = 24)]
    pub processes: usize,
    #[arg(long, default_value = "full", value_parser = parse_strategy)]
    pub strategy: Strategy,
    /// Defaults to 2 for multibit, 1 otherwise.
    #[arg(long = "feedback-bits")]
    pub feedback_bits: Option<u8>,
    #[arg(long = "max-transmissions", default_value_t = 4)]
    pub max_transmissions: u32,
    #[arg(long = "replication-factor", default_value_t = 1)]
    pub replication_factor: u32,
    /// Per-attempt success probabilities, comma separated; the last repeats.
    #[arg(long = "success", value_delimiter = ',', default_value = "1")]
    pub success: Vec<f64>,
    /// Multibit level table: rows separated by `;`, four values per row.
    /// Defaults to the `--success` column for every level.
    #[arg(long = "level-success")]
    pub level_success: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "duration-s", default_value_t = 30.0)]
    pub duration_s: f64,
    /// Write `time_s,process_id,event,attempt,outcome` lines here.
    #[arg(long = "event-log")]
    pub event_log: Option<PathBuf>,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: satnr_core::Error| e.to_string())
}

fn parse_levels(text: &str) -> Result<Vec<[f64; FEEDBACK_LEVELS]>, CliError> {
    text.split(';')
        .map(|row| {
            let vals: Vec<f64> = row
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Usage(format!("--level-success: {e}")))?;
            <[f64; FEEDBACK_LEVELS]>::try_from(vals)
                .map_err(|_| CliError::Usage("--level-success rows need four values".into()))
        })
        .collect()
}

pub fn harq_config_from(cfg: &ScenarioConfig, a: &HarqSimArgs) -> Result<HarqConfig, CliError> {
    let mut model = ErrorModel {
        attempt_success: a.success.clone(),
        level_success: Vec::new(),
    };
    if a.strategy == Strategy::Multibit {
        model = match &a.level_success {
            Some(t) => ErrorModel {
                level_success: parse_levels(t)?,
                ..model
            },
            None => model.with_flat_levels(a.max_transmissions),
        };
    }
    let h = a.timing.apply(
        cfg,
        HarqConfig {
            num_processes: a.processes,
            feedback_bits: a
                .feedback_bits
                .unwrap_or(if a.strategy == Strategy::Multibit { 2 } else { 1 }),
            max_transmissions: a.max_transmissions,
            strategy: a.strategy,
            replication_factor: a.replication_factor,
            error_model: model,
            seed: a.seed,
            ..HarqConfig::default()
        },
    );
    h.validate()?;
    Ok(h)
}

pub fn harq_sim(cfg: &ScenarioConfig, a: &HarqSimArgs) -> Result<Output, CliError> {
    let h = harq_config_from(cfg, a)?;
    let (r, log) = simulate_with_log(&h, a.duration_s)?;
    if let Some(path) = &a.event_log {
        let mut text = String::with_capacity(log.len() * 32);
        text.push_str(EventRecord::CSV_HEADER);
        text.push('\n');
        for e in &log {
            text.push_str(&e.to_string());
            text.push('\n');
        }
        fs::write(path, text)?;
    }

    let mut table = Table::new([
        "strategy",
        "processes",
        "seed",
        "offered_tb",
        "delivered_tb",
        "dropped_tb",
        "utilization",
        "theoretical_utilization",
        "goodput_tb_per_s",
        "mean_latency_s",
        "p95_latency_s",
        "peak_soft_buffer_bits",
        "mean_transmissions",
    ]);
    let t_harq = harq_cycle_time(&h);
    table.push(vec![
        h.strategy.name().into(),
        h.num_processes.into(),
        h.seed.into(),
        r.offered_tb.into(),
        r.delivered_tb.into(),
        r.dropped_tb.into(),
        r.utilization.into(),
        theoretical_utilization(h.num_processes, t_harq, h.tti_s).into(),
        r.goodput_tb_per_s.into(),
        r.mean_latency_s.into(),
        r.p95_latency_s.into(),
        r.peak_soft_buffer_bits.into(),
        r.mean_transmissions().into(),
    ]);
    let mut hist = Table::new(["transmissions", "tb_count"]);
    for (i, n) in r.retransmission_histogram.iter().enumerate() {
        hist.push(vec![(i + 1).into(), (*n).into()]);
    }
    let sections = vec![
        Section::new("HARQ simulation")
            .note(format!(
                "{} strategy, {} processes, T_HARQ {:.4} ms, {} s simulated, seed {}",
                h.strategy,
                h.num_processes,
                t_harq * 1e3,
                a.duration_s,
                h.seed
            ))
            .with_table(table.clone()),
        table_section("transmissions per TB", &hist),
    ];
    Ok(Output { sections, table })
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Every analysis with default arguments, one document.
pub fn report(cfg: &ScenarioConfig, a: &ReportArgs) -> Result<Output, CliError> {
    use clap::Parser;

    #[derive(Parser)]
    struct Defaults {
        #[command(flatten)]
        imp: ImpairmentsArgs,
        #[command(flatten)]
        num: NumerologyArgs,
        #[command(flatten)]
        ra: RaArgs,
        #[command(flatten)]
        dim: HarqDimArgs,
    }
    let d = Defaults::parse_from(["report"]);
    let mut sections = Vec::new();
    let imp = impairments(cfg, &d.imp)?;
    sections.extend(imp.sections);
    sections.extend(numerology(cfg, &d.num)?.sections);
    sections.extend(ra_check(cfg, &d.ra)?.sections);
    let dim = harq_dim(cfg, &d.dim)?;
    sections.extend(dim.sections);

    let n_min = dim.table.rows[0][1].as_f64().unwrap_or(1.0) as usize;
    let mut sim_table = None;
    for n in [n_min, n_min + 1, 8] {
        let h = HarqConfig {
            num_processes: n,
            seed: a.seed,
            ..HarqConfig::default()
        };
        let r = satnr_core::harq::simulate(&h, 10.0)?;
        let t = sim_table.get_or_insert_with(|| Table::new(["processes", "utilization", "theoretical_utilization"]));
        t.push(vec![
            n.into(),
            r.utilization.into(),
            theoretical_utilization(n, harq_cycle_time(&h), h.tti_s).into(),
        ]);
    }
    let sim_table = sim_table.expect("three runs");
    sections.push(table_section("HARQ simulation, error-free channel", &sim_table));
    Ok(Output {
        sections,
        table: imp.table,
    })
}
