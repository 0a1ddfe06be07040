//! Python bindings. Results come back as plain dicts and lists.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use satnr_core::geometry;
use satnr_core::harq::{self, ErrorModel, HarqConfig, Strategy};
use satnr_core::impairments;
use satnr_core::numerology;
use satnr_core::random_access::{self as ra, PreambleFormat, RaTimers, RaVerdict};
use satnr_core::scenario::{load_scenario, ScenarioConfig, SCENARIO_KEYS};

fn err(e: satnr_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Scenario parameters in SI units. Keyword arguments override defaults.
#[pyclass(name = "Scenario", module = "satnr", from_py_object)]
#[derive(Clone, Copy)]
pub struct PyScenario {
    inner: ScenarioConfig,
}

#[pymethods]
impl PyScenario {
    #[new]
    #[pyo3(signature = (**kwargs))]
    fn new(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut inner = ScenarioConfig::default();
        if let Some(kw) = kwargs {
            for (k, v) in kw.iter() {
                let key: String = k.extract()?;
                if !inner.set(&key, v.extract()?) {
                    return Err(PyKeyError::new_err(key));
                }
            }
        }
        inner.validate().map_err(err)?;
        Ok(Self { inner })
    }

    /// Parses the `key = value` scenario text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        load_scenario(text).map(|inner| Self { inner }).map_err(err)
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn __getitem__(&self, key: &str) -> PyResult<f64> {
        self.inner.get(key).ok_or_else(|| PyKeyError::new_err(key.to_string()))
    }

    #[staticmethod]
    fn keys() -> Vec<&'static str> {
        SCENARIO_KEYS.to_vec()
    }

    fn __repr__(&self) -> String {
        let fields: Vec<String> = SCENARIO_KEYS
            .iter()
            .map(|k| format!("{k}={:?}", self.inner.get(k).unwrap_or(f64::NAN)))
            .collect();
        format!("Scenario({})", fields.join(", "))
    }
}

fn cfg(s: Option<PyScenario>) -> ScenarioConfig {
    s.map(|s| s.inner).unwrap_or_default()
}

#[pyfunction]
#[pyo3(signature = (elevation_rad, scenario=None))]
fn slant_range(elevation_rad: f64, scenario: Option<PyScenario>) -> PyResult<f64> {
    geometry::slant_range(&cfg(scenario), elevation_rad).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (scenario=None))]
fn differential_distance<'py>(py: Python<'py>, scenario: Option<PyScenario>) -> PyResult<Bound<'py, PyDict>> {
    let g = geometry::differential_distance(&cfg(scenario)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("d1_m", g.d1_m)?;
    d.set_item("d2_m", g.d2_m)?;
    d.set_item("differential_m", g.differential_m)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (scenario=None))]
fn visibility_pass_duration(scenario: Option<PyScenario>) -> f64 {
    geometry::visibility_pass_duration(&cfg(scenario))
}

#[pyfunction]
#[pyo3(signature = (scenario=None))]
fn round_trip_time<'py>(py: Python<'py>, scenario: Option<PyScenario>) -> PyResult<Bound<'py, PyDict>> {
    let b = impairments::round_trip_time(&cfg(scenario));
    let d = PyDict::new(py);
    d.set_item("one_way_s", b.one_way_s)?;
    d.set_item("round_trip_s", b.round_trip_s)?;
    d.set_item("components", b.components)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (speed_ms, carrier_hz, angle_rad=0.0, scenario=None))]
fn ue_doppler(speed_ms: f64, carrier_hz: f64, angle_rad: f64, scenario: Option<PyScenario>) -> PyResult<f64> {
    impairments::ue_doppler(&cfg(scenario).constants, speed_ms, carrier_hz, angle_rad).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (elevation_rad, scenario=None))]
fn sat_doppler(elevation_rad: f64, scenario: Option<PyScenario>) -> PyResult<f64> {
    impairments::sat_doppler(&cfg(scenario), elevation_rad).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (elevation_rad, position_error_m, scenario=None))]
fn residual_doppler<'py>(
    py: Python<'py>,
    elevation_rad: f64,
    position_error_m: f64,
    scenario: Option<PyScenario>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = impairments::residual_doppler(&cfg(scenario), elevation_rad, position_error_m).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("true_doppler_hz", r.true_doppler_hz)?;
    d.set_item("estimated_doppler_hz", r.estimated_doppler_hz)?;
    d.set_item("residual_doppler_hz", r.residual_doppler_hz)?;
    Ok(d)
}

/// Rows of `(scs_hz, tolerated_doppler_hz, max_position_error_m)`.
#[pyfunction]
#[pyo3(signature = (max_index=3, scenario=None))]
fn numerology_table(max_index: u32, scenario: Option<PyScenario>) -> PyResult<Vec<(f64, f64, f64)>> {
    let t = numerology::numerology_table(&cfg(scenario), max_index).map_err(err)?;
    Ok(t.iter()
        .map(|e| (e.scs_hz, e.tolerated_doppler_hz, e.max_position_error_m))
        .collect())
}

/// Smallest spacing (Hz) that tolerates `required_doppler_hz`.
#[pyfunction]
#[pyo3(signature = (required_doppler_hz, max_index=3, scenario=None))]
fn select_numerology(required_doppler_hz: f64, max_index: u32, scenario: Option<PyScenario>) -> PyResult<f64> {
    let t = numerology::numerology_table(&cfg(scenario), max_index).map_err(err)?;
    numerology::select_numerology(required_doppler_hz, &t)
        .map(|e| e.scs_hz)
        .map_err(err)
}

fn verdict<'py>(py: Python<'py>, v: &RaVerdict) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("stage", v.stage.to_string())?;
    d.set_item("feasible", v.feasible)?;
    let names: Vec<&str> = v.violations.iter().map(|x| x.budget.name()).collect();
    d.set_item("violations", names)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (rar_window_s=15e-3, contention_timer_s=64e-3, rtt_s=None, scenario=None))]
fn check_ue_ra<'py>(
    py: Python<'py>,
    rar_window_s: f64,
    contention_timer_s: f64,
    rtt_s: Option<f64>,
    scenario: Option<PyScenario>,
) -> PyResult<Bound<'py, PyDict>> {
    let c = cfg(scenario);
    let timers = RaTimers::new(rar_window_s, contention_timer_s).map_err(err)?;
    let rtt = rtt_s.unwrap_or_else(|| impairments::round_trip_time(&c).round_trip_s);
    verdict(py, &ra::check_ue_ra(&timers, rtt))
}

/// Relay attach verdict; the timing spread defaults to the scenario's
/// differential distance.
#[pyfunction]
#[pyo3(signature = (rar_window_s=15e-3, contention_timer_s=64e-3, preamble_radius_m=100e3, rtt_s=None, spread_m=None, scenario=None))]
fn check_rn_attach<'py>(
    py: Python<'py>,
    rar_window_s: f64,
    contention_timer_s: f64,
    preamble_radius_m: f64,
    rtt_s: Option<f64>,
    spread_m: Option<f64>,
    scenario: Option<PyScenario>,
) -> PyResult<Bound<'py, PyDict>> {
    let c = cfg(scenario);
    let timers = RaTimers::new(rar_window_s, contention_timer_s).map_err(err)?;
    let pre = PreambleFormat::from_radius("custom", 0.0, 0.0, preamble_radius_m, &c.constants).map_err(err)?;
    let rtt = rtt_s.unwrap_or_else(|| impairments::round_trip_time(&c).round_trip_s);
    let spread = match spread_m {
        Some(s) => s,
        None => geometry::differential_distance(&c).map_err(err)?.differential_m,
    };
    verdict(py, &ra::check_rn_attach(&timers, rtt, &pre, spread, &c.constants))
}

#[pyfunction]
#[pyo3(signature = (propagation_s=8e-3, proc_rx_s=4e-3, proc_tx_s=4e-3, ack_duration_s=0.0, tti_s=1e-3, link_rate_bits_per_s=100e6, baseline_processes=8))]
#[allow(clippy::too_many_arguments)]
fn harq_dimension<'py>(
    py: Python<'py>,
    propagation_s: f64,
    proc_rx_s: f64,
    proc_tx_s: f64,
    ack_duration_s: f64,
    tti_s: f64,
    link_rate_bits_per_s: f64,
    baseline_processes: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let h = HarqConfig {
        propagation_s,
        proc_rx_s,
        proc_tx_s,
        ack_duration_s,
        tti_s,
        link_rate_bits_per_s,
        ..Default::default()
    };
    h.validate().map_err(err)?;
    let t = harq::harq_cycle_time(&h);
    let n = harq::min_processes(t, tti_s);
    let d = PyDict::new(py);
    d.set_item("t_harq_s", t)?;
    d.set_item("n_min", n)?;
    d.set_item("dci_bits", harq::dci_process_field_width(n))?;
    d.set_item("buffer_bits", harq::buffer_requirement(n, tti_s, link_rate_bits_per_s))?;
    d.set_item(
        "baseline_buffer_bits",
        harq::buffer_requirement(baseline_processes, tti_s, link_rate_bits_per_s),
    )?;
    d.set_item("theoretical_utilization", harq::theoretical_utilization(n, t, tti_s))?;
    Ok(d)
}

/// Runs the HARQ simulator. `success` gives per-attempt decode
/// probabilities; `level_success` is the multibit table, four per row.
#[pyfunction]
#[pyo3(signature = (
    duration_s=10.0, processes=24, strategy="full", success=vec![1.0], level_success=None,
    max_transmissions=4, replication_factor=1, seed=0, propagation_s=8e-3, event_log=false,
))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    duration_s: f64,
    processes: usize,
    strategy: &str,
    success: Vec<f64>,
    level_success: Option<Vec<[f64; harq::FEEDBACK_LEVELS]>>,
    max_transmissions: u32,
    replication_factor: u32,
    seed: u64,
    propagation_s: f64,
    event_log: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let strategy: Strategy = strategy.parse().map_err(err)?;
    let mut model = ErrorModel {
        attempt_success: success,
        level_success: Vec::new(),
    };
    if strategy == Strategy::Multibit {
        model = match level_success {
            Some(rows) => ErrorModel {
                level_success: rows,
                ..model
            },
            None => model.with_flat_levels(max_transmissions),
        };
    }
    let h = HarqConfig {
        num_processes: processes,
        strategy,
        feedback_bits: if strategy == Strategy::Multibit { 2 } else { 1 },
        max_transmissions,
        replication_factor,
        error_model: model,
        seed,
        propagation_s,
        ..Default::default()
    };
    let (r, log) = py
        .detach(|| harq::simulate_with_log(&h, duration_s))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("offered_tb", r.offered_tb)?;
    d.set_item("delivered_tb", r.delivered_tb)?;
    d.set_item("dropped_tb", r.dropped_tb)?;
    d.set_item("utilization", r.utilization)?;
    d.set_item("goodput_tb_per_s", r.goodput_tb_per_s)?;
    d.set_item("mean_latency_s", r.mean_latency_s)?;
    d.set_item("p95_latency_s", r.p95_latency_s)?;
    d.set_item("peak_soft_buffer_bits", r.peak_soft_buffer_bits)?;
    d.set_item("retransmission_histogram", r.retransmission_histogram.clone())?;
    if event_log {
        let lines: Vec<String> = log.iter().map(ToString::to_string).collect();
        d.set_item("event_log", lines)?;
    }
    Ok(d)
}

#[pymodule]
fn satnr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(slant_range, m)?)?;
    m.add_function(wrap_pyfunction!(differential_distance, m)?)?;
    m.add_function(wrap_pyfunction!(visibility_pass_duration, m)?)?;
    m.add_function(wrap_pyfunction!(round_trip_time, m)?)?;
    m.add_function(wrap_pyfunction!(ue_doppler, m)?)?;
    m.add_function(wrap_pyfunction!(sat_doppler, m)?)?;
    m.add_function(wrap_pyfunction!(residual_doppler, m)?)?;
    m.add_function(wrap_pyfunction!(numerology_table, m)?)?;
    m.add_function(wrap_pyfunction!(select_numerology, m)?)?;
    m.add_function(wrap_pyfunction!(check_ue_ra, m)?)?;
    m.add_function(wrap_pyfunction!(check_rn_attach, m)?)?;
    m.add_function(wrap_pyfunction!(harq_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add("EVENT_LOG_HEADER", harq::EventRecord::CSV_HEADER)?;
    Ok(())
}
