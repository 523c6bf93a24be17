//! Python bindings for `jcas-core`.
//!
//! Results come back as plain dicts and lists so they drop straight into
//! pandas or numpy. Every simulator error surfaces as `jcas.JcasError`, a
//! `ValueError` subclass.

use std::path::PathBuf;

use jcas_core::config;
use jcas_core::linkbudget::{self, LinkResult, RadarBudget};
use jcas_core::performance::{self, PerformanceResult, SensingPerformance};
use jcas_core::spectrum::{BandRecord, Registry};
use jcas_core::sweep::{self, CsvRow, Mode, SweepSpec};
use jcas_core::{geometry, waveform, Error};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList};

create_exception!(jcas, JcasError, PyValueError, "Raised for invalid simulator inputs.");

fn to_py(e: Error) -> PyErr {
    JcasError::new_err(e.to_string())
}

fn msg_err(m: String) -> PyErr {
    JcasError::new_err(m)
}

/// Scenario parameters. Keyword arguments use the config-file key names,
/// e.g. `Scenario(tx_power_dbw=9, n_elements=4)`.
#[pyclass(name = "Scenario", from_py_object)]
#[derive(Clone)]
struct PyScenario {
    inner: jcas_core::Scenario,
}

fn value_text(v: &Bound<'_, PyAny>) -> PyResult<String> {
    if v.is_instance_of::<PyBool>() {
        Ok(v.extract::<bool>()?.to_string())
    } else {
        Ok(v.str()?.to_string())
    }
}

#[pymethods]
impl PyScenario {
    #[new]
    #[pyo3(signature = (**kwargs))]
    fn new(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut inner = jcas_core::Scenario::default();
        if let Some(kw) = kwargs {
            for (k, v) in kw.iter() {
                let key: String = k.extract()?;
                inner.set(&key, &value_text(&v)?).map_err(msg_err)?;
            }
        }
        Ok(PyScenario { inner })
    }

    #[staticmethod]
    fn keys() -> Vec<&'static str> {
        jcas_core::scenario::SCENARIO_KEYS.to_vec()
    }

    fn get(&self, key: &str) -> PyResult<String> {
        self.inner
            .get(key)
            .ok_or_else(|| msg_err(format!("unknown key `{key}`")))
    }

    fn set(&mut self, key: &str, value: &Bound<'_, PyAny>) -> PyResult<()> {
        self.inner.set(key, &value_text(value)?).map_err(msg_err)
    }

    /// Copy with some fields replaced.
    #[pyo3(signature = (**kwargs))]
    fn replace(&self, kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut out = self.clone();
        if let Some(kw) = kwargs {
            for (k, v) in kw.iter() {
                let key: String = k.extract()?;
                out.inner.set(&key, &value_text(&v)?).map_err(msg_err)?;
            }
        }
        Ok(out)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (k, v) in self.inner.entries() {
            d.set_item(k, v)?;
        }
        Ok(d)
    }

    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(to_py)
    }

    fn fingerprint(&self) -> String {
        sweep::fingerprint(&self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let fields: Vec<String> = self
            .inner
            .entries()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("Scenario({})", fields.join(", "))
    }
}

fn radar_dict<'py>(py: Python<'py>, b: &RadarBudget, p: &SensingPerformance) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("tx_gain_dbi", b.tx_gain_dbi)?;
    d.set_item("rx_gain_dbi", b.rx_gain_dbi)?;
    d.set_item("power_split_db", b.power_split_db)?;
    d.set_item("rx_power_dbw", b.rx_power_dbw)?;
    d.set_item("noise_dbw", b.noise_dbw)?;
    d.set_item("snr_single_db", b.snr_single_db)?;
    d.set_item("n_symbols", b.n_symbols)?;
    d.set_item("integration_gain_db", b.integration_gain_db)?;
    d.set_item("snr_integrated_db", b.snr_integrated_db)?;
    d.set_item("effective_snr_db", p.effective_snr_db)?;
    d.set_item("delay_variance_s2", p.delay_variance_s2)?;
    d.set_item("range_mse_m2", p.range_mse_m2)?;
    d.set_item("range_rmse_m", p.range_rmse_m)?;
    d.set_item("detection_feasible", p.detection_feasible)?;
    Ok(d)
}

fn point_dict<'py>(py: Python<'py>, link: &LinkResult, perf: &PerformanceResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("tx_gain_dbi", link.tx_gain_dbi)?;
    d.set_item("fspl_comm_db", link.fspl_comm_db)?;
    d.set_item("noise_comm_dbw", link.noise_comm_dbw)?;
    d.set_item("comm_snr_db", link.comm_snr_db)?;
    d.set_item("effective_comm_snr_db", perf.effective_comm_snr_db)?;
    d.set_item("shannon_rate_bps", perf.shannon_rate_bps)?;
    d.set_item("qpsk_capped_rate_bps", perf.qpsk_capped_rate_bps)?;
    d.set_item("sensing_rms_bandwidth_hz", perf.rms_bandwidth_hz)?;
    d.set_item("bistatic_range_km", link.bistatic_range_km)?;
    d.set_item("implied_altitude_user_km", link.implied_altitude_user_km)?;
    d.set_item("implied_altitude_target_km", link.implied_altitude_target_km)?;
    d.set_item("doppler_user_hz", link.doppler_user_hz)?;
    d.set_item("doppler_target_hz", link.doppler_target_hz)?;
    d.set_item("residual_doppler_user_hz", link.residual_doppler_user_hz)?;
    d.set_item("residual_doppler_target_hz", link.residual_doppler_target_hz)?;
    d.set_item("bistatic", radar_dict(py, &link.bistatic, &perf.bistatic)?)?;
    d.set_item("monostatic", radar_dict(py, &link.monostatic, &perf.monostatic)?)?;
    Ok(d)
}

fn band_dict<'py>(py: Python<'py>, r: &BandRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("service", r.service.as_str())?;
    d.set_item("band", r.band.label())?;
    d.set_item("low_hz", r.low_hz)?;
    d.set_item("high_hz", r.high_hz)?;
    d.set_item("label", r.describe())?;
    match &r.sensor_bandwidths {
        None => d.set_item("applications", &r.applications)?,
        Some(map) => {
            let sensors = PyDict::new(py);
            for (s, bw) in map {
                sensors.set_item(s.key(), bw)?;
            }
            d.set_item("sensor_bandwidths", sensors)?;
        }
    }
    Ok(d)
}

fn csv_row_dict<'py>(py: Python<'py>, r: &CsvRow) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n_elements", r.n_elements)?;
    d.set_item("tx_power_dbw", r.tx_power_dbw)?;
    d.set_item("comm_snr_db", r.comm_snr_db)?;
    d.set_item("shannon_rate_bps", r.shannon_rate_bps)?;
    d.set_item("qpsk_capped_rate_bps", r.qpsk_capped_rate_bps)?;
    d.set_item("radar_snr_single_db", r.radar_snr_single_db)?;
    d.set_item("radar_snr_integrated_db", r.radar_snr_integrated_db)?;
    d.set_item("range_mse_m2", r.range_mse_m2)?;
    d.set_item("range_rmse_m", r.range_rmse_m)?;
    d.set_item("detection_feasible", r.detection_feasible)?;
    d.set_item("mode", r.mode.as_str())?;
    Ok(d)
}

fn build_spec(
    scenario: Option<&PyScenario>,
    power_axis: Option<Vec<f64>>,
    element_axis: Option<Vec<u32>>,
    mode: &str,
) -> PyResult<SweepSpec> {
    Ok(SweepSpec {
        base: scenario.map(|s| s.inner.clone()).unwrap_or_default(),
        power_axis: power_axis.unwrap_or_else(sweep::default_power_axis),
        element_axis: element_axis.unwrap_or_else(sweep::default_element_axis),
        mode: mode.parse::<Mode>().map_err(msg_err)?,
    })
}

#[pyfunction]
fn slant_range(altitude_km: f64, elevation_deg: f64) -> PyResult<f64> {
    geometry::slant_range(altitude_km, elevation_deg).map_err(to_py)
}

#[pyfunction]
fn altitude_from_slant_range(slant_range_km: f64, elevation_deg: f64) -> PyResult<f64> {
    geometry::altitude_from_slant_range(slant_range_km, elevation_deg).map_err(to_py)
}

#[pyfunction]
fn orbital_speed(altitude_km: f64) -> PyResult<f64> {
    geometry::orbital_speed(altitude_km).map_err(to_py)
}

#[pyfunction]
fn doppler_shift(carrier_hz: f64, radial_speed: f64) -> PyResult<f64> {
    geometry::doppler_shift(carrier_hz, radial_speed).map_err(to_py)
}

#[pyfunction]
fn bistatic_range(r_tx_target_km: f64, r_target_rx_km: f64) -> PyResult<f64> {
    geometry::bistatic_range(r_tx_target_km, r_target_rx_km).map_err(to_py)
}

#[pyfunction]
fn fspl_db(freq_hz: f64, distance_m: f64) -> PyResult<f64> {
    linkbudget::fspl_db(freq_hz, distance_m).map_err(to_py)
}

#[pyfunction]
fn noise_power_dbw(temp_k: f64, bandwidth_hz: f64) -> PyResult<f64> {
    linkbudget::noise_power_dbw(temp_k, bandwidth_hz).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (ref_gain_dbi, n, n_ref=1))]
fn array_gain_db(ref_gain_dbi: f64, n: u32, n_ref: u32) -> PyResult<f64> {
    linkbudget::array_gain_db(ref_gain_dbi, n, n_ref).map_err(to_py)
}

#[pyfunction]
fn numerology<'py>(py: Python<'py>, bandwidth_hz: f64, n_subcarriers: usize, n_cp: usize) -> PyResult<Bound<'py, PyDict>> {
    let n = waveform::numerology(bandwidth_hz, n_subcarriers, n_cp).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("bandwidth_hz", n.bandwidth_hz)?;
    d.set_item("n_subcarriers", n.n_subcarriers)?;
    d.set_item("n_cp_samples", n.n_cp_samples)?;
    d.set_item("subcarrier_spacing_hz", n.subcarrier_spacing_hz)?;
    d.set_item("t_useful", n.t_useful)?;
    d.set_item("t_cp", n.t_cp)?;
    d.set_item("t_symbol", n.t_symbol)?;
    d.set_item("cp_overhead", n.cp_overhead)?;
    Ok(d)
}

#[pyfunction]
fn symbols_in(t_integration_s: f64, bandwidth_hz: f64, n_subcarriers: usize, n_cp: usize) -> PyResult<u64> {
    let n = waveform::numerology(bandwidth_hz, n_subcarriers, n_cp).map_err(to_py)?;
    n.symbols_in(t_integration_s).map_err(to_py)
}

#[pyfunction]
fn partition<'py>(py: Python<'py>, n_total: usize, n_data: usize, n_sense: usize) -> PyResult<Bound<'py, PyDict>> {
    let p = waveform::partition(n_total, n_data, n_sense).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("n_total", p.n_total)?;
    d.set_item("n_data", p.n_data)?;
    d.set_item("n_sense", p.n_sense)?;
    d.set_item("n_unused", p.n_unused)?;
    d.set_item("data_fraction", p.data_fraction)?;
    d.set_item("sense_fraction", p.sense_fraction)?;
    Ok(d)
}

/// RMS bandwidth of the scenario's sensing tones, Hz.
#[pyfunction]
#[pyo3(signature = (scenario=None))]
fn sensing_rms_bandwidth(scenario: Option<&PyScenario>) -> PyResult<f64> {
    let s = scenario.map(|s| s.inner.clone()).unwrap_or_default();
    Ok(sweep::waveform_of(&s).map_err(to_py)?.2)
}

#[pyfunction]
fn delay_crlb(post_snr_db: f64, rms_bandwidth_hz: f64) -> PyResult<f64> {
    performance::delay_crlb(post_snr_db, rms_bandwidth_hz).map_err(to_py)
}

#[pyfunction]
fn range_mse(delay_variance_s2: f64) -> PyResult<(f64, f64)> {
    performance::range_mse(delay_variance_s2).map_err(to_py)
}

#[pyfunction]
fn detection_feasible(post_snr_db: f64, threshold_db: f64) -> bool {
    performance::detection_feasible(post_snr_db, threshold_db)
}

/// `(shannon_bps, qpsk_capped_bps)` at `snr_db` for the scenario's waveform.
#[pyfunction]
#[pyo3(signature = (snr_db, scenario=None))]
fn achievable_rate(snr_db: f64, scenario: Option<&PyScenario>) -> PyResult<(f64, f64)> {
    let s = scenario.map(|s| s.inner.clone()).unwrap_or_default();
    let (plan, num, _) = sweep::waveform_of(&s).map_err(to_py)?;
    let r = performance::achievable_rate_with(snr_db, &plan, &num, performance::RateOverheads::from_scenario(&s))
        .map_err(to_py)?;
    Ok((r.shannon_bps, r.qpsk_capped_bps))
}

/// Full link budget and performance figures for one scenario.
#[pyfunction]
#[pyo3(signature = (scenario=None))]
fn run_point<'py>(py: Python<'py>, scenario: Option<&PyScenario>) -> PyResult<Bound<'py, PyDict>> {
    let s = scenario.map(|s| s.inner.clone()).unwrap_or_default();
    let (link, perf) = sweep::run_point(&s).map_err(to_py)?;
    point_dict(py, &link, &perf)
}

/// One dict per grid point, sorted by (n_elements, tx_power_dbw).
#[pyfunction]
#[pyo3(signature = (scenario=None, power_axis=None, element_axis=None, mode="radar_bistatic", parallel=true))]
fn run_sweep<'py>(
    py: Python<'py>,
    scenario: Option<&PyScenario>,
    power_axis: Option<Vec<f64>>,
    element_axis: Option<Vec<u32>>,
    mode: &str,
    parallel: bool,
) -> PyResult<Bound<'py, PyList>> {
    let spec = build_spec(scenario, power_axis, element_axis, mode)?;
    let table = if parallel {
        py.detach(|| sweep::run_sweep(&spec))
    } else {
        sweep::run_sweep_sequential(&spec)
    }
    .map_err(to_py)?;
    let out = PyList::empty(py);
    for row in &table.rows {
        let d = point_dict(py, &row.link, &row.performance)?;
        d.set_item("tx_power_dbw", row.tx_power_dbw)?;
        d.set_item("n_elements", row.n_elements)?;
        out.append(d)?;
    }
    Ok(out)
}

/// Runs a sweep and writes the CSV table; returns the summary.
#[pyfunction]
#[pyo3(signature = (path, scenario=None, power_axis=None, element_axis=None, mode="radar_bistatic"))]
fn write_sweep_csv<'py>(
    py: Python<'py>,
    path: PathBuf,
    scenario: Option<&PyScenario>,
    power_axis: Option<Vec<f64>>,
    element_axis: Option<Vec<u32>>,
    mode: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = build_spec(scenario, power_axis, element_axis, mode)?;
    let table = py.detach(|| sweep::run_sweep(&spec)).map_err(to_py)?;
    sweep::emit_csv(&table, &path).map_err(to_py)?;
    let s = sweep::summarize(&table);
    let d = PyDict::new(py);
    d.set_item("rows", s.rows)?;
    d.set_item("min_rate_bps", s.min_rate_bps)?;
    d.set_item("max_rate_bps", s.max_rate_bps)?;
    d.set_item("min_rmse_m", s.min_rmse_m)?;
    d.set_item("max_rmse_m", s.max_rmse_m)?;
    d.set_item("fingerprint", table.fingerprint)?;
    Ok(d)
}

#[pyfunction]
fn read_sweep_csv<'py>(py: Python<'py>, path: PathBuf) -> PyResult<Bound<'py, PyList>> {
    let rows = sweep::read_csv(&path).map_err(to_py)?;
    let out = PyList::empty(py);
    for r in &rows {
        out.append(csv_row_dict(py, r)?)?;
    }
    Ok(out)
}

/// Parses a flat config document into a Scenario (sweep keys are ignored).
#[pyfunction]
fn scenario_from_config(text: &str) -> PyResult<PyScenario> {
    let spec = config::parse_str(text, "<config>").map_err(to_py)?;
    Ok(PyScenario { inner: spec.base })
}

#[pyfunction]
fn lookup_comm_band<'py>(py: Python<'py>, freq_ghz: f64) -> PyResult<Option<Bound<'py, PyDict>>> {
    let reg = Registry::builtin();
    match reg.lookup_comm_band(freq_ghz).map_err(to_py)? {
        Some(r) => Ok(Some(band_dict(py, r)?)),
        None => Ok(None),
    }
}

#[pyfunction]
fn lookup_radar_allocations<'py>(py: Python<'py>, low_ghz: f64, high_ghz: f64) -> PyResult<Bound<'py, PyList>> {
    let reg = Registry::builtin();
    let out = PyList::empty(py);
    for r in reg.lookup_radar_allocations(low_ghz, high_ghz).map_err(to_py)? {
        out.append(band_dict(py, r)?)?;
    }
    Ok(out)
}

#[pyfunction]
fn check_jcas_pairing<'py>(py: Python<'py>, carrier_ghz: f64, bandwidth_mhz: f64) -> PyResult<Bound<'py, PyDict>> {
    let reg = Registry::builtin();
    let rep = reg.check_jcas_pairing(carrier_ghz, bandwidth_mhz).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("carrier_in_comm_band", rep.carrier_in_comm_band.map(|b| b.label()))?;
    let radar = PyList::empty(py);
    for r in &rep.overlapping_radar_allocations {
        radar.append(band_dict(py, r)?)?;
    }
    d.set_item("overlapping_radar_allocations", radar)?;
    d.set_item("verdict", rep.verdict.as_str())?;
    Ok(d)
}

/// The shipped band database text.
#[pyfunction]
fn band_database() -> &'static str {
    Registry::builtin_text()
}

#[pymodule]
fn jcas(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("JcasError", m.py().get_type::<JcasError>())?;
    m.add("CSV_COLUMNS", sweep::CSV_COLUMNS.to_vec())?;
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(slant_range, m)?)?;
    m.add_function(wrap_pyfunction!(altitude_from_slant_range, m)?)?;
    m.add_function(wrap_pyfunction!(orbital_speed, m)?)?;
    m.add_function(wrap_pyfunction!(doppler_shift, m)?)?;
    m.add_function(wrap_pyfunction!(bistatic_range, m)?)?;
    m.add_function(wrap_pyfunction!(fspl_db, m)?)?;
    m.add_function(wrap_pyfunction!(noise_power_dbw, m)?)?;
    m.add_function(wrap_pyfunction!(array_gain_db, m)?)?;
    m.add_function(wrap_pyfunction!(numerology, m)?)?;
    m.add_function(wrap_pyfunction!(symbols_in, m)?)?;
    m.add_function(wrap_pyfunction!(partition, m)?)?;
    m.add_function(wrap_pyfunction!(sensing_rms_bandwidth, m)?)?;
    m.add_function(wrap_pyfunction!(delay_crlb, m)?)?;
    m.add_function(wrap_pyfunction!(range_mse, m)?)?;
    m.add_function(wrap_pyfunction!(detection_feasible, m)?)?;
    m.add_function(wrap_pyfunction!(achievable_rate, m)?)?;
    m.add_function(wrap_pyfunction!(run_point, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(write_sweep_csv, m)?)?;
    m.add_function(wrap_pyfunction!(read_sweep_csv, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_from_config, m)?)?;
    m.add_function(wrap_pyfunction!(lookup_comm_band, m)?)?;
    m.add_function(wrap_pyfunction!(lookup_radar_allocations, m)?)?;
    m.add_function(wrap_pyfunction!(check_jcas_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(band_database, m)?)?;
    Ok(())
}
