//! Python bindings: the device/drive types and the main response,
//! steady-state, sweep and fitting operations.
//!
//! The Python surface speaks the same units as the CLI config files —
//! linear Hz for frequencies (converted to angular rates once, here),
//! W, kg, m — so numbers can be pasted between the two front ends.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use omit_core::eit::{eit_coherence, map_omit_to_eit, RsbResponseParams};
use omit_core::params::{
    CavityParams, CouplingParams, DriveParams, MechanicalParams, SystemParams,
};
use omit_core::response::{
    group_delay_at_center, group_delay_numeric, omit_width, transmission_at, ModelVariant,
};
use omit_core::steady_state::solve_steady_state;
use omit_core::sweep::{
    power_series_analysis, run_sweep, Axis, Grid, Observable, SweepContext, SweepSpec,
};

fn value_err(e: omit_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_model(model: &str) -> PyResult<ModelVariant> {
    match model {
        "full" => Ok(ModelVariant::Full),
        "rsb" => Ok(ModelVariant::Rsb),
        "weak" => Ok(ModelVariant::WeakCoupling),
        other => Err(PyValueError::new_err(format!(
            "model must be 'full' | 'rsb' | 'weak', got '{other}'"
        ))),
    }
}

/// One optomechanical device (frequencies in linear Hz).
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Device {
    system: SystemParams,
    gamma_split: f64,
    taper_loss_factor: f64,
}

#[pymethods]
impl Device {
    #[new]
    #[pyo3(signature = (kappa0_hz, kappa_ex_hz, wavelength_m, m_eff_kg, omega_m_hz, gamma_m_hz, g0_hz_per_m, gamma_split_hz=0.0, taper_loss_factor=1.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        kappa0_hz: f64,
        kappa_ex_hz: f64,
        wavelength_m: f64,
        m_eff_kg: f64,
        omega_m_hz: f64,
        gamma_m_hz: f64,
        g0_hz_per_m: f64,
        gamma_split_hz: f64,
        taper_loss_factor: f64,
    ) -> PyResult<Self> {
        let cavity = CavityParams::new(TAU * kappa0_hz, TAU * kappa_ex_hz, wavelength_m)
            .map_err(value_err)?;
        let mechanics = MechanicalParams::new(m_eff_kg, TAU * omega_m_hz, TAU * gamma_m_hz)
            .map_err(value_err)?;
        let coupling = CouplingParams::new(TAU * g0_hz_per_m).map_err(value_err)?;
        if gamma_split_hz < 0.0 {
            return Err(PyValueError::new_err("gamma_split_hz must be ≥ 0"));
        }
        if taper_loss_factor < 1.0 {
            return Err(PyValueError::new_err("taper_loss_factor must be ≥ 1"));
        }
        Ok(Device {
            system: SystemParams::new(cavity, mechanics, coupling),
            gamma_split: TAU * gamma_split_hz,
            taper_loss_factor,
        })
    }

    /// Coupling parameter η_c of the bare cavity.
    #[getter]
    fn eta_c(&self) -> f64 {
        self.system.cavity.eta_c()
    }

    /// Zero-point fluctuation amplitude (m).
    #[getter]
    fn x_zpf_m(&self) -> f64 {
        self.system.x_zpf()
    }

    /// Total linewidth κ/2π (Hz).
    #[getter]
    fn kappa_hz(&self) -> f64 {
        self.system.cavity.kappa() / TAU
    }

    fn __repr__(&self) -> String {
        format!(
            "Device(kappa_hz={:.4e}, eta_c={:.4}, omega_m_hz={:.4e}, gamma_split_hz={:.4e})",
            self.kappa_hz(),
            self.eta_c(),
            self.system.mechanics.omega_m / TAU,
            self.gamma_split / TAU,
        )
    }
}

/// Control drive and probe settings (frequencies in linear Hz).
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Drive {
    power_w: f64,
    detuning_hz: f64,
    probe_offset_hz: Option<f64>,
    modulation_depth: f64,
    lo_phase_rad: f64,
}

#[pymethods]
impl Drive {
    #[new]
    #[pyo3(signature = (power_w, detuning_hz, probe_offset_hz=None, modulation_depth=0.0, lo_phase_rad=0.0))]
    fn new(
        power_w: f64,
        detuning_hz: f64,
        probe_offset_hz: Option<f64>,
        modulation_depth: f64,
        lo_phase_rad: f64,
    ) -> PyResult<Self> {
        if power_w < 0.0 {
            return Err(PyValueError::new_err("power_w must be ≥ 0"));
        }
        Ok(Drive {
            power_w,
            detuning_hz,
            probe_offset_hz,
            modulation_depth,
            lo_phase_rad,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Drive(power_w={:.4e}, detuning_hz={:.4e})",
            self.power_w, self.detuning_hz
        )
    }
}

fn context(device: &Device, drive: &Drive) -> PyResult<SweepContext> {
    let probe_offset = TAU
        * drive
            .probe_offset_hz
            .unwrap_or(device.system.mechanics.omega_m / TAU);
    let drive_params = DriveParams::new(
        drive.power_w,
        TAU * drive.detuning_hz,
        probe_offset,
        drive.modulation_depth,
    )
    .map_err(value_err)?;
    Ok(SweepContext {
        system: device.system,
        gamma_split: device.gamma_split,
        taper_loss_factor: device.taper_loss_factor,
        drive: drive_params,
        lo_phase: drive.lo_phase_rad,
    })
}

/// Drive-dependent working point with its derived window quantities.
#[pyclass]
struct OperatingPoint {
    op: omit_core::params::OperatingPoint,
    system: SystemParams,
}

#[pymethods]
impl OperatingPoint {
    #[getter]
    fn a_bar(&self) -> f64 {
        self.op.a_bar
    }

    #[getter]
    fn photons(&self) -> f64 {
        self.op.a_bar * self.op.a_bar
    }

    #[getter]
    fn x_bar_m(&self) -> f64 {
        self.op.x_bar
    }

    #[getter]
    fn delta_bar_hz(&self) -> f64 {
        self.op.delta_bar / TAU
    }

    #[getter]
    fn omega_c_hz(&self) -> f64 {
        self.op.omega_c_rate / TAU
    }

    #[getter]
    fn cooperativity(&self) -> f64 {
        self.op.cooperativity
    }

    #[getter]
    fn x_zpf_m(&self) -> f64 {
        self.op.x_zpf
    }

    /// Transparency window width Γ_OMIT/2π (Hz).
    #[getter]
    fn gamma_omit_hz(&self) -> f64 {
        omit_width(&self.op, &self.system) / TAU
    }

    /// Group delay at window center (s).
    #[getter]
    fn group_delay_s(&self) -> f64 {
        group_delay_at_center(&self.op, &self.system)
    }

    /// Peak normalized transparency (C/(1+C))².
    #[getter]
    fn transparency_peak(&self) -> f64 {
        let c = self.op.cooperativity;
        (c / (1.0 + c)).powi(2)
    }

    fn __repr__(&self) -> String {
        format!(
            "OperatingPoint(a_bar={:.4e}, omega_c_hz={:.4e}, cooperativity={:.4e})",
            self.op.a_bar,
            self.omega_c_hz(),
            self.op.cooperativity
        )
    }
}

/// Working point of the drive (split-mode and taper corrections applied).
#[pyfunction]
fn operating_point(device: &Device, drive: &Drive) -> PyResult<OperatingPoint> {
    let ctx = context(device, drive)?;
    let system = ctx.effective_system().map_err(value_err)?;
    let op = ctx.operating_point().map_err(value_err)?;
    Ok(OperatingPoint { op, system })
}

/// All radiation-pressure steady states at a *bare* laser detuning (Hz).
/// Returns a list of dicts with a `stable` flag, ordered by |x̄|.
#[pyfunction]
fn steady_state_roots(
    py: Python<'_>,
    device: &Device,
    laser_detuning_hz: f64,
    power_w: f64,
) -> PyResult<Vec<Py<PyDict>>> {
    let ctx = context(
        device,
        &Drive::new(power_w, laser_detuning_hz, None, 0.0, 0.0)?,
    )?;
    let sys = ctx.effective_system().map_err(value_err)?;
    let flux = omit_core::photon_flux(power_w, sys.cavity.wavelength).map_err(value_err)?
        / (device.taper_loss_factor * device.taper_loss_factor);
    let roots = solve_steady_state(
        &sys.cavity,
        &sys.mechanics,
        &sys.coupling,
        TAU * laser_detuning_hz,
        flux,
    )
    .map_err(value_err)?;
    roots
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("x_bar_m", r.point.x_bar)?;
            d.set_item("a_bar", r.point.a_bar)?;
            d.set_item("photons", r.point.a_bar * r.point.a_bar)?;
            d.set_item("delta_bar_hz", r.point.delta_bar / TAU)?;
            d.set_item("omega_c_hz", r.point.omega_c_rate / TAU)?;
            d.set_item("cooperativity", r.point.cooperativity)?;
            d.set_item("stable", r.stable)?;
            Ok(d.unbind())
        })
        .collect()
}

/// Complex probe amplitude transmission t_p at modulation frequency Ω (Hz).
#[pyfunction]
#[pyo3(signature = (device, drive, omega_hz, model="full"))]
fn transmission(device: &Device, drive: &Drive, omega_hz: f64, model: &str) -> PyResult<C64> {
    let variant = parse_model(model)?;
    let ctx = context(device, drive)?;
    let sys = ctx.effective_system().map_err(value_err)?;
    let op = ctx.operating_point().map_err(value_err)?;
    Ok(transmission_at(&op, &sys, variant, TAU * omega_hz).t_p)
}

/// Normalized transmission t'_p = (t_p − t_r)/(1 − t_r) at Ω (Hz).
#[pyfunction]
#[pyo3(signature = (device, drive, omega_hz, model="full"))]
fn transmission_normalized(
    device: &Device,
    drive: &Drive,
    omega_hz: f64,
    model: &str,
) -> PyResult<C64> {
    let variant = parse_model(model)?;
    let ctx = context(device, drive)?;
    let sys = ctx.effective_system().map_err(value_err)?;
    let op = ctx.operating_point().map_err(value_err)?;
    Ok(transmission_at(&op, &sys, variant, TAU * omega_hz).t_p_norm)
}

/// Group delay −dφ/dω at two-photon detuning Δ' (Hz), in seconds.
#[pyfunction]
#[pyo3(signature = (device, drive, delta_prime_hz=0.0, model="weak"))]
fn group_delay(device: &Device, drive: &Drive, delta_prime_hz: f64, model: &str) -> PyResult<f64> {
    let variant = parse_model(model)?;
    let ctx = context(device, drive)?;
    let sys = ctx.effective_system().map_err(value_err)?;
    let op = ctx.operating_point().map_err(value_err)?;
    group_delay_numeric(&op, &sys, TAU * delta_prime_hz, variant, None).map_err(value_err)
}

/// Probe-frequency sweep. Returns a dict of equal-length lists: `omega_hz`
/// plus one entry per observable column.
#[pyfunction]
#[pyo3(signature = (device, drive, start_hz, stop_hz, count, observables=None, model="full"))]
#[allow(clippy::too_many_arguments)]
fn sweep_probe(
    py: Python<'_>,
    device: &Device,
    drive: &Drive,
    start_hz: f64,
    stop_hz: f64,
    count: usize,
    observables: Option<Vec<String>>,
    model: &str,
) -> PyResult<Py<PyDict>> {
    let variant = parse_model(model)?;
    let obs: Vec<Observable> = match observables {
        None => vec![Observable::TpSq, Observable::TpNormSq],
        Some(names) => names
            .iter()
            .map(|n| {
                Observable::from_label(n)
                    .ok_or_else(|| PyValueError::new_err(format!("unknown observable '{n}'")))
            })
            .collect::<PyResult<_>>()?,
    };
    let spec = SweepSpec {
        axis: Axis::ProbeOffset,
        grid: Grid::Linspace {
            start: TAU * start_hz,
            stop: TAU * stop_hz,
            count,
        },
        fixed: context(device, drive)?,
        observables: obs.clone(),
        model: variant,
    };
    let result = run_sweep(&spec).map_err(value_err)?;
    let out = PyDict::new(py);
    let omega: Vec<f64> = result.records.iter().map(|r| r.axis_value / TAU).collect();
    out.set_item("omega_hz", omega)?;
    for (i, o) in obs.iter().enumerate() {
        let col: Vec<f64> = result.records.iter().map(|r| r.values[i]).collect();
        out.set_item(o.column_label(), col)?;
    }
    out.set_item("warnings", result.warnings)?;
    Ok(out.unbind())
}

/// Control-power series: fitted window width/peak next to the analytic
/// values, one dict per power.
#[pyfunction]
#[pyo3(signature = (device, drive, powers_w, model="weak"))]
fn power_series(
    py: Python<'_>,
    device: &Device,
    drive: &Drive,
    powers_w: Vec<f64>,
    model: &str,
) -> PyResult<Vec<Py<PyDict>>> {
    let variant = parse_model(model)?;
    let ctx = context(device, drive)?;
    let rows = power_series_analysis(&powers_w, &ctx, variant).map_err(value_err)?;
    rows.iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("power_w", r.power)?;
            d.set_item("cooperativity", r.cooperativity)?;
            d.set_item("fitted_gamma_omit_hz", r.fitted_gamma_omit / TAU)?;
            d.set_item("fitted_peak", r.fitted_peak)?;
            d.set_item("theory_gamma_omit_hz", r.theory_gamma_omit / TAU)?;
            d.set_item("theory_peak", r.theory_peak)?;
            d.set_item("fit_converged", r.fit_converged)?;
            Ok(d.unbind())
        })
        .collect()
}

/// Four-parameter Lorentzian fit of (x, y); dip depth > 0, peak depth < 0.
#[pyfunction]
fn fit_lorentzian(py: Python<'_>, x: Vec<f64>, y: Vec<f64>) -> PyResult<Py<PyDict>> {
    let fit = omit_core::fit::fit_lorentzian(&x, &y).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("center", fit.center)?;
    d.set_item("fwhm", fit.fwhm)?;
    d.set_item("depth", fit.depth)?;
    d.set_item("baseline", fit.baseline)?;
    d.set_item("rms_residual", fit.rms_residual)?;
    d.set_item("converged", fit.converged)?;
    d.set_item("iterations", fit.iterations)?;
    d.set_item("fwhm_unconstrained", fit.fwhm_unconstrained)?;
    Ok(d.unbind())
}

/// Maximum relative deviation between the mapped Λ-system coherence and the
/// resolved-sideband response over a Δ' grid (both normalized to Δ' = 0).
#[pyfunction]
#[pyo3(signature = (device, drive, grid_points=1001))]
fn eit_max_deviation(device: &Device, drive: &Drive, grid_points: usize) -> PyResult<f64> {
    let ctx = context(device, drive)?;
    let sys = ctx.effective_system().map_err(value_err)?;
    let op = ctx.operating_point().map_err(value_err)?;
    let rsb = RsbResponseParams::from_operating_point(&op, &sys);
    let (lambda, _) = map_omit_to_eit(&rsb);
    let s0 = eit_coherence(&lambda, 0.0);
    let a0 = rsb.a_minus(0.0);
    let n = grid_points.max(2);
    let mut max_rel: f64 = 0.0;
    for i in 0..n {
        let dp = (i as f64 / (n - 1) as f64 - 0.5) * 4.0 * rsb.kappa;
        let lhs = eit_coherence(&lambda, dp) / s0;
        let rhs = rsb.a_minus(dp) / a0;
        max_rel = max_rel.max((lhs - rhs).norm() / rhs.norm());
    }
    Ok(max_rel)
}

#[pymodule]
fn omit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Device>()?;
    m.add_class::<Drive>()?;
    m.add_class::<OperatingPoint>()?;
    m.add_function(wrap_pyfunction!(operating_point, m)?)?;
    m.add_function(wrap_pyfunction!(steady_state_roots, m)?)?;
    m.add_function(wrap_pyfunction!(transmission, m)?)?;
    m.add_function(wrap_pyfunction!(transmission_normalized, m)?)?;
    m.add_function(wrap_pyfunction!(group_delay, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_probe, m)?)?;
    m.add_function(wrap_pyfunction!(power_series, m)?)?;
    m.add_function(wrap_pyfunction!(fit_lorentzian, m)?)?;
    m.add_function(wrap_pyfunction!(eit_max_deviation, m)?)?;
    Ok(())
}
