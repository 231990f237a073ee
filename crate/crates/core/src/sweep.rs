//! Parameter sweeps and figure-style analyses.
//!
//! A sweep walks one axis (probe offset Ω, control power, or control
//! detuning Δ̄) with everything else fixed, evaluating a chosen set of
//! observables under one model variant. Records come back in grid order
//! and are a pure function of the spec: reruns are byte-identical, and
//! grid points may be evaluated in parallel without affecting output.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{fit_lorentzian, LorentzianFit};
use crate::homodyne::{bare_cavity_tones, homodyne_rsb, quadratures_full};
use crate::params::{photon_flux, DriveParams, OperatingPoint, SystemParams};
use crate::response::{
    amplitudes_at, group_delay_numeric, omit_width, residual_transmission, transmission_at,
    unwrap_phases, ModelVariant,
};
use crate::splitting::SplitModeParams;
use crate::steady_state::amplitude_at;

/// Sweep axis. Values are in internal units (rad/s for frequencies, W for power).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    ProbeOffset,
    ControlPower,
    ControlDetuning,
}

impl Axis {
    /// Column label, carrying the CSV (config-facing) unit.
    pub fn column_label(&self) -> &'static str {
        match self {
            Axis::ProbeOffset => "omega_hz",
            Axis::ControlPower => "power_w",
            Axis::ControlDetuning => "detuning_hz",
        }
    }

    pub fn is_frequency(&self) -> bool {
        !matches!(self, Axis::ControlPower)
    }
}

/// Either an explicit grid or a uniform linspace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Grid {
    Points(Vec<f64>),
    Linspace { start: f64, stop: f64, count: usize },
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::Points(v) => v.clone(),
            Grid::Linspace { start, stop, count } => {
                let n = *count;
                (0..n)
                    .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                    .collect()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let v = self.values();
        if v.len() < 2 {
            return Err(Error::parameter(
                "grid",
                format!("need ≥ 2 points, got {}", v.len()),
            ));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::parameter("grid", "grid values must be finite"));
        }
        let increasing = v.windows(2).all(|w| w[1] > w[0]);
        let decreasing = v.windows(2).all(|w| w[1] < w[0]);
        if !increasing && !decreasing {
            return Err(Error::parameter("grid", "grid must be strictly monotone"));
        }
        Ok(())
    }
}

/// Observables a sweep can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Observable {
    /// Intracavity probe power |A⁻|² per unit probe flux.
    AMinusSq,
    /// Mechanical oscillation amplitude |X| (m per √(photon/s)).
    XAmp,
    /// Probe power transmission |t_p|².
    TpSq,
    /// Normalized window |t'_p|².
    TpNormSq,
    /// Homodyne power |t_hom|².
    THomSq,
    /// Normalized homodyne power |t'_hom|².
    THomNormSq,
    /// Transmission phase arg(t_p) (rad), unwrapped along frequency grids.
    Phase,
    /// Group delay (s).
    GroupDelay,
}

impl Observable {
    pub const ALL: [Observable; 8] = [
        Observable::AMinusSq,
        Observable::XAmp,
        Observable::TpSq,
        Observable::TpNormSq,
        Observable::THomSq,
        Observable::THomNormSq,
        Observable::Phase,
        Observable::GroupDelay,
    ];

    pub fn column_label(&self) -> &'static str {
        match self {
            Observable::AMinusSq => "a_minus_sq",
            Observable::XAmp => "x_amp_m",
            Observable::TpSq => "t_p_sq",
            Observable::TpNormSq => "t_p_norm_sq",
            Observable::THomSq => "t_hom_sq",
            Observable::THomNormSq => "t_hom_norm_sq",
            Observable::Phase => "phase_rad",
            Observable::GroupDelay => "group_delay_s",
        }
    }

    pub fn from_label(label: &str) -> Option<Observable> {
        Observable::ALL
            .iter()
            .copied()
            .find(|o| o.column_label() == label)
    }
}

/// Full fixed context of a sweep: device, split/taper corrections, drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepContext {
    pub system: SystemParams,
    /// Intermode coupling rate γ (rad/s); 0 disables the split-mode reduction.
    pub gamma_split: f64,
    /// Empirical taper-loss division of Ω_c, ≥ 1.
    pub taper_loss_factor: f64,
    pub drive: DriveParams,
    /// Local-oscillator phase Φ (rad) for the full homodyne model.
    pub lo_phase: f64,
}

impl SweepContext {
    pub fn new(system: SystemParams, drive: DriveParams) -> Self {
        SweepContext {
            system,
            gamma_split: 0.0,
            taper_loss_factor: 1.0,
            drive,
            lo_phase: 0.0,
        }
    }

    /// Device with the split-mode reduction applied: η_c → η_c/2 when a
    /// backscattering splitting is present, κ unchanged.
    pub fn effective_system(&self) -> Result<SystemParams> {
        if self.gamma_split > 0.0 {
            let split = SplitModeParams::new(self.gamma_split, self.system.cavity)?;
            Ok(SystemParams::new(
                split.halved_coupling_cavity(),
                self.system.mechanics,
                self.system.coupling,
            ))
        } else {
            Ok(self.system)
        }
    }

    /// Working point at an explicit power and effective detuning, with the
    /// taper-loss factor dividing the intracavity amplitude.
    pub fn operating_point_at(&self, power: f64, detuning: f64) -> Result<OperatingPoint> {
        if self.taper_loss_factor < 1.0 || !self.taper_loss_factor.is_finite() {
            return Err(Error::parameter(
                "taper_loss_factor",
                format!("must be ≥ 1, got {}", self.taper_loss_factor),
            ));
        }
        let sys = self.effective_system()?;
        let flux = photon_flux(power, sys.cavity.wavelength)?;
        let a_bar = amplitude_at(sys.cavity.eta_c(), sys.cavity.kappa(), detuning, flux)
            / self.taper_loss_factor;
        Ok(OperatingPoint::from_amplitude(&sys, detuning, a_bar))
    }

    /// Working point of the fixed drive.
    pub fn operating_point(&self) -> Result<OperatingPoint> {
        self.operating_point_at(self.drive.input_power, self.drive.detuning)
    }
}

/// Everything needed to run one sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub axis: Axis,
    pub grid: Grid,
    pub fixed: SweepContext,
    pub observables: Vec<Observable>,
    pub model: ModelVariant,
}

/// One row: the axis value plus one value per requested observable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub axis_value: f64,
    pub values: Vec<f64>,
}

/// A completed sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis: Axis,
    pub columns: Vec<String>,
    pub records: Vec<SweepRecord>,
    /// Model-regime violations; informational, never fatal.
    pub warnings: Vec<String>,
}

/// Run one sweep. Grid points evaluate in parallel; output order is grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.grid.validate()?;
    if spec.observables.is_empty() {
        return Err(Error::parameter(
            "observables",
            "at least one observable required",
        ));
    }
    let sys = spec.fixed.effective_system()?;
    let base_op = spec.fixed.operating_point()?;
    let warnings = regime_warnings(&spec.fixed, &sys, &base_op, spec.model);

    let values = spec.grid.values();
    if spec.axis == Axis::ControlPower && values.iter().any(|&p| p < 0.0) {
        return Err(Error::parameter("grid", "control power must be ≥ 0"));
    }

    let rows: Result<Vec<Vec<f64>>> = values
        .par_iter()
        .map(|&v| evaluate_point(spec, &sys, &base_op, v))
        .collect();
    let rows = rows?;

    let mut records: Vec<SweepRecord> = values
        .into_iter()
        .zip(rows)
        .map(|(axis_value, values)| SweepRecord { axis_value, values })
        .collect();

    // Unwrap the phase column along monotone frequency grids.
    if spec.axis.is_frequency() {
        if let Some(col) = spec
            .observables
            .iter()
            .position(|o| *o == Observable::Phase)
        {
            let mut phases: Vec<f64> = records.iter().map(|r| r.values[col]).collect();
            unwrap_phases(&mut phases);
            for (r, phi) in records.iter_mut().zip(phases) {
                r.values[col] = phi;
            }
        }
    }

    Ok(SweepResult {
        axis: spec.axis,
        columns: spec
            .observables
            .iter()
            .map(|o| o.column_label().to_string())
            .collect(),
        records,
        warnings,
    })
}

fn evaluate_point(
    spec: &SweepSpec,
    sys: &SystemParams,
    base_op: &OperatingPoint,
    axis_value: f64,
) -> Result<Vec<f64>> {
    let (op, omega) = match spec.axis {
        Axis::ProbeOffset => (*base_op, axis_value),
        Axis::ControlPower => (
            spec.fixed
                .operating_point_at(axis_value, spec.fixed.drive.detuning)?,
            spec.fixed.drive.probe_offset,
        ),
        Axis::ControlDetuning => (
            spec.fixed
                .operating_point_at(spec.fixed.drive.input_power, axis_value)?,
            spec.fixed.drive.probe_offset,
        ),
    };

    let need_amplitudes = spec
        .observables
        .iter()
        .any(|o| matches!(o, Observable::AMinusSq | Observable::XAmp));
    let amps = if need_amplitudes {
        Some(amplitudes_at(&op, sys, spec.model, omega)?)
    } else {
        None
    };
    let tp = transmission_at(&op, sys, spec.model, omega);
    let t_r = residual_transmission(sys);

    let need_hom = spec
        .observables
        .iter()
        .any(|o| matches!(o, Observable::THomSq | Observable::THomNormSq));
    let t_hom = if need_hom {
        let t_hom = match spec.model {
            ModelVariant::Full => {
                let tones = bare_cavity_tones(&op, sys, omega, spec.fixed.lo_phase);
                quadratures_full(&tones, t_r).t_hom
            }
            _ => homodyne_rsb(tp.t_p),
        };
        Some(t_hom)
    } else {
        None
    };

    spec.observables
        .iter()
        .map(|obs| {
            Ok(match obs {
                Observable::AMinusSq => amps.as_ref().unwrap().a_minus.norm_sqr(),
                Observable::XAmp => amps.as_ref().unwrap().x_amp.norm(),
                Observable::TpSq => tp.power_transmission,
                Observable::TpNormSq => tp.t_p_norm.norm_sqr(),
                Observable::THomSq => t_hom.unwrap().norm_sqr(),
                Observable::THomNormSq => (t_hom.unwrap() / (1.0 - t_r)).norm_sqr(),
                Observable::Phase => tp.phase,
                Observable::GroupDelay => {
                    group_delay_numeric(&op, sys, omega - sys.mechanics.omega_m, spec.model, None)?
                }
            })
        })
        .collect()
}

fn regime_warnings(
    ctx: &SweepContext,
    sys: &SystemParams,
    op: &OperatingPoint,
    model: ModelVariant,
) -> Vec<String> {
    let mut w = Vec::new();
    let kappa = sys.cavity.kappa();
    let omega_m = sys.mechanics.omega_m;
    if matches!(model, ModelVariant::Rsb | ModelVariant::WeakCoupling) {
        let ratio = kappa / omega_m;
        if ratio > 0.1 {
            w.push(format!(
                "resolved-sideband assumption marginal: kappa/omega_m = {ratio:.3}"
            ));
        }
        if (ctx.drive.detuning + omega_m).abs() > 0.01 * omega_m {
            w.push(format!(
                "control not on the lower motional sideband: detuning = {:.6e} rad/s, -omega_m = {:.6e} rad/s",
                ctx.drive.detuning, -omega_m
            ));
        }
    }
    if model == ModelVariant::WeakCoupling {
        if op.omega_c_rate > kappa / 10.0 {
            w.push(format!(
                "weak-coupling assumption marginal: omega_c/kappa = {:.3}",
                op.omega_c_rate / kappa
            ));
        }
        if sys.mechanics.gamma_m > kappa / 10.0 {
            w.push(format!(
                "weak-coupling assumption marginal: gamma_m/kappa = {:.3}",
                sys.mechanics.gamma_m / kappa
            ));
        }
    }
    w
}

/// One row of a control-power series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerSeriesRow {
    pub power: f64,
    pub cooperativity: f64,
    pub fitted_gamma_omit: f64,
    pub fitted_peak: f64,
    pub theory_gamma_omit: f64,
    pub theory_peak: f64,
    pub fit_converged: bool,
}

/// For each power: sweep the normalized window |t'_p|² over
/// Δ' ∈ [−5Γ_OMIT, +5Γ_OMIT] (2001 points), fit the Lorentzian, and put the
/// fitted width/peak next to the analytic Γ_m(1+C) and (C/(1+C))².
pub fn power_series_analysis(
    powers: &[f64],
    ctx: &SweepContext,
    model: ModelVariant,
) -> Result<Vec<PowerSeriesRow>> {
    powers
        .par_iter()
        .map(|&power| {
            if power < 0.0 || !power.is_finite() {
                return Err(Error::parameter(
                    "power",
                    format!("must be ≥ 0, got {power}"),
                ));
            }
            let op = ctx.operating_point_at(power, ctx.drive.detuning)?;
            let sys = ctx.effective_system()?;
            let c = op.cooperativity;
            let gamma_omit = omit_width(&op, &sys);
            let n = 2001;
            let (mut xs, mut ys) = (Vec::with_capacity(n), Vec::with_capacity(n));
            for i in 0..n {
                let dp = (i as f64 / (n - 1) as f64 - 0.5) * 10.0 * gamma_omit;
                xs.push(dp);
                ys.push(
                    transmission_at(&op, &sys, model, sys.mechanics.omega_m + dp)
                        .t_p_norm
                        .norm_sqr(),
                );
            }
            let fit = fit_lorentzian(&xs, &ys)?;
            Ok(PowerSeriesRow {
                power,
                cooperativity: c,
                fitted_gamma_omit: fit.fwhm,
                fitted_peak: fit.extremum(),
                theory_gamma_omit: gamma_omit,
                theory_peak: (c / (1.0 + c)).powi(2),
                fit_converged: fit.converged,
            })
        })
        .collect()
}

/// Normalize one column to unit maximum in place (for the style of figure
/// that plots |A⁻|² and |X| "normalized to unity"). No-op on all-zero data.
pub fn normalize_to_unity(result: &mut SweepResult, column: &str) -> Result<()> {
    let idx = result
        .columns
        .iter()
        .position(|c| c == column)
        .ok_or_else(|| Error::parameter("column", format!("no column named `{column}`")))?;
    let max = result
        .records
        .iter()
        .map(|r| r.values[idx])
        .fold(f64::NEG_INFINITY, f64::max);
    if max > 0.0 {
        for r in result.records.iter_mut() {
            r.values[idx] /= max;
        }
    }
    Ok(())
}

/// Fit one observable column of a finished sweep.
pub fn fit_sweep_column(result: &SweepResult, column: &str) -> Result<LorentzianFit> {
    let idx = result
        .columns
        .iter()
        .position(|c| c == column)
        .ok_or_else(|| Error::parameter("column", format!("no column named `{column}`")))?;
    let xs: Vec<f64> = result.records.iter().map(|r| r.axis_value).collect();
    let ys: Vec<f64> = result.records.iter().map(|r| r.values[idx]).collect();
    fit_lorentzian(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::test_fixtures::reference_device;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    fn ctx_with_c(eta_c: f64, c: f64) -> SweepContext {
        // choose the power that realizes cooperativity c at Δ̄ = −Ω_m
        let sys = reference_device(eta_c);
        let drive0 =
            DriveParams::new(1e-3, -sys.mechanics.omega_m, sys.mechanics.omega_m, 0.0).unwrap();
        let ctx0 = SweepContext::new(sys, drive0);
        let c_per_watt = ctx0.operating_point().unwrap().cooperativity / 1e-3;
        let drive = DriveParams::new(
            c / c_per_watt,
            -sys.mechanics.omega_m,
            sys.mechanics.omega_m,
            0.0,
        )
        .unwrap();
        SweepContext::new(sys, drive)
    }

    fn probe_window_spec(ctx: SweepContext, model: ModelVariant, half_widths: f64) -> SweepSpec {
        let sys = ctx.effective_system().unwrap();
        let op = ctx.operating_point().unwrap();
        let gamma_omit = omit_width(&op, &sys);
        let om = sys.mechanics.omega_m;
        SweepSpec {
            axis: Axis::ProbeOffset,
            grid: Grid::Linspace {
                start: om - half_widths * gamma_omit,
                stop: om + half_widths * gamma_omit,
                count: 2001,
            },
            fixed: ctx,
            observables: vec![Observable::TpNormSq, Observable::THomNormSq],
            model,
        }
    }

    #[test]
    fn bare_probe_sweep_is_cavity_lorentzian() {
        let sys = reference_device(0.35);
        let drive =
            DriveParams::new(0.0, -sys.mechanics.omega_m, sys.mechanics.omega_m, 0.0).unwrap();
        let ctx = SweepContext::new(sys, drive);
        let kappa = sys.cavity.kappa();
        let spec = SweepSpec {
            axis: Axis::ProbeOffset,
            grid: Grid::Linspace {
                start: sys.mechanics.omega_m - 3.0 * kappa,
                stop: sys.mechanics.omega_m + 3.0 * kappa,
                count: 1501,
            },
            fixed: ctx,
            observables: vec![Observable::TpSq],
            model: ModelVariant::Full,
        };
        let out = run_sweep(&spec).unwrap();
        let fit = fit_sweep_column(&out, "t_p_sq").unwrap();
        assert!(fit.converged);
        assert_relative_eq!(fit.center, sys.mechanics.omega_m, max_relative = 1e-6);
        assert_relative_eq!(fit.fwhm, kappa, max_relative = 1e-4);
        let eta = sys.cavity.eta_c();
        assert_relative_eq!(fit.depth, 4.0 * eta * (1.0 - eta), max_relative = 1e-4);
    }

    #[test]
    fn sweep_is_deterministic() {
        let ctx = ctx_with_c(0.5, 2.0);
        let spec = probe_window_spec(ctx, ModelVariant::Full, 5.0);
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn window_widths_agree_between_transmission_and_homodyne() {
        let ctx = ctx_with_c(0.5, 3.0);
        let spec = probe_window_spec(ctx, ModelVariant::WeakCoupling, 5.0);
        let out = run_sweep(&spec).unwrap();
        let peak_fit = fit_sweep_column(&out, "t_p_norm_sq").unwrap();
        let dip_fit = fit_sweep_column(&out, "t_hom_norm_sq").unwrap();
        assert!(peak_fit.converged && dip_fit.converged);
        assert_relative_eq!(peak_fit.fwhm, dip_fit.fwhm, max_relative = 1e-3);
        // and the dip relation at center
        let peak = peak_fit.extremum();
        let dip = dip_fit.extremum();
        assert_relative_eq!(dip, (1.0 - peak.sqrt()).powi(2), max_relative = 1e-6);
    }

    #[test]
    fn fitted_window_at_c1_is_twice_gamma_m() {
        let ctx = ctx_with_c(0.5, 1.0);
        let spec = probe_window_spec(ctx, ModelVariant::WeakCoupling, 5.0);
        let out = run_sweep(&spec).unwrap();
        let fit = fit_sweep_column(&out, "t_p_norm_sq").unwrap();
        assert_relative_eq!(fit.fwhm, 2.0 * TAU * 41e3, max_relative = 1e-2);
        // the weak-coupling window is an exact Lorentzian: noiseless data
        // fits to numerical-noise residuals
        assert!(fit.rms_residual <= 1e-12, "rms {}", fit.rms_residual);
    }

    #[test]
    fn normalize_column_to_unity() {
        let ctx = ctx_with_c(0.5, 2.0);
        let mut spec = probe_window_spec(ctx, ModelVariant::Full, 5.0);
        spec.observables = vec![Observable::AMinusSq, Observable::XAmp];
        let mut out = run_sweep(&spec).unwrap();
        normalize_to_unity(&mut out, "a_minus_sq").unwrap();
        normalize_to_unity(&mut out, "x_amp_m").unwrap();
        for col in 0..2 {
            let max = out
                .records
                .iter()
                .map(|r| r.values[col])
                .fold(f64::NEG_INFINITY, f64::max);
            assert_relative_eq!(max, 1.0, max_relative = 1e-15);
        }
        assert!(normalize_to_unity(&mut out, "nope").is_err());
    }

    #[test]
    fn largest_power_row_hits_reference_contrast() {
        // the C = 9 drive reaches the 81% transparency point
        let ctx = ctx_with_c(0.5, 9.0);
        let powers = vec![0.1 * ctx.drive.input_power, ctx.drive.input_power];
        let rows = power_series_analysis(&powers, &ctx, ModelVariant::WeakCoupling).unwrap();
        let last = rows.last().unwrap();
        assert_relative_eq!(last.cooperativity, 9.0, max_relative = 1e-9);
        assert!((last.theory_peak - 0.81).abs() <= 1e-12);
        assert_relative_eq!(last.fitted_peak, 0.81, max_relative = 1e-2);
    }

    #[test]
    fn power_series_columns_and_monotonicity() {
        let ctx = ctx_with_c(0.5, 1.0);
        let powers: Vec<f64> = (1..=8).map(|i| i as f64 * ctx.drive.input_power).collect();
        let rows = power_series_analysis(&powers, &ctx, ModelVariant::WeakCoupling).unwrap();
        assert_eq!(rows.len(), 8);
        for w in rows.windows(2) {
            assert!(w[1].fitted_peak > w[0].fitted_peak);
            assert!(w[1].fitted_gamma_omit > w[0].fitted_gamma_omit);
        }
        for r in &rows {
            assert!(r.fit_converged);
            assert_relative_eq!(
                r.theory_peak,
                (r.cooperativity / (1.0 + r.cooperativity)).powi(2),
                max_relative = 1e-15
            );
            assert_relative_eq!(
                r.fitted_gamma_omit,
                r.theory_gamma_omit,
                max_relative = 1e-2
            );
            assert_relative_eq!(r.fitted_peak, r.theory_peak, max_relative = 1e-2);
        }
        // cooperativity itself is linear in power
        assert_relative_eq!(
            rows[7].cooperativity,
            8.0 * rows[0].cooperativity,
            max_relative = 1e-12
        );
    }

    #[test]
    fn rsb_regime_violation_is_warning_not_error() {
        // reference device: κ/Ω_m ≈ 0.29, marginal for the RSB forms
        let ctx = ctx_with_c(0.5, 1.0);
        let spec = probe_window_spec(ctx, ModelVariant::Rsb, 5.0);
        let out = run_sweep(&spec).unwrap();
        assert!(out.warnings.iter().any(|w| w.contains("resolved-sideband")));
    }

    #[test]
    fn rejects_bad_grids() {
        let ctx = ctx_with_c(0.5, 1.0);
        let mut spec = probe_window_spec(ctx, ModelVariant::Full, 5.0);
        spec.grid = Grid::Points(vec![1.0]);
        assert!(run_sweep(&spec).is_err());
        spec.grid = Grid::Points(vec![1.0, 3.0, 2.0]);
        assert!(run_sweep(&spec).is_err());
        spec.grid = Grid::Points(vec![1.0, 2.0, 3.0]);
        spec.observables.clear();
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn control_power_axis_tracks_transparency() {
        let ctx = ctx_with_c(0.5, 1.0);
        let p1 = ctx.drive.input_power;
        let spec = SweepSpec {
            axis: Axis::ControlPower,
            grid: Grid::Points(vec![0.25 * p1, p1, 4.0 * p1]),
            fixed: ctx,
            observables: vec![Observable::TpNormSq],
            model: ModelVariant::WeakCoupling,
        };
        let out = run_sweep(&spec).unwrap();
        // C = {0.25, 1, 4} at Δ' = 0 → (C/(1+C))²
        let expect = [0.04, 0.25, 0.64];
        for (rec, e) in out.records.iter().zip(expect) {
            assert_relative_eq!(rec.values[0], e, max_relative = 1e-9);
        }
    }
}
