//! Subcommand implementations.

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use omit_core::eit::{eit_coherence, map_omit_to_eit, RsbResponseParams};
use omit_core::fit::fit_lorentzian;
use omit_core::params::photon_flux;
use omit_core::response::{group_delay_at_center, omit_width, ModelVariant};
use omit_core::steady_state::solve_steady_state;
use omit_core::sweep::{power_series_analysis, run_sweep, Grid, SweepContext, SweepSpec};
use serde_json::json;

use crate::config::{AxisKind, ConfigError, OutputFormat, RunConfig};
use crate::output::{fmt_float, parse_csv, ResultEnvelope, Table};

/// Process-level failures with their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 2: configuration or invocation problems.
    Config(String),
    /// Exit code 3: solver or numerical failures.
    Numeric(String),
    /// Exit code 4: filesystem problems.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o failure: {m}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<omit_core::Error> for CliError {
    fn from(e: omit_core::Error) -> Self {
        match e {
            omit_core::Error::Parameter { .. } => CliError::Config(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

/// Overrides and destinations resolved from the command line.
pub struct Invocation {
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub model: Option<ModelVariant>,
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    Ok(RunConfig::parse(&text)?)
}

fn resolve_format(cfg: &RunConfig, inv: &Invocation) -> OutputFormat {
    inv.format.unwrap_or(cfg.output.format)
}

/// Destination for sweep-family table artifacts: flag, then config path.
fn resolve_out(cfg: &RunConfig, inv: &Invocation) -> Option<PathBuf> {
    inv.out
        .clone()
        .or_else(|| cfg.output.path.as_ref().map(PathBuf::from))
}

/// Destination for inspection reports (steady-state, eit-compare): the
/// config's [output] path belongs to the sweep artifact, so these default
/// to stdout unless --out is given.
fn resolve_report_out(inv: &Invocation) -> Option<PathBuf> {
    inv.out.clone()
}

fn resolve_model(cfg: &RunConfig, inv: &Invocation, default: ModelVariant) -> ModelVariant {
    inv.model.or(cfg.sweep.model).unwrap_or(default)
}

fn write_artifact(dest: Option<&Path>, content: &str) -> Result<(), CliError> {
    match dest {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent).map_err(|e| {
                        CliError::Io(format!("cannot create {}: {e}", parent.display()))
                    })?;
                }
            }
            fs::write(path, content)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

/// Derived device/drive scalars for the provenance header.
fn derived_scalars(cfg: &RunConfig) -> Result<Vec<(String, f64)>, CliError> {
    let ctx = cfg.context()?;
    let eff = ctx.effective_system()?;
    let op = ctx.operating_point()?;
    let gamma_omit = omit_width(&op, &eff);
    Ok(vec![
        ("eta_c".into(), ctx.system.cavity.eta_c()),
        ("eta_c_eff".into(), eff.cavity.eta_c()),
        ("kappa_hz".into(), eff.cavity.kappa() / TAU),
        ("q_m".into(), eff.mechanics.q_m()),
        ("x_zpf_m".into(), eff.x_zpf()),
        ("omega_c_hz".into(), op.omega_c_rate / TAU),
        ("cooperativity".into(), op.cooperativity),
        ("gamma_omit_hz".into(), gamma_omit / TAU),
        ("group_delay_s".into(), group_delay_at_center(&op, &eff)),
    ])
}

fn render(env: &ResultEnvelope, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => env.to_csv(),
        OutputFormat::Json => env.to_json(),
    }
}

/// `steady-state`: all roots of the radiation-pressure cubic.
///
/// Here `detuning_hz` is read as the *bare* laser detuning Δ (the solver's
/// natural input); the sweep commands read it as the effective Δ̄.
pub fn cmd_steady_state(cfg: &RunConfig, inv: &Invocation) -> Result<(), CliError> {
    let ctx = cfg.context()?;
    let eff = ctx.effective_system()?;
    let flux = photon_flux(ctx.drive.input_power, eff.cavity.wavelength)?
        / (ctx.taper_loss_factor * ctx.taper_loss_factor);
    let roots = solve_steady_state(
        &eff.cavity,
        &eff.mechanics,
        &eff.coupling,
        ctx.drive.detuning,
        flux,
    )?;
    let rows = roots
        .iter()
        .map(|r| {
            vec![
                r.point.x_bar,
                r.point.a_bar,
                r.point.a_bar * r.point.a_bar,
                r.point.delta_bar / TAU,
                r.point.omega_c_rate / TAU,
                r.point.cooperativity,
                if r.stable { 1.0 } else { 0.0 },
            ]
        })
        .collect();
    let env = ResultEnvelope {
        command: "steady-state".into(),
        config_echo: cfg.canonical_text(),
        derived: derived_scalars(cfg)?,
        warnings: Vec::new(),
        table: Table {
            columns: [
                "x_bar_m",
                "a_bar_sqrt_photons",
                "photons",
                "delta_bar_hz",
                "omega_c_hz",
                "cooperativity",
                "stable",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            rows,
        },
    };
    write_artifact(
        resolve_report_out(inv).as_deref(),
        &render(&env, resolve_format(cfg, inv)),
    )
}

/// Build the sweep spec a config describes, applying defaults.
fn build_sweep_spec(
    cfg: &RunConfig,
    ctx: &SweepContext,
    model: ModelVariant,
) -> Result<SweepSpec, CliError> {
    let axis_kind = cfg.sweep.axis.unwrap_or(AxisKind::ProbeOffset);
    let sw = &cfg.sweep;
    let reject = |key: &str, present: bool| -> Result<(), CliError> {
        if present {
            Err(ConfigError::semantic(
                key,
                format!("not applicable for axis {}", axis_kind.as_str()),
            )
            .into())
        } else {
            Ok(())
        }
    };

    let grid = match axis_kind {
        AxisKind::ProbeOffset | AxisKind::ControlDetuning => {
            reject("values_w", sw.values_w.is_some())?;
            reject("start_w", sw.start_w.is_some())?;
            reject("stop_w", sw.stop_w.is_some())?;
            if let Some(values) = &sw.values_hz {
                Grid::Points(values.iter().map(|v| TAU * v).collect())
            } else {
                match (sw.start_hz, sw.stop_hz) {
                    (Some(start), Some(stop)) => Grid::Linspace {
                        start: TAU * start,
                        stop: TAU * stop,
                        count: sw.count.unwrap_or(2001),
                    },
                    (None, None) if axis_kind == AxisKind::ProbeOffset => {
                        // default full-cavity scan: Ω centered on −Δ̄, ±3κ
                        let kappa = ctx.system.cavity.kappa();
                        let center = -ctx.drive.detuning;
                        Grid::Linspace {
                            start: center - 3.0 * kappa,
                            stop: center + 3.0 * kappa,
                            count: sw.count.unwrap_or(2001),
                        }
                    }
                    _ => {
                        return Err(ConfigError::semantic(
                            "start_hz",
                            "need values_hz, or start_hz and stop_hz together",
                        )
                        .into());
                    }
                }
            }
        }
        AxisKind::ControlPower => {
            reject("values_hz", sw.values_hz.is_some())?;
            reject("start_hz", sw.start_hz.is_some())?;
            reject("stop_hz", sw.stop_hz.is_some())?;
            if let Some(values) = &sw.values_w {
                Grid::Points(values.clone())
            } else {
                match (sw.start_w, sw.stop_w) {
                    (Some(start), Some(stop)) => Grid::Linspace {
                        start,
                        stop,
                        count: sw.count.unwrap_or(2001),
                    },
                    _ => {
                        return Err(ConfigError::semantic(
                            "start_w",
                            "need values_w, or start_w and stop_w together",
                        )
                        .into());
                    }
                }
            }
        }
    };
    let observables = sw
        .observables
        .clone()
        .ok_or_else(|| ConfigError::semantic("observables", "missing required key in [sweep]"))?;
    Ok(SweepSpec {
        axis: axis_kind.to_axis(),
        grid,
        fixed: *ctx,
        observables,
        model,
    })
}

fn sweep_to_table(result: &omit_core::sweep::SweepResult) -> Table {
    let mut columns = vec![result.axis.column_label().to_string()];
    columns.extend(result.columns.iter().cloned());
    let to_config_units = if result.axis.is_frequency() {
        1.0 / TAU
    } else {
        1.0
    };
    let rows = result
        .records
        .iter()
        .map(|r| {
            let mut row = vec![r.axis_value * to_config_units];
            row.extend(&r.values);
            row
        })
        .collect();
    Table { columns, rows }
}

/// `sweep`: one table over the configured axis.
pub fn cmd_sweep(cfg: &RunConfig, inv: &Invocation) -> Result<(), CliError> {
    let ctx = cfg.context()?;
    let model = resolve_model(cfg, inv, ModelVariant::Full);
    let spec = build_sweep_spec(cfg, &ctx, model)?;
    let result = run_sweep(&spec)?;
    let env = ResultEnvelope {
        command: "sweep".into(),
        config_echo: cfg.canonical_text(),
        derived: derived_scalars(cfg)?,
        warnings: result.warnings.clone(),
        table: sweep_to_table(&result),
    };
    write_artifact(
        resolve_out(cfg, inv).as_deref(),
        &render(&env, resolve_format(cfg, inv)),
    )
}

/// Insert `_d{k}` before the file extension.
fn suffixed_path(path: &Path, k: usize) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str());
    let name = match ext {
        Some(ext) => format!("{stem}_d{k}.{ext}"),
        None => format!("{stem}_d{k}"),
    };
    path.with_file_name(name)
}

/// `detuning-series`: one probe sweep per listed control detuning.
pub fn cmd_detuning_series(cfg: &RunConfig, inv: &Invocation) -> Result<(), CliError> {
    if matches!(cfg.sweep.axis, Some(a) if a != AxisKind::ProbeOffset) {
        return Err(
            ConfigError::semantic("axis", "detuning-series runs probe_offset sweeps").into(),
        );
    }
    let detunings =
        cfg.sweep.detunings_hz.clone().ok_or_else(|| {
            ConfigError::semantic("detunings_hz", "missing required key in [sweep]")
        })?;
    let out = resolve_out(cfg, inv).ok_or_else(|| {
        ConfigError::semantic(
            "path",
            "detuning-series writes multiple files; an output path is required",
        )
    })?;
    let model = resolve_model(cfg, inv, ModelVariant::Full);
    let format = resolve_format(cfg, inv);

    for (k, detuning_hz) in detunings.iter().enumerate() {
        let mut sub = cfg.clone();
        sub.drive.detuning_hz = *detuning_hz;
        let ctx = sub.context()?;
        let spec = build_sweep_spec(&sub, &ctx, model)?;
        let result = run_sweep(&spec)?;
        let env = ResultEnvelope {
            command: format!("detuning-series[{k}]"),
            config_echo: sub.canonical_text(),
            derived: derived_scalars(&sub)?,
            warnings: result.warnings.clone(),
            table: sweep_to_table(&result),
        };
        write_artifact(Some(&suffixed_path(&out, k)), &render(&env, format))?;
    }
    Ok(())
}

/// `power-series`: fitted window width/depth vs theory, one row per power.
pub fn cmd_power_series(cfg: &RunConfig, inv: &Invocation) -> Result<(), CliError> {
    let ctx = cfg.context()?;
    let sw = &cfg.sweep;
    let powers: Vec<f64> = if let Some(values) = &sw.values_w {
        values.clone()
    } else {
        match (sw.start_w, sw.stop_w) {
            (Some(start), Some(stop)) => {
                let n = sw.count.unwrap_or(9);
                (0..n)
                    .map(|i| start + (stop - start) * i as f64 / (n - 1).max(1) as f64)
                    .collect()
            }
            _ => {
                return Err(ConfigError::semantic(
                    "values_w",
                    "need values_w, or start_w and stop_w together",
                )
                .into());
            }
        }
    };
    let model = resolve_model(cfg, inv, ModelVariant::WeakCoupling);
    let rows = power_series_analysis(&powers, &ctx, model)?;
    let table = Table {
        columns: [
            "power_w",
            "cooperativity",
            "fitted_gamma_omit_hz",
            "fitted_peak",
            "theory_gamma_omit_hz",
            "theory_peak",
            "fit_converged",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.power,
                    r.cooperativity,
                    r.fitted_gamma_omit / TAU,
                    r.fitted_peak,
                    r.theory_gamma_omit / TAU,
                    r.theory_peak,
                    if r.fit_converged { 1.0 } else { 0.0 },
                ]
            })
            .collect(),
    };
    let env = ResultEnvelope {
        command: "power-series".into(),
        config_echo: cfg.canonical_text(),
        derived: derived_scalars(cfg)?,
        warnings: Vec::new(),
        table,
    };
    write_artifact(
        resolve_out(cfg, inv).as_deref(),
        &render(&env, resolve_format(cfg, inv)),
    )
}

/// Pass threshold for the equivalence report.
const EIT_COMPARE_THRESHOLD: f64 = 1e-9;

/// `eit-compare`: pointwise OMIT ↔ EIT agreement report (JSON).
pub fn cmd_eit_compare(cfg: &RunConfig, inv: &Invocation) -> Result<(), CliError> {
    let ctx = cfg.context()?;
    let eff = ctx.effective_system()?;
    let op = ctx.operating_point()?;
    let rsb = RsbResponseParams::from_operating_point(&op, &eff);
    let (mut lambda, constant) = map_omit_to_eit(&rsb);
    // test hook: deliberately corrupt the mapping to exercise the failure path
    if std::env::var("OMIT_SIM_BREAK_EIT_MAPPING")
        .map(|v| !v.is_empty())
        .unwrap_or(false)
    {
        lambda.gamma13 *= 1.5;
    }

    let n = 1001;
    let mut max_rel: f64 = 0.0;
    let s0 = eit_coherence(&lambda, 0.0);
    let a0 = rsb.a_minus(0.0);
    for i in 0..n {
        let dp = (i as f64 / (n - 1) as f64 - 0.5) * 4.0 * rsb.kappa;
        let lhs = eit_coherence(&lambda, dp) / s0;
        let rhs = rsb.a_minus(dp) / a0;
        max_rel = max_rel.max((lhs - rhs).norm() / rhs.norm());
    }
    let pass = max_rel <= EIT_COMPARE_THRESHOLD;
    let report = json!({
        "command": "eit-compare",
        "config": cfg.canonical_text(),
        "grid_points": n,
        "max_rel_deviation": max_rel,
        "threshold": EIT_COMPARE_THRESHOLD,
        "pass": pass,
        "proportionality_constant": { "re": constant.re, "im": constant.im },
        "lambda_system": lambda,
        "rsb_params": rsb,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("static shape");
    text.push('\n');
    write_artifact(resolve_report_out(inv).as_deref(), &text)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "OMIT/EIT responses deviate by {max_rel:.3e} (> {EIT_COMPARE_THRESHOLD:.0e})"
        )))
    }
}

/// `fit`: Lorentzian fit of one column of an existing CSV artifact.
pub fn cmd_fit(
    input: &Path,
    column: &str,
    x_column: Option<&str>,
    out: Option<&Path>,
    format: OutputFormat,
) -> Result<(), CliError> {
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", input.display())))?;
    let table = parse_csv(&text).map_err(CliError::Config)?;
    let x_name = x_column.unwrap_or(&table.columns[0]);
    let x_idx = table
        .columns
        .iter()
        .position(|c| c == x_name)
        .ok_or_else(|| {
            CliError::Config(format!("no column named `{x_name}` in {}", input.display()))
        })?;
    let y_idx = table
        .columns
        .iter()
        .position(|c| c == column)
        .ok_or_else(|| {
            CliError::Config(format!("no column named `{column}` in {}", input.display()))
        })?;
    let xs: Vec<f64> = table.rows.iter().map(|r| r[x_idx]).collect();
    let ys: Vec<f64> = table.rows.iter().map(|r| r[y_idx]).collect();
    let fit = fit_lorentzian(&xs, &ys)?;

    let content = match format {
        OutputFormat::Json => {
            let report = json!({
                "command": "fit",
                "input": input.display().to_string(),
                "column": column,
                "x_column": x_name,
                "fit": fit,
            });
            let mut s = serde_json::to_string_pretty(&report).expect("static shape");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut s = String::new();
            s.push_str(&format!(
                "# omit-sim fit {} column {column} vs {x_name}\n",
                input.display()
            ));
            s.push_str("center,fwhm,depth,baseline,rms_residual,converged,iterations\n");
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                fmt_float(fit.center),
                fmt_float(fit.fwhm),
                fmt_float(fit.depth),
                fmt_float(fit.baseline),
                fmt_float(fit.rms_residual),
                u8::from(fit.converged),
                fit.iterations
            ));
            s
        }
    };
    write_artifact(out, &content)
}
