//! Flat INI-style run configuration.
//!
//! Sections `[device]`, `[drive]`, `[sweep]`, `[output]` with `key = value`
//! lines; `#`/`;` lines are comments. Keys carry their unit in the name:
//! frequencies are linear Hz (multiplied by 2π exactly once at ingestion),
//! powers W, masses kg, lengths m. Unknown sections or keys are rejected
//! with the offending name and line number.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;

use omit_core::params::{
    CavityParams, CouplingParams, DriveParams, MechanicalParams, SystemParams,
};
use omit_core::response::ModelVariant;
use omit_core::sweep::{Axis, Observable, SweepContext};

#[derive(Debug, Clone)]
pub struct ConfigError {
    pub line: usize,
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(line: usize, key: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            line,
            key: key.into(),
            message: message.into(),
        }
    }

    /// For errors discovered after parsing (no meaningful line).
    pub fn semantic(key: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            line: 0,
            key: key.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(
                f,
                "config error at line {}, key `{}`: {}",
                self.line, self.key, self.message
            )
        } else {
            write!(f, "config error, key `{}`: {}", self.key, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviceSection {
    pub kappa0_hz: f64,
    pub kappa_ex_hz: f64,
    pub wavelength_m: f64,
    pub m_eff_kg: f64,
    pub omega_m_hz: f64,
    pub gamma_m_hz: f64,
    pub g0_hz_per_m: f64,
    pub gamma_split_hz: f64,
    pub taper_loss_factor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriveSection {
    pub power_w: f64,
    pub detuning_hz: f64,
    pub probe_offset_hz: Option<f64>,
    pub modulation_depth: f64,
    pub lo_phase_rad: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    ProbeOffset,
    ControlPower,
    ControlDetuning,
}

impl AxisKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisKind::ProbeOffset => "probe_offset",
            AxisKind::ControlPower => "control_power",
            AxisKind::ControlDetuning => "control_detuning",
        }
    }

    pub fn to_axis(self) -> Axis {
        match self {
            AxisKind::ProbeOffset => Axis::ProbeOffset,
            AxisKind::ControlPower => Axis::ControlPower,
            AxisKind::ControlDetuning => Axis::ControlDetuning,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepSection {
    pub axis: Option<AxisKind>,
    pub start_hz: Option<f64>,
    pub stop_hz: Option<f64>,
    pub start_w: Option<f64>,
    pub stop_w: Option<f64>,
    pub count: Option<usize>,
    pub values_hz: Option<Vec<f64>>,
    pub values_w: Option<Vec<f64>>,
    pub detunings_hz: Option<Vec<f64>>,
    pub observables: Option<Vec<Observable>>,
    pub model: Option<ModelVariant>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    pub path: Option<String>,
    pub format: OutputFormat,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            path: None,
            format: OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub device: DeviceSection,
    pub drive: DriveSection,
    pub sweep: SweepSection,
    pub output: OutputSection,
}

struct RawItem {
    line: usize,
    value: String,
}

/// One parsed section: key → (line, raw value), duplicates rejected.
struct RawSection {
    name: &'static str,
    items: Vec<(String, RawItem)>,
    consumed: BTreeSet<String>,
}

impl RawSection {
    fn take(&mut self, key: &str) -> Option<RawItem> {
        self.consumed.insert(key.to_string());
        self.items
            .iter()
            .position(|(k, _)| k == key)
            .map(|i| self.items.remove(i).1)
    }

    fn f64(&mut self, key: &str) -> Result<Option<(usize, f64)>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(item) => {
                let v: f64 = item.value.parse().map_err(|_| {
                    ConfigError::new(
                        item.line,
                        key,
                        format!("expected a number, got `{}`", item.value),
                    )
                })?;
                if !v.is_finite() {
                    return Err(ConfigError::new(item.line, key, "value must be finite"));
                }
                Ok(Some((item.line, v)))
            }
        }
    }

    fn require_f64(&mut self, key: &str) -> Result<f64, ConfigError> {
        self.f64(key)?.map(|(_, v)| v).ok_or_else(|| {
            ConfigError::new(0, key, format!("missing required key in [{}]", self.name))
        })
    }

    fn usize(&mut self, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(item) => item.value.parse().map(Some).map_err(|_| {
                ConfigError::new(
                    item.line,
                    key,
                    format!("expected an integer, got `{}`", item.value),
                )
            }),
        }
    }

    fn f64_list(&mut self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(item) => {
                let mut out = Vec::new();
                for part in item.value.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    out.push(part.parse().map_err(|_| {
                        ConfigError::new(
                            item.line,
                            key,
                            format!("expected a number list, got `{part}`"),
                        )
                    })?);
                }
                if out.is_empty() {
                    return Err(ConfigError::new(item.line, key, "empty list"));
                }
                Ok(Some(out))
            }
        }
    }

    fn check_known(&self, known: &[&str]) -> Result<(), ConfigError> {
        for (key, item) in &self.items {
            if !known.contains(&key.as_str()) {
                return Err(ConfigError::new(
                    item.line,
                    key.clone(),
                    format!("unknown key in [{}]", self.name),
                ));
            }
        }
        Ok(())
    }

    fn reject_leftovers(&self) -> Result<(), ConfigError> {
        if let Some((key, item)) = self.items.first() {
            return Err(ConfigError::new(
                item.line,
                key.clone(),
                format!("unknown key in [{}]", self.name),
            ));
        }
        Ok(())
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut device = RawSection {
            name: "device",
            items: Vec::new(),
            consumed: BTreeSet::new(),
        };
        let mut drive = RawSection {
            name: "drive",
            items: Vec::new(),
            consumed: BTreeSet::new(),
        };
        let mut sweep = RawSection {
            name: "sweep",
            items: Vec::new(),
            consumed: BTreeSet::new(),
        };
        let mut output = RawSection {
            name: "output",
            items: Vec::new(),
            consumed: BTreeSet::new(),
        };
        let mut current: Option<usize> = None;
        let mut seen_sections = BTreeSet::new();

        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let slot = match name {
                    "device" => 0,
                    "drive" => 1,
                    "sweep" => 2,
                    "output" => 3,
                    other => {
                        return Err(ConfigError::new(line_no, other, "unknown section"));
                    }
                };
                if !seen_sections.insert(slot) {
                    return Err(ConfigError::new(line_no, name, "duplicate section"));
                }
                current = Some(slot);
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::new(line_no, line, "expected `key = value`"));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            let section = match current {
                Some(0) => &mut device,
                Some(1) => &mut drive,
                Some(2) => &mut sweep,
                Some(3) => &mut output,
                None => {
                    return Err(ConfigError::new(line_no, key, "key outside any [section]"));
                }
                _ => unreachable!(),
            };
            if section.items.iter().any(|(k, _)| *k == key) || section.consumed.contains(&key) {
                return Err(ConfigError::new(line_no, key, "duplicate key"));
            }
            section.items.push((
                key,
                RawItem {
                    line: line_no,
                    value,
                },
            ));
        }

        // Reject unknown keys up front so the offending name and line win
        // over any missing-key diagnostics.
        device.check_known(&[
            "kappa0_hz",
            "kappa_ex_hz",
            "wavelength_m",
            "m_eff_kg",
            "omega_m_hz",
            "gamma_m_hz",
            "g0_hz_per_m",
            "gamma_split_hz",
            "taper_loss_factor",
        ])?;
        drive.check_known(&[
            "power_w",
            "detuning_hz",
            "probe_offset_hz",
            "modulation_depth",
            "lo_phase_rad",
        ])?;
        sweep.check_known(&[
            "axis",
            "start_hz",
            "stop_hz",
            "start_w",
            "stop_w",
            "count",
            "values_hz",
            "values_w",
            "detunings_hz",
            "observables",
            "model",
        ])?;
        output.check_known(&["path", "format"])?;

        let device_sec = DeviceSection {
            kappa0_hz: positive(&mut device, "kappa0_hz")?,
            kappa_ex_hz: non_negative(&mut device, "kappa_ex_hz")?,
            wavelength_m: positive(&mut device, "wavelength_m")?,
            m_eff_kg: positive(&mut device, "m_eff_kg")?,
            omega_m_hz: positive(&mut device, "omega_m_hz")?,
            gamma_m_hz: positive(&mut device, "gamma_m_hz")?,
            g0_hz_per_m: device.require_f64("g0_hz_per_m")?,
            gamma_split_hz: optional_non_negative(&mut device, "gamma_split_hz", 0.0)?,
            taper_loss_factor: {
                let (line, v) = device.f64("taper_loss_factor")?.unwrap_or((0, 1.0));
                if v < 1.0 {
                    return Err(ConfigError::new(
                        line,
                        "taper_loss_factor",
                        format!("must be ≥ 1, got {v}"),
                    ));
                }
                v
            },
        };
        device.reject_leftovers()?;

        let drive_sec = DriveSection {
            power_w: non_negative(&mut drive, "power_w")?,
            detuning_hz: drive.require_f64("detuning_hz")?,
            probe_offset_hz: drive.f64("probe_offset_hz")?.map(|(_, v)| v),
            modulation_depth: optional_non_negative(&mut drive, "modulation_depth", 0.0)?,
            lo_phase_rad: drive.f64("lo_phase_rad")?.map(|(_, v)| v).unwrap_or(0.0),
        };
        drive.reject_leftovers()?;

        let axis = match sweep.take("axis") {
            None => None,
            Some(item) => Some(match item.value.as_str() {
                "probe_offset" => AxisKind::ProbeOffset,
                "control_power" => AxisKind::ControlPower,
                "control_detuning" => AxisKind::ControlDetuning,
                other => {
                    return Err(ConfigError::new(
                        item.line,
                        "axis",
                        format!("expected probe_offset | control_power | control_detuning, got `{other}`"),
                    ));
                }
            }),
        };
        let observables = match sweep.take("observables") {
            None => None,
            Some(item) => {
                let mut obs = Vec::new();
                for part in item.value.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    obs.push(Observable::from_label(part).ok_or_else(|| {
                        ConfigError::new(
                            item.line,
                            "observables",
                            format!("unknown observable `{part}`"),
                        )
                    })?);
                }
                if obs.is_empty() {
                    return Err(ConfigError::new(item.line, "observables", "empty list"));
                }
                Some(obs)
            }
        };
        let model = match sweep.take("model") {
            None => None,
            Some(item) => Some(parse_model(&item.value).ok_or_else(|| {
                ConfigError::new(
                    item.line,
                    "model",
                    format!("expected full | rsb | weak, got `{}`", item.value),
                )
            })?),
        };
        let sweep_sec = SweepSection {
            axis,
            start_hz: sweep.f64("start_hz")?.map(|(_, v)| v),
            stop_hz: sweep.f64("stop_hz")?.map(|(_, v)| v),
            start_w: sweep.f64("start_w")?.map(|(_, v)| v),
            stop_w: sweep.f64("stop_w")?.map(|(_, v)| v),
            count: sweep.usize("count")?,
            values_hz: sweep.f64_list("values_hz")?,
            values_w: sweep.f64_list("values_w")?,
            detunings_hz: sweep.f64_list("detunings_hz")?,
            observables,
            model,
        };
        sweep.reject_leftovers()?;

        let format = match output.take("format") {
            None => OutputFormat::Csv,
            Some(item) => match item.value.as_str() {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                other => {
                    return Err(ConfigError::new(
                        item.line,
                        "format",
                        format!("expected csv | json, got `{other}`"),
                    ));
                }
            },
        };
        let output_sec = OutputSection {
            path: output.take("path").map(|item| item.value),
            format,
        };
        output.reject_leftovers()?;

        Ok(RunConfig {
            device: device_sec,
            drive: drive_sec,
            sweep: sweep_sec,
            output: output_sec,
        })
    }

    /// Canonical text form: parsing it reproduces this config exactly.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        let f = |v: f64| format!("{v:.16e}");
        s.push_str("[device]\n");
        s.push_str(&format!("kappa0_hz = {}\n", f(self.device.kappa0_hz)));
        s.push_str(&format!("kappa_ex_hz = {}\n", f(self.device.kappa_ex_hz)));
        s.push_str(&format!("wavelength_m = {}\n", f(self.device.wavelength_m)));
        s.push_str(&format!("m_eff_kg = {}\n", f(self.device.m_eff_kg)));
        s.push_str(&format!("omega_m_hz = {}\n", f(self.device.omega_m_hz)));
        s.push_str(&format!("gamma_m_hz = {}\n", f(self.device.gamma_m_hz)));
        s.push_str(&format!("g0_hz_per_m = {}\n", f(self.device.g0_hz_per_m)));
        s.push_str(&format!(
            "gamma_split_hz = {}\n",
            f(self.device.gamma_split_hz)
        ));
        s.push_str(&format!(
            "taper_loss_factor = {}\n",
            f(self.device.taper_loss_factor)
        ));
        s.push_str("[drive]\n");
        s.push_str(&format!("power_w = {}\n", f(self.drive.power_w)));
        s.push_str(&format!("detuning_hz = {}\n", f(self.drive.detuning_hz)));
        if let Some(v) = self.drive.probe_offset_hz {
            s.push_str(&format!("probe_offset_hz = {}\n", f(v)));
        }
        s.push_str(&format!(
            "modulation_depth = {}\n",
            f(self.drive.modulation_depth)
        ));
        s.push_str(&format!("lo_phase_rad = {}\n", f(self.drive.lo_phase_rad)));
        s.push_str("[sweep]\n");
        if let Some(axis) = self.sweep.axis {
            s.push_str(&format!("axis = {}\n", axis.as_str()));
        }
        for (key, v) in [
            ("start_hz", self.sweep.start_hz),
            ("stop_hz", self.sweep.stop_hz),
            ("start_w", self.sweep.start_w),
            ("stop_w", self.sweep.stop_w),
        ] {
            if let Some(v) = v {
                s.push_str(&format!("{key} = {}\n", f(v)));
            }
        }
        if let Some(count) = self.sweep.count {
            s.push_str(&format!("count = {count}\n"));
        }
        for (key, list) in [
            ("values_hz", &self.sweep.values_hz),
            ("values_w", &self.sweep.values_w),
            ("detunings_hz", &self.sweep.detunings_hz),
        ] {
            if let Some(list) = list {
                let joined: Vec<String> = list.iter().map(|&v| f(v)).collect();
                s.push_str(&format!("{key} = {}\n", joined.join(", ")));
            }
        }
        if let Some(obs) = &self.sweep.observables {
            let joined: Vec<&str> = obs.iter().map(|o| o.column_label()).collect();
            s.push_str(&format!("observables = {}\n", joined.join(", ")));
        }
        if let Some(model) = self.sweep.model {
            s.push_str(&format!("model = {}\n", model.name()));
        }
        s.push_str("[output]\n");
        if let Some(path) = &self.output.path {
            s.push_str(&format!("path = {path}\n"));
        }
        s.push_str(&format!("format = {}\n", self.output.format.as_str()));
        s
    }

    /// Core-unit device parameters (rad/s everywhere).
    pub fn system(&self) -> Result<SystemParams, ConfigError> {
        let cavity = CavityParams::new(
            TAU * self.device.kappa0_hz,
            TAU * self.device.kappa_ex_hz,
            self.device.wavelength_m,
        )
        .map_err(to_config_err)?;
        let mechanics = MechanicalParams::new(
            self.device.m_eff_kg,
            TAU * self.device.omega_m_hz,
            TAU * self.device.gamma_m_hz,
        )
        .map_err(to_config_err)?;
        let coupling = CouplingParams::new(TAU * self.device.g0_hz_per_m).map_err(to_config_err)?;
        Ok(SystemParams::new(cavity, mechanics, coupling))
    }

    /// Full sweep context (effective detuning semantics for the drive).
    pub fn context(&self) -> Result<SweepContext, ConfigError> {
        let system = self.system()?;
        let probe_offset = TAU * self.drive.probe_offset_hz.unwrap_or(self.device.omega_m_hz);
        let drive = DriveParams::new(
            self.drive.power_w,
            TAU * self.drive.detuning_hz,
            probe_offset,
            self.drive.modulation_depth,
        )
        .map_err(to_config_err)?;
        Ok(SweepContext {
            system,
            gamma_split: TAU * self.device.gamma_split_hz,
            taper_loss_factor: self.device.taper_loss_factor,
            drive,
            lo_phase: self.drive.lo_phase_rad,
        })
    }
}

pub fn parse_model(s: &str) -> Option<ModelVariant> {
    match s {
        "full" => Some(ModelVariant::Full),
        "rsb" => Some(ModelVariant::Rsb),
        "weak" => Some(ModelVariant::WeakCoupling),
        _ => None,
    }
}

fn to_config_err(e: omit_core::Error) -> ConfigError {
    ConfigError::semantic("device/drive", e.to_string())
}

fn positive(section: &mut RawSection, key: &str) -> Result<f64, ConfigError> {
    let v = section.require_f64(key)?;
    if v <= 0.0 {
        return Err(ConfigError::new(0, key, format!("must be > 0, got {v}")));
    }
    Ok(v)
}

fn non_negative(section: &mut RawSection, key: &str) -> Result<f64, ConfigError> {
    let v = section.require_f64(key)?;
    if v < 0.0 {
        return Err(ConfigError::new(0, key, format!("must be ≥ 0, got {v}")));
    }
    Ok(v)
}

fn optional_non_negative(
    section: &mut RawSection,
    key: &str,
    default: f64,
) -> Result<f64, ConfigError> {
    match section.f64(key)? {
        None => Ok(default),
        Some((line, v)) => {
            if v < 0.0 {
                return Err(ConfigError::new(line, key, format!("must be ≥ 0, got {v}")));
            }
            Ok(v)
        }
    }
}
