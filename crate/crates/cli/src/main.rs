//! omit-sim: optomechanically induced transparency simulator.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use omit_sim::commands::{self, CliError, Invocation};
use omit_sim::config::{self, OutputFormat};

const CONFIG_REFERENCE: &str = "\
CONFIG FILE (INI; `#`/`;` comment lines; unknown keys rejected)

  [device]   kappa0_hz        intrinsic cavity loss rate / 2π          (Hz, > 0)
             kappa_ex_hz      waveguide coupling rate / 2π             (Hz, ≥ 0)
             wavelength_m     control-laser vacuum wavelength          (m)
             m_eff_kg         effective mass of the mechanical mode    (kg)
             omega_m_hz       mechanical resonance / 2π                (Hz)
             gamma_m_hz       mechanical damping / 2π                  (Hz, > 0)
             g0_hz_per_m      optomechanical coupling dν_c/dx          (Hz/m, sign allowed)
             gamma_split_hz   backscattering mode splitting / 2π       (Hz, optional, default 0;
                              > 0 applies the effective η_c → η_c/2 reduction)
             taper_loss_factor  empirical division of Ω_c              (≥ 1, optional, default 1)

  [drive]    power_w          control power at the cavity input        (W, ≥ 0)
             detuning_hz      effective control detuning Δ̄ / 2π        (Hz; steady-state reads
                              this as the bare laser detuning instead)
             probe_offset_hz  probe modulation frequency Ω / 2π        (Hz, default omega_m_hz)
             modulation_depth phase-modulation depth β                 (optional, default 0)
             lo_phase_rad     homodyne local-oscillator phase Φ        (rad, default 0)

  [sweep]    axis             probe_offset | control_power | control_detuning
             start_hz/stop_hz/count   uniform frequency grid (probe_offset default:
                              Ω/2π centered on −Δ̄/2π, span ±3κ, 2001 points)
             values_hz        explicit frequency grid (Hz)
             start_w/stop_w/values_w  power grids for control_power / power-series
             detunings_hz     control detunings for detuning-series (Hz)
             observables      comma list of: a_minus_sq x_amp_m t_p_sq t_p_norm_sq
                              t_hom_sq t_hom_norm_sq phase_rad group_delay_s
             model            full | rsb | weak

  [output]   path             table artifact path for sweep / power-series /
                              detuning-series (stdout if absent; detuning-series
                              appends _d0.._dN before the extension). steady-state
                              and eit-compare print to stdout unless --out is given.
             format           csv | json

All frequencies in the file are linear Hz (values the lab quotes as ·/2π);
they are multiplied by 2π exactly once at ingestion. CSV artifacts carry the
canonical config echo and derived scalars (η_c, η'_c, κ, Q_m, x_zpf, Ω_c, C,
Γ_OMIT, τ_g(0)) as `#` metadata; floats have 17 significant digits.

EXIT CODES   0 success · 2 config error · 3 solver/numeric failure · 4 i/o failure";

#[derive(Parser)]
#[command(
    name = "omit-sim",
    version,
    about = "Linear-response simulator for optomechanically induced transparency",
    after_long_help = CONFIG_REFERENCE
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration file (INI)
    #[arg(long)]
    config: PathBuf,
    /// Output path (overrides [output] path; stdout if neither is set)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (overrides [output] format)
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Model variant (overrides [sweep] model)
    #[arg(long, value_parser = ["full", "rsb", "weak"])]
    model: Option<String>,
    /// Worker threads for grid evaluation (fallback: OMIT_SIM_THREADS)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the radiation-pressure steady state: all roots with stability flags
    SteadyState(Common),
    /// Evaluate observables over one axis and write a table
    Sweep(Common),
    /// Probe-window fits vs theory for a list of control powers
    PowerSeries(Common),
    /// One probe sweep per control detuning (sugar over sweep)
    DetuningSeries(Common),
    /// Report pointwise agreement of the mapped Λ-system and the RSB response
    EitCompare(Common),
    /// Fit a Lorentzian to a column of an existing CSV
    Fit {
        /// CSV file to read (metadata lines starting with `#` are skipped)
        #[arg(long)]
        input: PathBuf,
        /// Column holding the line shape
        #[arg(long)]
        column: String,
        /// Column holding the x axis (default: first column)
        #[arg(long)]
        x_column: Option<String>,
        /// Output path (stdout if absent)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format
        #[arg(long, value_parser = ["csv", "json"], default_value = "json")]
        format: String,
    },
}

fn parse_format(s: &str) -> OutputFormat {
    match s {
        "json" => OutputFormat::Json,
        _ => OutputFormat::Csv,
    }
}

fn setup_threads(flag: Option<usize>) -> Result<(), CliError> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("OMIT_SIM_THREADS") {
            Ok(v) if !v.is_empty() => Some(v.parse().map_err(|_| {
                CliError::Config(format!("OMIT_SIM_THREADS must be an integer, got `{v}`"))
            })?),
            _ => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(CliError::Config("--threads must be ≥ 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

type Runner = fn(&config::RunConfig, &Invocation) -> Result<(), CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, runner): (Common, Runner) = match cli.command {
        Command::SteadyState(c) => (c, commands::cmd_steady_state),
        Command::Sweep(c) => (c, commands::cmd_sweep),
        Command::PowerSeries(c) => (c, commands::cmd_power_series),
        Command::DetuningSeries(c) => (c, commands::cmd_detuning_series),
        Command::EitCompare(c) => (c, commands::cmd_eit_compare),
        Command::Fit {
            input,
            column,
            x_column,
            out,
            format,
        } => {
            return commands::cmd_fit(
                &input,
                &column,
                x_column.as_deref(),
                out.as_deref(),
                parse_format(&format),
            );
        }
    };
    setup_threads(common.threads)?;
    let cfg = commands::load_config(&common.config)?;
    let inv = Invocation {
        out: common.out,
        format: common.format.as_deref().map(parse_format),
        model: common.model.as_deref().and_then(config::parse_model),
    };
    runner(&cfg, &inv)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("omit-sim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
