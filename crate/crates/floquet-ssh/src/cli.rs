//! Command-line interface: `static`, `sweep`, `boundary`, `validate`,
//! and `field` subcommands over the library, with deterministic output
//! and documented exit codes (0 success, 1 usage, 2 validation,
//! 3 numeric failure).

use crate::config::{load_config, serialize_config, ConfigError, LoadedConfig};
use crate::drive::{DriveError, DriveSpec};
use crate::floquet::FloquetError;
use crate::lattice::LatticeError;
use crate::report;
use crate::specfun::SpecFunError;
use crate::sweep::{self, SweepError};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

const LONG_ABOUT: &str = "\
Quasienergy spectra, replica populations, and edge-state diagnostics for a \
periodically driven SSH chain, computed with the Floquet-Fourier block method.

Units: hbar = 1 and the inter-cell hopping w is the energy unit, so \
frequencies are quoted in w/hbar and times in hbar/w. The drive strength g \
is dimensionless.

Parallelism: sweep grid points run on a worker pool; set FLOQUET_SSH_WORKERS \
to bound the worker count (default: one per available CPU). Results do not \
depend on the worker count.";

#[derive(Parser)]
#[command(name = "floquet-ssh", version, about = "Floquet spectra of a driven SSH chain", long_about = LONG_ABOUT)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Static (undriven) spectrum with an edge-state report
    Static(StaticArgs),
    /// Sweep the drive coupling g and write the spectrum CSV
    Sweep(SweepArgs),
    /// Roots of the high-frequency phase-boundary condition
    Boundary(BoundaryArgs),
    /// Run the oracle cross-check suite
    Validate,
    /// Sample the drive field profile E(t) as CSV
    Field(FieldArgs),
}

#[derive(Args)]
struct StaticArgs {
    /// Configuration file (TOML); defaults apply when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write the spectrum as CSV to this path
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Configuration file (TOML); defaults apply when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the output path from the configuration
    #[arg(long)]
    output: Option<PathBuf>,
    /// Suppress the timestamp comment so identical runs are byte-identical
    #[arg(long)]
    reproducible: bool,
}

#[derive(Args)]
struct BoundaryArgs {
    /// Intra-cell hopping v (units of w)
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    v: f64,
    /// Inter-cell hopping w (the energy unit)
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    w: f64,
    /// Dimer separation ratio r = b/a
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    r: f64,
    /// Upper end of the coupling search interval (0, gmax]
    #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
    gmax: f64,
}

#[derive(Args)]
struct FieldArgs {
    /// Configuration file (TOML); defaults apply when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Start of the sample interval (default: -2 base periods)
    #[arg(long, allow_negative_numbers = true)]
    t_min: Option<f64>,
    /// End of the sample interval (default: +2 base periods)
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    /// Number of samples
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Output path (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A command failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure { code: EXIT_VALIDATION, message: message.into() }
    }

    fn numeric(message: impl Into<String>) -> Self {
        Failure { code: EXIT_NUMERIC, message: message.into() }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::validation(e.to_string())
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        Failure::validation(e.to_string())
    }
}

impl From<DriveError> for Failure {
    fn from(e: DriveError) -> Self {
        Failure::validation(e.to_string())
    }
}

impl From<SpecFunError> for Failure {
    fn from(e: SpecFunError) -> Self {
        match e {
            SpecFunError::NonFiniteSample { .. } => Failure::numeric(e.to_string()),
            _ => Failure::validation(e.to_string()),
        }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::WorkerPool(_) => Failure::numeric(e.to_string()),
            SweepError::SpecFun(inner) => inner.into(),
            _ => Failure::validation(e.to_string()),
        }
    }
}

impl From<FloquetError> for Failure {
    fn from(e: FloquetError) -> Self {
        match e {
            FloquetError::WrongDriveKind { .. }
            | FloquetError::IncommensurateBeating { .. }
            | FloquetError::NonPositiveBaseFrequency(_)
            | FloquetError::TooFewSteps(_) => Failure::validation(e.to_string()),
            _ => Failure::numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::numeric(format!("I/O error: {e}"))
    }
}

/// Run the CLI on an argument list and return the process exit code.
pub fn cli_run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version land here as well; they are not errors.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_SUCCESS,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Static(args) => run_static(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Boundary(args) => run_boundary(args),
        Command::Validate => run_validate(),
        Command::Field(args) => run_field(args),
    };
    match outcome {
        Ok(()) => EXIT_SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

fn load_from_path(path: Option<&PathBuf>) -> Result<LoadedConfig, Failure> {
    let text = match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Failure::validation(format!("cannot read {}: {e}", p.display())))?,
        None => String::new(),
    };
    Ok(load_config(&text)?)
}

fn run_static(args: StaticArgs) -> Result<(), Failure> {
    let loaded = load_from_path(args.config.as_ref())?;
    let config = &loaded.config;
    let geom = config.geometry;

    // The undriven spectrum is the M = 0, g = 0 Floquet block, which keeps
    // the edge-weight and CSV plumbing identical to the driven case.
    let drive = DriveSpec::monochromatic(0.0, config.drive_template.omega_drive())?;
    let result = sweep::sweep_g_with_options(
        &geom,
        &drive,
        &[0.0],
        0,
        sweep::AssemblyMethod::Analytic,
        &config.quadrature,
        &config.sweep_options(),
    )?;

    println!(
        "static chain: N = {}, v = {}, w = {}, r = {}",
        geom.n_dimers(),
        geom.v(),
        geom.w(),
        geom.r()
    );
    let detection = config.detection;
    let mut edge_states = 0usize;
    println!("{:>5}  {:>18}  {:>12}  edge?", "state", "energy", "edge weight");
    for row in result.rows() {
        let is_edge = row.quasienergy.abs() < detection.energy_window
            && row.edge_weight > detection.weight_threshold;
        if is_edge {
            edge_states += 1;
        }
        println!(
            "{:>5}  {:>18}  {:>12}  {}",
            row.state_index,
            report::format_significant(row.quasienergy),
            format!("{:.6}", row.edge_weight),
            if is_edge { "yes" } else { "" }
        );
    }
    println!(
        "{edge_states} edge state(s) within |E| < {} at edge weight > {} over {} cell(s) per side",
        detection.energy_window, detection.weight_threshold, detection.n_edge_cells
    );
    for note in &loaded.default_notes {
        eprintln!("note: {note}");
    }

    if let Some(path) = args.output {
        let echo = serialize_config(config);
        let mut file = fs::File::create(&path)?;
        report::write_spectrum_csv(&mut file, &result, &echo, None)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn unix_timestamp() -> String {
    let seconds = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("{seconds} (unix seconds)")
}

fn run_sweep(args: SweepArgs) -> Result<(), Failure> {
    let loaded = load_from_path(args.config.as_ref())?;
    let config = &loaded.config;
    let grid = config.grid();
    let start = std::time::Instant::now();
    let result = sweep::sweep_g_with_options(
        &config.geometry,
        &config.drive_template,
        &grid,
        config.m_max,
        config.method,
        &config.quadrature,
        &config.sweep_options(),
    )?;

    let path = args
        .output
        .unwrap_or_else(|| PathBuf::from(&config.output_path));
    let echo = serialize_config(config);
    let timestamp = if args.reproducible {
        None
    } else {
        Some(unix_timestamp())
    };
    let mut file = fs::File::create(&path)?;
    report::write_spectrum_csv(&mut file, &result, &echo, timestamp.as_deref())?;

    for note in &loaded.default_notes {
        eprintln!("note: {note}");
    }
    println!(
        "wrote {} rows ({} failed grid points) to {} in {:.1}s",
        result.rows().len(),
        result.failures().len(),
        path.display(),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn run_boundary(args: BoundaryArgs) -> Result<(), Failure> {
    match sweep::phase_boundary(args.v, args.w, args.r, args.gmax)? {
        sweep::PhaseBoundary::DegenerateEverywhere => {
            println!(
                "degenerate configuration: |v J0(r g)| = |w J0((1-r) g)| holds for every g"
            );
        }
        sweep::PhaseBoundary::Roots(roots) if roots.is_empty() => {
            println!("no boundary roots in (0, {}]", args.gmax);
        }
        sweep::PhaseBoundary::Roots(roots) => {
            for root in roots {
                println!("{}", report::format_significant(root));
            }
        }
    }
    Ok(())
}

fn run_validate() -> Result<(), Failure> {
    let results = crate::validate::run_all();
    let mut failed = 0usize;
    for check in &results {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<28} {}", check.name, check.detail);
        if !check.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("all {} oracle checks passed", results.len());
        Ok(())
    } else {
        Err(Failure::numeric(format!(
            "{failed} of {} oracle checks failed",
            results.len()
        )))
    }
}

fn run_field(args: FieldArgs) -> Result<(), Failure> {
    let loaded = load_from_path(args.config.as_ref())?;
    let drive = loaded.config.drive_template;
    let period = drive.base_period();
    let t_min = args.t_min.unwrap_or(-2.0 * period);
    let t_max = args.t_max.unwrap_or(2.0 * period);
    if !(t_max > t_min) {
        return Err(Failure::validation(format!(
            "sample interval must satisfy t_max > t_min, got [{t_min}, {t_max}]"
        )));
    }
    if args.samples < 2 {
        return Err(Failure::validation(format!(
            "need at least 2 samples, got {}",
            args.samples
        )));
    }
    match args.output {
        Some(path) => {
            let mut file = fs::File::create(&path)?;
            report::write_field_csv(&mut file, &drive, t_min, t_max, args.samples)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            report::write_field_csv(&mut lock, &drive, t_min, t_max, args.samples)?;
            lock.flush()?;
        }
    }
    Ok(())
}
