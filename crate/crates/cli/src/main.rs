use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};

use entspec_core::circuit::{pad_idle, schedule_asap, text};
use entspec_core::depthlab::{build_named, builder_names, depth_table, write_depth_csv};
use entspec_core::sim::{self, NoiseProfile};
use entspec_core::spectroscopy::StatePrep;
use entspec_core::sweep::{write_regression_csv, write_sweep_csv};
use entspec_core::{effective_depth, newton_girard, run_sweep, Algorithm, DurationTable, SweepConfig};

/// Default θ for builders when only the circuit shape matters.
const DEFAULT_THETA: f64 = 0.7;

#[derive(Parser)]
#[command(
    name = "entspec",
    version,
    about = "Entanglement spectroscopy circuits, noisy simulation and depth analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate traces over a grid of states and regress estimate on truth.
    Sweep(SweepArgs),
    /// Run a circuit file and print the counts as JSON.
    Simulate(SimulateArgs),
    /// Report standard and effective depth.
    Depth(DepthArgs),
    /// Recover eigenvalues from Tr(ρ), Tr(ρ²), ….
    Spectrum(SpectrumArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct NoiseArg {
    /// Preset name (noiseless, paper-main, paper-reduced) or path to a JSON profile.
    #[arg(long, default_value = "noiseless")]
    noise: String,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated algorithm names; all six by default.
    #[arg(long, value_delimiter = ',')]
    algorithm: Vec<String>,
    /// Trace powers, e.g. `3`, `2,4,6` or `3-5`.
    #[arg(long, default_value = "2-4")]
    n: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Fixed θ values (comma-separated) instead of the even-trace grid.
    #[arg(long, value_delimiter = ',')]
    theta: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    /// States per n on the even-trace grid.
    #[arg(long, default_value_t = 20)]
    states: usize,
    #[command(flatten)]
    noise: NoiseArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file for the rows (or the whole result with `--format json`); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output file for the regression CSV.
    #[arg(long)]
    regressions: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SimulateArgs {
    /// Circuit in the line-based text format.
    file: PathBuf,
    #[command(flatten)]
    noise: NoiseArg,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DepthArgs {
    /// Circuit in the line-based text format.
    file: Option<PathBuf>,
    /// Builder name: an algorithm or `contrived`.
    #[arg(long)]
    builder: Option<String>,
    /// Number of copies; a range such as `2-6` with `--table`.
    #[arg(long)]
    n: Option<String>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Emit the depth table of every builder as CSV.
    #[arg(long)]
    table: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Traces Tr(ρ), Tr(ρ²), … in order.
    #[arg(allow_negative_numbers = true)]
    traces: Vec<String>,
    /// File of whitespace- or comma-separated traces.
    #[arg(long)]
    file: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Parse(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Failed(_) => 1,
            CliError::Parse(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Failed(m) => m,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_noise(spec: &str) -> Result<NoiseProfile> {
    if let Ok(p) = NoiseProfile::preset(spec) {
        return Ok(p);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "--noise `{spec}` is neither a preset (noiseless, paper-main, paper-reduced) nor a file"
        )));
    }
    NoiseProfile::from_json(&read_input(path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Parses `3`, `2,4,6`, `3-5` and mixtures such as `2,4-6`.
fn parse_ns(s: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Usage(format!("invalid --n `{s}`"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (
                    a.trim().parse().map_err(|_| bad())?,
                    b.trim().parse().map_err(|_| bad())?,
                );
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// Writes to `path`, or stdout when absent.
fn emit(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut f =
                io::BufWriter::new(fs::File::create(p).map_err(|e| failed(format!("{}: {e}", p.display())))?);
            write(&mut f).and_then(|_| f.flush()).map_err(failed)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            match write(&mut lock).and_then(|_| lock.flush()) {
                // A closed downstream pipe (`| head`) is not an error.
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(failed),
            }
        }
    }
}

fn to_io(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    if a.k != 1 {
        return Err(CliError::Usage(
            "sweeps use the two-qubit θ family; --k must be 1".into(),
        ));
    }
    if a.shots == 0 {
        return Err(CliError::Usage("--shots must be positive".into()));
    }
    let algorithms = if a.algorithm.is_empty() {
        Algorithm::ALL.to_vec()
    } else {
        a.algorithm
            .iter()
            .map(|s| s.parse::<Algorithm>().map_err(|e| CliError::Usage(e.to_string())))
            .collect::<Result<_>>()?
    };
    let mut cfg = SweepConfig::new(algorithms, parse_ns(&a.n)?, load_noise(&a.noise.noise)?);
    cfg.shots = a.shots;
    cfg.states = a.states;
    cfg.seed = a.seed;
    if !a.theta.is_empty() {
        cfg.thetas = Some(a.theta);
    }
    let res = run_sweep(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    match a.format {
        Format::Json => emit(a.out.as_deref(), |w| {
            serde_json::to_writer_pretty(&mut *w, &res)?;
            writeln!(w)
        })?,
        Format::Csv => emit(a.out.as_deref(), |w| write_sweep_csv(&res.rows, w).map_err(to_io))?,
    }
    if let Some(path) = a.regressions {
        emit(Some(&path), |w| {
            write_regression_csv(&res.regressions, w).map_err(to_io)
        })?;
    }
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let source = read_input(&a.file)?;
    let program = text::parse(&source).map_err(|e| CliError::Parse(format!("{}: {e}", a.file.display())))?;
    let noise = load_noise(&a.noise.noise)?;
    if a.shots == 0 {
        return Err(CliError::Usage("--shots must be positive".into()));
    }
    let circuit = pad_idle(&schedule_asap(&program, &noise.durations).map_err(failed)?);
    let counts = sim::run(&circuit, &noise, a.shots, a.seed).map_err(failed)?;
    emit(a.out.as_deref(), |w| writeln!(w, "{}", counts.to_json()))
}

fn cmd_depth(a: DepthArgs) -> Result<()> {
    let prep = StatePrep::theta_product(DEFAULT_THETA, a.k).map_err(|e| CliError::Usage(e.to_string()))?;
    if a.table {
        if a.file.is_some() || a.builder.is_some() {
            return Err(CliError::Usage(
                "--table covers every builder; drop the file and --builder".into(),
            ));
        }
        let ns = parse_ns(a.n.as_deref().unwrap_or("2-6"))?;
        let rows = depth_table(ns, &prep).map_err(|e| CliError::Usage(e.to_string()))?;
        return emit(a.out.as_deref(), |w| write_depth_csv(&rows, w).map_err(to_io));
    }
    let circuit = match (&a.file, &a.builder) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give either a circuit file or --builder, not both".into(),
            ))
        }
        (None, None) => return Err(CliError::Usage("give a circuit file or --builder".into())),
        (Some(path), None) => {
            let program = text::parse(&read_input(path)?)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            pad_idle(&schedule_asap(&program, &DurationTable::default()).map_err(failed)?)
        }
        (None, Some(name)) => {
            let n = match &a.n {
                Some(s) => s
                    .parse()
                    .map_err(|_| CliError::Usage(format!("invalid --n `{s}`")))?,
                None => return Err(CliError::Usage("--builder needs --n".into())),
            };
            if !builder_names().iter().any(|b| b.eq_ignore_ascii_case(name)) {
                return Err(CliError::Usage(format!(
                    "unknown builder `{name}` (expected one of {})",
                    builder_names().join(", ")
                )));
            }
            build_named(name, n, &prep).map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    let report = effective_depth(&circuit);
    emit(a.out.as_deref(), |w| writeln!(w, "{}", report.to_json()))
}

fn parse_traces(items: &[&str]) -> Result<Vec<f64>> {
    items
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Parse(format!("`{s}` is not a number")))
        })
        .collect()
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<()> {
    let traces = match (&a.file, a.traces.is_empty()) {
        (Some(_), false) => {
            return Err(CliError::Usage(
                "give traces inline or with --file, not both".into(),
            ))
        }
        (None, true) => return Err(CliError::Usage("no traces given".into())),
        (Some(path), true) => {
            let text = read_input(path)?;
            let items: Vec<&str> = text
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            parse_traces(&items)?
        }
        (None, false) => {
            let items: Vec<&str> = a
                .traces
                .iter()
                .flat_map(|s| s.split(','))
                .filter(|s| !s.is_empty())
                .collect();
            parse_traces(&items)?
        }
    };
    if traces.is_empty() {
        return Err(CliError::Parse("no traces given".into()));
    }
    let spectrum = newton_girard(&traces);
    emit(None, |w| {
        serde_json::to_writer_pretty(&mut *w, &spectrum)?;
        writeln!(w)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Depth(a) => cmd_depth(a),
        Command::Spectrum(a) => cmd_spectrum(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
