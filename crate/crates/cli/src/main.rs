//! `ko`: batch front-end for kinetic-exchange opinion simulations.
//!
//! Exit status is 0 on success, 1 for invalid input, 2 for I/O failures.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kinetic_opinion::sweep::sweep_csv;
use kinetic_opinion::theory::theory_csv;
use kinetic_opinion::{clusters, run, run_sweep, Boundary, OpinionGrid, SimConfig, SweepSpec};
use serde::de::DeserializeOwned;

#[derive(Parser)]
#[command(name = "ko", version, about = "Kinetic-exchange opinion dynamics on a lattice")]
struct Cli {
    /// Worker threads for ensemble runs (default: logical cores).
    #[arg(long, env = "KO_WORKERS", global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation; writes series.csv and grid.csv into the output directory.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a parameter sweep and emit one row per axis value.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the predicted order parameter over a conviction grid.
    Theory {
        /// Comma-separated, strictly increasing conviction values.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        lambdas: Vec<f64>,
        #[arg(long, default_value_t = 0.7)]
        k: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cluster statistics of a grid CSV at threshold omega.
    Clusters {
        /// Grid CSV, e.g. the grid.csv written by `run`.
        #[arg(long, visible_alias = "config")]
        grid: PathBuf,
        #[arg(long)]
        omega: f64,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
        boundary: BoundaryArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Open,
    Periodic,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Open => Boundary::Open,
            BoundaryArg::Periodic => Boundary::Periodic,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Io(_) => 2,
        }
    }
}

impl From<kinetic_opinion::Error> for Failure {
    fn from(e: kinetic_opinion::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write(path, text),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}"))),
    }
}

/// Parse JSON, reporting the path of the offending key on failure.
fn parse_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        let inner = e.into_inner();
        if at == "." {
            Failure::Invalid(format!("{}: {inner}", path.display()))
        } else {
            Failure::Invalid(format!("{}: `{at}`: {inner}", path.display()))
        }
    })
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { config, out } => {
            let cfg: SimConfig = parse_json(&config)?;
            let result = run(&cfg)?;
            fs::create_dir_all(&out)
                .map_err(|e| Failure::Io(format!("cannot create {}: {e}", out.display())))?;
            write(&out.join("series.csv"), &result.series_csv())?;
            write(&out.join("grid.csv"), &result.final_grid.to_csv())
        }
        Command::Sweep { config, out } => {
            let spec: SweepSpec = parse_json(&config)?;
            let rows = run_sweep(&spec)?;
            emit(out.as_deref(), &sweep_csv(spec.axis, &rows))
        }
        Command::Theory { lambdas, k, out } => emit(out.as_deref(), &theory_csv(&lambdas, k)?),
        Command::Clusters { grid, omega, boundary, out } => {
            let grid = OpinionGrid::from_csv(&read(&grid)?, boundary.into())?;
            emit(out.as_deref(), &clusters(&grid, omega)?.to_csv())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let workers = match cli.workers {
        Some(0) => {
            eprintln!("error: invalid `workers`: must be at least 1");
            return ExitCode::from(1);
        }
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start {workers} workers: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| execute(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Invalid(msg) | Failure::Io(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
