//! `dbrane`: image ideals, decompositions, deformation scans, spectral curves
//! and quantum operators for matrix-tuple representations, from JSON files.

mod commands;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dbrane_core::deform::DEFAULT_SAMPLES;
use dbrane_core::linalg::DEFAULT_TOLERANCE;
use rayon::prelude::*;

use report::{digest, read_input, CliResult, Options, Outcome, RunReport};

#[derive(Parser)]
#[command(name = "dbrane", version, about = "Exact analysis of D0-brane matrix-tuple representations")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct GlobalArgs {
    /// Relative tolerance for numeric eigenvalue clustering.
    #[arg(long, global = true, env = "DBRANE_TOLERANCE", default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Seed for cyclicity probes and the conifold search.
    #[arg(long, global = true, env = "DBRANE_SEED", default_value_t = 0)]
    seed: u64,
    /// Degree cap for vanishing-ideal computations (default: twice the rank).
    #[arg(long, global = true, env = "DBRANE_DEGREE_CAP")]
    degree_cap: Option<u32>,
    #[arg(long, global = true, value_enum, env = "DBRANE_FORMAT", default_value = "text")]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Shorthand for `--format text`.
    #[arg(long, global = true)]
    text: bool,
}

impl GlobalArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.text {
            Format::Text
        } else {
            self.format
        }
    }

    fn options(&self) -> Options {
        Options { tolerance: self.tolerance, degree_cap: self.degree_cap, seed: self.seed }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Image ideal of a morphism file.
    Image { file: PathBuf },
    /// Support points with module and image lengths.
    Decompose { file: PathBuf },
    /// Scan a polynomial path for merges, splits and recombinations.
    Deform {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// CSV of sampled decompositions (default: `<input stem>.samples.csv`).
        #[arg(long, conflicts_with = "no_csv")]
        csv: Option<PathBuf>,
        #[arg(long)]
        no_csv: bool,
    },
    /// Spectral curve of a Higgs field and its Cayley-Hamilton check.
    Spectral { file: PathBuf },
    /// Quantum spectral operator of the λ-connection.
    Quantum {
        file: PathBuf,
        /// Comma-separated seed entries, polynomials in x (default: automatic).
        #[arg(long)]
        vector: Option<String>,
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Conifold algebra walkthrough and the off-conifold search.
    ConifoldDemo {
        #[arg(long, default_value_t = 6)]
        max_rank: usize,
        #[arg(long, default_value_t = 300)]
        trials: usize,
    },
    /// Check that an algebra map respects the source relations.
    Check { file: PathBuf },
    /// Run one file command over many inputs in parallel.
    Batch {
        #[arg(value_enum)]
        command: BatchCommand,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BatchCommand {
    Image,
    Decompose,
    Deform,
    Spectral,
    Quantum,
    Check,
}

impl BatchCommand {
    fn name(self) -> &'static str {
        match self {
            BatchCommand::Image => "image",
            BatchCommand::Decompose => "decompose",
            BatchCommand::Deform => "deform",
            BatchCommand::Spectral => "spectral",
            BatchCommand::Quantum => "quantum",
            BatchCommand::Check => "check",
        }
    }

    fn run(self, path: &Path, bytes: &[u8], o: &Options) -> CliResult<Outcome> {
        match self {
            BatchCommand::Image => commands::image(path, bytes, o),
            BatchCommand::Decompose => commands::decompose_cmd(path, bytes, o),
            BatchCommand::Deform => commands::deform(path, bytes, o, DEFAULT_SAMPLES, None),
            BatchCommand::Spectral => commands::spectral(path, bytes, o),
            BatchCommand::Quantum => commands::quantum(path, bytes, o, None, None),
            BatchCommand::Check => commands::check(path, bytes, o),
        }
    }
}

fn file_report(
    name: &str,
    path: &Path,
    args: &[String],
    o: &Options,
    run: impl FnOnce(&[u8]) -> CliResult<Outcome>,
) -> RunReport {
    match read_input(path) {
        Ok(bytes) => {
            let d = digest(name, args, o, std::slice::from_ref(&bytes));
            RunReport::build(name, d, *o, run(&bytes))
        }
        Err(e) => RunReport::build(name, digest(name, args, o, &[]), *o, Err(e)),
    }
}

fn default_csv(file: &Path) -> PathBuf {
    let stem = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "path".into());
    PathBuf::from(format!("{stem}.samples.csv"))
}

fn emit(report: &RunReport, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text if report.error.is_some() => eprintln!("{}", report.text),
        Format::Text => print!("{}", report.text),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = cli.global.options();
    let format = cli.global.format();
    let report = match &cli.command {
        Command::Image { file } => file_report("image", file, &[], &o, |b| commands::image(file, b, &o)),
        Command::Decompose { file } => {
            file_report("decompose", file, &[], &o, |b| commands::decompose_cmd(file, b, &o))
        }
        Command::Deform { file, samples, csv, no_csv } => {
            let csv = if *no_csv { None } else { Some(csv.clone().unwrap_or_else(|| default_csv(file))) };
            let args = vec![samples.to_string()];
            file_report("deform", file, &args, &o, |b| commands::deform(file, b, &o, *samples, csv.as_deref()))
        }
        Command::Spectral { file } => file_report("spectral", file, &[], &o, |b| commands::spectral(file, b, &o)),
        Command::Quantum { file, vector, max_order } => {
            let args = vec![vector.clone().unwrap_or_default(), max_order.map(|m| m.to_string()).unwrap_or_default()];
            file_report("quantum", file, &args, &o, |b| commands::quantum(file, b, &o, vector.as_deref(), *max_order))
        }
        Command::ConifoldDemo { max_rank, trials } => {
            let args = vec![max_rank.to_string(), trials.to_string()];
            let d = digest("conifold-demo", &args, &o, &[]);
            RunReport::build("conifold-demo", d, o, commands::conifold_demo(&o, *max_rank, *trials))
        }
        Command::Check { file } => file_report("check", file, &[], &o, |b| commands::check(file, b, &o)),
        Command::Batch { command, files } => {
            let reports: Vec<RunReport> =
                files.par_iter().map(|f| file_report(command.name(), f, &[], &o, |b| command.run(f, b, &o))).collect();
            let code = reports.iter().map(|r| r.exit_code).max().unwrap_or(0);
            match format {
                Format::Json => {
                    let all: Vec<serde_json::Value> =
                        reports.iter().map(|r| serde_json::to_value(r).expect("report serializes")).collect();
                    println!("{}", serde_json::to_string_pretty(&all).expect("reports serialize"));
                }
                Format::Text => {
                    for (f, r) in files.iter().zip(&reports) {
                        println!("== {}", f.display());
                        if r.error.is_some() {
                            println!("{}", r.text);
                        } else {
                            print!("{}", r.text);
                        }
                    }
                }
            }
            return ExitCode::from(code as u8);
        }
    };
    emit(&report, format);
    ExitCode::from(report.exit_code as u8)
}
