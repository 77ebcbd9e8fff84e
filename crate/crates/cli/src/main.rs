//! `qtm`: runs one experiment from flags or a config file, or a batch of
//! config files concurrently.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 tolerance failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use qtm_core::{run_experiment, ExperimentConfig, ExperimentResult, OutputFormat};

#[derive(Parser, Debug)]
#[command(name = "qtm", version, about = "Two-spin quantum Turing machine experiments")]
struct Cli {
    /// pattern, bures, stability, table1, simulate or orbit-search.
    #[arg(long)]
    experiment: Option<String>,
    /// First drive angle, `p/q pi` or decimal radians.
    #[arg(long, allow_hyphen_values = true)]
    alpha1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    /// fibonacci, fibonacci-perturbed, constant or arithmetic.
    #[arg(long)]
    driver: Option<String>,
    /// Head angle then tape spins, e.g. `0,0` or `0,+`.
    #[arg(long, allow_hyphen_values = true)]
    initial: Option<String>,
    /// head, tape or total.
    #[arg(long)]
    subsystem: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    #[arg(long = "m-max")]
    m_max: Option<String>,
    /// Flat `key = value` file; flags given alongside override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Config files run concurrently, each writing its own output file.
    #[arg(long, num_args = 1.., conflicts_with = "config")]
    batch: Vec<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Tolerance,
}

impl Cli {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        [
            ("experiment", &self.experiment),
            ("alpha1", &self.alpha1),
            ("delta", &self.delta),
            ("steps", &self.steps),
            ("driver", &self.driver),
            ("initial", &self.initial),
            ("subsystem", &self.subsystem),
            ("out", &self.out),
            ("format", &self.format),
            ("m-max", &self.m_max),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect()
    }
}

fn build_config(base: Option<&Path>, overrides: &[(&str, &str)]) -> Result<ExperimentConfig, Failure> {
    let usage = |e: qtm_core::QtmError| Failure::Usage(e.to_string());
    let mut config = match base {
        Some(path) => {
            let mut c = ExperimentConfig::load(path).map_err(usage)?;
            for (k, v) in overrides {
                c.set(k, v).map_err(usage)?;
            }
            c
        }
        None => ExperimentConfig::from_pairs(overrides.iter().copied()).map_err(usage)?,
    };
    if let (Some(path), Some(out)) = (base, config.out.as_ref()) {
        // Relative outputs in a config file sit next to it.
        if out.is_relative() && !overrides.iter().any(|(k, _)| *k == "out") {
            config.out = Some(path.parent().unwrap_or(Path::new("")).join(out));
        }
    }
    Ok(config)
}

fn write_result(result: &ExperimentResult, format: OutputFormat, out: impl Write) -> qtm_core::Result<()> {
    match format {
        OutputFormat::Csv => result.write_csv(out),
        OutputFormat::Json => result.write_json(out),
    }
}

/// Runs one config, writing its table to the configured output. Summary
/// lines are returned for the caller to print.
fn execute(config: &ExperimentConfig) -> Result<(ExperimentResult, Vec<String>), Failure> {
    let result = run_experiment(config).map_err(|e| Failure::Usage(e.to_string()))?;
    match &config.out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            write_result(&result, config.format, BufWriter::new(file))
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
        None => {
            write_result(&result, config.format, io::stdout().lock()).map_err(|e| Failure::Usage(e.to_string()))?;
        }
    }
    let summary = result.summary_lines();
    Ok((result, summary))
}

fn run_single(cli: &Cli) -> Result<(), Failure> {
    let config = build_config(cli.config.as_deref(), &cli.overrides())?;
    let (result, summary) = execute(&config)?;
    // Keep stdout a clean table when it carries the data.
    if config.out.is_some() {
        let mut stdout = io::stdout().lock();
        for line in &summary {
            let _ = writeln!(stdout, "{line}");
        }
    } else {
        for line in &summary {
            eprintln!("{line}");
        }
    }
    verdict(&result)
}

fn verdict(result: &ExperimentResult) -> Result<(), Failure> {
    if result.passed() {
        Ok(())
    } else {
        Err(Failure::Tolerance)
    }
}

fn exit_code(outcome: &Result<(), Failure>) -> u8 {
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(_)) => 1,
        Err(Failure::Tolerance) => 2,
    }
}

fn run_batch(cli: &Cli) -> Result<(), Failure> {
    let overrides = cli.overrides();
    let mut configs = Vec::new();
    for path in &cli.batch {
        let mut config = build_config(Some(path), &overrides)?;
        if config.out.is_none() {
            let ext = match config.format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            };
            config.out = Some(path.with_extension(ext));
        }
        configs.push((path, config));
    }
    let outcomes: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs.iter().map(|(_, c)| scope.spawn(move || execute(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("experiment thread panicked"))
            .collect()
    });

    let mut worst = Ok(());
    let mut broken = 0;
    let mut stdout = io::stdout().lock();
    for ((path, config), outcome) in configs.iter().zip(outcomes) {
        let _ = writeln!(
            stdout,
            "## {} -> {}",
            path.display(),
            config.out.as_ref().map_or(String::new(), |p| p.display().to_string())
        );
        match outcome {
            Ok((result, summary)) => {
                for line in summary {
                    let _ = writeln!(stdout, "{line}");
                }
                if worst.is_ok() {
                    worst = verdict(&result);
                }
            }
            Err(Failure::Usage(msg)) => {
                eprintln!("error: {}: {msg}", path.display());
                broken += 1;
            }
            Err(Failure::Tolerance) => unreachable!("execute reports tolerance through the result"),
        }
    }
    if broken > 0 {
        return Err(Failure::Usage(format!(
            "{broken} of {} batch configs failed",
            configs.len()
        )));
    }
    worst
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = if cli.batch.is_empty() {
        run_single(&cli)
    } else {
        run_batch(&cli)
    };
    match &outcome {
        Ok(()) => {}
        Err(Failure::Usage(msg)) => eprintln!("error: {msg}"),
        Err(Failure::Tolerance) => eprintln!("error: tolerance check failed"),
    }
    ExitCode::from(exit_code(&outcome))
}
