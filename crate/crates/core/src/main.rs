use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use summability::experiments::{self, Command, ExperimentConfig, ExperimentResult, NGrid, OutputFormat};
use summability::Error;

/// Nörlund summation experiments: convergence rates, operator norms, sharpness and growth probes.
#[derive(Debug, Parser)]
#[command(name = "summability", version, allow_negative_numbers = true)]
struct Cli {
    /// convergence | norms | sharpness | growth | verify
    command: String,
    /// ones | linear | monomial:K | geom:R | log | file:PATH
    #[arg(long, default_value = "ones")]
    sequence: String,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Second exponent whose error curve is reported alongside `--alpha`.
    #[arg(long)]
    compare_alpha: Option<f64>,
    /// LO:HI:xFACTOR or LO:HI:+STEP
    #[arg(long, default_value = "16:512:x2")]
    n_grid: String,
    /// dirac:RE,IM[,MASS] atoms joined by `;`
    #[arg(long, default_value = "dirac:1,0")]
    weight: String,
    /// zeta2 | geo:R | file:PATH
    #[arg(long, default_value = "zeta2")]
    function: String,
    #[arg(long, default_value_t = 4096)]
    ref_degree: usize,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record measured wall times instead of zeros.
    #[arg(long)]
    timings: bool,
}

impl Cli {
    fn into_config(self) -> summability::Result<ExperimentConfig> {
        let mut config = ExperimentConfig::new(self.command.parse::<Command>()?);
        config.sequence_spec = self.sequence;
        config.alpha = self.alpha;
        config.compare_alpha = self.compare_alpha;
        config.n_grid = self.n_grid.parse::<NGrid>()?;
        config.weight_spec = self.weight;
        config.function_spec = self.function;
        config.reference_degree = self.ref_degree;
        config.output_path = self.out;
        config.output_format = self.format.parse::<OutputFormat>()?;
        config.rng_seed = self.seed;
        config.record_timings = self.timings;
        config.validate()?;
        Ok(config)
    }
}

fn emit(result: &ExperimentResult) -> summability::Result<()> {
    let sink: Box<dyn Write> = match &result.config.output_path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match result.config.output_format {
        OutputFormat::Csv => experiments::write_csv(result, sink),
        OutputFormat::Json => experiments::write_json(result, sink),
    }
}

fn error_row(e: &Error) -> ExitCode {
    let message = e.to_string().replace(['\n', ','], " ");
    eprintln!("error,{},{}", e.kind(), message);
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let config = match cli.into_config() {
        Ok(c) => c,
        Err(e) => return error_row(&e),
    };
    let result = match experiments::run(&config) {
        Ok(r) => r,
        Err(e) => return error_row(&e),
    };
    if let Err(e) = emit(&result) {
        return error_row(&e);
    }
    for fit in &result.fits {
        eprintln!(
            "fit,alpha={},slope={:.6},intercept={:.6}",
            fit.alpha, fit.slope, fit.intercept
        );
    }
    let violations: Vec<_> = result.violations().collect();
    for v in &violations {
        eprintln!("violation,{},{}", v.name, v.detail);
    }
    if violations.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
