use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Convergence,
    Norms,
    Sharpness,
    Growth,
    Verify,
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "convergence" => Command::Convergence,
            "norms" => Command::Norms,
            "sharpness" => Command::Sharpness,
            "growth" => Command::Growth,
            "verify" => Command::Verify,
            _ => return Err(Error::Parse(format!("unknown command `{s}`"))),
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::Convergence => "convergence",
            Command::Norms => "norms",
            Command::Sharpness => "sharpness",
            Command::Growth => "growth",
            Command::Verify => "verify",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Parse(format!("unknown output format `{s}` (csv|json)"))),
        }
    }
}

/// An integer grid `start..=stop`, either multiplicative or additive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NGrid {
    Geometric { start: usize, stop: usize, factor: usize },
    Arithmetic { start: usize, stop: usize, step: usize },
}

impl NGrid {
    pub fn values(&self) -> Vec<usize> {
        let mut out = Vec::new();
        match *self {
            NGrid::Geometric { start, stop, factor } => {
                let mut n = start;
                while n <= stop {
                    out.push(n);
                    n = match n.checked_mul(factor) {
                        Some(v) => v,
                        None => break,
                    };
                }
            }
            NGrid::Arithmetic { start, stop, step } => {
                out.extend((start..=stop).step_by(step));
            }
        }
        out
    }
}

impl FromStr for NGrid {
    type Err = Error;

    /// `LO:HI:xF` (geometric), `LO:HI:+S` or `LO:HI:S` (arithmetic), or `LO:HI` (step 1).
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("n-grid `{s}`: {why}"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let int = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| bad(&format!("`{t}` is not a non-negative integer")))
        };
        let (start, stop) = match parts.as_slice() {
            [lo, hi] | [lo, hi, _] => (int(lo)?, int(hi)?),
            _ => return Err(bad("expected LO:HI[:xFACTOR|:+STEP]")),
        };
        if start < 1 {
            return Err(bad("grid must start at n >= 1"));
        }
        if stop < start {
            return Err(bad("HI must be >= LO"));
        }
        let grid = match parts.get(2).map(|t| t.trim()) {
            None => NGrid::Arithmetic { start, stop, step: 1 },
            Some(t) => {
                if let Some(f) = t.strip_prefix('x') {
                    let factor = int(f)?;
                    if factor < 2 {
                        return Err(bad("geometric factor must be >= 2"));
                    }
                    NGrid::Geometric { start, stop, factor }
                } else {
                    let step = int(t.strip_prefix('+').unwrap_or(t))?;
                    if step < 1 {
                        return Err(bad("step must be >= 1"));
                    }
                    NGrid::Arithmetic { start, stop, step }
                }
            }
        };
        Ok(grid)
    }
}

impl fmt::Display for NGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NGrid::Geometric { start, stop, factor } => write!(f, "{start}:{stop}:x{factor}"),
            NGrid::Arithmetic { start, stop, step } => write!(f, "{start}:{stop}:+{step}"),
        }
    }
}

/// Everything one CLI invocation needs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub sequence_spec: String,
    pub alpha: f64,
    /// Second exponent reported side by side in `convergence` runs.
    pub compare_alpha: Option<f64>,
    pub n_grid: NGrid,
    pub weight_spec: String,
    pub function_spec: String,
    pub reference_degree: usize,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub rng_seed: u64,
    /// Measured per-row timings; off by default so output is reproducible byte for byte.
    pub record_timings: bool,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            sequence_spec: "ones".into(),
            alpha: 1.0,
            compare_alpha: None,
            n_grid: NGrid::Geometric {
                start: 16,
                stop: 512,
                factor: 2,
            },
            weight_spec: "dirac:1,0".into(),
            function_spec: "zeta2".into(),
            reference_degree: 4096,
            output_path: None,
            output_format: OutputFormat::Csv,
            rng_seed: 0,
            record_timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.n_grid.values();
        let Some(&max) = grid.last() else {
            return Err(Error::InvalidArgument("n-grid is empty".into()));
        };
        if !grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument("n-grid must be strictly increasing".into()));
        }
        if self.reference_degree <= max {
            return Err(Error::InvalidArgument(format!(
                "reference degree {} must exceed the largest grid point {max}",
                self.reference_degree
            )));
        }
        for a in std::iter::once(self.alpha).chain(self.compare_alpha) {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::InvalidArgument(format!("alpha must be > 0, got {a}")));
            }
        }
        Ok(())
    }
}
