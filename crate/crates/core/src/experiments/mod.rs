//! Experiment harness behind the CLI: convergence-rate runs, norm/bound sweeps,
//! the `alpha = 1/2` sharpness probe, growth diagnostics, and the `verify` suite.
//!
//! Grid points are evaluated on a rayon pool (size from `SUMMABILITY_THREADS`)
//! and rows are sorted by `(value_kind, n, alpha)` afterwards, so output does not
//! depend on scheduling.

mod config;
mod report;
pub mod verify;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use config::{Command, ExperimentConfig, NGrid, OutputFormat};
pub use report::{write_csv, write_json, CSV_HEADER};
pub use verify::CheckOutcome;

use crate::dirichlet::{dirichlet_norm, PointMassWeight};
use crate::error::{Error, Result};
use crate::norlund::NorlundOperator;
use crate::operator_norms::{build_matrix, lemma_bound_upper, thm_lower_bound, thm_upper_bound};
use crate::power_series::{parse_function_spec, CoefficientSeries};
use crate::sequences::DeterminingSequence;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "SUMMABILITY_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    ErrorNorm,
    SpectralNorm,
    UpperBound,
    LowerBound,
    Rho,
    Beta,
}

impl ValueKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ValueKind::ErrorNorm => "error_norm",
            ValueKind::SpectralNorm => "spectral_norm",
            ValueKind::UpperBound => "upper_bound",
            ValueKind::LowerBound => "lower_bound",
            ValueKind::Rho => "rho",
            ValueKind::Beta => "beta",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub value_kind: ValueKind,
    pub n: usize,
    pub alpha: f64,
    pub value: f64,
    pub wall_time_ms: f64,
}

/// Least-squares fit of `ln e_n = slope ln n + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    pub alpha: f64,
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
    /// One fit per exponent with at least three error rows.
    pub fits: Vec<RateFit>,
    /// Populated by `verify` only.
    pub checks: Vec<CheckOutcome>,
}

impl ExperimentResult {
    pub fn violations(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `||N_n^alpha[f] - f||_{D_omega}`, with `f` given by a long reference truncation.
///
/// The reference must have degree at least `4n`, unless it is a polynomial of
/// degree `<= n` (then `N_n^alpha` sees all of it and nothing is truncated).
pub fn convergence_error(
    seq: &DeterminingSequence,
    alpha: f64,
    w: &PointMassWeight,
    f_ref: &CoefficientSeries,
    n: usize,
) -> Result<f64> {
    let degree = f_ref.degree();
    if degree > n && degree < 4 * n {
        return Err(Error::ReferenceTooShort {
            degree,
            n,
            required: 4 * n,
        });
    }
    let approx = NorlundOperator::new(seq, alpha, n)?.norlund_sum(f_ref)?;
    let delta = approx.sub(f_ref);
    dirichlet_norm(&delta, w)
}

/// Ordinary least squares on `(ln n, ln e_n)`.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "rate fit needs >= 3 points, got {}",
            points.len()
        )));
    }
    if let Some((n, e)) = points.iter().find(|(n, e)| !(*n > 0.0 && *e > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "rate fit needs positive n and e_n, got ({n}, {e})"
        )));
    }
    let xs: Vec<f64> = points.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, e)| e.ln()).collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all n are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Worker pool sized by `SUMMABILITY_THREADS` (default: all cores).
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{THREADS_ENV}=`{v}` is not a positive integer")))?;
        if n == 0 {
            return Err(Error::Parse(format!("{THREADS_ENV} must be >= 1")));
        }
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))
}

/// Runs one configured experiment.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let pool = thread_pool()?;
    let seq = DeterminingSequence::parse_spec(&config.sequence_spec)?;
    let grid = config.n_grid.values();

    let mut result = ExperimentResult {
        config: config.clone(),
        rows: Vec::new(),
        fits: Vec::new(),
        checks: Vec::new(),
    };

    match config.command {
        Command::Convergence => {
            let w = PointMassWeight::parse_spec(&config.weight_spec)?;
            let f_ref = parse_function_spec(&config.function_spec, config.reference_degree)?;
            seq.ensure(*grid.last().expect("validated grid"))?;
            let alphas: Vec<f64> = std::iter::once(config.alpha).chain(config.compare_alpha).collect();
            for &alpha in &alphas {
                let rows = pool.install(|| {
                    grid.par_iter()
                        .map(|&n| {
                            timed(config, ValueKind::ErrorNorm, n, alpha, || {
                                convergence_error(&seq, alpha, &w, &f_ref, n)
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })?;
                let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.value)).collect();
                if points.len() >= 3 && points.iter().all(|(_, e)| *e > 0.0) {
                    let (slope, intercept) = fit_rate(&points)?;
                    result.fits.push(RateFit {
                        alpha,
                        slope,
                        intercept,
                    });
                }
                result.rows.extend(rows);
            }
        }
        Command::Norms => {
            seq.ensure(*grid.last().expect("validated grid"))?;
            let alpha = config.alpha;
            let per_point = pool.install(|| {
                grid.par_iter()
                    .map(|&n| norms_at(config, &seq, n, alpha))
                    .collect::<Result<Vec<_>>>()
            })?;
            result.rows.extend(per_point.into_iter().flatten());
        }
        Command::Sharpness => {
            seq.ensure(2 * grid.last().expect("validated grid"))?;
            let rows = pool.install(|| {
                grid.par_iter()
                    .map(|&n| {
                        timed(config, ValueKind::SpectralNorm, n, 0.5, || {
                            build_matrix(&seq, 2 * n, 0.5)?.spectral_norm()
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            result.rows.extend(rows);
        }
        Command::Growth => {
            seq.ensure(2 * grid.last().expect("validated grid"))?;
            for &n in &grid {
                result
                    .rows
                    .push(timed(config, ValueKind::Rho, n, config.alpha, || seq.growth_rate(n))?);
                result.rows.push(timed(config, ValueKind::Beta, n, config.alpha, || {
                    Ok(seq.partial_sum(n as i64 - 1)? / seq.partial_sum(2 * n as i64)?)
                })?);
            }
        }
        Command::Verify => {
            result.checks = pool.install(|| verify::run_suite(config, &seq))?;
        }
    }

    result.rows.sort_by(|a, b| {
        (a.value_kind, a.n)
            .cmp(&(b.value_kind, b.n))
            .then(a.alpha.total_cmp(&b.alpha))
    });
    Ok(result)
}

/// Spectral norm of `T_n^alpha` with bounds on the same (non-squared) scale.
///
/// The upper bound is the smaller of the two applicable upper bounds; the lower
/// bound uses `m = n/2` and is omitted where its hypotheses fail.
fn norms_at(config: &ExperimentConfig, seq: &DeterminingSequence, n: usize, alpha: f64) -> Result<Vec<ResultRow>> {
    let mut rows = vec![timed(config, ValueKind::SpectralNorm, n, alpha, || {
        build_matrix(seq, n, alpha)?.spectral_norm()
    })?];
    rows.push(timed(config, ValueKind::UpperBound, n, alpha, || {
        let lemma = lemma_bound_upper(seq, n, alpha)?;
        Ok(match thm_upper_bound(seq, n, alpha) {
            Ok(b) => lemma.min(b),
            Err(Error::BoundInapplicable(_)) => lemma,
            Err(e) => return Err(e),
        }
        .sqrt())
    })?);
    if n >= 4 {
        match thm_lower_bound(seq, n, n / 2, alpha) {
            Ok(b) => rows.push(ResultRow {
                value_kind: ValueKind::LowerBound,
                n,
                alpha,
                value: b.sqrt(),
                wall_time_ms: 0.0,
            }),
            Err(Error::BoundInapplicable(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

fn timed(
    config: &ExperimentConfig,
    kind: ValueKind,
    n: usize,
    alpha: f64,
    f: impl FnOnce() -> Result<f64>,
) -> Result<ResultRow> {
    let start = Instant::now();
    let value = f()?;
    let wall_time_ms = if config.record_timings {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    Ok(ResultRow {
        value_kind: kind,
        n,
        alpha,
        value,
        wall_time_ms,
    })
}
