//! The `verify` command: randomized and grid checks of the library's invariants
//! for the configured sequence, exponent and weight.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ExperimentConfig;
use crate::dirichlet::{
    dirichlet_inner_product, dirichlet_norm, local_dirichlet_energy, local_dirichlet_energy_quadrature,
    PointMassWeight, QuadratureSpec,
};
use crate::error::{Error, Result};
use crate::norlund::NorlundOperator;
use crate::operator_norms::{
    build_matrix, dirichlet_operator_matrix, lemma_bound_upper, spectral_norm, thm_lower_bound, thm_upper_bound,
};
use crate::power_series::CoefficientSeries;
use crate::sequences::DeterminingSequence;

/// Relative slack for bound comparisons.
pub const BOUND_SLACK: f64 = 1e-9;
/// Largest `n` the bound sweep visits; keeps `verify` interactive.
const SWEEP_CAP: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// Random polynomial of degree drawn from `degrees`, coefficients in the unit box.
pub fn random_polynomial(rng: &mut impl Rng, degrees: std::ops::RangeInclusive<usize>) -> CoefficientSeries {
    let degree = rng.gen_range(degrees);
    let coeffs = (0..=degree)
        .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    CoefficientSeries::new(coeffs).expect("finite coefficients")
}

/// Uniform point in the disk of the given radius.
pub fn random_point(rng: &mut impl Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn max_coeff_diff(a: &CoefficientSeries, b: &CoefficientSeries) -> f64 {
    (0..a.len().max(b.len()))
        .map(|k| (a.coeff(k) - b.coeff(k)).norm())
        .fold(0.0, f64::max)
}

pub(super) fn run_suite(config: &ExperimentConfig, seq: &DeterminingSequence) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let alpha = config.alpha;
    let weight = PointMassWeight::parse_spec(&config.weight_spec)?;
    let mut checks = Vec::new();

    // Closed form against the literal average of Taylor polynomials.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(0..=64);
        let f = random_polynomial(&mut rng, 0..=64);
        let op = NorlundOperator::new(seq, 1.0, n)?;
        worst = worst.max(max_coeff_diff(&op.norlund_sum(&f)?, &op.norlund_sum_definition(&f)?));
    }
    checks.push(CheckOutcome::new(
        "norlund_equivalence",
        worst <= 1e-12,
        format!("max diff {worst:.3e}"),
    ));

    let mut exact = true;
    let mut lin_worst = 0.0f64;
    let mut const_ok = true;
    for _ in 0..50 {
        let n = rng.gen_range(0..=64);
        let op = NorlundOperator::new(seq, alpha, n)?;
        let f = random_polynomial(&mut rng, 0..=64);
        let g = random_polynomial(&mut rng, 0..=64);
        let h = op.multiplier_polynomial()?;
        exact &= op.norlund_sum(&f)? == h.hadamard_product(&f.taylor_partial_sum(n));
        let c = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let lhs = op.norlund_sum(&f.scale(c).add(&g))?;
        let rhs = op.norlund_sum(&f)?.scale(c).add(&op.norlund_sum(&g)?);
        lin_worst = lin_worst.max(max_coeff_diff(&lhs, &rhs));
        let k = CoefficientSeries::constant(c);
        const_ok &= op.norlund_sum(&k)?.taylor_partial_sum(0) == k;
    }
    checks.push(CheckOutcome::new(
        "hadamard_representation",
        exact,
        "N_n[f] == h_n * f bitwise".into(),
    ));
    checks.push(CheckOutcome::new(
        "linearity",
        lin_worst <= 1e-12,
        format!("max diff {lin_worst:.3e}"),
    ));
    checks.push(CheckOutcome::new("constant_preservation", const_ok, String::new()));

    // Coefficient route against the area integral.
    let quad = QuadratureSpec::default();
    let mut interior = 0.0f64;
    let mut boundary = 0.0f64;
    for i in 0..12 {
        let f = random_polynomial(&mut rng, 1..=8);
        let (zeta, slot) = if i < 8 {
            (random_point(&mut rng, 0.9), &mut interior)
        } else {
            (
                Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)),
                &mut boundary,
            )
        };
        let a = local_dirichlet_energy(&f, zeta)?;
        let b = local_dirichlet_energy_quadrature(&f, zeta, &quad)?;
        *slot = slot.max((a - b).abs() / a.abs().max(f64::MIN_POSITIVE));
    }
    checks.push(CheckOutcome::new(
        "dirichlet_oracle_interior",
        interior <= 1e-6,
        format!("max rel {interior:.3e}"),
    ));
    checks.push(CheckOutcome::new(
        "dirichlet_oracle_boundary",
        boundary <= 1e-4,
        format!("max rel {boundary:.3e}"),
    ));

    let mut cs_ok = true;
    let mut floor_ok = true;
    for _ in 0..20 {
        let f = random_polynomial(&mut rng, 0..=16);
        let g = random_polynomial(&mut rng, 0..=16);
        let fg = dirichlet_inner_product(&f, &g, &weight)?.norm_sqr();
        let (nf, ng) = (dirichlet_norm(&f, &weight)?, dirichlet_norm(&g, &weight)?);
        cs_ok &= fg <= nf * nf * ng * ng * (1.0 + 1e-10);
        floor_ok &= nf >= f.coeff(0).norm();
    }
    checks.push(CheckOutcome::new(
        "cauchy_schwarz",
        cs_ok,
        format!("weight {}", config.weight_spec),
    ));
    checks.push(CheckOutcome::new(
        "norm_dominates_constant_term",
        floor_ok,
        String::new(),
    ));

    checks.extend(bound_sweep(config, seq)?);

    let ones = DeterminingSequence::ones();
    let cesaro: Vec<(usize, f64)> = (1..=64)
        .chain(config.n_grid.values().into_iter().filter(|n| *n <= 1024))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| Ok((n, build_matrix(&ones, n, 1.0)?.spectral_norm()?)))
        .collect::<Result<_>>()?;
    let worst = cesaro
        .iter()
        .copied()
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    checks.push(CheckOutcome::new(
        "cesaro_norm_below_one",
        cesaro.iter().all(|(_, s)| *s < 1.0),
        format!("largest {:.12} at n = {}", worst.1, worst.0),
    ));

    let mut restriction_ok = true;
    let mut detail = String::new();
    for n in [4usize, 8] {
        let t = build_matrix(seq, n, alpha)?.spectral_norm()?;
        let d = spectral_norm(&dirichlet_operator_matrix(seq, n, alpha, 2 * (n + 1))?)?;
        restriction_ok &= d <= t + 1e-9;
        detail.push_str(&format!("n={n}: {d:.12} vs {t:.12}; "));
    }
    checks.push(CheckOutcome::new(
        "dirichlet_restriction_below_t",
        restriction_ok,
        detail,
    ));

    let hi = config.n_grid.values().last().copied().unwrap_or(2).max(2);
    let report = seq.growth_report(1, hi)?;
    checks.push(CheckOutcome::new(
        "growth_report_invariants",
        (0.0..=1.0).contains(&report.beta_estimate) && report.rho_inf_estimate <= report.rho_sup_estimate,
        format!(
            "beta {:.6e}, rho in [{:.6}, {:.6}], {:?}",
            report.beta_estimate, report.rho_inf_estimate, report.rho_sup_estimate, report.monotonicity
        ),
    ));

    Ok(checks)
}

/// `||T_k||^2 <= min(lemma, thm_upper)` for every order `k` in the configured grid
/// or its doubling, and `thm_lower(2n, n) <= ||T_{2n}||^2`, up to [`SWEEP_CAP`].
fn bound_sweep(config: &ExperimentConfig, seq: &DeterminingSequence) -> Result<Vec<CheckOutcome>> {
    let alpha = config.alpha;
    let grid: Vec<usize> = config.n_grid.values().into_iter().filter(|n| *n <= SWEEP_CAP).collect();
    let mut orders: Vec<usize> = grid.iter().flat_map(|&n| [n, 2 * n]).collect();
    orders.sort_unstable();
    orders.dedup();
    if let Some(&max) = orders.last() {
        seq.ensure(max)?;
    }
    let within = |lhs: f64, rhs: f64| lhs <= rhs + BOUND_SLACK * rhs.abs();
    let optional = |r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BoundInapplicable(_)) => Ok(None),
        Err(e) => Err(e),
    };

    struct Point {
        k: usize,
        s2: f64,
        lemma: f64,
        thm: Option<f64>,
        lower: Option<f64>,
    }
    let points: Vec<Point> = orders
        .par_iter()
        .map(|&k| {
            let s2 = build_matrix(seq, k, alpha)?.spectral_norm()?.powi(2);
            let lower = if k % 2 == 0 && grid.contains(&(k / 2)) && k >= 4 {
                optional(thm_lower_bound(seq, k, k / 2, alpha))?
            } else {
                None
            };
            Ok(Point {
                k,
                s2,
                lemma: lemma_bound_upper(seq, k, alpha)?,
                thm: optional(thm_upper_bound(seq, k, alpha))?,
                lower,
            })
        })
        .collect::<Result<_>>()?;

    let summarize = |name: &str, checked: usize, v: Vec<String>| {
        let detail = if v.is_empty() {
            format!("{checked} orders checked")
        } else {
            format!("{} of {checked} violated: {}", v.len(), v.join("; "))
        };
        CheckOutcome::new(name, v.is_empty(), detail)
    };
    let lemma: Vec<String> = points
        .iter()
        .filter(|p| !within(p.s2, p.lemma))
        .map(|p| format!("n={}: {:.6e} > {:.6e}", p.k, p.s2, p.lemma))
        .collect();
    let mut out = vec![summarize("lemma_upper_bound", points.len(), lemma)];

    let thm: Vec<(usize, f64, f64)> = points.iter().filter_map(|p| p.thm.map(|b| (p.k, p.s2, b))).collect();
    if !thm.is_empty() {
        let bad = thm
            .iter()
            .filter(|(_, s2, b)| !within(*s2, *b))
            .map(|(k, s2, b)| format!("n={k}: {s2:.6e} > {b:.6e}"))
            .collect();
        out.push(summarize("theorem_upper_bound", thm.len(), bad));
    }
    let lower: Vec<(usize, f64, f64)> = points.iter().filter_map(|p| p.lower.map(|b| (p.k, p.s2, b))).collect();
    if !lower.is_empty() {
        let bad = lower
            .iter()
            .filter(|(_, s2, b)| !within(*b, *s2))
            .map(|(k, s2, b)| format!("n={k}: {b:.6e} > {s2:.6e}"))
            .collect();
        out.push(summarize("theorem_lower_bound", lower.len(), bad));
    }
    Ok(out)
}
