//! Acceptance gates. Runs as a plain binary (`harness = false`) and prints one
//! `PASS`/`FAIL` line per criterion, then exits non-zero if any criterion failed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use summability::dirichlet::{local_dirichlet_energy, local_dirichlet_energy_quadrature};
use summability::experiments::verify::{random_point, random_polynomial};
use summability::experiments::{convergence_error, fit_rate};
use summability::operator_norms::{
    build_matrix, dirichlet_operator_matrix, lemma_bound_upper, sharpness_probe, spectral_norm, thm_lower_bound,
    thm_upper_bound,
};
use summability::{CoefficientSeries, DeterminingSequence, NorlundOperator, PointMassWeight, QuadratureSpec};

const SEED: u64 = 0x5eed_2026;
const BOUND_SLACK: f64 = 1e-9;

type Criterion = (&'static str, &'static str, fn() -> Verdict, Duration);

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn max_coeff_diff(a: &CoefficientSeries, b: &CoefficientSeries) -> f64 {
    (0..a.len().max(b.len()))
        .map(|k| (a.coeff(k) - b.coeff(k)).norm())
        .fold(0.0, f64::max)
}

fn sequence_pool() -> Vec<DeterminingSequence> {
    let decreasing = (0..=64).map(|n| 1.0 + 1.0 / (n as f64 + 1.0)).collect();
    vec![
        DeterminingSequence::ones(),
        DeterminingSequence::linear(),
        DeterminingSequence::monomial(2).unwrap(),
        DeterminingSequence::geometric(1.5).unwrap(),
        DeterminingSequence::logarithmic(),
        DeterminingSequence::custom(decreasing).unwrap(),
    ]
}

fn equivalence() -> Verdict {
    let pool = sequence_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    let mut hadamard_exact = true;
    for _ in 0..200 {
        let seq = &pool[rng.gen_range(0..pool.len())];
        let n = rng.gen_range(0..=64);
        let f = random_polynomial(&mut rng, 0..=64);
        let op = NorlundOperator::new(seq, 1.0, n).unwrap();
        let closed = op.norlund_sum(&f).unwrap();
        worst = worst.max(max_coeff_diff(&closed, &op.norlund_sum_definition(&f).unwrap()));

        let alpha = rng.gen_range(0.1..3.0);
        let op = NorlundOperator::new(seq, alpha, n).unwrap();
        let h = op.multiplier_polynomial().unwrap();
        hadamard_exact &= op.norlund_sum(&f).unwrap() == h.hadamard_product(&f.taylor_partial_sum(n));
    }
    Verdict::new(
        worst <= 1e-12 && hadamard_exact,
        format!("200 instances, max coefficient diff {worst:.3e}, hadamard exact: {hadamard_exact}"),
    )
}

fn dirichlet_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let polys: Vec<CoefficientSeries> = (0..100).map(|_| random_polynomial(&mut rng, 1..=8)).collect();
    let interior: Vec<Complex64> = (0..20).map(|_| random_point(&mut rng, 0.9)).collect();
    let boundary: Vec<Complex64> = (0..8)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * (j as f64 + 0.3) / 8.0))
        .collect();
    let quad = QuadratureSpec::default();
    let worst = |points: &[Complex64]| -> f64 {
        polys
            .par_iter()
            .flat_map_iter(|f| points.iter().map(move |&z| (f, z)))
            .map(|(f, z)| {
                let a = local_dirichlet_energy(f, z).unwrap();
                let b = local_dirichlet_energy_quadrature(f, z, &quad).unwrap();
                (a - b).abs() / a
            })
            .reduce(|| 0.0, f64::max)
    };
    let (wi, wb) = (worst(&interior), worst(&boundary));
    Verdict::new(
        wi <= 1e-6 && wb <= 1e-4,
        format!("max relative error interior {wi:.3e} (2000 pairs), boundary {wb:.3e} (800 pairs)"),
    )
}

fn bound_sandwich() -> Verdict {
    let specs = ["ones", "linear", "monomial:2"];
    let alphas = [0.6, 0.75, 1.0, 1.5, 2.0];
    let cases: Vec<(&str, f64, usize)> = specs
        .iter()
        .flat_map(|s| {
            alphas
                .iter()
                .flat_map(move |&a| (2..=256usize).map(move |n| (*s, a, n)))
        })
        .collect();
    let seqs: Vec<DeterminingSequence> = specs
        .iter()
        .map(|s| DeterminingSequence::parse_spec(s).unwrap())
        .collect();
    let seq_of = |s: &str| &seqs[specs.iter().position(|x| *x == s).unwrap()];

    // Per case: (sequence, alpha, n, lemma ok, theorem-upper ok, lower ok).
    let results: Vec<(&str, f64, usize, bool, bool, bool)> = cases
        .par_iter()
        .map(|&(s, alpha, n)| {
            let seq = seq_of(s);
            let s2_n = build_matrix(seq, n, alpha).unwrap().spectral_norm().unwrap().powi(2);
            let s2_2n = build_matrix(seq, 2 * n, alpha)
                .unwrap()
                .spectral_norm()
                .unwrap()
                .powi(2);
            let le = |a: f64, b: f64| a <= b + BOUND_SLACK * b.abs();
            let lemma_ok = le(s2_n, lemma_bound_upper(seq, n, alpha).unwrap());
            let thm_ok = le(s2_n, thm_upper_bound(seq, n, alpha).unwrap());
            let lower_ok = le(thm_lower_bound(seq, 2 * n, n, alpha).unwrap(), s2_2n);
            (s, alpha, n, lemma_ok, thm_ok, lower_ok)
        })
        .collect();
    let lemma_bad = results.iter().filter(|r| !r.3).count();
    let thm_bad = results.iter().filter(|r| !r.4).count();
    let lower_bad = results.iter().filter(|r| !r.5).count();
    let mut detail = format!(
        "{} cases; violations: lemma {lemma_bad}, theorem upper {thm_bad}, theorem lower {lower_bad}",
        results.len()
    );
    // Theorem-upper violations grouped by (sequence, alpha) with their n range.
    let mut groups: Vec<(&str, f64, usize, usize, usize)> = Vec::new();
    for &(s, a, n, _, thm_ok, _) in &results {
        if thm_ok {
            continue;
        }
        match groups.iter_mut().find(|g| g.0 == s && g.1 == a) {
            Some(g) => {
                g.2 = g.2.min(n);
                g.3 = g.3.max(n);
                g.4 += 1;
            }
            None => groups.push((s, a, n, n, 1)),
        }
    }
    if !groups.is_empty() {
        let parts: Vec<String> = groups
            .iter()
            .map(|(s, a, lo, hi, count)| format!("{s} alpha={a}: {count} in n={lo}..={hi}"))
            .collect();
        detail.push_str(&format!(" [{}]", parts.join("; ")));
    }
    Verdict::new(lemma_bad + thm_bad + lower_bad == 0, detail)
}

fn cesaro_bound() -> Verdict {
    let ones = DeterminingSequence::ones();
    let norms: Vec<(usize, f64)> = (1..=1024usize)
        .into_par_iter()
        .map(|n| (n, build_matrix(&ones, n, 1.0).unwrap().spectral_norm().unwrap()))
        .collect();
    let (n_max, s_max) = norms
        .iter()
        .copied()
        .fold((0, 0.0), |a, x| if x.1 > a.1 { x } else { a });
    Verdict::new(
        norms.iter().all(|(_, s)| *s < 1.0),
        format!("n = 1..=1024, largest norm {s_max:.12} at n = {n_max}"),
    )
}

fn convergence_rates() -> Verdict {
    let weight = PointMassWeight::dirac(Complex64::new(1.0, 0.0)).unwrap();
    let f_ref = CoefficientSeries::zeta2(4096);
    let grid = [16usize, 32, 64, 128, 256, 512];
    let decreasing: Vec<f64> = (0..=4096).map(|n| 1.0 + 1.0 / (n as f64 + 1.0)).collect();
    let runs = [
        ("ones, alpha=1", DeterminingSequence::ones(), 1.0),
        ("ones, alpha=0.75", DeterminingSequence::ones(), 0.75),
        (
            "1+1/(n+1), alpha=1",
            DeterminingSequence::custom(decreasing).unwrap(),
            1.0,
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, seq, alpha) in &runs {
        let start = Instant::now();
        let errors: Vec<f64> = grid
            .par_iter()
            .map(|&n| convergence_error(seq, *alpha, &weight, &f_ref, n).unwrap())
            .collect();
        let elapsed = start.elapsed();
        let points: Vec<(f64, f64)> = grid.iter().map(|&n| n as f64).zip(errors.iter().copied()).collect();
        let (slope, _) = fit_rate(&points).unwrap();
        let strictly_decreasing = errors.windows(2).all(|w| w[1] < w[0]);
        let run_ok = strictly_decreasing && slope <= -0.45 && elapsed < Duration::from_secs(120);
        ok &= run_ok;
        parts.push(format!("{label}: slope {slope:.4}, decreasing {strictly_decreasing}"));
    }
    Verdict::new(ok, parts.join("; "))
}

fn sharpness() -> Verdict {
    let grid: Vec<usize> = (3..=11).map(|k| 1usize << k).collect();
    let ones = DeterminingSequence::ones();
    let norms: Vec<f64> = grid
        .par_iter()
        .map(|&n| sharpness_probe(&ones, &[n]).unwrap()[0].1)
        .collect();
    let monotone = norms.windows(2).all(|w| w[1] >= w[0]);
    let at = |n: usize| norms[grid.iter().position(|&m| m == n).unwrap()];
    let ratio = at(2048) / at(32);
    Verdict::new(
        monotone && ratio >= 1.15,
        format!(
            "||T_2n^1/2|| from {:.4} (n=8) to {:.4} (n=2048), ratio 2048/32 = {ratio:.4}",
            norms[0],
            at(2048)
        ),
    )
}

fn dirichlet_equality() -> Verdict {
    let ones = DeterminingSequence::ones();
    let mut worst = 0.0f64;
    for n in [4usize, 8, 16, 32] {
        let t = build_matrix(&ones, n, 1.0).unwrap().spectral_norm().unwrap();
        let b = spectral_norm(&dirichlet_operator_matrix(&ones, n, 1.0, 4 * (n + 1)).unwrap()).unwrap();
        worst = worst.max((b - t).abs() / t);
    }
    Verdict::new(
        worst <= 0.02,
        format!("n in {{4, 8, 16, 32}}, max relative gap {worst:.3e}"),
    )
}

fn growth() -> Verdict {
    let geom = DeterminingSequence::geometric(2.0)
        .unwrap()
        .growth_report(1, 30)
        .unwrap();
    let ones = DeterminingSequence::ones().growth_report(1, 100).unwrap();
    let rho_lin = DeterminingSequence::linear().growth_rate(1000).unwrap();
    let ok = geom.beta_estimate < 1e-8
        && ones.beta_estimate > 0.49
        && ones.beta_estimate < 0.51
        && (rho_lin - 2.0).abs() / 2.0 <= 0.02;
    Verdict::new(
        ok,
        format!(
            "beta geom:2 {:.3e}, beta ones {:.4}, rho linear(1000) {rho_lin:.5}",
            geom.beta_estimate, ones.beta_estimate
        ),
    )
}

fn main() -> ExitCode {
    // libtest-style filter arguments are ignored; the gate always runs in full.
    let criteria: [Criterion; 8] = [
        (
            "1",
            "norlund closed form equals definition",
            equivalence,
            Duration::from_secs(5),
        ),
        (
            "2",
            "local dirichlet energy matches quadrature",
            dirichlet_oracle,
            Duration::from_secs(60),
        ),
        (
            "3",
            "operator norm bound sandwich",
            bound_sandwich,
            Duration::from_secs(120),
        ),
        (
            "4",
            "cesaro operator norm below one",
            cesaro_bound,
            Duration::from_secs(60),
        ),
        (
            "5",
            "convergence rate at most n^-0.45",
            convergence_rates,
            Duration::from_secs(360),
        ),
        ("6", "norm growth at alpha = 1/2", sharpness, Duration::from_secs(180)),
        (
            "7",
            "dirichlet operator norm equals matrix norm",
            dirichlet_equality,
            Duration::from_secs(60),
        ),
        ("8", "growth diagnostics", growth, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (id, name, check, budget) in criteria {
        let start = Instant::now();
        let verdict = check();
        let elapsed = start.elapsed();
        let in_time = elapsed < budget;
        let passed = verdict.passed && in_time;
        failed += usize::from(!passed);
        println!(
            "{} criterion {id} ({name}): {} [{:.2}s of {}s]",
            if passed { "PASS" } else { "FAIL" },
            verdict.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
