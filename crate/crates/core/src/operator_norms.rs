//! The multiplier matrix `T_n^alpha`, its spectral norm, and closed-form bounds on it.
//!
//! With `c_k = (P_{n-k}/P_n)^alpha` for `1 <= k <= n` and `c_k = 0` beyond, `T_n^alpha`
//! is upper triangular with `c_k` on the diagonal and `c_j - c_{j-1}` above it.
//! Every column past `n + 1` vanishes, so the `(n+1) x (n+1)` block is the whole operator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::norlund::NorlundOperator;
use crate::power_series::CoefficientSeries;
use crate::sequences::DeterminingSequence;

/// Iteration cap for [`spectral_norm`].
pub const MAX_POWER_ITERATIONS: usize = 100_000;
/// Relative change of the Rayleigh quotient regarded as stationary.
const RAYLEIGH_RTOL: f64 = 1e-12;
/// Consecutive stationary iterations required before stopping.
const RAYLEIGH_STREAK: usize = 10;

/// Finite realization of `T_n^alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct NorlundMatrix {
    pub n: usize,
    pub alpha: f64,
    /// `(n+1) x (n+1)`, upper triangular.
    pub entries: DMatrix<f64>,
    /// `c_1..=c_n`; `c[k-1]` holds `c_k`.
    pub c: Vec<f64>,
}

impl NorlundMatrix {
    /// Same stopping rule as [`spectral_norm`], but each step costs `O(n)`: the
    /// strictly upper part is constant down each column, so `T v` reduces to suffix
    /// sums and `T^T y` to prefix sums.
    pub fn spectral_norm(&self) -> Result<f64> {
        let size = self.n + 1;
        let diag: Vec<f64> = (1..=size).map(|k| self.c_at(k)).collect();
        // upper[s] is the common value of column s above the diagonal.
        let upper: Vec<f64> = (0..size)
            .map(|s| if s == 0 { 0.0 } else { diag[s] - diag[s - 1] })
            .collect();
        if diag.iter().chain(&upper).all(|x| *x == 0.0) {
            return Ok(0.0);
        }
        let mut y = vec![0.0; size];
        power_iteration(size, |v, w| {
            let mut tail = 0.0;
            for r in (0..size).rev() {
                y[r] = diag[r] * v[r] + tail;
                tail += upper[r] * v[r];
            }
            let mut head = 0.0;
            for s in 0..size {
                w[s] = diag[s] * y[s] + upper[s] * head;
                head += y[s];
            }
            y.iter().map(|t| t * t).sum()
        })
    }

    /// `c_k` for any `k >= 1`, zero past `n`.
    pub fn c_at(&self, k: usize) -> f64 {
        assert!(k >= 1, "c_k is indexed from 1");
        self.c.get(k - 1).copied().unwrap_or(0.0)
    }
}

/// Builds `T_n^alpha` for `n >= 1`.
pub fn build_matrix(seq: &DeterminingSequence, n: usize, alpha: f64) -> Result<NorlundMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("T_n is defined for n >= 1".into()));
    }
    let weights = NorlundOperator::new(seq, alpha, n)?.weights()?;
    let c: Vec<f64> = weights[1..].to_vec();
    // c_k with c_{n+1} = 0, indexed from 1.
    let ck = |k: usize| if k <= n { c[k - 1] } else { 0.0 };
    let size = n + 1;
    let entries = DMatrix::from_fn(size, size, |i, j| match (i + 1, j + 1) {
        (r, s) if s < r => 0.0,
        (r, s) if s == r => ck(r),
        (_, s) => ck(s) - ck(s - 1),
    });
    Ok(NorlundMatrix { n, alpha, entries, c })
}

/// Largest singular value by power iteration on `A^T A`.
///
/// Stops once the Rayleigh quotient changes by at most 1e-12 (relative) over ten
/// consecutive iterations; fails after [`MAX_POWER_ITERATIONS`].
pub fn spectral_norm(a: &DMatrix<f64>) -> Result<f64> {
    if a.is_empty() || a.iter().all(|x| *x == 0.0) {
        return Ok(0.0);
    }
    let mut y = DVector::zeros(a.nrows());
    let mut v = DVector::zeros(a.ncols());
    let mut w = DVector::zeros(a.ncols());
    power_iteration(a.ncols(), |vin, wout| {
        v.copy_from_slice(vin);
        y.gemv(1.0, a, &v, 0.0);
        w.gemv_tr(1.0, a, &y, 0.0);
        wout.copy_from_slice(w.as_slice());
        y.norm_squared()
    })
}

/// Power iteration given `gram(v, w)`, which stores `A^T A v` in `w` and returns `|Av|^2`.
fn power_iteration(dim: usize, mut gram: impl FnMut(&[f64], &mut [f64]) -> f64) -> Result<f64> {
    let normalize = |x: &mut [f64]| {
        let norm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        x.iter_mut().for_each(|t| *t /= norm);
    };
    // Deterministic start with no special alignment to the coordinate axes.
    let mut v: Vec<f64> = (0..dim)
        .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.618_033_988_749_895).fract())
        .collect();
    normalize(&mut v);
    let mut w = vec![0.0; dim];
    let mut prev = 0.0;
    let mut streak = 0;
    for _ in 0..MAX_POWER_ITERATIONS {
        let lambda = gram(&v, &mut w);
        if w.iter().all(|t| *t == 0.0) {
            // v fell into the null space of a nonzero matrix; restart elsewhere.
            v = (0..dim).map(|i| if i % 2 == 0 { 1.0 } else { -0.5 }).collect();
            normalize(&mut v);
            streak = 0;
            continue;
        }
        std::mem::swap(&mut v, &mut w);
        normalize(&mut v);
        if (lambda - prev).abs() <= RAYLEIGH_RTOL * lambda {
            streak += 1;
            if streak >= RAYLEIGH_STREAK {
                return Ok(lambda.sqrt());
            }
        } else {
            streak = 0;
        }
        prev = lambda;
    }
    Err(Error::ConvergenceFailure {
        iterations: MAX_POWER_ITERATIONS,
    })
}

/// Largest singular value from a full SVD. Reference for small matrices.
pub fn spectral_norm_svd(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// `(P_{n-k}/P_n)^alpha` through the ratio, with `P_{-1} = 0`.
fn ratio_pow(sums: &[f64], idx: i64, n: usize, alpha: f64) -> f64 {
    if idx < 0 {
        0.0
    } else {
        (alpha * (sums[idx as usize] / sums[n]).ln()).exp()
    }
}

/// `(n+1) sum_{k=1}^n |(P_{n-k}/P_n)^alpha - (P_{n-k-1}/P_n)^alpha|^2`, an upper
/// bound on `||T_n^alpha||^2`.
pub fn lemma_bound_upper(seq: &DeterminingSequence, n: usize, alpha: f64) -> Result<f64> {
    check_n_alpha(n, alpha)?;
    let sums = seq.partial_sums(n)?;
    let sum: f64 = (1..=n)
        .map(|k| {
            let k = k as i64;
            let d = ratio_pow(&sums, n as i64 - k, n, alpha) - ratio_pow(&sums, n as i64 - k - 1, n, alpha);
            d * d
        })
        .sum();
    Ok((n as f64 + 1.0) * sum)
}

fn check_n_alpha(n: usize, alpha: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("bounds are defined for n >= 1".into()));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be > 0, got {alpha}")));
    }
    Ok(())
}

fn check_theorem_hypotheses(seq: &DeterminingSequence, n: usize, alpha: f64) -> Result<()> {
    check_n_alpha(n, alpha)?;
    if alpha <= 0.5 {
        return Err(Error::BoundInapplicable(format!("needs alpha > 1/2, got {alpha}")));
    }
    if !seq.is_non_decreasing_through(n)? {
        return Err(Error::BoundInapplicable(format!(
            "{} is not non-decreasing on 0..={n}",
            seq.kind()
        )));
    }
    Ok(())
}

/// Closed-form upper bound on `||T_n^alpha||^2` in terms of `rho_n`:
/// `alpha^2 (n+1)/n rho_n^{2 alpha}` for `alpha >= 1`, and
/// `alpha^2/(2 alpha - 1) (n+1)(n^{2 alpha - 1} + 2 alpha - 2)/n^{2 alpha} rho_n^{2 alpha}`
/// for `1/2 < alpha < 1`. Requires a non-decreasing sequence.
pub fn thm_upper_bound(seq: &DeterminingSequence, n: usize, alpha: f64) -> Result<f64> {
    check_theorem_hypotheses(seq, n, alpha)?;
    let rho = seq.growth_rate(n)?;
    let nf = n as f64;
    let rho_term = rho.powf(2.0 * alpha);
    Ok(if alpha >= 1.0 {
        alpha * alpha * (nf + 1.0) / nf * rho_term
    } else {
        alpha * alpha / (2.0 * alpha - 1.0) * (nf + 1.0) * (nf.powf(2.0 * alpha - 1.0) + 2.0 * alpha - 2.0)
            / nf.powf(2.0 * alpha)
            * rho_term
    })
}

/// Lower bound on `||T_n^alpha||^2` from the constant-row submatrix, for
/// `1 <= m <= n - 2`:
/// `alpha^2/(2 alpha - 1) (n-m+1)/m (m p_{n-m-1}/P_n)^{2 alpha}` for `alpha >= 1`, and
/// `alpha^2/(2 alpha - 1) (n-m+1)((m+1)^{2 alpha - 1} - 1)/m^{2 alpha} (m p_{n-m-1}/P_n)^{2 alpha}`
/// for `1/2 < alpha < 1`.
pub fn thm_lower_bound(seq: &DeterminingSequence, n: usize, m: usize, alpha: f64) -> Result<f64> {
    if m < 1 || m + 2 > n {
        return Err(Error::InvalidArgument(format!(
            "needs 1 <= m <= n - 2, got n = {n}, m = {m}"
        )));
    }
    check_theorem_hypotheses(seq, n, alpha)?;
    let p = seq.term(n - m - 1)?;
    let big_p = seq.partial_sum(n as i64)?;
    let (nf, mf) = (n as f64, m as f64);
    let scaled = (mf * p / big_p).powf(2.0 * alpha);
    let lead = alpha * alpha / (2.0 * alpha - 1.0);
    Ok(if alpha >= 1.0 {
        lead * (nf - mf + 1.0) / mf * scaled
    } else {
        lead * (nf - mf + 1.0) * ((mf + 1.0).powf(2.0 * alpha - 1.0) - 1.0) / mf.powf(2.0 * alpha) * scaled
    })
}

/// `||T_{2n}^{1/2}||` for each `n` of the grid.
pub fn sharpness_probe(seq: &DeterminingSequence, n_grid: &[usize]) -> Result<Vec<(usize, f64)>> {
    n_grid
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::InvalidArgument("sharpness grid entries must be >= 1".into()));
            }
            Ok((n, build_matrix(seq, 2 * n, 0.5)?.spectral_norm()?))
        })
        .collect()
}

/// Matrix of `N_n^alpha` on polynomials of degree `<= d` for the weight `delta_1`.
///
/// A polynomial is written `f = a + (z - 1) g` with `g = sum_{j<d} b_j z^j`, and
/// `||f||^2 = |f(0)|^2 + sum |b_j|^2`. The `f(0)` coordinate is fixed by the
/// operator and decouples, so the returned `d x d` matrix is the action on
/// `(b_0, ..., b_{d-1})`; the full operator norm is `max(1, ||B||)`.
/// Columns are produced by applying [`NorlundOperator::norlund_sum`] and
/// re-dividing at `zeta = 1`, not by copying `T_n^alpha`.
pub fn dirichlet_operator_matrix(
    seq: &DeterminingSequence,
    n: usize,
    alpha: f64,
    truncation_degree: usize,
) -> Result<DMatrix<f64>> {
    let d = truncation_degree;
    if d < n || d == 0 {
        return Err(Error::InvalidArgument(format!(
            "truncation degree {d} must be >= n = {n} and positive"
        )));
    }
    let op = NorlundOperator::new(seq, alpha, n)?;
    let one = Complex64::new(1.0, 0.0);
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d {
        // b = e_i with f(0) = 0  =>  f = [i == 0] + (z - 1) z^i
        let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
        coeffs[i + 1] += one;
        coeffs[i] -= one;
        if i == 0 {
            coeffs[0] += one;
        }
        let f = CoefficientSeries::new(coeffs)?;
        let image = op.norlund_sum(&f)?;
        let (_, g) = image.aleman_divide(one)?;
        for (j, b) in g.coeffs().iter().enumerate().take(d) {
            out[(j, i)] = b.re;
        }
    }
    Ok(out)
}
