//! Generalized Nörlund sums `N_n^alpha[f]` of a coefficient series.
//!
//! The operator is a Hadamard multiplier: coefficient `k` of `f` is scaled by
//! `(P_{n-k} / P_n)^alpha` for `k <= n` and dropped for `k > n`. The literal
//! weighted average of Taylor polynomials is kept as [`NorlundOperator::norlund_sum_definition`]
//! so the closed form can be checked against it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::power_series::CoefficientSeries;
use crate::sequences::DeterminingSequence;

#[derive(Debug, Clone, Copy)]
pub struct NorlundOperator<'a> {
    seq: &'a DeterminingSequence,
    alpha: f64,
    n: usize,
}

impl<'a> NorlundOperator<'a> {
    pub fn new(seq: &'a DeterminingSequence, alpha: f64, n: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidArgument(format!("alpha must be > 0, got {alpha}")));
        }
        seq.ensure(n)?;
        Ok(Self { seq, alpha, n })
    }

    pub fn sequence(&self) -> &'a DeterminingSequence {
        self.seq
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The multiplier weights `(P_{n-k} / P_n)^alpha` for `k = 0..=n`.
    ///
    /// Powers go through `exp(alpha ln(ratio))` on the ratio itself so that
    /// geometric sequences never form `P_n^alpha`. The `k = 0` weight is exactly 1.
    pub fn weights(&self) -> Result<Vec<f64>> {
        let sums = self.seq.partial_sums(self.n)?;
        let top = sums[self.n];
        Ok((0..=self.n)
            .map(|k| {
                if k == 0 {
                    1.0
                } else {
                    (self.alpha * (sums[self.n - k] / top).ln()).exp()
                }
            })
            .collect())
    }

    /// The multiplier polynomial `h_n^alpha(z) = sum_k (P_{n-k}/P_n)^alpha z^k`.
    pub fn multiplier_polynomial(&self) -> Result<CoefficientSeries> {
        CoefficientSeries::from_real(&self.weights()?)
    }

    /// `N_n^alpha[f]`, a polynomial with exactly `n + 1` coefficients.
    ///
    /// Computed as `h_n^alpha * s_n[f]` (Hadamard product), so the two agree bit for bit.
    pub fn norlund_sum(&self, f: &CoefficientSeries) -> Result<CoefficientSeries> {
        Ok(self
            .multiplier_polynomial()?
            .hadamard_product(&f.taylor_partial_sum(self.n)))
    }

    /// `(1/P_n) sum_k p_{n-k} s_k[f]`, summed literally over Taylor polynomials.
    ///
    /// Only the classical case `alpha = 1` has this form; other values are rejected.
    pub fn norlund_sum_definition(&self, f: &CoefficientSeries) -> Result<CoefficientSeries> {
        if self.alpha != 1.0 {
            return Err(Error::InvalidArgument(format!(
                "the defining average exists only for alpha = 1, got {}",
                self.alpha
            )));
        }
        let n = self.n;
        let p = self.seq.terms(n)?;
        let total = self.seq.partial_sum(n as i64)?;
        let mut acc = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 0..=n {
            let s_k = f.taylor_partial_sum(k);
            for (j, a) in s_k.coeffs().iter().enumerate() {
                acc[j] += a * p[n - k];
            }
        }
        CoefficientSeries::new(acc.into_iter().map(|c| c / total).collect())
    }
}
