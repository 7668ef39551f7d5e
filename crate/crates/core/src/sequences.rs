//! Determining sequences `(p_n)` of a Nörlund operator.
//!
//! A [`DeterminingSequence`] evaluates its terms lazily and caches the prefix
//! sums `P_n = p_0 + ... + p_n` behind a lock, so one instance can be shared
//! across threads once built. `P_{-1}` is taken to be `0`.

use std::fmt;
use std::path::Path;
use std::sync::RwLock;

use crate::error::{Error, Result};

/// Hard cap on cached indices; keeps a typo in a CLI grid from allocating gigabytes.
pub const MAX_INDEX: usize = 1 << 22;

/// The built-in families plus explicit finite data.
///
/// `Linear` and `Monomial` are shifted by one (`p_n = (n+1)^k`) and `Logarithmic`
/// is `p_n = ln(n+2)`, so that `P_0 = p_0 > 0` for every kind.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceKind {
    /// `p_n = 1`, the Cesàro case.
    Ones,
    /// `p_n = n + 1`.
    Linear,
    /// `p_n = (n + 1)^k` for a positive integer `k`.
    Monomial(u32),
    /// `p_n = r^n` with `r > 1`.
    Geometric(f64),
    /// `p_n = ln(n + 2)`.
    Logarithmic,
    /// Explicit non-negative values; the evaluable range ends with the list.
    Custom(Vec<f64>),
}

impl SequenceKind {
    /// Parses the CLI mini-language: `ones`, `linear`, `monomial:K`, `geom:R`,
    /// `log`, or `file:PATH` (one non-negative decimal per line).
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let kind = match (head, arg) {
            ("ones", None) => SequenceKind::Ones,
            ("linear", None) => SequenceKind::Linear,
            ("log", None) => SequenceKind::Logarithmic,
            ("monomial", Some(k)) => {
                let k: u32 = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("monomial exponent `{k}` is not a positive integer")))?;
                SequenceKind::Monomial(k)
            }
            ("geom", Some(r)) => {
                let r: f64 = r
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("geometric ratio `{r}` is not a number")))?;
                SequenceKind::Geometric(r)
            }
            ("file", Some(path)) => SequenceKind::Custom(read_values(Path::new(path))?),
            _ => return Err(Error::Parse(format!("unknown sequence spec `{spec}`"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    fn validate(&self) -> Result<()> {
        match self {
            SequenceKind::Monomial(0) => Err(Error::InvalidSequence(
                "monomial exponent must be a positive integer".into(),
            )),
            SequenceKind::Geometric(r) if !(r.is_finite() && *r > 1.0) => {
                Err(Error::InvalidSequence(format!("geometric ratio must be > 1, got {r}")))
            }
            SequenceKind::Custom(values) => {
                if values.is_empty() {
                    return Err(Error::InvalidSequence("custom sequence is empty".into()));
                }
                if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
                    return Err(Error::InvalidSequence(format!(
                        "custom term p_{i} = {v} is not a finite non-negative number"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The term `p_n`, or `None` past the end of a custom list.
    fn term(&self, n: usize) -> Option<f64> {
        let x = n as f64;
        Some(match self {
            SequenceKind::Ones => 1.0,
            SequenceKind::Linear => x + 1.0,
            SequenceKind::Monomial(k) => (x + 1.0).powi(*k as i32),
            SequenceKind::Geometric(r) => r.powi(n.min(i32::MAX as usize) as i32),
            SequenceKind::Logarithmic => (x + 2.0).ln(),
            SequenceKind::Custom(values) => return values.get(n).copied(),
        })
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceKind::Ones => write!(f, "ones"),
            SequenceKind::Linear => write!(f, "linear"),
            SequenceKind::Monomial(k) => write!(f, "monomial:{k}"),
            SequenceKind::Geometric(r) => write!(f, "geom:{r}"),
            SequenceKind::Logarithmic => write!(f, "log"),
            SequenceKind::Custom(v) => write!(f, "custom[{}]", v.len()),
        }
    }
}

fn read_values(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| Error::Parse(format!("{}:{}: `{line}` is not a decimal", path.display(), lineno + 1)))?;
        values.push(v);
    }
    Ok(values)
}

#[derive(Debug, Clone, Default)]
struct PrefixCache {
    terms: Vec<f64>,
    sums: Vec<f64>,
}

/// A determining sequence with cached partial sums.
#[derive(Debug)]
pub struct DeterminingSequence {
    kind: SequenceKind,
    cache: RwLock<PrefixCache>,
}

impl Clone for DeterminingSequence {
    fn clone(&self) -> Self {
        let cache = self.cache.read().expect("sequence cache poisoned").clone();
        Self {
            kind: self.kind.clone(),
            cache: RwLock::new(cache),
        }
    }
}

impl DeterminingSequence {
    pub fn new(kind: SequenceKind) -> Result<Self> {
        kind.validate()?;
        let seq = Self {
            kind,
            cache: RwLock::new(PrefixCache::default()),
        };
        // Surfaces P_0 <= 0 at construction rather than at first use.
        seq.ensure(0)?;
        Ok(seq)
    }

    pub fn ones() -> Self {
        Self::new(SequenceKind::Ones).expect("ones is valid")
    }

    pub fn linear() -> Self {
        Self::new(SequenceKind::Linear).expect("linear is valid")
    }

    pub fn monomial(k: u32) -> Result<Self> {
        Self::new(SequenceKind::Monomial(k))
    }

    pub fn geometric(r: f64) -> Result<Self> {
        Self::new(SequenceKind::Geometric(r))
    }

    pub fn logarithmic() -> Self {
        Self::new(SequenceKind::Logarithmic).expect("log is valid")
    }

    pub fn custom(values: Vec<f64>) -> Result<Self> {
        Self::new(SequenceKind::Custom(values))
    }

    pub fn parse_spec(spec: &str) -> Result<Self> {
        Self::new(SequenceKind::parse_spec(spec)?)
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    /// Fills the cache through index `n`. Cheap when already filled.
    pub fn ensure(&self, n: usize) -> Result<()> {
        {
            let cache = self.cache.read().expect("sequence cache poisoned");
            if cache.sums.len() > n {
                return Ok(());
            }
        }
        if n > MAX_INDEX {
            return Err(Error::RangeExceeded {
                index: n,
                reason: format!("index cap is {MAX_INDEX}"),
            });
        }
        let mut cache = self.cache.write().expect("sequence cache poisoned");
        let missing = (n + 1).saturating_sub(cache.terms.len());
        cache.terms.reserve(missing);
        while cache.sums.len() <= n {
            let i = cache.sums.len();
            let p = self.kind.term(i).ok_or_else(|| Error::RangeExceeded {
                index: i,
                reason: format!("{} has only {i} terms", self.kind),
            })?;
            if !p.is_finite() {
                return Err(Error::RangeExceeded {
                    index: i,
                    reason: format!("p_{i} overflows binary64"),
                });
            }
            if p < 0.0 {
                return Err(Error::InvalidSequence(format!("p_{i} = {p} is negative")));
            }
            let s = cache.sums.last().copied().unwrap_or(0.0) + p;
            if !s.is_finite() {
                return Err(Error::RangeExceeded {
                    index: i,
                    reason: format!("P_{i} overflows binary64"),
                });
            }
            if s <= 0.0 {
                return Err(Error::InvalidSequence(format!(
                    "partial sum P_{i} = {s} is not strictly positive"
                )));
            }
            cache.terms.push(p);
            cache.sums.push(s);
        }
        Ok(())
    }

    /// The term `p_n`.
    pub fn term(&self, n: usize) -> Result<f64> {
        self.ensure(n)?;
        Ok(self.cache.read().expect("sequence cache poisoned").terms[n])
    }

    /// `P_n = p_0 + ... + p_n`, with `P_{-1} = 0`.
    pub fn partial_sum(&self, n: i64) -> Result<f64> {
        match n {
            -1 => Ok(0.0),
            n if n < -1 => Err(Error::InvalidArgument(format!(
                "partial sums are defined for n >= -1, got {n}"
            ))),
            n => {
                let n = n as usize;
                self.ensure(n)?;
                Ok(self.cache.read().expect("sequence cache poisoned").sums[n])
            }
        }
    }

    /// Snapshot of `P_0..=P_n`.
    pub fn partial_sums(&self, n: usize) -> Result<Vec<f64>> {
        self.ensure(n)?;
        Ok(self.cache.read().expect("sequence cache poisoned").sums[..=n].to_vec())
    }

    /// Snapshot of `p_0..=p_n`.
    pub fn terms(&self, n: usize) -> Result<Vec<f64>> {
        self.ensure(n)?;
        Ok(self.cache.read().expect("sequence cache poisoned").terms[..=n].to_vec())
    }

    /// The growth rate `rho_n = n p_n / P_n` for `n >= 1`.
    pub fn growth_rate(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidArgument("growth rate needs n >= 1".into()));
        }
        self.ensure(n)?;
        let cache = self.cache.read().expect("sequence cache poisoned");
        Ok(n as f64 * cache.terms[n] / cache.sums[n])
    }

    /// Whether `p_0 <= p_1 <= ... <= p_n`.
    pub fn is_non_decreasing_through(&self, n: usize) -> Result<bool> {
        let p = self.terms(n)?;
        Ok(p.windows(2).all(|w| w[1] >= w[0]))
    }

    /// Whether `p_0 >= p_1 >= ... >= p_n`.
    pub fn is_non_increasing_through(&self, n: usize) -> Result<bool> {
        let p = self.terms(n)?;
        Ok(p.windows(2).all(|w| w[1] <= w[0]))
    }

    /// Growth diagnostics over the window `n_lo..=n_hi`. Needs `P_{2 n_hi}`.
    pub fn growth_report(&self, n_lo: usize, n_hi: usize) -> Result<GrowthReport> {
        if n_lo < 1 || n_lo >= n_hi {
            return Err(Error::InvalidArgument(format!(
                "growth window must satisfy 1 <= n_lo < n_hi, got [{n_lo}, {n_hi}]"
            )));
        }
        self.ensure(2 * n_hi)?;
        let cache = self.cache.read().expect("sequence cache poisoned");
        let (p, sums) = (&cache.terms, &cache.sums);

        let rho_values: Vec<f64> = (n_lo..=n_hi).map(|n| n as f64 * p[n] / sums[n]).collect();
        // limsup/liminf proxies: extremes over the tail half of the window.
        let tail_lo = n_lo + (n_hi - n_lo).div_ceil(2);
        let tail = &rho_values[tail_lo - n_lo..];
        let rho_sup_estimate = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let rho_inf_estimate = tail.iter().copied().fold(f64::INFINITY, f64::min);

        let beta_estimate = (tail_lo..=n_hi)
            .map(|n| sums[n - 1] / sums[2 * n])
            .fold(f64::INFINITY, f64::min);

        Ok(GrowthReport {
            window: (n_lo, n_hi),
            rho_values,
            rho_sup_estimate,
            rho_inf_estimate,
            beta_estimate,
            monotonicity: classify_monotonicity(&p[n_lo..=n_hi], n_lo),
        })
    }
}

/// Monotonicity of the terms inside a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    NonDecreasing,
    NonIncreasing,
    Neither,
    /// Monotone (in either direction) from index `from` to the end of the window.
    EventuallyMonotone {
        from: usize,
    },
}

/// Constant runs count as non-decreasing. A window is "eventually monotone" only
/// when the monotone tail covers at least half of it.
fn classify_monotonicity(window: &[f64], offset: usize) -> Monotonicity {
    let up = window.windows(2).all(|w| w[1] >= w[0]);
    if up {
        return Monotonicity::NonDecreasing;
    }
    if window.windows(2).all(|w| w[1] <= w[0]) {
        return Monotonicity::NonIncreasing;
    }
    let tail_start = |ok: fn(f64, f64) -> bool| {
        let mut start = window.len() - 1;
        while start > 0 && ok(window[start - 1], window[start]) {
            start -= 1;
        }
        start
    };
    let start = tail_start(|a, b| b >= a).min(tail_start(|a, b| b <= a));
    if window.len() - start >= window.len().div_ceil(2) {
        Monotonicity::EventuallyMonotone { from: offset + start }
    } else {
        Monotonicity::Neither
    }
}

/// Finite-window proxies for the growth rates `rho`, lower growth rate and `beta`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GrowthReport {
    pub window: (usize, usize),
    /// `rho_n` for each `n` in the window.
    pub rho_values: Vec<f64>,
    pub rho_sup_estimate: f64,
    pub rho_inf_estimate: f64,
    /// `min P_{n-1} / P_{2n}` over the tail half of the window.
    pub beta_estimate: f64,
    pub monotonicity: Monotonicity,
}
