//! Dense complex coefficient vectors: polynomials and truncated Taylor series.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A polynomial `a_0 + a_1 z + ... + a_d z^d` stored densely by coefficient.
///
/// Always holds at least one coefficient; the zero polynomial is `[0]`.
/// Trailing zero coefficients are kept, so `len()` can exceed `degree() + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    coeffs: Vec<Complex64>,
}

impl CoefficientSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a coefficient series needs at least one coefficient".into(),
            ));
        }
        if let Some(k) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidArgument(format!("coefficient a_{k} is not finite")));
        }
        Ok(Self { coeffs })
    }

    /// Builds a series from real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `a_k = (k+1)^{-2}` for `k = 0..=degree`.
    pub fn zeta2(degree: usize) -> Self {
        let coeffs = (0..=degree)
            .map(|k| Complex64::new(1.0 / ((k as f64 + 1.0) * (k as f64 + 1.0)), 0.0))
            .collect();
        Self { coeffs }
    }

    /// `a_k = r^k`, the truncated expansion of `1 / (1 - r z)`.
    pub fn geometric(r: Complex64, degree: usize) -> Result<Self> {
        if r.norm() >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "geometric preset needs |r| < 1, got {r}"
            )));
        }
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut a = Complex64::new(1.0, 0.0);
        for _ in 0..=degree {
            coeffs.push(a);
            a *= r;
        }
        Self::new(coeffs)
    }

    /// Reads one coefficient per line as `RE IM`; the line number minus one is the index.
    pub fn read_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut lines: Vec<&str> = text.lines().collect();
        while lines.last().is_some_and(|l| l.trim().is_empty()) {
            lines.pop();
        }
        let mut coeffs = Vec::with_capacity(lines.len());
        for (lineno, line) in lines.into_iter().enumerate() {
            let bad = || {
                Error::Parse(format!(
                    "{}:{}: expected `RE IM`, got `{line}`",
                    path.display(),
                    lineno + 1
                ))
            };
            let mut parts = line.split_whitespace();
            let (re, im) = match (parts.next(), parts.next(), parts.next()) {
                (Some(re), Some(im), None) => (re, im),
                _ => return Err(bad()),
            };
            let re: f64 = re.parse().map_err(|_| bad())?;
            let im: f64 = im.parse().map_err(|_| bad())?;
            coeffs.push(Complex64::new(re, im));
        }
        Self::new(coeffs)
    }

    /// Writes the `RE IM` format with round-trippable digits.
    pub fn write_file(&self, path: &Path) -> Result<()> {
        let mut out = String::with_capacity(self.coeffs.len() * 50);
        for c in &self.coeffs {
            out.push_str(&format!("{:.16e} {:.16e}\n", c.re, c.im));
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Highest index with a nonzero coefficient, or 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| c.re != 0.0 || c.im != 0.0)
            .unwrap_or(0)
    }

    /// `a_k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// The Taylor polynomial `s_k[f]`: indices `0..=k`, zero-padded if needed.
    pub fn taylor_partial_sum(&self, k: usize) -> Self {
        let coeffs = (0..=k).map(|i| self.coeff(i)).collect();
        Self { coeffs }
    }

    /// Coefficientwise product, truncated to the shorter input.
    pub fn hadamard_product(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).collect();
        Self { coeffs }
    }

    /// Horner evaluation of `sum a_k z^k`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `f'`, with coefficient `k` equal to `(k+1) a_{k+1}`. A constant maps to `[0]`.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, &a)| a * (k as f64 + 1.0))
            .collect();
        Self { coeffs }
    }

    /// Splits `f = a + (z - zeta) g` by synthetic division, returning `(f(zeta), g)`.
    ///
    /// `g` has one coefficient fewer than `f` (or is `[0]` for constants).
    pub fn aleman_divide(&self, zeta: Complex64) -> Result<(Complex64, Self)> {
        check_in_closed_disk(zeta)?;
        let a = &self.coeffs;
        if a.len() == 1 {
            return Ok((a[0], Self::zero()));
        }
        let d = a.len() - 1;
        let mut g = vec![Complex64::new(0.0, 0.0); d];
        g[d - 1] = a[d];
        for k in (1..d).rev() {
            g[k - 1] = a[k] + zeta * g[k];
        }
        let remainder = a[0] + zeta * g[0];
        Ok((remainder, Self { coeffs: g }))
    }

    /// `sum |a_k|^2`.
    pub fn h2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `sum_k a_k conj(b_k)` over the common support.
    pub fn h2_inner(&self, other: &Self) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Sum, zero-extending the shorter operand.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self {
            coeffs: (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self {
            coeffs: (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect(),
        }
    }
}

pub(crate) fn check_in_closed_disk(zeta: Complex64) -> Result<()> {
    if zeta.re.is_finite() && zeta.im.is_finite() && zeta.norm() <= 1.0 + 1e-12 {
        Ok(())
    } else {
        Err(Error::PointOutsideDisk {
            re: zeta.re,
            im: zeta.im,
        })
    }
}

/// CLI function presets: `zeta2`, `geo:R` (real `|R| < 1`) or `file:PATH`.
/// Presets are expanded to the requested degree.
pub fn parse_function_spec(spec: &str, degree: usize) -> Result<CoefficientSeries> {
    let spec = spec.trim();
    match spec.split_once(':') {
        None if spec == "zeta2" => Ok(CoefficientSeries::zeta2(degree)),
        Some(("geo", r)) => {
            let r: f64 = r
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("geo ratio `{r}` is not a number")))?;
            CoefficientSeries::geometric(Complex64::new(r, 0.0), degree)
        }
        Some(("file", path)) => CoefficientSeries::read_file(Path::new(path)),
        _ => Err(Error::Parse(format!("unknown function spec `{spec}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(v: &[f64]) -> CoefficientSeries {
        CoefficientSeries::from_real(v).unwrap()
    }

    #[test]
    fn taylor_partial_sum_examples() {
        assert_eq!(real(&[1.0, 2.0, 3.0]).taylor_partial_sum(1), real(&[1.0, 2.0]));
        assert_eq!(
            real(&[1.0, 2.0, 3.0]).taylor_partial_sum(5),
            real(&[1.0, 2.0, 3.0, 0.0, 0.0, 0.0])
        );
        assert_eq!(real(&[7.0]).taylor_partial_sum(0), real(&[7.0]));
    }

    #[test]
    fn hadamard_examples() {
        assert_eq!(
            real(&[1.0, 2.0]).hadamard_product(&real(&[3.0, 4.0])),
            real(&[3.0, 8.0])
        );
        let f = CoefficientSeries::new(vec![c(1.0, -2.0), c(0.5, 3.0), c(-4.0, 0.0)]).unwrap();
        assert_eq!(f.hadamard_product(&real(&[1.0, 1.0, 1.0])), f);
        assert_eq!(
            real(&[1.0, 2.0, 3.0]).hadamard_product(&real(&[0.0; 3])),
            real(&[0.0; 3])
        );
        assert_eq!(real(&[1.0, 2.0, 3.0]).hadamard_product(&real(&[2.0])).len(), 1);
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(real(&[1.0, 1.0, 1.0]).evaluate(c(1.0, 0.0)), c(3.0, 0.0));
        assert_eq!(real(&[0.0, 1.0]).evaluate(c(0.0, 1.0)), c(0.0, 1.0));
        // 1 + 2(0.5) + 3(0.25)
        let direct = 1.0 + 2.0 * 0.5 + 3.0 * 0.25;
        assert_eq!(direct, 2.75);
        assert_eq!(real(&[1.0, 2.0, 3.0]).evaluate(c(0.5, 0.0)), c(direct, 0.0));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(real(&[5.0]).derivative(), real(&[0.0]));
        assert_eq!(real(&[0.0, 0.0, 1.0]).derivative(), real(&[0.0, 2.0]));
        assert_eq!(real(&[1.0, 1.0, 1.0, 1.0]).derivative(), real(&[1.0, 2.0, 3.0]));
    }

    #[test]
    fn aleman_divide_examples() {
        let (a, g) = real(&[0.0, 1.0]).aleman_divide(c(0.0, 0.0)).unwrap();
        assert_eq!(a, c(0.0, 0.0));
        assert_eq!(g, real(&[1.0]));

        let (a, g) = real(&[0.0, 0.0, 1.0]).aleman_divide(c(1.0, 0.0)).unwrap();
        assert_eq!(a, c(1.0, 0.0));
        assert_eq!(g, real(&[1.0, 1.0]));

        // Multiply back: a + (z - zeta) g.
        let f = real(&[1.0, 2.0, 3.0]);
        let zeta = c(0.5, 0.0);
        let (a, g) = f.aleman_divide(zeta).unwrap();
        let shifted =
            CoefficientSeries::new(std::iter::once(c(0.0, 0.0)).chain(g.coeffs().iter().copied()).collect()).unwrap();
        let back = shifted.sub(&g.scale(zeta)).add(&CoefficientSeries::constant(a));
        for k in 0..3 {
            assert!((back.coeff(k) - f.coeff(k)).norm() <= 1e-14);
        }
        assert_eq!(a, f.evaluate(zeta));

        assert_eq!(
            real(&[4.0]).aleman_divide(c(0.3, 0.1)).unwrap(),
            (c(4.0, 0.0), CoefficientSeries::zero())
        );
        assert!(matches!(
            f.aleman_divide(c(1.0, 0.1)),
            Err(Error::PointOutsideDisk { .. })
        ));
        assert!(f.aleman_divide(c(1.0 + 1e-13, 0.0)).is_ok());
    }

    #[test]
    fn degree_and_invariants() {
        assert_eq!(real(&[0.0]).degree(), 0);
        assert_eq!(real(&[1.0, 2.0, 0.0, 0.0]).degree(), 1);
        assert!(CoefficientSeries::new(vec![]).is_err());
        assert!(CoefficientSeries::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(CoefficientSeries::new(vec![c(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn norms() {
        assert_eq!(real(&[1.0, 2.0]).h2_norm_sq(), 5.0);
        assert_eq!(real(&[0.0]).h2_norm_sq(), 0.0);
        assert_eq!(
            CoefficientSeries::new(vec![c(0.0, 1.0), c(1.0, -1.0)])
                .unwrap()
                .h2_norm_sq(),
            3.0
        );
    }

    #[test]
    fn presets_and_files() {
        let z = parse_function_spec("zeta2", 3).unwrap();
        assert_eq!(z, real(&[1.0, 0.25, 1.0 / 9.0, 1.0 / 16.0]));
        let g = parse_function_spec("geo:0.5", 2).unwrap();
        assert_eq!(g, real(&[1.0, 0.5, 0.25]));
        assert!(parse_function_spec("geo:1.5", 2).is_err());
        assert!(parse_function_spec("sin", 2).is_err());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.txt");
        let f = CoefficientSeries::new(vec![c(1.0, -0.1), c(1.0 / 3.0, 2.5e-300)]).unwrap();
        f.write_file(&path).unwrap();
        let back = parse_function_spec(&format!("file:{}", path.display()), 0).unwrap();
        assert_eq!(back, f);

        std::fs::write(&path, "1 0\n2\n").unwrap();
        assert!(CoefficientSeries::read_file(&path).is_err());
        std::fs::write(&path, "1 0\n2 0 3\n").unwrap();
        assert!(CoefficientSeries::read_file(&path).is_err());
        std::fs::write(&path, "1 0\n2 0.5\n\n").unwrap();
        assert_eq!(CoefficientSeries::read_file(&path).unwrap().len(), 2);
    }
}
