//! Truncated power series with complex coefficients.
//!
//! A [`TruncatedSeries`] of degree `N` stores the Taylor coefficients
//! `a_0..=a_N` of an analytic function at the origin. Sums and Cauchy
//! products are exact on that prefix: the low coefficients of a product only
//! depend on the low coefficients of its factors, so anything above `N` can be
//! dropped without contaminating what is kept.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![ZERO; degree + 1],
        }
    }

    pub fn one(degree: usize) -> Self {
        Self::constant(ONE, degree)
    }

    pub fn constant(value: Complex64, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = value;
        s
    }

    /// `value * z^power`; vanishes when `power > degree`.
    pub fn monomial(power: usize, value: Complex64, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        if power <= degree {
            s.coeffs[power] = value;
        }
        s
    }

    /// Builds a series of the given degree from leading coefficients.
    /// Missing coefficients are zero; coefficients beyond `degree` are dropped.
    pub fn from_coeffs(coeffs: &[Complex64], degree: usize) -> Self {
        let mut s = Self::zero(degree);
        for (dst, src) in s.coeffs.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        s
    }

    pub fn from_real(coeffs: &[f64], degree: usize) -> Self {
        let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_coeffs(&c, degree)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or(ZERO)
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// Cauchy product truncated at the common degree.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let n = self.degree();
        let mut out = vec![ZERO; n + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (j, &b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self { coeffs: out })
    }

    /// `k`-th derivative. The top `k` coefficients of the result cannot be
    /// known from a degree-`N` prefix; they are set to zero, so only
    /// coefficients `0..=N-k` are meaningful.
    pub fn differentiate(&self, order: usize) -> Self {
        let n = self.degree();
        let mut out = vec![ZERO; n + 1];
        if order <= n {
            for (j, slot) in out[..=n - order].iter_mut().enumerate() {
                *slot = self.coeffs[j + order] * falling_factorial(j + order, order);
            }
        }
        Self { coeffs: out }
    }

    /// Horner evaluation of the stored polynomial.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &a| acc * z + a)
    }

    pub fn pow(&self, exponent: usize) -> Self {
        let mut result = Self::one(self.degree());
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = result.multiply(&base).expect("equal degrees");
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base).expect("equal degrees");
            }
        }
        result
    }

    /// Multiplies by `z^k`, discarding coefficients pushed past the degree.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.degree();
        let mut out = vec![ZERO; n + 1];
        if k <= n {
            out[k..].copy_from_slice(&self.coeffs[..=n - k]);
        }
        Self { coeffs: out }
    }

    /// Real power `self^p` on the principal branch, for a series with a
    /// nonzero constant term.
    pub fn real_power(&self, p: f64) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 == ZERO {
            return Err(Error::InvalidSymbols(
                "real power of a series with vanishing constant term".into(),
            ));
        }
        let n = self.degree();
        let mut g = vec![ZERO; n + 1];
        g[0] = a0.powf(p);
        for j in 1..=n {
            let mut acc = ZERO;
            for i in 1..=j {
                acc += self.coeffs[i] * g[j - i] * ((p + 1.0) * i as f64 - j as f64);
            }
            g[j] = acc / (a0 * j as f64);
        }
        Ok(Self { coeffs: g })
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }
}

/// `m (m-1) ... (m-k+1)` as a float; equals `m!/(m-k)!`.
pub fn falling_factorial(m: usize, k: usize) -> f64 {
    if k > m {
        return 0.0;
    }
    ((m - k + 1)..=m).fold(1.0, |acc, x| acc * x as f64)
}

/// Taylor coefficients of `(1 - q z)^(-s)` up to degree `degree`.
///
/// Coefficient `j` is `Γ(s+j)/(Γ(s) j!) q^j`, accumulated by the ratio
/// `(s+j-1)/j` so large degrees never touch the Gamma function.
pub fn binomial_kernel_series(q: Complex64, s: f64, degree: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut c = ONE;
    coeffs.push(c);
    for j in 1..=degree {
        c = c * q * ((s + j as f64 - 1.0) / j as f64);
        coeffs.push(c);
    }
    TruncatedSeries { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &TruncatedSeries, b: &TruncatedSeries, tol: f64) -> bool {
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn add_examples() {
        let a = TruncatedSeries::from_real(&[1.0, 1.0], 4);
        let b = TruncatedSeries::from_real(&[1.0, -1.0], 4);
        assert_eq!(a.add(&b).unwrap(), TruncatedSeries::from_real(&[2.0], 4));
        assert_eq!(a.add(&TruncatedSeries::zero(4)).unwrap(), a);
        let z2 = TruncatedSeries::monomial(2, ONE, 4);
        let z2x3 = TruncatedSeries::monomial(2, c(3.0, 0.0), 4);
        assert_eq!(
            z2.add(&z2x3).unwrap(),
            TruncatedSeries::monomial(2, c(4.0, 0.0), 4)
        );
    }

    #[test]
    fn mismatched_degrees_are_rejected() {
        let a = TruncatedSeries::zero(3);
        let b = TruncatedSeries::zero(4);
        assert_eq!(a.add(&b), Err(Error::DegreeMismatch { left: 3, right: 4 }));
        assert!(a.multiply(&b).is_err());
    }

    #[test]
    fn scale_examples() {
        let z = TruncatedSeries::monomial(1, ONE, 3);
        assert!(z.scale(ZERO).is_zero());
        let f = TruncatedSeries::from_real(&[1.0, 1.0], 3);
        assert_eq!(
            f.scale(Complex64::i()),
            TruncatedSeries::from_coeffs(&[Complex64::i(), Complex64::i()], 3)
        );
        assert_eq!(f.scale(ONE), f);
    }

    #[test]
    fn multiply_examples() {
        let a = TruncatedSeries::from_real(&[1.0, 1.0], 4);
        let b = TruncatedSeries::from_real(&[1.0, -1.0], 4);
        assert_eq!(
            a.multiply(&b).unwrap(),
            TruncatedSeries::from_real(&[1.0, 0.0, -1.0], 4)
        );

        let n = 6;
        let z = TruncatedSeries::monomial(1, ONE, n);
        let zn = TruncatedSeries::monomial(n, ONE, n);
        assert!(z.multiply(&zn).unwrap().is_zero());

        // (1+2z+z^2)^2 by hand: 1, 4, 6, 4, 1
        let p = TruncatedSeries::from_real(&[1.0, 2.0, 1.0], 5);
        assert_eq!(
            p.multiply(&p).unwrap(),
            TruncatedSeries::from_real(&[1.0, 4.0, 6.0, 4.0, 1.0], 5)
        );
    }

    #[test]
    fn differentiate_examples() {
        let z2 = TruncatedSeries::monomial(2, ONE, 5);
        assert_eq!(
            z2.differentiate(1),
            TruncatedSeries::monomial(1, c(2.0, 0.0), 5)
        );
        let z3 = TruncatedSeries::monomial(3, ONE, 5);
        assert!(z3.differentiate(4).is_zero());
        let f = TruncatedSeries::from_real(&[0.0, 1.0, 0.0, 1.0], 5);
        assert_eq!(
            f.differentiate(2),
            TruncatedSeries::monomial(1, c(6.0, 0.0), 5)
        );
        // order larger than the degree
        assert!(f.differentiate(9).is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let f = TruncatedSeries::from_real(&[1.0, 1.0], 3);
        assert_eq!(f.evaluate(ZERO), ONE);
        let z3 = TruncatedSeries::monomial(3, ONE, 3);
        assert_eq!(z3.evaluate(c(2.0, 0.0)), c(8.0, 0.0));

        let n = 15;
        let mut coeffs = vec![1.0];
        for j in 1..=n {
            let prev = coeffs[j - 1];
            coeffs.push(prev / j as f64);
        }
        let exp = TruncatedSeries::from_real(&coeffs, n);
        let bound = std::f64::consts::E / (1..=n + 1).fold(1.0, |a, x| a * x as f64);
        let err = (exp.evaluate(ONE) - c(std::f64::consts::E, 0.0)).norm();
        assert!(err <= bound, "err {err} bound {bound}");
    }

    #[test]
    fn pow_examples() {
        let f = TruncatedSeries::from_real(&[0.3, -2.0, 1.5], 6);
        assert_eq!(f.pow(0), TruncatedSeries::one(6));
        let z = TruncatedSeries::monomial(1, ONE, 6);
        assert_eq!(z.pow(3), TruncatedSeries::monomial(3, ONE, 6));
        let g = TruncatedSeries::from_real(&[1.0, 1.0], 6);
        assert_eq!(g.pow(2), TruncatedSeries::from_real(&[1.0, 2.0, 1.0], 6));
        let mut naive = TruncatedSeries::one(6);
        for _ in 0..5 {
            naive = naive.multiply(&f).unwrap();
        }
        assert!(close(&f.pow(5), &naive, 1e-12));
    }

    #[test]
    fn binomial_kernel_examples() {
        assert_eq!(
            binomial_kernel_series(ZERO, 2.5, 6),
            TruncatedSeries::one(6)
        );
        // (1-z)^-2 = sum (j+1) z^j
        let s = binomial_kernel_series(ONE, 2.0, 10);
        for (j, a) in s.coeffs().iter().enumerate() {
            assert_eq!(*a, c(j as f64 + 1.0, 0.0));
        }
    }

    #[test]
    fn binomial_kernel_matches_direct_power() {
        let alpha = 0.7;
        let w = c(0.3, -0.4);
        let s = binomial_kernel_series(w.conj(), alpha + 2.0, 80);
        for z in [c(0.2, 0.1), c(-0.5, 0.3), c(0.0, -0.6)] {
            let direct = (ONE - w.conj() * z).powf(-(alpha + 2.0));
            assert!((s.evaluate(z) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn binomial_kernel_matches_gamma_ratio() {
        // Γ(s+k)/(Γ(s) k!) = prod_{i=0}^{k-1} (s+i)/(i+1), evaluated in log space
        for &s in &[0.5, 2.0, 3.7, 10.0] {
            for &q in &[c(0.9, 0.0), c(0.3, -0.6), c(-0.5, 0.5)] {
                let series = binomial_kernel_series(q, s, 60);
                for k in 0..=60usize {
                    let log_ratio: f64 = (0..k)
                        .map(|i| ((s + i as f64) / (i as f64 + 1.0)).ln())
                        .sum();
                    let expected = q.powu(k as u32) * log_ratio.exp();
                    let got = series.coeff(k);
                    assert!(
                        (got - expected).norm() <= 1e-12 * expected.norm().max(1e-300),
                        "s={s} q={q} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn real_power_inverts_binomial() {
        let q = c(0.4, 0.2);
        let base = TruncatedSeries::from_coeffs(&[ONE, -q], 30);
        let via_power = base.real_power(-2.5).unwrap();
        let via_binomial = binomial_kernel_series(q, 2.5, 30);
        assert!(close(&via_power, &via_binomial, 1e-13));
        assert!(TruncatedSeries::zero(3).real_power(2.0).is_err());
    }

    #[test]
    fn shift_drops_overflow() {
        let f = TruncatedSeries::from_real(&[1.0, 2.0, 3.0], 3);
        assert_eq!(
            f.shift(2),
            TruncatedSeries::from_real(&[0.0, 0.0, 1.0, 2.0], 3)
        );
        assert!(f.shift(4).is_zero());
    }
}
