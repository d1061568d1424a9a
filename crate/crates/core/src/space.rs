//! The weighted Bergman space `A²_α` truncated to polynomials of degree `N`.
//!
//! Monomials are orthogonal with `‖z^j‖² = j! Γ(α+2) / Γ(j+α+2)`, so the
//! inner product of two truncated series is a weighted coefficient sum and
//! the scaled monomials `γ_j = z^j / ‖z^j‖` form an orthonormal basis.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{binomial_kernel_series, TruncatedSeries};

pub const DEFAULT_DEGREE: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceContext {
    alpha: f64,
    degree: usize,
    norm_sq: Vec<f64>,
    basis_scale: Vec<f64>,
}

impl SpaceContext {
    pub fn new(alpha: f64, degree: usize) -> Result<Self> {
        if !alpha.is_finite() || alpha <= -1.0 {
            return Err(Error::InvalidAlpha(alpha));
        }
        // ratio ‖z^{j+1}‖²/‖z^j‖² = (j+1)/(j+α+2)
        let mut norm_sq = Vec::with_capacity(degree + 1);
        norm_sq.push(1.0);
        for j in 0..degree {
            let next = norm_sq[j] * (j as f64 + 1.0) / (j as f64 + alpha + 2.0);
            norm_sq.push(next);
        }
        let basis_scale = norm_sq.iter().map(|n| 1.0 / n.sqrt()).collect();
        Ok(Self {
            alpha,
            degree,
            norm_sq,
            basis_scale,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    /// `‖z^j‖²` for `j = 0..=N`.
    pub fn norm_sq(&self) -> &[f64] {
        &self.norm_sq
    }

    /// `s_j` with `γ_j = s_j z^j`.
    pub fn basis_scale(&self) -> &[f64] {
        &self.basis_scale
    }

    fn check(&self, f: &TruncatedSeries) -> Result<()> {
        if f.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: f.degree(),
                right: self.degree,
            });
        }
        Ok(())
    }

    pub fn inner_product(&self, f: &TruncatedSeries, g: &TruncatedSeries) -> Result<Complex64> {
        self.check(f)?;
        self.check(g)?;
        Ok(f.coeffs()
            .iter()
            .zip(g.coeffs())
            .zip(&self.norm_sq)
            .map(|((a, b), w)| a * b.conj() * *w)
            .sum())
    }

    pub fn norm(&self, f: &TruncatedSeries) -> Result<f64> {
        Ok(self.inner_product(f, f)?.re.max(0.0).sqrt())
    }

    /// The orthonormal basis element `γ_j` as a series.
    pub fn basis_element(&self, j: usize) -> TruncatedSeries {
        TruncatedSeries::monomial(j, Complex64::new(self.basis_scale[j], 0.0), self.degree)
    }

    /// `p_n = (α+2)(α+3)...(α+n+1)`, with `p_0 = 1`.
    pub fn p(&self, n: usize) -> f64 {
        (0..n).fold(1.0, |acc, i| acc * (self.alpha + 2.0 + i as f64))
    }

    /// `K_w(z) = (1 - w̄ z)^{-(α+2)}`.
    pub fn reproducing_kernel(&self, w: Complex64) -> Result<TruncatedSeries> {
        check_in_disk(w)?;
        Ok(binomial_kernel_series(
            w.conj(),
            self.alpha + 2.0,
            self.degree,
        ))
    }

    /// `K^{[n]}_w(z) = p_n z^n (1 - w̄ z)^{-(n+α+2)}`, the kernel of `f ↦ f^{(n)}(w)`.
    pub fn derivative_kernel(&self, w: Complex64, n: usize) -> Result<TruncatedSeries> {
        check_in_disk(w)?;
        if n > self.degree {
            return Err(Error::OrderTooLarge {
                order: n,
                degree: self.degree,
            });
        }
        let base = binomial_kernel_series(w.conj(), n as f64 + self.alpha + 2.0, self.degree);
        Ok(base.shift(n).scale(Complex64::new(self.p(n), 0.0)))
    }

    /// Coordinates of `f` in the `γ` basis: `v_j = f_j / s_j`.
    pub fn monomial_to_basis(&self, f: &TruncatedSeries) -> Result<Vec<Complex64>> {
        self.check(f)?;
        Ok(f.coeffs()
            .iter()
            .zip(&self.basis_scale)
            .map(|(a, s)| a / *s)
            .collect())
    }

    pub fn basis_to_monomial(&self, v: &[Complex64]) -> Result<TruncatedSeries> {
        if v.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        let coeffs: Vec<Complex64> = v
            .iter()
            .zip(&self.basis_scale)
            .map(|(a, s)| a * *s)
            .collect();
        Ok(TruncatedSeries::from_coeffs(&coeffs, self.degree))
    }
}

pub(crate) fn check_in_disk(w: Complex64) -> Result<()> {
    if w.norm().is_nan() || w.norm() >= 1.0 {
        return Err(Error::OutsideDisk { re: w.re, im: w.im });
    }
    Ok(())
}
