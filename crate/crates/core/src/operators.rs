//! Matrix realizations of weighted composition-differentiation operators.
//!
//! `D_{k,ψ,φ} f = ψ · (f^{(k)} ∘ φ)` and `L = Σ c_k D_{k,ψ_k,φ}` are assembled
//! column by column: the image of `z^j` is `ψ · j!/(j-k)! · φ^{j-k}`, which is
//! an exact product of truncated series, and is then rescaled into the
//! orthonormal `γ` basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;
use crate::series::{binomial_kernel_series, falling_factorial, TruncatedSeries};
use crate::space::{check_in_disk, SpaceContext};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Radius and angle count used to probe `|φ|` near the unit circle.
pub const SELF_MAP_RADIUS: f64 = 0.999;
pub const SELF_MAP_ANGLES: usize = 256;
pub const SELF_MAP_MARGIN: f64 = 1e-9;

const UNIMODULAR_TOL: f64 = 1e-12;

/// Where a symbol set came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Explicit,
    /// `ψ_k = a_k z^k / (1-ηbz)^{k+α+2}`, `φ = b + c_φ z/(1-ηbz)`.
    CanonicalSymmetric {
        a: Vec<Complex64>,
        b: Complex64,
        c_phi: Complex64,
        eta: Complex64,
    },
    /// `ψ_k = a_k z^k / (1-b̄z)^{k+α+2}`, `φ = b + c_φ z/(1-b̄z)` with real `a_k`, `c_φ`.
    CanonicalHermitian {
        a: Vec<f64>,
        b: Complex64,
        c_phi: f64,
    },
}

/// Data defining `L = Σ_{k=1}^{n} c_k D_{k,ψ_k,φ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSet {
    weights: Vec<Complex64>,
    psi: Vec<TruncatedSeries>,
    phi: TruncatedSeries,
    alpha: f64,
    provenance: Provenance,
}

impl SymbolSet {
    pub fn explicit(
        ctx: &SpaceContext,
        weights: Vec<Complex64>,
        psi: Vec<TruncatedSeries>,
        phi: TruncatedSeries,
    ) -> Result<Self> {
        let s = Self {
            weights,
            psi,
            phi,
            alpha: ctx.alpha(),
            provenance: Provenance::Explicit,
        };
        s.validate(ctx)?;
        Ok(s)
    }

    pub fn canonical_symmetric(
        ctx: &SpaceContext,
        weights: Vec<Complex64>,
        a: Vec<Complex64>,
        b: Complex64,
        c_phi: Complex64,
        eta: Complex64,
    ) -> Result<Self> {
        check_unimodular("eta", eta)?;
        Self::canonical(
            ctx,
            weights,
            a.clone(),
            b,
            c_phi,
            eta * b,
            Provenance::CanonicalSymmetric { a, b, c_phi, eta },
        )
    }

    pub fn canonical_hermitian(
        ctx: &SpaceContext,
        weights: Vec<Complex64>,
        a: Vec<f64>,
        b: Complex64,
        c_phi: f64,
    ) -> Result<Self> {
        let ac = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::canonical(
            ctx,
            weights,
            ac,
            b,
            Complex64::new(c_phi, 0.0),
            b.conj(),
            Provenance::CanonicalHermitian { a, b, c_phi },
        )
    }

    /// Shared expansion; `pole` is the `q` in `(1 - q z)`.
    fn canonical(
        ctx: &SpaceContext,
        weights: Vec<Complex64>,
        a: Vec<Complex64>,
        b: Complex64,
        c_phi: Complex64,
        pole: Complex64,
        provenance: Provenance,
    ) -> Result<Self> {
        if a.len() != weights.len() {
            return Err(Error::InvalidSymbols(format!(
                "{} weights but {} psi coefficients",
                weights.len(),
                a.len()
            )));
        }
        if b.norm().is_nan() || b.norm() >= 1.0 {
            return Err(Error::NotSelfMap(b.norm()));
        }
        let n = ctx.degree();
        let alpha = ctx.alpha();
        let psi = a
            .iter()
            .enumerate()
            .map(|(i, &ak)| {
                let k = i + 1;
                binomial_kernel_series(pole, k as f64 + alpha + 2.0, n)
                    .shift(k)
                    .scale(ak)
            })
            .collect();
        // b + c z Σ q^j z^j
        let phi = binomial_kernel_series(pole, 1.0, n)
            .shift(1)
            .scale(c_phi)
            .add(&TruncatedSeries::constant(b, n))?;
        let s = Self {
            weights,
            psi,
            phi,
            alpha,
            provenance,
        };
        s.validate(ctx)?;
        Ok(s)
    }

    fn validate(&self, ctx: &SpaceContext) -> Result<()> {
        if self.weights.is_empty() {
            return Err(Error::InvalidSymbols(
                "at least one term is required".into(),
            ));
        }
        if self.weights.len() != self.psi.len() {
            return Err(Error::InvalidSymbols(format!(
                "{} weights but {} psi series",
                self.weights.len(),
                self.psi.len()
            )));
        }
        if self.order() > ctx.degree() {
            return Err(Error::OrderTooLarge {
                order: self.order(),
                degree: ctx.degree(),
            });
        }
        for f in self.psi.iter().chain(std::iter::once(&self.phi)) {
            if f.degree() != ctx.degree() {
                return Err(Error::DegreeMismatch {
                    left: f.degree(),
                    right: ctx.degree(),
                });
            }
        }
        if self
            .weights
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidSymbols("non-finite weight".into()));
        }
        let max = self.max_phi_on_circle();
        if max.is_nan() || max >= 1.0 - SELF_MAP_MARGIN {
            return Err(Error::NotSelfMap(max));
        }
        Ok(())
    }

    /// `max |φ(r e^{iθ})|` over the self-map probe circle.
    pub fn max_phi_on_circle(&self) -> f64 {
        (0..SELF_MAP_ANGLES)
            .map(|t| {
                let theta = 2.0 * std::f64::consts::PI * t as f64 / SELF_MAP_ANGLES as f64;
                self.eval_phi(Complex64::from_polar(SELF_MAP_RADIUS, theta))
                    .norm()
            })
            .fold(
                0.0,
                |m, x| if x.is_nan() { f64::INFINITY } else { m.max(x) },
            )
    }

    /// Number of terms `n`.
    pub fn order(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn psi(&self) -> &[TruncatedSeries] {
        &self.psi
    }

    pub fn phi(&self) -> &TruncatedSeries {
        &self.phi
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Replaces the weights `c_k`; the result is revalidated.
    pub fn with_weights(&self, weights: Vec<Complex64>) -> Result<Self> {
        if weights.len() != self.order() {
            return Err(Error::InvalidSymbols("weight count changed".into()));
        }
        Ok(Self {
            weights,
            ..self.clone()
        })
    }

    /// Adds `delta` to `ψ_k` (1-based `k`); provenance becomes explicit.
    pub fn perturb_psi(
        &self,
        ctx: &SpaceContext,
        k: usize,
        delta: &TruncatedSeries,
    ) -> Result<Self> {
        let mut psi = self.psi.clone();
        let slot = psi
            .get_mut(k.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidSymbols(format!("no psi_{k}")))?;
        *slot = slot.add(delta)?;
        Self::explicit(ctx, self.weights.clone(), psi, self.phi.clone())
    }

    /// Adds `delta` to `φ`; provenance becomes explicit.
    pub fn perturb_phi(&self, ctx: &SpaceContext, delta: &TruncatedSeries) -> Result<Self> {
        Self::explicit(
            ctx,
            self.weights.clone(),
            self.psi.clone(),
            self.phi.add(delta)?,
        )
    }

    /// `ψ_k(z)` for 1-based `k`; closed form for canonical families.
    pub fn eval_psi(&self, k: usize, z: Complex64) -> Complex64 {
        match &self.provenance {
            Provenance::Explicit => self.psi[k - 1].evaluate(z),
            Provenance::CanonicalSymmetric { a, b, eta, .. } => {
                a[k - 1]
                    * z.powu(k as u32)
                    * (ONE - eta * b * z).powf(-(k as f64 + self.alpha + 2.0))
            }
            Provenance::CanonicalHermitian { a, b, .. } => {
                a[k - 1]
                    * z.powu(k as u32)
                    * (ONE - b.conj() * z).powf(-(k as f64 + self.alpha + 2.0))
            }
        }
    }

    /// `φ(z)`; closed form for canonical families.
    pub fn eval_phi(&self, z: Complex64) -> Complex64 {
        match &self.provenance {
            Provenance::Explicit => self.phi.evaluate(z),
            Provenance::CanonicalSymmetric { b, c_phi, eta, .. } => {
                b + c_phi * z / (ONE - eta * b * z)
            }
            Provenance::CanonicalHermitian { b, c_phi, .. } => b + c_phi * z / (ONE - b.conj() * z),
        }
    }

    /// `min{k : c_k ≠ 0}` (1-based), or `None` when every weight vanishes.
    pub fn min_nonzero_index(&self) -> Option<usize> {
        self.weights.iter().position(|c| *c != ZERO).map(|i| i + 1)
    }

    /// True when no `ψ_k` vanishes identically.
    pub fn psi_all_nonzero(&self) -> bool {
        self.psi.iter().all(|p| !p.is_zero())
    }
}

fn check_unimodular(name: &'static str, v: Complex64) -> Result<()> {
    let modulus = v.norm();
    if (modulus - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::NotUnimodular { name, modulus });
    }
    Ok(())
}

/// The antilinear map `C_{μ,η} f(z) = μ · conj(f(conj(η z)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjugation {
    mu: Complex64,
    eta: Complex64,
}

impl Conjugation {
    pub fn new(mu: Complex64, eta: Complex64) -> Result<Self> {
        check_unimodular("mu", mu)?;
        check_unimodular("eta", eta)?;
        Ok(Self { mu, eta })
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    /// Coefficient `j` maps to `μ η^j conj(f_j)`.
    pub fn apply(&self, f: &TruncatedSeries) -> TruncatedSeries {
        let coeffs: Vec<Complex64> = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, a)| self.mu * self.eta.powu(j as u32) * a.conj())
            .collect();
        TruncatedSeries::from_coeffs(&coeffs, f.degree())
    }

    /// Same map on `γ`-basis coordinates; the basis scales are real, so the
    /// phases are unchanged.
    pub fn apply_coords(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.iter()
            .enumerate()
            .map(|(j, a)| self.mu * self.eta.powu(j as u32) * a.conj())
            .collect()
    }

    /// Matrix of `C T* C` for the operator `T` with matrix `m`:
    /// entry `(i, j)` is `η^i conj(η^j) m_{ji}`. `μ` cancels.
    pub fn transform(&self, m: &OperatorMatrix) -> OperatorMatrix {
        let phases: Vec<Complex64> = (0..m.dim()).map(|j| self.eta.powu(j as u32)).collect();
        OperatorMatrix::from_fn(m.dim(), |i, j| phases[i] * phases[j].conj() * m[(j, i)])
    }
}

/// `conjugate` in free-function form.
pub fn conjugate(conj: &Conjugation, f: &TruncatedSeries) -> TruncatedSeries {
    conj.apply(f)
}

pub fn conjugation_transform(conj: &Conjugation, m: &OperatorMatrix) -> OperatorMatrix {
    conj.transform(m)
}

/// Matrix of `D_{k,ψ,φ}` in the `γ` basis.
pub fn assemble_d(
    ctx: &SpaceContext,
    psi: &TruncatedSeries,
    phi: &TruncatedSeries,
    k: usize,
) -> Result<OperatorMatrix> {
    if k == 0 || k > ctx.degree() {
        return Err(Error::OrderTooLarge {
            order: k,
            degree: ctx.degree(),
        });
    }
    for f in [psi, phi] {
        if f.degree() != ctx.degree() {
            return Err(Error::DegreeMismatch {
                left: f.degree(),
                right: ctx.degree(),
            });
        }
    }
    Ok(assemble_terms(ctx, &[(ONE, psi, k)], phi))
}

/// Matrix of `L = Σ c_k D_{k,ψ_k,φ}` in the `γ` basis.
pub fn assemble_l(ctx: &SpaceContext, s: &SymbolSet) -> Result<OperatorMatrix> {
    if s.phi.degree() != ctx.degree() {
        return Err(Error::DegreeMismatch {
            left: s.phi.degree(),
            right: ctx.degree(),
        });
    }
    let terms: Vec<(Complex64, &TruncatedSeries, usize)> = s
        .weights
        .iter()
        .zip(&s.psi)
        .enumerate()
        .filter(|(_, (c, _))| **c != ZERO)
        .map(|(i, (c, p))| (*c, p, i + 1))
        .collect();
    Ok(assemble_terms(ctx, &terms, &s.phi))
}

fn assemble_terms(
    ctx: &SpaceContext,
    terms: &[(Complex64, &TruncatedSeries, usize)],
    phi: &TruncatedSeries,
) -> OperatorMatrix {
    let n = ctx.degree();
    let scale = ctx.basis_scale();
    let mut m = OperatorMatrix::zeros(n + 1);
    // phi_pows[p] = φ^p
    let mut phi_pows = vec![TruncatedSeries::one(n)];
    for j in 0..=n {
        let mut column = TruncatedSeries::zero(n);
        for &(c, psi, k) in terms {
            if j < k {
                continue;
            }
            while phi_pows.len() <= j - k {
                let next = phi_pows
                    .last()
                    .unwrap()
                    .multiply(phi)
                    .expect("equal degrees");
                phi_pows.push(next);
            }
            let factor = c * falling_factorial(j, k);
            let image = psi.multiply(&phi_pows[j - k]).expect("equal degrees");
            column = column.add(&image.scale(factor)).expect("equal degrees");
        }
        // γ_j = s_j z^j, coordinates of a series are f_i / s_i
        let coords: Vec<Complex64> = column
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| a * (scale[j] / scale[i]))
            .collect();
        m.set_column(j, &coords);
    }
    m
}

/// Conjugate transpose; the adjoint in the orthonormal `γ` basis.
pub fn adjoint(m: &OperatorMatrix) -> OperatorMatrix {
    m.adjoint()
}

/// Closed form `L* K_w = Σ conj(c_k ψ_k(w)) K^{[k]}_{φ(w)}`.
pub fn adjoint_on_kernel(
    ctx: &SpaceContext,
    s: &SymbolSet,
    w: Complex64,
) -> Result<TruncatedSeries> {
    check_in_disk(w)?;
    let phi_w = s.eval_phi(w);
    if phi_w.norm().is_nan() || phi_w.norm() >= 1.0 {
        return Err(Error::NotSelfMap(phi_w.norm()));
    }
    let mut out = TruncatedSeries::zero(ctx.degree());
    for (i, c) in s.weights.iter().enumerate() {
        if *c == ZERO {
            continue;
        }
        let k = i + 1;
        let factor = (c * s.eval_psi(k, w)).conj();
        out = out.add(&ctx.derivative_kernel(phi_w, k)?.scale(factor))?;
    }
    Ok(out)
}

/// Closed form of `L C_{μ,η} K_w`:
/// `Σ c_k p_k μ (ηw)^k ψ_k / (1 - ηw φ)^{k+α+2}` as a truncated series.
pub fn conjugated_kernel_image(
    ctx: &SpaceContext,
    s: &SymbolSet,
    conj: &Conjugation,
    w: Complex64,
) -> Result<TruncatedSeries> {
    check_in_disk(w)?;
    let n = ctx.degree();
    let ew = conj.eta() * w;
    let base = TruncatedSeries::one(n).sub(&s.phi.scale(ew))?;
    let mut out = TruncatedSeries::zero(n);
    for (i, c) in s.weights.iter().enumerate() {
        if *c == ZERO {
            continue;
        }
        let k = i + 1;
        let factor = c * ctx.p(k) * conj.mu() * ew.powu(k as u32);
        let denom = base.real_power(-(k as f64 + ctx.alpha() + 2.0))?;
        out = out.add(&s.psi[i].multiply(&denom)?.scale(factor))?;
    }
    Ok(out)
}
