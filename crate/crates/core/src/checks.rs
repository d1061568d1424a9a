//! Numerical verifiers for the structural properties of `L`.
//!
//! Each checker assembles the truncated matrix, measures a residual on the
//! trusted block and compares it with a tolerance. Entries of the assembled
//! matrix are exact prefixes of the infinite matrix, but products such as
//! `M^H M` lose the rows beyond `N`, so maxima are taken over indices
//! `i, j <= N/2`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eigen::{eigenvalues, match_spectra, EigenOptions, EigenResult};
use crate::error::{Error, Result};
use crate::matrix::{vec_norm, OperatorMatrix};
use crate::operators::{adjoint_on_kernel, assemble_l, Conjugation, SymbolSet};
use crate::series::{falling_factorial, TruncatedSeries};
use crate::space::SpaceContext;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `|φ(0)|` below this counts as `φ(0) = 0`.
pub const FIXED_POINT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub symmetry: f64,
    pub hermitian: f64,
    pub normal: f64,
    /// Used in place of the above when `φ(0) = 0` and the matrix is diagonal.
    pub diagonal: f64,
    pub spectrum: f64,
    pub eigenvector: f64,
    pub adjoint_kernel: f64,
    pub kernel_zero: f64,
    /// Lower bound for `‖M e_j‖`, `‖M^H e_j‖` outside the predicted kernel.
    pub kernel_lower: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symmetry: 1e-8,
            hermitian: 1e-8,
            normal: 1e-8,
            diagonal: 1e-10,
            spectrum: 1e-8,
            eigenvector: 1e-12,
            adjoint_kernel: 1e-8,
            kernel_zero: 1e-10,
            kernel_lower: 1e-3,
        }
    }
}

impl Tolerances {
    /// Every tolerance set to `tol`, except the kernel lower bound.
    pub fn uniform(tol: f64) -> Self {
        Self {
            symmetry: tol,
            hermitian: tol,
            normal: tol,
            diagonal: tol,
            spectrum: tol,
            eigenvector: tol,
            adjoint_kernel: tol,
            kernel_zero: tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detail {
    pub label: String,
    pub value: f64,
}

impl Detail {
    fn new(label: impl Into<String>, value: f64) -> Self {
        Self {
            label: label.into(),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub hypothesis_met: bool,
    pub details: Vec<Detail>,
    #[serde(default)]
    pub tolerance_source: String,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl CheckReport {
    #[allow(clippy::too_many_arguments)]
    fn finish(
        name: &str,
        residual: f64,
        tolerance: f64,
        tolerance_source: &str,
        hypothesis_met: bool,
        extra_ok: bool,
        details: Vec<Detail>,
        notes: Vec<String>,
    ) -> Self {
        Self {
            name: name.to_string(),
            residual,
            tolerance,
            pass: hypothesis_met && extra_ok && residual <= tolerance,
            hypothesis_met,
            details,
            tolerance_source: tolerance_source.to_string(),
            notes,
        }
    }
}

/// Largest index of the trusted block.
pub fn trusted_degree(ctx: &SpaceContext) -> usize {
    ctx.degree() / 2
}

/// Fixed sample points with `|w| <= 0.5` used for kernel-vector residuals.
pub fn sample_points() -> Vec<Complex64> {
    let mut out = vec![ZERO];
    for (r, count) in [(0.25, 3), (0.5, 4)] {
        for t in 0..count {
            let theta = 2.0 * std::f64::consts::PI * (t as f64 + 0.3) / count as f64;
            out.push(Complex64::from_polar(r, theta));
        }
    }
    out
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample from the closed unit disk (area measure).
pub fn random_in_disk<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let t = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
    Complex64::from_polar(r, t)
}

/// Polynomial of degree `<= max_degree` with coefficients in the unit disk.
pub fn random_polynomial<R: Rng>(rng: &mut R, max_degree: usize, degree: usize) -> TruncatedSeries {
    let d = max_degree.min(degree);
    let coeffs: Vec<Complex64> = (0..=d).map(|_| random_in_disk(rng, 1.0)).collect();
    TruncatedSeries::from_coeffs(&coeffs, degree)
}

fn block_max(k: usize, f: impl Fn(usize, usize) -> f64) -> (f64, usize, usize) {
    let mut best = (0.0, 0, 0);
    for i in 0..=k {
        for j in 0..=k {
            let v = f(i, j);
            if v > best.0 || v.is_nan() {
                best = (v, i, j);
            }
        }
    }
    best
}

/// `max_{i,j <= k} |η^j m_ij - η^i m_ji|`; zero iff `m` is `C_{μ,η}`-symmetric on the block.
pub fn symmetry_residual(m: &OperatorMatrix, eta: Complex64, k: usize) -> f64 {
    let phases: Vec<Complex64> = (0..m.dim()).map(|j| eta.powu(j as u32)).collect();
    block_max(k.min(m.dim() - 1), |i, j| {
        (phases[j] * m[(i, j)] - phases[i] * m[(j, i)]).norm()
    })
    .0
}

pub fn hermitian_residual(m: &OperatorMatrix, k: usize) -> f64 {
    block_max(k.min(m.dim() - 1), |i, j| {
        (m[(i, j)] - m[(j, i)].conj()).norm()
    })
    .0
}

pub fn commutator_residual(m: &OperatorMatrix, k: usize) -> f64 {
    let mh = m.adjoint();
    let comm = mh.matmul(m).sub(&m.matmul(&mh));
    comm.max_abs_block(k + 1)
}

fn phi_fixes_origin(s: &SymbolSet) -> bool {
    s.phi().coeff(0).norm() <= FIXED_POINT_TOL
}

fn is_diagonal(m: &OperatorMatrix) -> bool {
    (0..m.dim()).all(|i| (0..m.dim()).all(|j| i == j || m[(i, j)] == ZERO))
}

/// Symmetry with respect to `C_{μ,η}`: the entrywise identity on the trusted
/// block plus `‖L C K_w - C L* K_w‖` on [`sample_points`].
pub fn check_symmetry(
    ctx: &SpaceContext,
    s: &SymbolSet,
    conj: &Conjugation,
    tol: &Tolerances,
) -> Result<CheckReport> {
    let m = assemble_l(ctx, s)?;
    let t = trusted_degree(ctx);
    let entry = symmetry_residual(&m, conj.eta(), t);
    let mut details = vec![Detail::new("entrywise", entry)];
    let mut residual = entry;
    for (idx, w) in sample_points().into_iter().enumerate() {
        let ckw = conj.apply_coords(&ctx.monomial_to_basis(&ctx.reproducing_kernel(w)?)?);
        let lhs = m.apply(&ckw);
        let rhs = conj.apply_coords(&ctx.monomial_to_basis(&adjoint_on_kernel(ctx, s, w)?)?);
        let r = lhs[..=t]
            .iter()
            .zip(&rhs[..=t])
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        details.push(Detail::new(format!("kernel_vector[{idx}]"), r));
        residual = residual.max(r);
    }
    let hypothesis = s.psi_all_nonzero();
    let mut notes = Vec::new();
    if !hypothesis {
        notes.push("hypothesis not met: some psi_k vanishes identically".into());
    }
    Ok(CheckReport::finish(
        "symmetry",
        residual,
        tol.symmetry,
        "symmetry default 1e-8 at N=64",
        hypothesis,
        true,
        details,
        notes,
    ))
}

pub fn check_hermitian(ctx: &SpaceContext, s: &SymbolSet, tol: &Tolerances) -> Result<CheckReport> {
    let m = assemble_l(ctx, s)?;
    let residual = hermitian_residual(&m, trusted_degree(ctx));
    let real_weights = s.weights().iter().all(|c| c.im == 0.0);
    let nonzero = s.psi_all_nonzero();
    let mut notes = Vec::new();
    if !real_weights {
        notes.push("hypothesis not met: weights c_k must be real".into());
    }
    if !nonzero {
        notes.push("hypothesis not met: some psi_k vanishes identically".into());
    }
    Ok(CheckReport::finish(
        "hermitian",
        residual,
        tol.hermitian,
        "hermitian default 1e-8 at N=64",
        real_weights && nonzero,
        true,
        vec![Detail::new("entrywise", residual)],
        notes,
    ))
}

/// `λ_m = Σ_{k<=min(m,n)} a_k c_k m!/(m-k)! c^{m-k}` with `a_k`, `c` read off
/// `ψ_k = a_k z^k` and `φ = c z`.
pub fn closed_form_spectrum(ctx: &SpaceContext, s: &SymbolSet) -> Result<Vec<Complex64>> {
    if !phi_fixes_origin(s) {
        return Err(Error::InvalidSymbols(
            "closed form requires phi(0)=0".into(),
        ));
    }
    let c_phi = s.phi().coeff(1);
    let a: Vec<Complex64> = s
        .psi()
        .iter()
        .enumerate()
        .map(|(i, p)| p.coeff(i + 1))
        .collect();
    Ok((0..=ctx.degree())
        .map(|m| {
            (1..=m.min(s.order()))
                .map(|k| {
                    a[k - 1]
                        * s.weights()[k - 1]
                        * falling_factorial(m, k)
                        * c_phi.powu((m - k) as u32)
                })
                .sum()
        })
        .collect())
}

/// Normality. Asserted only for `φ(0) = 0` with `L` symmetric; otherwise the
/// residuals are reported with `hypothesis_met = false`.
pub fn check_normal(
    ctx: &SpaceContext,
    s: &SymbolSet,
    conj: &Conjugation,
    tol: &Tolerances,
) -> Result<CheckReport> {
    let m = assemble_l(ctx, s)?;
    let t = trusted_degree(ctx);
    let comm = commutator_residual(&m, t);
    let mut details = vec![Detail::new("commutator", comm)];
    let mut notes = Vec::new();

    let fixes_origin = phi_fixes_origin(s);
    let symmetric = symmetry_residual(&m, conj.eta(), t) <= tol.symmetry;
    let nonzero = s.psi_all_nonzero();
    if !fixes_origin {
        notes.push("hypothesis not met: phi(0) != 0 (normality is open in this regime)".into());
    }
    if !symmetric {
        notes.push("hypothesis not met: L is not C_{mu,eta}-symmetric".into());
    }
    if !nonzero {
        notes.push("hypothesis not met: some psi_k vanishes identically".into());
    }
    let hypothesis = fixes_origin && symmetric && nonzero;

    let mut residual = comm;
    if fixes_origin {
        // ‖L γ_m‖ = |λ_m| = ‖L* γ_m‖
        let lambda = closed_form_spectrum(ctx, s)?;
        let mh = m.adjoint();
        for (idx, lam) in lambda.iter().enumerate().take(t + 1) {
            let col = vec_norm(&m.column(idx));
            let row = vec_norm(&mh.column(idx));
            let expected = lam.norm();
            let r = (col - expected).abs().max((row - expected).abs());
            details.push(Detail::new(format!("norm_identity[{idx}]"), r));
            residual = residual.max(r);
        }
    }
    let (tolerance, source) = if fixes_origin && is_diagonal(&m) {
        (tol.diagonal, "diagonal case default 1e-10")
    } else {
        (tol.normal, "normal default 1e-8 at N=64")
    };
    Ok(CheckReport::finish(
        "normal", residual, tolerance, source, hypothesis, true, details, notes,
    ))
}

/// Kernel of `L` and `L*`: the columns and rows `j < m_min` vanish and none
/// of the others does on the trusted block.
pub fn check_kernel(
    ctx: &SpaceContext,
    s: &SymbolSet,
    conj: &Conjugation,
    tol: &Tolerances,
) -> Result<CheckReport> {
    let m = assemble_l(ctx, s)?;
    let t = trusted_degree(ctx);
    let mh = m.adjoint();
    let mut notes = Vec::new();
    let mut details = Vec::new();

    let symmetric = symmetry_residual(&m, conj.eta(), t) <= tol.symmetry;
    let min_index = s.min_nonzero_index();
    let c_phi_nonzero = s.phi().coeff(1) != ZERO;
    if !symmetric {
        notes.push("hypothesis not met: L is not C_{mu,eta}-symmetric".into());
    }
    if min_index.is_none() {
        notes.push("hypothesis not met: all weights c_k vanish".into());
    }
    if !c_phi_nonzero {
        notes.push("hypothesis not met: phi'(0) = 0 (constant phi); reported only".into());
    }
    if !s.psi_all_nonzero() {
        notes.push("hypothesis not met: some psi_k vanishes identically".into());
    }
    let hypothesis = symmetric && min_index.is_some() && c_phi_nonzero && s.psi_all_nonzero();
    let mm = min_index.unwrap_or(ctx.degree() + 1);
    details.push(Detail::new("m", mm as f64));

    let mut zero_residual: f64 = 0.0;
    let mut lower: f64 = f64::INFINITY;
    for j in 0..=t {
        let col = vec_norm(&m.column(j));
        let row = vec_norm(&mh.column(j));
        details.push(Detail::new(format!("column_norm[{j}]"), col));
        details.push(Detail::new(format!("row_norm[{j}]"), row));
        if j < mm {
            zero_residual = zero_residual.max(col).max(row);
        } else {
            lower = lower.min(col).min(row);
        }
    }
    let lower_ok = lower >= tol.kernel_lower;
    if lower.is_finite() {
        details.push(Detail::new("min_norm_outside_kernel", lower));
    }
    if !lower_ok {
        notes.push(format!(
            "extra kernel direction: min norm {lower:e} below {:e}",
            tol.kernel_lower
        ));
    }
    Ok(CheckReport::finish(
        "kernel",
        zero_residual,
        tol.kernel_zero,
        "kernel residual 1e-10, lower bound 1e-3",
        hypothesis,
        lower_ok,
        details,
        notes,
    ))
}

/// Matrix route `M^H coords(K_w)` against the closed form of `L* K_w`,
/// in the `A²_α` norm over the trusted block.
pub fn check_adjoint_kernel(
    ctx: &SpaceContext,
    s: &SymbolSet,
    points: &[Complex64],
    tol: &Tolerances,
) -> Result<CheckReport> {
    let m = assemble_l(ctx, s)?;
    let mh = m.adjoint();
    let t = trusted_degree(ctx);
    let mut residual: f64 = 0.0;
    let mut details = Vec::new();
    for (idx, &w) in points.iter().enumerate() {
        let r = adjoint_kernel_residual(ctx, s, &mh, w, t)?;
        details.push(Detail::new(format!("w[{idx}]"), r));
        residual = residual.max(r);
    }
    Ok(CheckReport::finish(
        "adjoint_kernel",
        residual,
        tol.adjoint_kernel,
        "adjoint kernel default 1e-8",
        true,
        true,
        details,
        vec![],
    ))
}

pub(crate) fn adjoint_kernel_residual(
    ctx: &SpaceContext,
    s: &SymbolSet,
    adjoint: &OperatorMatrix,
    w: Complex64,
    t: usize,
) -> Result<f64> {
    let kw = ctx.monomial_to_basis(&ctx.reproducing_kernel(w)?)?;
    let via_matrix = adjoint.apply(&kw);
    let closed = ctx.monomial_to_basis(&adjoint_on_kernel(ctx, s, w)?)?;
    Ok(via_matrix[..=t]
        .iter()
        .zip(&closed[..=t])
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub report: CheckReport,
    /// Empty when the closed form does not apply.
    pub closed_form: Vec<Complex64>,
    pub numerical: EigenResult,
    pub pairing_distance: Option<f64>,
    /// `(closed-form index, numerical index)`.
    pub pairs: Vec<(usize, usize)>,
    pub eigenvector_residuals: Vec<f64>,
    pub min_nonzero_index: Option<usize>,
}

pub fn check_spectrum(
    ctx: &SpaceContext,
    s: &SymbolSet,
    conj: &Conjugation,
    tol: &Tolerances,
) -> Result<SpectrumReport> {
    let m = assemble_l(ctx, s)?;
    let t = trusted_degree(ctx);
    let numerical = eigenvalues(&m, EigenOptions::default());
    let fixes_origin = phi_fixes_origin(s);
    let symmetric = symmetry_residual(&m, conj.eta(), t) <= tol.symmetry;
    let mut notes = Vec::new();
    if !fixes_origin {
        notes.push("hypothesis not met: closed form requires phi(0)=0".into());
    }
    if !symmetric {
        notes.push("hypothesis not met: L is not C_{mu,eta}-symmetric".into());
    }
    if !s.psi_all_nonzero() {
        notes.push("hypothesis not met: some psi_k vanishes identically".into());
    }
    if !numerical.converged {
        notes.push("eigensolver did not converge; eigenvalues are partial".into());
    }
    let hypothesis = fixes_origin && symmetric && s.psi_all_nonzero();

    let mut details = Vec::new();
    let mut closed_form = Vec::new();
    let mut pairing_distance = None;
    let mut pairs = Vec::new();
    let mut eigenvector_residuals = Vec::new();
    let mut residual = 0.0;
    let mut vectors_ok = true;
    if fixes_origin {
        notes.push("eigenvalues use the factorial denominator (m-k)!".into());
        closed_form = closed_form_spectrum(ctx, s)?;
        let matching = match_spectra(&closed_form, &numerical.eigenvalues)?;
        pairing_distance = Some(matching.max_distance);
        pairs = matching.pairs;
        residual = matching.max_distance;
        details.push(Detail::new("pairing_distance", matching.max_distance));
        let mut worst: f64 = 0.0;
        for (idx, lam) in closed_form.iter().enumerate() {
            let col = m.column(idx);
            let r = col
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let target = if i == idx { *lam } else { ZERO };
                    (x - target).norm_sqr()
                })
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
            eigenvector_residuals.push(r);
        }
        details.push(Detail::new("eigenvector_residual", worst));
        vectors_ok = worst <= tol.eigenvector;
    }
    let (tolerance, source) = if fixes_origin && is_diagonal(&m) {
        (tol.diagonal, "diagonal case default 1e-10")
    } else {
        (tol.spectrum, "spectrum pairing default 1e-8")
    };
    let report = CheckReport::finish(
        "spectrum",
        residual,
        tolerance,
        source,
        hypothesis,
        vectors_ok && numerical.converged,
        details,
        notes,
    );
    Ok(SpectrumReport {
        report,
        closed_form,
        numerical,
        pairing_distance,
        pairs,
        eigenvector_residuals,
        min_nonzero_index: s.min_nonzero_index(),
    })
}

/// Residuals of the kernel identities at one point `w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelDiagnostics {
    pub w: Complex64,
    pub order: usize,
    pub reproducing_residual: f64,
    pub derivative_residual: f64,
    pub adjoint_residual: f64,
}

/// `|⟨f, K_w⟩ - f(w)|`, `|⟨f, K^{[n]}_w⟩ - f^{(n)}(w)|` over `samples` random
/// polynomials, and the matrix-versus-closed-form distance for `L* K_w`.
pub fn kernel_diagnostics(
    ctx: &SpaceContext,
    s: &SymbolSet,
    w: Complex64,
    order: usize,
    samples: usize,
    seed: u64,
) -> Result<KernelDiagnostics> {
    let kw = ctx.reproducing_kernel(w)?;
    let kn = ctx.derivative_kernel(w, order)?;
    let mut rng = seeded_rng(seed);
    let mut reproducing: f64 = 0.0;
    let mut derivative: f64 = 0.0;
    for _ in 0..samples {
        let f = random_polynomial(&mut rng, ctx.degree(), ctx.degree());
        reproducing = reproducing.max((ctx.inner_product(&f, &kw)? - f.evaluate(w)).norm());
        let df = f.differentiate(order).evaluate(w);
        derivative = derivative.max((ctx.inner_product(&f, &kn)? - df).norm());
    }
    let mh = assemble_l(ctx, s)?.adjoint();
    let adjoint = adjoint_kernel_residual(ctx, s, &mh, w, trusted_degree(ctx))?;
    Ok(KernelDiagnostics {
        w,
        order,
        reproducing_residual: reproducing,
        derivative_residual: derivative,
        adjoint_residual: adjoint,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    AdjointKernel,
    Hermitian,
    Kernel,
    Normal,
    Spectrum,
    Symmetry,
}

impl CheckName {
    pub const ALL: [CheckName; 6] = [
        CheckName::AdjointKernel,
        CheckName::Hermitian,
        CheckName::Kernel,
        CheckName::Normal,
        CheckName::Spectrum,
        CheckName::Symmetry,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckName::AdjointKernel => "adjoint_kernel",
            CheckName::Hermitian => "hermitian",
            CheckName::Kernel => "kernel",
            CheckName::Normal => "normal",
            CheckName::Spectrum => "spectrum",
            CheckName::Symmetry => "symmetry",
        }
    }
}

impl std::str::FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckName::ALL
            .iter()
            .find(|c| c.as_str() == s)
            .copied()
            .ok_or_else(|| Error::Config(format!("unknown check '{s}'")))
    }
}

/// Runs the requested checks; reports come back sorted by name.
pub fn run_checks(
    ctx: &SpaceContext,
    s: &SymbolSet,
    conj: &Conjugation,
    names: &[CheckName],
    tol: &Tolerances,
) -> Result<Vec<CheckReport>> {
    let mut names = names.to_vec();
    names.sort();
    names.dedup();
    names
        .iter()
        .map(|name| match name {
            CheckName::AdjointKernel => check_adjoint_kernel(ctx, s, &sample_points(), tol),
            CheckName::Hermitian => check_hermitian(ctx, s, tol),
            CheckName::Kernel => check_kernel(ctx, s, conj, tol),
            CheckName::Normal => check_normal(ctx, s, conj, tol),
            CheckName::Spectrum => check_spectrum(ctx, s, conj, tol).map(|r| r.report),
            CheckName::Symmetry => check_symmetry(ctx, s, conj, tol),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn closed_form_examples() {
        let ctx = SpaceContext::new(0.0, 16).unwrap();
        let s = SymbolSet::canonical_symmetric(&ctx, vec![ONE], vec![ONE], ZERO, c(0.5, 0.0), ONE)
            .unwrap();
        let lam = closed_form_spectrum(&ctx, &s).unwrap();
        assert_eq!(lam[0], ZERO);
        assert!((lam[3] - c(0.75, 0.0)).norm() < 1e-15);
        for (m, l) in lam.iter().enumerate().skip(1) {
            let expected = m as f64 * 0.5f64.powi(m as i32 - 1);
            assert!((l.re - expected).abs() < 1e-14);
        }

        // c_φ = 1 is not a self-map, so feed the formula directly through explicit symbols
        // with degree-8 truncation and the same a, c_k: λ_2 = 2 + 2 = 4.
        let ctx = SpaceContext::new(0.0, 8).unwrap();
        let psi = vec![
            TruncatedSeries::monomial(1, ONE, 8),
            TruncatedSeries::monomial(2, ONE, 8),
        ];
        let s = SymbolSet::explicit(
            &ctx,
            vec![ONE, ONE],
            psi,
            TruncatedSeries::monomial(1, c(0.5, 0.0), 8),
        )
        .unwrap();
        let lam = closed_form_spectrum(&ctx, &s).unwrap();
        // with c = 1/2: λ_2 = 2·(1/2) + 2 = 3
        assert!((lam[2] - c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn closed_form_needs_fixed_origin() {
        let ctx = SpaceContext::new(0.0, 16).unwrap();
        let s = SymbolSet::canonical_symmetric(
            &ctx,
            vec![ONE],
            vec![ONE],
            c(0.2, 0.0),
            c(0.5, 0.0),
            ONE,
        )
        .unwrap();
        assert!(closed_form_spectrum(&ctx, &s).is_err());
    }

    #[test]
    fn zero_operator_passes_symmetry_and_hermitian() {
        let ctx = SpaceContext::new(0.0, 32).unwrap();
        let s = SymbolSet::canonical_symmetric(
            &ctx,
            vec![ZERO],
            vec![ONE],
            c(0.3, 0.0),
            c(0.4, 0.0),
            ONE,
        )
        .unwrap();
        let cj = Conjugation::new(ONE, ONE).unwrap();
        let tol = Tolerances::default();
        let r = check_symmetry(&ctx, &s, &cj, &tol).unwrap();
        assert!(r.pass);
        assert_eq!(r.residual, 0.0);
        let r = check_hermitian(&ctx, &s, &tol).unwrap();
        assert!(r.pass);
        assert_eq!(r.residual, 0.0);
        let sp = check_spectrum(&ctx, &s.with_weights(vec![ZERO]).unwrap(), &cj, &tol).unwrap();
        assert!(!sp.report.hypothesis_met);
    }

    #[test]
    fn symmetry_example_passes_and_perturbation_fails() {
        let ctx = SpaceContext::new(0.0, 64).unwrap();
        let s = SymbolSet::canonical_symmetric(
            &ctx,
            vec![ONE],
            vec![ONE],
            c(0.3, 0.0),
            c(0.4, 0.0),
            ONE,
        )
        .unwrap();
        let cj = Conjugation::new(ONE, ONE).unwrap();
        let tol = Tolerances::default();
        let r = check_symmetry(&ctx, &s, &cj, &tol).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.residual <= 1e-8);

        let bump = TruncatedSeries::monomial(2, c(0.01, 0.0), 64);
        let p = s.perturb_psi(&ctx, 1, &bump).unwrap();
        let r = check_symmetry(&ctx, &p, &cj, &tol).unwrap();
        assert!(!r.pass);
        assert!(r.residual >= 1e-4);
    }

    #[test]
    fn hermitian_family() {
        let ctx = SpaceContext::new(0.0, 64).unwrap();
        let s =
            SymbolSet::canonical_hermitian(&ctx, vec![ONE], vec![0.5], c(0.2, 0.1), 0.3).unwrap();
        let tol = Tolerances::default();
        let r = check_hermitian(&ctx, &s, &tol).unwrap();
        assert!(r.pass, "{r:?}");
        // ψ_1 ↦ 2i ψ_1, so a_1 = i
        let rotated = s
            .perturb_psi(&ctx, 1, &s.psi()[0].scale(c(-1.0, 2.0)))
            .unwrap();
        let r = check_hermitian(&ctx, &rotated, &tol).unwrap();
        assert!(!r.pass);
        let complex_weights = s.with_weights(vec![c(0.0, 1.0)]).unwrap();
        let r = check_hermitian(&ctx, &complex_weights, &tol).unwrap();
        assert!(!r.hypothesis_met && !r.pass);
    }

    #[test]
    fn normal_diagonal_case() {
        let ctx = SpaceContext::new(0.0, 64).unwrap();
        let s = SymbolSet::canonical_symmetric(
            &ctx,
            vec![ONE, ONE],
            vec![ONE, c(0.5, 0.0)],
            ZERO,
            c(0.5, 0.0),
            ONE,
        )
        .unwrap();
        let cj = Conjugation::new(ONE, ONE).unwrap();
        let r = check_normal(&ctx, &s, &cj, &Tolerances::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.residual <= 1e-10);
        // ‖Lγ_3‖ = |1·3·(1/2)^2 + 0.5·6·(1/2)| = 2.25
        let m = assemble_l(&ctx, &s).unwrap();
        assert!((vec_norm(&m.column(3)) - 2.25).abs() < 1e-13);

        let s = SymbolSet::canonical_symmetric(
            &ctx,
            vec![ONE],
            vec![ONE],
            c(0.3, 0.0),
            c(0.4, 0.0),
            ONE,
        )
        .unwrap();
        let r = check_normal(&ctx, &s, &cj, &Tolerances::default()).unwrap();
        assert!(!r.hypothesis_met);
        assert!(!r.pass);
    }

    #[test]
    fn kernel_examples() {
        let ctx = SpaceContext::new(0.0, 64).unwrap();
        let cj = Conjugation::new(ONE, ONE).unwrap();
        let tol = Tolerances::default();
        let s = SymbolSet::canonical_symmetric(
            &ctx,
            vec![ZERO, ONE],
            vec![ONE, ONE],
            c(0.3, 0.0),
            c(0.45, 0.0),
            ONE,
        )
        .unwrap();
        let r = check_kernel(&ctx, &s, &cj, &tol).unwrap();
        assert!(r.pass, "{:?}", r.notes);
        assert_eq!(r.details[0].value, 2.0);

        let s = SymbolSet::canonical_symmetric(
            &ctx,
            vec![ONE],
            vec![ONE],
            c(0.3, 0.0),
            c(0.45, 0.0),
            ONE,
        )
        .unwrap();
        let r = check_kernel(&ctx, &s, &cj, &tol).unwrap();
        assert!(r.pass, "{:?}", r.notes);
        assert_eq!(r.details[0].value, 1.0);
    }

    #[test]
    fn spectrum_examples() {
        let ctx = SpaceContext::new(0.0, 64).unwrap();
        let cj = Conjugation::new(ONE, ONE).unwrap();
        let tol = Tolerances::default();
        let s = SymbolSet::canonical_symmetric(
            &ctx,
            vec![ONE],
            vec![c(0.7, 0.2)],
            ZERO,
            c(0.5, 0.0),
            ONE,
        )
        .unwrap();
        let r = check_spectrum(&ctx, &s, &cj, &tol).unwrap();
        assert!(r.report.pass, "{:?}", r.report);
        assert!(r.pairing_distance.unwrap() <= 1e-12);
        for (m, lam) in r.closed_form.iter().enumerate().skip(1) {
            let expected = c(0.7, 0.2) * m as f64 * 0.5f64.powi(m as i32 - 1);
            assert!((lam - expected).norm() < 1e-14);
        }

        let zero = s.with_weights(vec![ZERO]).unwrap();
        let r = check_spectrum(&ctx, &zero, &cj, &tol).unwrap();
        assert!(r.closed_form.iter().all(|x| *x == ZERO));
        assert!(r.numerical.eigenvalues.iter().all(|x| *x == ZERO));

        let s = SymbolSet::canonical_symmetric(
            &ctx,
            vec![ONE],
            vec![ONE],
            c(0.3, 0.0),
            c(0.4, 0.0),
            ONE,
        )
        .unwrap();
        let r = check_spectrum(&ctx, &s, &cj, &tol).unwrap();
        assert!(!r.report.hypothesis_met);
        assert!(r.pairing_distance.is_none());
        assert_eq!(r.numerical.eigenvalues.len(), 65);
    }

    #[test]
    fn reports_sorted_by_name() {
        let ctx = SpaceContext::new(0.0, 16).unwrap();
        let s = SymbolSet::canonical_symmetric(&ctx, vec![ONE], vec![ONE], ZERO, c(0.4, 0.0), ONE)
            .unwrap();
        let cj = Conjugation::new(ONE, ONE).unwrap();
        let reports = run_checks(
            &ctx,
            &s,
            &cj,
            &[
                CheckName::Symmetry,
                CheckName::Hermitian,
                CheckName::Kernel,
                CheckName::Symmetry,
            ],
            &Tolerances::default(),
        )
        .unwrap();
        let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, vec!["hermitian", "kernel", "symmetry"]);
    }

    #[test]
    fn kernel_diagnostics_at_origin() {
        let ctx = SpaceContext::new(0.0, 64).unwrap();
        let s = SymbolSet::canonical_symmetric(
            &ctx,
            vec![ONE],
            vec![ONE],
            c(0.3, 0.0),
            c(0.4, 0.0),
            ONE,
        )
        .unwrap();
        let d = kernel_diagnostics(&ctx, &s, ZERO, 1, 5, 0).unwrap();
        assert_eq!(d.reproducing_residual, 0.0);
        assert!(d.adjoint_residual < 1e-12);
        let d = kernel_diagnostics(&ctx, &s, c(0.5, 0.0), 1, 5, 0).unwrap();
        assert!(d.reproducing_residual <= 1e-10);
        assert!(d.derivative_residual <= 1e-10);
        assert!(d.adjoint_residual <= 1e-10);
        assert!(kernel_diagnostics(&ctx, &s, c(1.0, 0.0), 1, 5, 0).is_err());
    }
}
