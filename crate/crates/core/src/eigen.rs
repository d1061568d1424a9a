//! Dense complex eigenvalues by Householder reduction and shifted QR.
//!
//! Working in complex arithmetic means a single Wilkinson shift per sweep is
//! enough; no double-shift bookkeeping is needed. Only eigenvalues are
//! computed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub const DEFAULT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Relative deflation threshold for subdiagonal entries.
    pub tol: f64,
    /// Total QR sweeps allowed; `None` means `30 * dim`.
    pub max_iter: Option<usize>,
    pub balance: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: None,
            balance: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub eigenvalues: Vec<Complex64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Unitarily similar upper-Hessenberg form via Householder reflections.
/// Columns that are already reduced are left untouched.
pub fn hessenberg(m: &OperatorMatrix) -> OperatorMatrix {
    let mut h = m.clone();
    let n = h.dim();
    if n < 3 {
        return h;
    }
    for k in 0..n - 2 {
        let tail: f64 = ((k + 2)..n).map(|i| h[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let xnorm = (tail + x0.norm_sqr()).sqrt();
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // v = x + phase·‖x‖ e_1 avoids cancellation
        let mut v: Vec<Complex64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in v.iter_mut() {
            *a /= vnorm;
        }
        // H ← (I - 2vv^H) H
        for j in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr.conj() * h[(k + 1 + r, j)])
                .sum();
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= vr * dot * 2.0;
            }
        }
        // H ← H (I - 2vv^H)
        for i in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| h[(i, k + 1 + r)] * vr)
                .sum();
            for (r, vr) in v.iter().enumerate() {
                h[(i, k + 1 + r)] -= dot * vr.conj() * 2.0;
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

/// Diagonal similarity by powers of two so row and column norms are comparable.
pub fn balance(m: &OperatorMatrix) -> OperatorMatrix {
    let mut a = m.clone();
    let n = a.dim();
    let radix = 2.0f64;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let g = r / radix;
            while c < g {
                f *= radix;
                c *= radix * radix;
            }
            let g = r * radix;
            while c > g {
                f /= radix;
                c /= radix * radix;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
    a
}

fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    (an / r, (a / an) * b.conj() / r)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of `m` by single-shift QR on its Hessenberg form.
pub fn eigenvalues(m: &OperatorMatrix, opts: EigenOptions) -> EigenResult {
    let n = m.dim();
    if n == 0 {
        return EigenResult {
            eigenvalues: vec![],
            iterations: 0,
            converged: true,
        };
    }
    let start = if opts.balance { balance(m) } else { m.clone() };
    let mut h = hessenberg(&start);
    let scale = h.frobenius_norm();
    let max_iter = opts.max_iter.unwrap_or(30 * n);
    let mut iterations = 0;
    let mut since_deflation = 0;
    let mut converged = true;
    let mut hi = n - 1;

    let negligible = |h: &OperatorMatrix, k: usize| {
        let sub = h[(k, k - 1)].norm();
        let diag = h[(k - 1, k - 1)].norm() + h[(k, k)].norm();
        let reference = if diag == 0.0 { scale } else { diag };
        sub <= opts.tol * reference
    };

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 && !negligible(&h, lo) {
            lo -= 1;
        }
        if lo > 0 {
            h[(lo, lo - 1)] = ZERO;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if iterations >= max_iter {
            converged = false;
            break;
        }
        iterations += 1;
        since_deflation += 1;

        let mut shift = wilkinson_shift(
            h[(hi - 1, hi - 1)],
            h[(hi - 1, hi)],
            h[(hi, hi - 1)],
            h[(hi, hi)],
        );
        if since_deflation % 11 == 10 {
            // exceptional shift to break cycles
            shift += Complex64::new(h[(hi, hi - 1)].norm() * 0.75, 0.0);
        }

        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
            rotations.push((c, s));
        }
        for (offset, (c, s)) in rotations.into_iter().enumerate() {
            let k = lo + offset;
            for i in lo..=(k + 1).min(hi) {
                let u = h[(i, k)];
                let v = h[(i, k + 1)];
                h[(i, k)] = u * c + s.conj() * v;
                h[(i, k + 1)] = -s * u + v * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }

    EigenResult {
        eigenvalues: h.diagonal(),
        iterations,
        converged,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMatching {
    /// `(index in a, index in b)` pairs.
    pub pairs: Vec<(usize, usize)>,
    pub max_distance: f64,
}

/// Greedy pairing: repeatedly match the closest unmatched pair.
pub fn match_spectra(a: &[Complex64], b: &[Complex64]) -> Result<SpectrumMatching> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let mut candidates: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            candidates.push(((x - y).norm(), i, j));
        }
    }
    candidates.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut pairs = Vec::with_capacity(a.len());
    let mut max_distance: f64 = 0.0;
    for (d, i, j) in candidates {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        pairs.push((i, j));
        max_distance = max_distance.max(d);
        if pairs.len() == a.len() {
            break;
        }
    }
    pairs.sort();
    Ok(SpectrumMatching {
        pairs,
        max_distance,
    })
}
