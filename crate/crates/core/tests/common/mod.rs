//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use bergman_ops::matrix::OperatorMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(n, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    // Heap's algorithm; each swap flips the sign.
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1.0;
    out.push((p.clone(), sign));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            sign = -sign;
            out.push((p.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Leibniz expansion over all permutations.
pub fn leibniz_det(m: &OperatorMatrix) -> Complex64 {
    permutations(m.dim())
        .iter()
        .map(|(p, sign)| {
            p.iter()
                .enumerate()
                .map(|(i, &j)| m[(i, j)])
                .product::<Complex64>()
                * *sign
        })
        .sum()
}

/// Coefficients (ascending) of `det(zI - A)`, recovered from its values at
/// the `n+1`-th roots of unity by an inverse DFT.
pub fn char_poly(m: &OperatorMatrix) -> Vec<Complex64> {
    let n = m.dim();
    let points = n + 1;
    let values: Vec<Complex64> = (0..points)
        .map(|t| {
            let z =
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t as f64 / points as f64);
            let shifted =
                OperatorMatrix::from_fn(n, |i, j| if i == j { z - m[(i, j)] } else { -m[(i, j)] });
            leibniz_det(&shifted)
        })
        .collect();
    (0..points)
        .map(|k| {
            let s: Complex64 = values
                .iter()
                .enumerate()
                .map(|(t, v)| {
                    v * Complex64::from_polar(
                        1.0,
                        -2.0 * std::f64::consts::PI * (k * t) as f64 / points as f64,
                    )
                })
                .sum();
            s / points as f64
        })
        .collect()
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(ZERO, |acc, a| acc * z + a)
}

/// Roots of a polynomial (ascending coefficients) by Durand-Kerner, each
/// polished with Newton steps on the undeflated polynomial.
pub fn poly_roots(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lead = p[n];
    let monic: Vec<Complex64> = p.iter().map(|a| a / lead).collect();
    let radius = 1.0 + monic[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius,
                2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4,
            )
        })
        .collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let num = horner(&monic, roots[i]);
            let den: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| roots[i] - roots[j])
                .product();
            if den.norm() == 0.0 {
                continue;
            }
            let step = num / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    let deriv: Vec<Complex64> = (1..=n).map(|k| monic[k] * k as f64).collect();
    for r in roots.iter_mut() {
        for _ in 0..5 {
            let d = horner(&deriv, *r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= horner(&monic, *r) / d;
        }
    }
    roots
}

/// `f^{(k)}(w)` summed term by term from the coefficients.
pub fn derivative_at(coeffs: &[Complex64], k: usize, w: Complex64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .skip(k)
        .map(|(j, a)| {
            let ff: f64 = ((j - k + 1)..=j).map(|x| x as f64).product();
            a * ff * w.powu((j - k) as u32)
        })
        .sum()
}

/// Optimal matching distance by brute force over permutations (small n).
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    permutations(a.len())
        .iter()
        .map(|(p, _)| {
            p.iter()
                .enumerate()
                .map(|(i, &j)| (a[i] - b[j]).norm())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}
