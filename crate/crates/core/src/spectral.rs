//! Spectrum of `M = ∏_{m=0}^{s-1} (I - T^{2^m})`, `T` the `p × p` cyclic shift.
//!
//! `M` is a polynomial in `T`, hence circulant, and its eigenvalues are the
//! symbol evaluated at the `p`-th roots of unity:
//! `λ_j = ∏_{m<s} (1 - ζ_p^{j 2^m})`.

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use num_complex::Complex64;

use crate::arith::{multiplicative_order, require_odd_prime, root_of_unity};
use crate::{Error, Result};

/// Relative tolerance for "imaginary part is zero" and for equal moduli.
pub const REAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub p: u64,
    /// Order of 2 in `F_p^×`.
    pub s: u64,
    pub eigenvalues: Vec<Complex64>,
    /// The chosen dominant eigenvalue.
    pub dominant: Complex64,
    /// Spectral radius `λ_1`.
    pub lambda1: f64,
    /// Largest modulus strictly below `λ_1` (0 if there is none).
    pub lambda2: f64,
    /// Smallest `r ∈ {1, 2, 4}` with `dominant^r` real positive.
    pub r: u32,
    pub alpha: f64,
    pub beta: f64,
}

/// `λ_j` for `j = 0..p`.
pub fn eigenvalues_of_m(p: u64) -> Result<Vec<Complex64>> {
    require_odd_prime(p)?;
    let s = multiplicative_order(2, p);
    Ok((0..p)
        .map(|j| {
            let mut exponent = j;
            let mut lambda = Complex64::new(1.0, 0.0);
            for _ in 0..s {
                lambda *= Complex64::new(1.0, 0.0) - root_of_unity(p, exponent as i128);
                exponent = exponent * 2 % p;
            }
            lambda
        })
        .collect())
}

fn is_real_positive(z: Complex64) -> bool {
    z.re > 0.0 && z.im.abs() <= REAL_TOLERANCE * z.norm()
}

fn same_modulus(a: f64, b: f64) -> bool {
    (a - b).abs() <= REAL_TOLERANCE * a.max(b)
}

pub fn spectral_report(p: u64) -> Result<SpectralReport> {
    let eigenvalues = eigenvalues_of_m(p)?;
    let s = multiplicative_order(2, p);
    let lambda1 = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // Among eigenvalues of maximal modulus: largest real part, then largest
    // imaginary part. Parts within rounding of each other count as equal.
    let scale = REAL_TOLERANCE * lambda1;
    let key = |x: f64| if x.abs() <= scale { 0.0 } else { x };
    let dominant = eigenvalues
        .iter()
        .copied()
        .filter(|z| same_modulus(z.norm(), lambda1))
        .max_by(|a, b| {
            let by_re = if (a.re - b.re).abs() <= scale { Ordering::Equal } else { a.re.total_cmp(&b.re) };
            by_re.then(key(a.im).total_cmp(&key(b.im)))
        })
        .expect("p >= 3 eigenvalues");
    let r = [1u32, 2, 4]
        .into_iter()
        .find(|&r| is_real_positive(dominant.powu(r)))
        .ok_or(Error::NoRealPower)?;
    let lambda2 = eigenvalues
        .iter()
        .map(|z| z.norm())
        .filter(|&m| !same_modulus(m, lambda1))
        .fold(0.0, f64::max);
    let alpha = lambda1.ln() / (r as f64 * s as f64 * LN_2);
    let beta = if lambda2 > 1.0 {
        lambda2.ln() / (s as f64 * LN_2)
    } else {
        0.0
    };
    Ok(SpectralReport {
        p,
        s,
        eigenvalues,
        dominant,
        lambda1,
        lambda2,
        r,
        alpha,
        beta,
    })
}

/// `Σ_{j≠0} log λ_j` (principal logs), avoiding overflow of `∏ λ_j = p^s`.
pub fn log_product_nonzero(eigenvalues: &[Complex64]) -> Complex64 {
    eigenvalues.iter().skip(1).map(|z| z.ln()).sum()
}
