//! b-multiplicative sequences defined by their digit weights.
//!
//! A sequence is fixed by `b` unit-modulus weights `τ_0 = 1, τ_1, …, τ_{b-1}`;
//! the term at `n` is the product of the weights of the base-`b` digits of `n`.
//! Partial sums `Σ_{n<N} τ_n` telescope along the digits of `N`, which gives an
//! `O(log_b N)` evaluation ([`closed_form_partial_sum`]) checked against the
//! direct accumulation in [`naive_partial_sum`].

use num_complex::Complex64;

use crate::arith::{is_prime, multiplicative_order, root_of_unity};
use crate::{Error, Result};

/// Modulus tolerance for digit weights.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;
/// Default cap on `N` for the brute-force partial sums.
pub const DEFAULT_ORACLE_BOUND: u64 = 10_000_000;
/// Width of the band around `|d(b)| = 1` treated as logarithmic growth.
pub const CLASS_EPSILON: f64 = 1e-9;
/// Largest base a twist may produce (`b^s` weights are materialised).
pub const MAX_TWIST_BASE: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeSequence {
    weights: Vec<Complex64>,
}

impl MultiplicativeSequence {
    /// Builds a sequence whose base is the number of weights.
    pub fn new(weights: Vec<Complex64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidBase(weights.len() as u64));
        }
        if (weights[0] - Complex64::new(1.0, 0.0)).norm() > WEIGHT_TOLERANCE {
            return Err(Error::FirstWeightNotOne(weights[0].to_string()));
        }
        for (index, w) in weights.iter().enumerate() {
            let modulus = w.norm();
            if !modulus.is_finite() || (modulus - 1.0).abs() > WEIGHT_TOLERANCE {
                return Err(Error::NotUnitModulus { index, modulus });
            }
        }
        Ok(MultiplicativeSequence { weights })
    }

    /// Real `±1` sequence written as a sign string, e.g. `"+-"` for Thue-Morse.
    pub fn from_signs(literal: &str) -> Result<Self> {
        let weights = literal
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '+' => Ok(Complex64::new(1.0, 0.0)),
                '-' | '−' => Ok(Complex64::new(-1.0, 0.0)),
                other => Err(Error::MalformedLiteral(format!(
                    "unexpected character {other:?} in sign string"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights)
    }

    /// General weights as a JSON list of `[re, im]` pairs.
    pub fn from_json(literal: &str) -> Result<Self> {
        let pairs: Vec<[f64; 2]> = serde_json::from_str(literal)
            .map_err(|e| Error::MalformedLiteral(e.to_string()))?;
        Self::new(pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }

    /// Accepts either literal form; JSON is recognised by a leading `[`.
    pub fn parse(literal: &str) -> Result<Self> {
        if literal.trim_start().starts_with('[') {
            Self::from_json(literal)
        } else {
            Self::from_signs(literal)
        }
    }

    pub fn thue_morse() -> Self {
        Self::from_signs("+-").expect("valid literal")
    }

    pub fn base(&self) -> u64 {
        self.weights.len() as u64
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn weight(&self, digit: u64) -> Complex64 {
        self.weights[digit as usize]
    }

    /// All weights equal to 1: partial sums are just `N`.
    pub fn is_trivial(&self) -> bool {
        self.weights.iter().all(|w| *w == Complex64::new(1.0, 0.0))
    }

    /// Whether every weight is exactly `+1` or `-1`.
    pub fn is_signed(&self) -> bool {
        self.weights
            .iter()
            .all(|w| w.im == 0.0 && (w.re == 1.0 || w.re == -1.0))
    }

    pub fn digit_sums(&self) -> DigitSums {
        let mut partials = Vec::with_capacity(self.weights.len() + 1);
        let mut acc = Complex64::new(0.0, 0.0);
        partials.push(acc);
        for w in &self.weights {
            acc += w;
            partials.push(acc);
        }
        DigitSums { partials }
    }

    pub fn term(&self, mut n: u64) -> Complex64 {
        let b = self.base();
        let mut acc = Complex64::new(1.0, 0.0);
        if let (Ok(mut m), Ok(b32)) = (u32::try_from(n), u32::try_from(b)) {
            while m > 0 {
                acc *= self.weights[(m % b32) as usize];
                m /= b32;
            }
            return acc;
        }
        while n > 0 {
            acc *= self.weights[(n % b) as usize];
            n /= b;
        }
        acc
    }

    /// Sign string for `±1` sequences, JSON pairs otherwise.
    pub fn to_literal(&self) -> String {
        if self.is_signed() {
            self.weights
                .iter()
                .map(|w| if w.re > 0.0 { '+' } else { '-' })
                .collect()
        } else {
            let pairs: Vec<[f64; 2]> = self.weights.iter().map(|w| [w.re, w.im]).collect();
            serde_json::to_string(&pairs).expect("finite floats serialise")
        }
    }
}

/// Prefix sums `d(c) = Σ_{i<c} τ_i` for `c = 0..=b`.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitSums {
    partials: Vec<Complex64>,
}

impl DigitSums {
    pub fn get(&self, c: u64) -> Complex64 {
        self.partials[c as usize]
    }

    /// `d(b)`, the growth constant of the partial sums.
    pub fn total(&self) -> Complex64 {
        *self.partials.last().expect("b + 1 entries")
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.partials
    }

    pub fn max_modulus(&self) -> f64 {
        self.partials.iter().map(|d| d.norm()).fold(0.0, f64::max)
    }
}

/// Base-`b` digits of `n`, most significant first. `0` has no digits.
pub fn digits_msb_first(mut n: u64, base: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % base);
        n /= base;
    }
    out.reverse();
    out
}

/// `(-1)^{popcount(n)}`.
#[inline]
pub fn thue_morse_fast(n: u64) -> i32 {
    1 - 2 * (n.count_ones() & 1) as i32
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl CompensatedSum {
    fn add_part(acc: &mut (f64, f64), x: f64) {
        let t = acc.0 + x;
        if acc.0.abs() >= x.abs() {
            acc.1 += (acc.0 - t) + x;
        } else {
            acc.1 += (x - t) + acc.0;
        }
        acc.0 = t;
    }

    fn add(&mut self, z: Complex64) {
        Self::add_part(&mut self.re, z.re);
        Self::add_part(&mut self.im, z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// `Σ_{n<N} τ_n` by direct accumulation of [`MultiplicativeSequence::term`].
pub fn naive_partial_sum(seq: &MultiplicativeSequence, n: u64, bound: u64) -> Result<Complex64> {
    if n > bound {
        return Err(Error::OracleBound { requested: n, bound });
    }
    let mut acc = CompensatedSum::default();
    for k in 0..n {
        acc.add(seq.term(k));
    }
    Ok(acc.value())
}

/// Telescoped digit sum over `digits` (most significant first), treating the
/// last digit as position 0. Returns the sum and the product of all digit
/// weights, which fractional continuations need.
pub(crate) fn telescoped_sum(
    seq: &MultiplicativeSequence,
    sums: &DigitSums,
    digits: &[u64],
) -> (Complex64, Complex64) {
    let growth = sums.total();
    let mut prefix = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    let top = digits.len();
    for (pos, &c) in digits.iter().enumerate() {
        let exponent = (top - 1 - pos) as u32;
        acc += prefix * sums.get(c) * growth.powu(exponent);
        prefix *= seq.weight(c);
    }
    (acc, prefix)
}

/// `Σ_{n<N} τ_n = Σ_i (∏_{k>i} τ_{c_k}) d(c_i) d(b)^i` over the digits of `N`.
pub fn closed_form_partial_sum(seq: &MultiplicativeSequence, n: u64) -> Complex64 {
    let sums = seq.digit_sums();
    telescoped_sum(seq, &sums, &digits_msb_first(n, seq.base())).0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthClass {
    /// `|d(b)| < 1`: partial sums stay bounded.
    Bounded,
    /// `|d(b)| = 1`: partial sums are `O(log N)`.
    Logarithmic,
    /// `|d(b)| > 1`: partial sums grow like `N^exponent`.
    Power { exponent: f64 },
}

pub fn classify(seq: &MultiplicativeSequence) -> GrowthClass {
    let modulus = seq.digit_sums().total().norm();
    if modulus < 1.0 - CLASS_EPSILON {
        GrowthClass::Bounded
    } else if modulus <= 1.0 + CLASS_EPSILON {
        GrowthClass::Logarithmic
    } else {
        GrowthClass::Power {
            exponent: modulus.ln() / (seq.base() as f64).ln(),
        }
    }
}

fn check_rarefaction(base: u64, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if base.is_multiple_of(p) {
        return Err(Error::PrimeDividesBase { p, base });
    }
    Ok(())
}

/// The sequence `n ↦ ζ_p^{jn} t_n`, which is `b^s`-multiplicative where `s` is
/// the order of `b` modulo `p`.
pub fn build_twist(t: &MultiplicativeSequence, p: u64, j: u64) -> Result<MultiplicativeSequence> {
    let base = t.base();
    check_rarefaction(base, p)?;
    if j == 0 || j >= p {
        return Err(Error::ResidueOutOfRange { residue: j, p });
    }
    let order = multiplicative_order(base, p);
    let big_base = u32::try_from(order)
        .ok()
        .and_then(|s| base.checked_pow(s))
        .filter(|&b| b <= MAX_TWIST_BASE)
        .ok_or(Error::TwistTooLarge { base, order })?;
    let weights = (0..big_base)
        .map(|c| root_of_unity(p, j as i128 * c as i128) * t.term(c))
        .collect();
    MultiplicativeSequence::new(weights)
}

/// `Σ_{n<N, p|n} t_n` by direct accumulation.
pub fn rarefied_sum(t: &MultiplicativeSequence, p: u64, n: u64, bound: u64) -> Result<Complex64> {
    check_rarefaction(t.base(), p)?;
    if n > bound {
        return Err(Error::OracleBound { requested: n, bound });
    }
    let mut acc = CompensatedSum::default();
    for k in (0..n).step_by(p as usize) {
        acc.add(t.term(k));
    }
    Ok(acc.value())
}

/// `Σ_{n<N, p|n} t_n = (1/p)(Σ_{n<N} t_n + Σ_{j=1}^{p-1} Σ_{n<N} ζ^{jn} t_n)`,
/// each inner sum evaluated in closed form.
pub fn rarefied_sum_via_twists(t: &MultiplicativeSequence, p: u64, n: u64) -> Result<Complex64> {
    check_rarefaction(t.base(), p)?;
    let mut total = closed_form_partial_sum(t, n);
    for j in 1..p {
        total += closed_form_partial_sum(&build_twist(t, p, j)?, n);
    }
    if t.weights().iter().all(|w| w.im == 0.0) {
        // Twists j and p - j are conjugate, so the exact sum is real.
        total.im = 0.0;
    }
    Ok(total / p as f64)
}
