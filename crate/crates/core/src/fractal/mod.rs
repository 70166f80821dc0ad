//! The self-similar summatory function `ψ` and its periodic profile `F`.
//!
//! For a sequence with `|d(b)| > 1` the digit formula for `Σ_{n<N} τ_n` extends
//! to every real `x > 0` by letting the digit index run over the fractional
//! digits as well:
//!
//! ```text
//! ψ(x) = Σ_{i ≤ l} (∏_{k > i} τ_{c_k}) d(c_i) d(b)^i
//! ```
//!
//! It satisfies `ψ(bx) = d(b) ψ(x)`, so `F(y) = ψ(b^y) b^{-y log d(b) / log b}`
//! has period 1 for any fixed branch of `log d(b)`.
//!
//! Arguments are taken as exact base-`b` [`Expansion`]s; floating inputs are
//! converted through the exact rational value of the `f64`.

mod expansion;

pub use expansion::{Expansion, FractionDigits};

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::arith::sig17;
use crate::sequences::{telescoped_sum, DigitSums, MultiplicativeSequence, CLASS_EPSILON};
use crate::{Error, Result};

pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Digits scanned when looking for probe positions.
const PROBE_SCAN_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone)]
pub struct FractalProfile {
    seq: MultiplicativeSequence,
    sums: DigitSums,
    log_branch: i64,
    tail_tolerance: f64,
    truncation_depth: usize,
}

/// One point of the profile `F` on `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FSample {
    pub y: f64,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    /// Fractional positions `J_n` where the digit of `x` is below `b - 1`.
    pub positions: Vec<usize>,
    /// `|ψ(y_n) - ψ(x_n)| / (y_n - x_n)` for each position.
    pub quotients: Vec<f64>,
    /// False when `|d(b)| >= b`, where the quotients need not blow up.
    pub diverges: bool,
}

impl ProbeReport {
    /// Strictly increasing after skipping the first `skip` entries.
    pub fn is_increasing_after(&self, skip: usize) -> bool {
        self.quotients
            .iter()
            .skip(skip)
            .zip(self.quotients.iter().skip(skip + 1))
            .all(|(a, b)| b > a)
    }
}

impl FractalProfile {
    pub fn new(seq: MultiplicativeSequence) -> Result<Self> {
        Self::with_options(seq, 0, DEFAULT_TAIL_TOLERANCE)
    }

    /// `log_branch = k` selects `log d(b) = ln|d(b)| + i (arg d(b) + 2πk)`.
    pub fn with_options(seq: MultiplicativeSequence, log_branch: i64, tail_tolerance: f64) -> Result<Self> {
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "tail tolerance must lie in (0, 1), got {tail_tolerance}"
            )));
        }
        let sums = seq.digit_sums();
        let growth = sums.total().norm();
        if growth <= 1.0 + CLASS_EPSILON {
            return Err(Error::NotPowerClass(growth));
        }
        let depth = ((sums.max_modulus().ln() - tail_tolerance.ln()) / growth.ln()).ceil();
        Ok(FractalProfile {
            seq,
            sums,
            log_branch,
            tail_tolerance,
            truncation_depth: depth.max(1.0) as usize,
        })
    }

    pub fn sequence(&self) -> &MultiplicativeSequence {
        &self.seq
    }

    pub fn base(&self) -> u64 {
        self.seq.base()
    }

    pub fn log_branch(&self) -> i64 {
        self.log_branch
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    /// Number of significant fractional digits evaluated for infinite expansions.
    pub fn truncation_depth(&self) -> usize {
        self.truncation_depth
    }

    /// `d(b)`.
    pub fn growth(&self) -> Complex64 {
        self.sums.total()
    }

    pub fn log_growth(&self) -> Complex64 {
        let d = self.growth();
        Complex64::new(d.norm().ln(), d.arg() + TAU * self.log_branch as f64)
    }

    /// `log d(b) / log b`; its real part is the growth exponent.
    pub fn exponent(&self) -> Complex64 {
        self.log_growth() / (self.base() as f64).ln()
    }

    /// Upper bound on the discarded tail `Σ_{i>M} max_c|d(c)| |d(b)|^{-i}`.
    pub fn tail_bound(&self) -> f64 {
        let d = self.growth().norm();
        self.sums.max_modulus() * d.powi(-(self.truncation_depth as i32)) / (d - 1.0)
    }

    /// `max_c |d(c)| Σ_{i≥0} |d(b)|^{-i}`, a bound on `|F|`.
    pub fn profile_bound(&self) -> f64 {
        let d = self.growth().norm();
        self.sums.max_modulus() / (1.0 - 1.0 / d)
    }

    fn check_base(&self, x: &Expansion) -> Result<()> {
        if x.base() != self.base() {
            return Err(Error::InvalidArgument(format!(
                "expansion in base {} for a base-{} profile",
                x.base(),
                self.base()
            )));
        }
        Ok(())
    }

    /// `ψ(x)`. Explicitly finite expansions are summed in full; otherwise the
    /// series stops `truncation_depth` digits past the leading digit.
    pub fn psi(&self, x: &Expansion) -> Result<Complex64> {
        self.check_base(x)?;
        let (mut acc, mut prefix) = telescoped_sum(&self.seq, &self.sums, x.integer_digits());
        let inv_growth = self.growth().inv();
        let mut scale = Complex64::new(1.0, 0.0);
        let mut significant = !x.integer_digits().is_empty();
        let mut counted = 0;
        let mut digits = x.fraction_digits();
        while !digits.exhausted() && (digits.is_finite() || counted < self.truncation_depth) {
            let c = digits.next().expect("infinite iterator");
            scale *= inv_growth;
            acc += prefix * self.sums.get(c) * scale;
            prefix *= self.seq.weight(c);
            significant |= c != 0;
            if significant {
                counted += 1;
            }
        }
        Ok(acc)
    }

    pub fn psi_ratio(&self, num: u64, den: u64) -> Result<Complex64> {
        self.psi(&Expansion::from_ratio(num.into(), den.into(), self.base())?)
    }

    /// `F(y) = ψ(b^y) e^{-y log d(b)}`.
    pub fn profile_f(&self, y: f64) -> Result<Complex64> {
        if !y.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite argument {y}")));
        }
        let b = self.base();
        let whole = y.floor();
        let mantissa = (b as f64).powf(y - whole);
        let mut x = BigRational::from_float(mantissa).ok_or(Error::NonPositiveArgument)?;
        let shift = BigRational::from_integer(BigInt::from(b)).pow(whole as i32);
        x *= shift;
        let psi = self.psi(&Expansion::from_rational(&x, b)?)?;
        Ok(psi * (-self.log_growth() * y).exp())
    }

    /// `count` equally spaced samples of `F` on `[0, 1)`.
    pub fn sample_f(&self, count: usize) -> Result<Vec<FSample>> {
        if count < 2 {
            return Err(Error::InvalidArgument("sample count must be at least 2".into()));
        }
        sample_points(count)
            .map(|y| Ok(FSample { y, value: self.profile_f(y)? }))
            .collect()
    }

    /// Difference quotients of `ψ` over the shrinking intervals `[x_n, y_n]`,
    /// where `x_n` cuts `x` after its `J_n`-th fractional digit and `y_n` raises
    /// that digit by one. The magnitudes equal `(b / |d(b)|)^{J_n}`.
    pub fn difference_quotient_probe(&self, x: &Expansion, depth: usize) -> Result<ProbeReport> {
        self.check_base(x)?;
        let b = self.base();
        let x = x.canonical();
        let positions: Vec<usize> = x
            .fraction_digits()
            .take(PROBE_SCAN_LIMIT)
            .enumerate()
            .filter(|&(_, c)| c < b - 1)
            .map(|(i, _)| i + 1)
            .take(depth)
            .collect();
        let mut quotients = Vec::with_capacity(positions.len());
        for &j in &positions {
            let lower = x.truncate(j);
            let mut digits: Vec<u64> = lower.fraction_digits().take(j).collect();
            digits[j - 1] += 1;
            let upper = Expansion::from_digits(b, x.integer_digits().to_vec(), digits, Vec::new())?;
            let delta = self.psi(&upper)? - self.psi(&lower)?;
            quotients.push(delta.norm() * (b as f64).powi(j as i32));
        }
        Ok(ProbeReport {
            positions,
            quotients,
            diverges: self.growth().norm() < b as f64,
        })
    }
}

/// `y = k / count` for `k = 0..count`.
pub fn sample_points(count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |k| k as f64 / count as f64)
}

/// CSV with header `y,re,im` and 17 significant digits per value.
pub fn samples_csv(samples: &[FSample]) -> String {
    let mut out = String::from("y,re,im\n");
    for s in samples {
        let _ = writeln!(out, "{},{},{}", sig17(s.y), sig17(s.value.re), sig17(s.value.im));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{build_twist, closed_form_partial_sum, naive_partial_sum, rarefied_sum};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one_i() -> FractalProfile {
        FractalProfile::new(MultiplicativeSequence::parse("[[1,0],[0,1]]").unwrap()).unwrap()
    }

    fn tm_twist() -> FractalProfile {
        FractalProfile::new(build_twist(&MultiplicativeSequence::thue_morse(), 3, 1).unwrap()).unwrap()
    }

    fn rel_close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn rejects_non_power_sequences() {
        let tm = MultiplicativeSequence::thue_morse();
        assert!(matches!(FractalProfile::new(tm), Err(Error::NotPowerClass(_))));
        let ppm = MultiplicativeSequence::from_signs("++-").unwrap();
        assert!(matches!(FractalProfile::new(ppm), Err(Error::NotPowerClass(_))));
    }

    #[test]
    fn truncation_depth_formula() {
        let p = one_i();
        // max |d(c)| = |1 + i| = √2, |d(2)| = √2.
        let expected = ((2f64.sqrt().ln() - 1e-12f64.ln()) / 2f64.sqrt().ln()).ceil() as usize;
        assert_eq!(p.truncation_depth(), expected);
        assert!(p.tail_bound() <= 1e-12 / (2f64.sqrt() - 1.0) * 1.000001);
    }

    #[test]
    fn psi_examples() {
        let p = one_i();
        assert_eq!(p.psi_ratio(1, 1).unwrap(), c(1.0, 0.0));
        assert!(rel_close(p.psi_ratio(2, 1).unwrap(), c(1.0, 1.0), 1e-15));
        assert!(rel_close(p.psi_ratio(3, 1).unwrap(), c(1.0, 2.0), 1e-15));
        assert!(p.psi_ratio(0, 1).is_err());
    }

    #[test]
    fn psi_at_integers_is_the_closed_form() {
        for profile in [one_i(), tm_twist()] {
            for n in (1..5000u64).chain([1 << 20, 999_999, 123_456_789]) {
                let x = Expansion::from_u64(n, profile.base()).unwrap();
                assert_eq!(
                    profile.psi(&x).unwrap(),
                    closed_form_partial_sum(profile.sequence(), n),
                    "n = {n}"
                );
            }
        }
    }

    #[test]
    fn profile_f_examples() {
        let p = one_i();
        assert!(rel_close(p.profile_f(0.0).unwrap(), c(1.0, 0.0), 1e-15));
        let a = p.profile_f(0.375).unwrap();
        let b = p.profile_f(1.375).unwrap();
        assert!((a - b).norm() < 1e-8);
        assert!(p.profile_f(f64::NAN).is_err());
    }

    #[test]
    fn rarefied_thue_morse_is_self_similar_at_powers_of_four() {
        let tm = MultiplicativeSequence::thue_morse();
        let alpha = 3f64.ln() / 4f64.ln();
        let ratios: Vec<f64> = (1..=9)
            .map(|k| {
                let n = 4u64.pow(k);
                rarefied_sum(&tm, 3, n, n).unwrap().re / (n as f64).powf(alpha)
            })
            .collect();
        for r in &ratios {
            assert!((r - 2.0 / 3.0).abs() < 1e-12, "{ratios:?}");
        }
        let profile = tm_twist();
        for k in 1..=9u32 {
            let n = 4u64.pow(k);
            let psi = profile.psi(&Expansion::from_u64(n, 4).unwrap()).unwrap();
            let untwisted = closed_form_partial_sum(&tm, n);
            let combined = (untwisted + psi + psi.conj()) / 3.0;
            assert!((combined.re / (n as f64).powf(alpha) - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn samples_and_csv() {
        let p = one_i();
        let s = p.sample_f(2).unwrap();
        assert_eq!(s.iter().map(|s| s.y).collect::<Vec<_>>(), [0.0, 0.5]);
        assert!(p.sample_f(1).is_err());
        let csv = samples_csv(&s);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("y,re,im"));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0], "0.0000000000000000e0");
        assert_eq!(first[1], "1.0000000000000000e0");
    }

    #[test]
    fn sampled_profile_is_bounded_and_positive_for_the_rarefied_case() {
        let p = tm_twist();
        let samples = p.sample_f(2000).unwrap();
        let bound = p.profile_bound();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for s in &samples {
            assert!(s.value.norm() <= bound, "{s:?} exceeds {bound}");
            lo = lo.min(s.value.re);
            hi = hi.max(s.value.re);
        }
        assert!(0.0 < lo && lo < hi, "lo = {lo}, hi = {hi}");
    }

    #[test]
    fn probe_on_one_third() {
        let p = one_i();
        let x = Expansion::from_ratio(1u32.into(), 3u32.into(), 2).unwrap();
        let report = p.difference_quotient_probe(&x, 10).unwrap();
        assert!(report.diverges);
        assert_eq!(report.positions, [1, 3, 5, 7, 9, 11, 13, 15, 17, 19]);
        for (&j, &q) in report.positions.iter().zip(&report.quotients) {
            let expected = 2f64.sqrt().powi(j as i32);
            assert!((q - expected).abs() <= 1e-9 * expected, "J = {j}: {q} vs {expected}");
        }
        assert!(report.is_increasing_after(0));

        let single = p.difference_quotient_probe(&x, 1).unwrap();
        assert_eq!(single.quotients.len(), 1);
        assert!(single.is_increasing_after(0));
    }

    #[test]
    fn probe_on_finite_binary_fraction() {
        let p = one_i();
        let x = Expansion::parse("0.101", 2).unwrap();
        let report = p.difference_quotient_probe(&x, 6).unwrap();
        assert_eq!(report.positions, [2, 4, 5, 6, 7, 8]);
        assert!(report.is_increasing_after(0));
        // Same number written with a 1-tail is probed through its canonical form.
        let alt = Expansion::parse("0.100(1)", 2).unwrap();
        assert_eq!(p.difference_quotient_probe(&alt, 6).unwrap(), report);
    }

    #[test]
    fn probe_reports_degenerate_growth() {
        let ones = MultiplicativeSequence::from_signs("++").unwrap();
        let p = FractalProfile::new(ones).unwrap();
        let x = Expansion::from_ratio(1u32.into(), 3u32.into(), 2).unwrap();
        let report = p.difference_quotient_probe(&x, 5).unwrap();
        assert!(!report.diverges);
    }

    #[test]
    fn two_expansions_agree() {
        let p = one_i();
        for (num, den) in [(1u64, 2u64), (3, 4), (5, 8), (7, 1), (13, 16), (1, 1024)] {
            let x = Expansion::from_ratio(num.into(), den.into(), 2).unwrap();
            let alt = x.alternate().unwrap();
            let (a, b) = (p.psi(&x).unwrap(), p.psi(&alt).unwrap());
            assert!((a - b).norm() <= 2.0 * p.tail_bound() + 1e-12 * a.norm(), "{num}/{den}");
        }
    }

    #[test]
    fn matches_naive_sum_through_psi() {
        let p = tm_twist();
        for n in [1u64, 7, 100, 4095, 65_537] {
            let naive = naive_partial_sum(p.sequence(), n, n).unwrap();
            let psi = p.psi(&Expansion::from_u64(n, 4).unwrap()).unwrap();
            assert!((naive - psi).norm() <= 1e-9 * naive.norm().max(1.0));
        }
    }

    proptest! {
        #[test]
        fn scaling_law(num in 1u64..100_000, den in 1u64..1000) {
            let p = one_i();
            let x = p.psi_ratio(num, den).unwrap();
            let bx = p.psi_ratio(2 * num, den).unwrap();
            let tol = 1e-9 * bx.norm() + p.tail_bound() * 4.0;
            prop_assert!((bx - p.growth() * x).norm() <= tol);
        }

        #[test]
        fn continuity_bound(num in 1u64..1_000_000, m in 1usize..20, tail in proptest::collection::vec(0u64..2, 30)) {
            let p = one_i();
            let x = Expansion::from_ratio(num.into(), 1000u64.into(), 2).unwrap();
            let mut digits: Vec<u64> = x.fraction_digits().take(m).collect();
            digits.extend(tail);
            let near = Expansion::from_digits(2, x.integer_digits().to_vec(), digits, Vec::new()).unwrap();
            let d = p.growth().norm();
            let maxc = 2f64.sqrt();
            let bound = 2.0 * maxc * d.powi(-(m as i32) - 1) / (1.0 - 1.0 / d);
            let diff = (p.psi(&x).unwrap() - p.psi(&near).unwrap()).norm();
            prop_assert!(diff <= bound + p.tail_bound(), "diff {diff} bound {bound}");
        }
    }
}
