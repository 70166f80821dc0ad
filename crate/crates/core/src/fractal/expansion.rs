use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Terminating expansions are detected within this many fractional digits.
const TERMINATION_SCAN: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
enum Fraction {
    /// Long division of `rem / den`, `0 <= rem < den`. Never ends in `b-1`s.
    Rational { rem: BigUint, den: BigUint },
    /// `prefix` followed by `cycle` repeated forever (zeros if `cycle` is empty).
    Periodic { prefix: Vec<u64>, cycle: Vec<u64> },
}

/// Base-`b` expansion `c_l … c_0 . c_{-1} c_{-2} …` of a positive real.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    base: u64,
    integer: Vec<u64>,
    fraction: Fraction,
}

fn integer_digits(mut n: BigUint, base: u64) -> Vec<u64> {
    let b = BigUint::from(base);
    let mut out = Vec::new();
    while !n.is_zero() {
        let (q, r) = n.div_rem(&b);
        out.push(r.to_u64().expect("digit below base"));
        n = q;
    }
    out.reverse();
    out
}

impl Expansion {
    /// Canonical expansion of `num / den` (the one not ending in `b-1`s).
    pub fn from_ratio(num: BigUint, den: BigUint, base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        if num.is_zero() || den.is_zero() {
            return Err(Error::NonPositiveArgument);
        }
        let (whole, rem) = num.div_rem(&den);
        Ok(Expansion {
            base,
            integer: integer_digits(whole, base),
            fraction: Fraction::Rational { rem, den },
        })
    }

    pub fn from_rational(x: &BigRational, base: u64) -> Result<Self> {
        if !x.is_positive() {
            return Err(Error::NonPositiveArgument);
        }
        let num = x.numer().abs().to_biguint().expect("positive");
        let den = x.denom().abs().to_biguint().expect("positive");
        Self::from_ratio(num, den, base)
    }

    pub fn from_u64(n: u64, base: u64) -> Result<Self> {
        Self::from_ratio(BigUint::from(n), BigUint::one(), base)
    }

    /// Exact expansion of the binary value stored in `x`.
    pub fn from_f64(x: f64, base: u64) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::NonPositiveArgument);
        }
        let r = BigRational::from_float(x).ok_or(Error::NonPositiveArgument)?;
        Self::from_rational(&r, base)
    }

    /// Explicit digits: integer part (most significant first), a fractional
    /// prefix and a repeating cycle (empty for a terminating expansion).
    pub fn from_digits(base: u64, integer: Vec<u64>, prefix: Vec<u64>, cycle: Vec<u64>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        if let Some(&d) = integer.iter().chain(&prefix).chain(&cycle).find(|&&d| d >= base) {
            return Err(Error::InvalidArgument(format!("digit {d} out of range for base {base}")));
        }
        let integer: Vec<u64> = integer.into_iter().skip_while(|&d| d == 0).collect();
        if integer.is_empty() && prefix.iter().chain(&cycle).all(|&d| d == 0) {
            return Err(Error::NonPositiveArgument);
        }
        Ok(Expansion { base, integer, fraction: Fraction::Periodic { prefix, cycle } })
    }

    /// Parses `"c_l…c_0.c_{-1}…(cycle)"` with digits `0-9a-z`, e.g. `"10.0(1)"`.
    pub fn parse(literal: &str, base: u64) -> Result<Self> {
        let bad = || Error::MalformedLiteral(format!("bad digit string {literal:?}"));
        let digit = |ch: char| {
            ch.to_digit(36)
                .map(u64::from)
                .filter(|&d| d < base)
                .ok_or_else(bad)
        };
        let (int_part, frac_part) = match literal.split_once('.') {
            Some((i, f)) => (i, f),
            None => (literal, ""),
        };
        let (prefix_part, cycle_part) = match frac_part.split_once('(') {
            Some((p, c)) => (p, c.strip_suffix(')').ok_or_else(bad)?),
            None => (frac_part, ""),
        };
        let integer = int_part.chars().map(digit).collect::<Result<Vec<_>>>()?;
        let prefix = prefix_part.chars().map(digit).collect::<Result<Vec<_>>>()?;
        let cycle = cycle_part.chars().map(digit).collect::<Result<Vec<_>>>()?;
        Self::from_digits(base, integer, prefix, cycle)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Integer digits, most significant first; empty when `x < 1`.
    pub fn integer_digits(&self) -> &[u64] {
        &self.integer
    }

    /// Iterator over the fractional digits `c_{-1}, c_{-2}, …` (infinite).
    pub fn fraction_digits(&self) -> FractionDigits<'_> {
        let state = match &self.fraction {
            Fraction::Rational { rem, den } => DigitState::Rational {
                rem: rem.clone(),
                den,
            },
            Fraction::Periodic { prefix, cycle } => DigitState::Periodic { prefix, cycle, pos: 0 },
        };
        FractionDigits { base: self.base, state }
    }

    /// Number of fractional digits if the expansion is known to terminate.
    pub fn terminating_length(&self) -> Option<usize> {
        match &self.fraction {
            Fraction::Periodic { prefix, cycle } => {
                if cycle.iter().all(|&d| d == 0) {
                    Some(prefix.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1))
                } else {
                    None
                }
            }
            Fraction::Rational { rem, den } => {
                let b = BigUint::from(self.base);
                let mut rem = rem.clone();
                for len in 0..=TERMINATION_SCAN {
                    if rem.is_zero() {
                        return Some(len);
                    }
                    rem = (rem * &b) % den;
                }
                None
            }
        }
    }

    /// The second expansion of a number `X b^{-m}`: the last nonzero digit is
    /// lowered by one and followed by `b-1` repeated forever.
    pub fn alternate(&self) -> Option<Expansion> {
        let len = self.terminating_length()?;
        let frac: Vec<u64> = self.fraction_digits().take(len).collect();
        let mut all: Vec<u64> = self.integer.iter().copied().chain(frac).collect();
        let last = all.iter().rposition(|&d| d != 0)?;
        all[last] -= 1;
        for d in &mut all[last + 1..] {
            *d = self.base - 1;
        }
        let split = self.integer.len();
        let prefix = all.split_off(split);
        Some(Expansion {
            base: self.base,
            integer: all.into_iter().skip_while(|&d| d == 0).collect(),
            fraction: Fraction::Periodic { prefix, cycle: vec![self.base - 1] },
        })
    }

    /// Keeps the integer digits and the first `len` fractional digits.
    pub fn truncate(&self, len: usize) -> Expansion {
        Expansion {
            base: self.base,
            integer: self.integer.clone(),
            fraction: Fraction::Periodic {
                prefix: self.fraction_digits().take(len).collect(),
                cycle: Vec::new(),
            },
        }
    }

    /// Re-expands numbers written with a `b-1` tail in canonical form.
    pub fn canonical(&self) -> Expansion {
        match &self.fraction {
            Fraction::Periodic { cycle, .. }
                if !cycle.is_empty() && cycle.iter().all(|&d| d == self.base - 1) =>
            {
                Self::from_rational(&self.to_rational(), self.base).expect("positive value")
            }
            _ => self.clone(),
        }
    }

    /// Exact value when the expansion is terminating or periodic.
    pub fn to_rational(&self) -> BigRational {
        let b = BigInt::from(self.base);
        let int_value = self
            .integer
            .iter()
            .fold(BigInt::zero(), |acc, &d| acc * &b + BigInt::from(d));
        let frac_value = match &self.fraction {
            Fraction::Rational { rem, den } => {
                BigRational::new(BigInt::from(rem.clone()), BigInt::from(den.clone()))
            }
            Fraction::Periodic { prefix, cycle } => {
                let scale = |digits: &[u64]| {
                    let v = digits.iter().fold(BigInt::zero(), |acc, &d| acc * &b + BigInt::from(d));
                    (v, num_traits::pow(b.clone(), digits.len()))
                };
                let (pv, pscale) = scale(prefix);
                let mut value = BigRational::new(pv, pscale.clone());
                if !cycle.is_empty() {
                    let (cv, cscale) = scale(cycle);
                    value += BigRational::new(cv, pscale * (cscale - BigInt::one()));
                }
                value
            }
        };
        BigRational::from_integer(int_value) + frac_value
    }
}

enum DigitState<'a> {
    Rational { rem: BigUint, den: &'a BigUint },
    Periodic { prefix: &'a [u64], cycle: &'a [u64], pos: usize },
}

pub struct FractionDigits<'a> {
    base: u64,
    state: DigitState<'a>,
}

impl FractionDigits<'_> {
    /// True once every remaining digit is known to be zero.
    pub fn exhausted(&self) -> bool {
        match &self.state {
            DigitState::Rational { rem, .. } => rem.is_zero(),
            DigitState::Periodic { prefix, cycle, pos } => {
                *pos >= prefix.len() && cycle.iter().all(|&d| d == 0)
            }
        }
    }

    /// True when the digits were given explicitly and end in zeros.
    pub fn is_finite(&self) -> bool {
        matches!(&self.state, DigitState::Periodic { cycle, .. } if cycle.iter().all(|&d| d == 0))
    }
}

impl Iterator for FractionDigits<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        match &mut self.state {
            DigitState::Rational { rem, den } => {
                if rem.is_zero() {
                    return Some(0);
                }
                let (q, r) = (&*rem * self.base).div_rem(*den);
                *rem = r;
                Some(q.to_u64().expect("digit below base"))
            }
            DigitState::Periodic { prefix, cycle, pos } => {
                let i = *pos;
                *pos += 1;
                if i < prefix.len() {
                    Some(prefix[i])
                } else if cycle.is_empty() {
                    Some(0)
                } else {
                    Some(cycle[(i - prefix.len()) % cycle.len()])
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: u64, d: u64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn third_in_binary() {
        let x = Expansion::from_rational(&ratio(1, 3), 2).unwrap();
        assert!(x.integer_digits().is_empty());
        let d: Vec<u64> = x.fraction_digits().take(6).collect();
        assert_eq!(d, [0, 1, 0, 1, 0, 1]);
        assert_eq!(x.terminating_length(), None);
        assert!(x.alternate().is_none());
    }

    #[test]
    fn alternate_of_terminating() {
        let x = Expansion::from_rational(&ratio(5, 4), 2).unwrap();
        assert_eq!(x.integer_digits(), &[1]);
        assert_eq!(x.terminating_length(), Some(2));
        let alt = x.alternate().unwrap();
        assert_eq!(alt.integer_digits(), &[1]);
        let d: Vec<u64> = alt.fraction_digits().take(5).collect();
        assert_eq!(d, [0, 0, 1, 1, 1]);
        assert_eq!(alt.to_rational(), ratio(5, 4));

        let two = Expansion::from_u64(2, 2).unwrap();
        let alt = two.alternate().unwrap();
        assert_eq!(alt.integer_digits(), &[1]);
        assert_eq!(alt.to_rational(), ratio(2, 1));
    }

    #[test]
    fn parse_and_value() {
        let x = Expansion::parse("10.0(1)", 2).unwrap();
        assert_eq!(x.to_rational(), ratio(5, 2));
        let y = Expansion::parse("0.(01)", 2).unwrap();
        assert_eq!(y.to_rational(), ratio(1, 3));
        assert!(Expansion::parse("12", 2).is_err());
        assert!(Expansion::parse("0.000", 2).is_err());
        assert!(Expansion::parse("1.(1", 2).is_err());
    }

    #[test]
    fn float_input_is_exact() {
        let x = Expansion::from_f64(0.1, 3).unwrap();
        assert_eq!(x.to_rational(), BigRational::from_float(0.1).unwrap());
        assert!(Expansion::from_f64(0.0, 2).is_err());
        assert!(Expansion::from_f64(-1.0, 2).is_err());
    }

    #[test]
    fn truncation() {
        let x = Expansion::from_rational(&ratio(1, 3), 2).unwrap();
        let t = x.truncate(4);
        assert_eq!(t.to_rational(), ratio(5, 16));
        assert_eq!(t.terminating_length(), Some(4));
    }
}
