//! Lucas and Fibonacci numbers, domino placements on intervals and circles,
//! and the prime factors of `L_n` for odd `n`.

mod factor;

pub use factor::{factorize, is_probable_prime, FactorBudget};

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::arith::{require_odd_prime, BinomialTable};
use crate::{Error, Result};

/// Largest `n` for the bitmask domino enumerations.
pub const MAX_EXHAUSTIVE_DOMINO: u32 = 25;

/// Seed for the factorisation RNG unless the caller supplies one.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// `(L_n, F_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LucasPair {
    pub n: u64,
    pub lucas: BigUint,
    pub fibonacci: BigUint,
}

impl LucasPair {
    pub fn new(n: u64) -> Self {
        Self { n, lucas: lucas(n), fibonacci: fibonacci(n) }
    }
}

fn linear_recurrence(n: u64, x0: u64, x1: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::from(x0), BigUint::from(x1));
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

pub fn lucas(n: u64) -> BigUint {
    linear_recurrence(n, 2, 1)
}

pub fn fibonacci(n: u64) -> BigUint {
    linear_recurrence(n, 0, 1)
}

fn require_domino_range(n: u32, min: u32) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!("need n >= {min}, got {n}")));
    }
    if n > MAX_EXHAUSTIVE_DOMINO {
        return Err(Error::EnumerationBound {
            requested: n as u128,
            bound: MAX_EXHAUSTIVE_DOMINO as u128,
        });
    }
    Ok(())
}

/// Disjoint domino placements on `{1, …, n-1}`, by enumeration.
///
/// Bit `k` of a mask selects the domino `{k+1, k+2}`.
pub fn domino_interval(n: u32) -> Result<u64> {
    require_domino_range(n, 2)?;
    let slots = n - 2;
    Ok((0u32..1 << slots).filter(|&m| m & (m >> 1) == 0).count() as u64)
}

/// Disjoint domino placements on `Z/nZ`, by enumeration.
///
/// Bit `k` selects `{k, k+1 mod n}`.
pub fn domino_circle(n: u32) -> Result<u64> {
    require_domino_range(n, 3)?;
    Ok((0u32..1 << n).filter(|&m| circle_valid(m, n)).count() as u64)
}

fn circle_valid(mask: u32, n: u32) -> bool {
    let full = (1u32 << n) - 1;
    let rotated = ((mask >> 1) | (mask << (n - 1))) & full;
    mask & rotated == 0
}

/// Circle placements split by how the point `0` is covered:
/// `[uncovered, by {0, 1}, by {n-1, 0}]`.
pub fn domino_circle_decomposition(n: u32) -> Result<[u64; 3]> {
    require_domino_range(n, 3)?;
    let mut counts = [0u64; 3];
    for mask in (0u32..1 << n).filter(|&m| circle_valid(m, n)) {
        let class = if mask & 1 != 0 {
            1
        } else if mask >> (n - 1) & 1 != 0 {
            2
        } else {
            0
        };
        counts[class] += 1;
    }
    Ok(counts)
}

/// Matchings on a path with `m` points.
fn path_matchings(m: u64) -> BigUint {
    linear_recurrence(m, 1, 1)
}

/// Interval count by the path recurrence; no size limit.
pub fn domino_interval_recurrence(n: u64) -> BigUint {
    path_matchings(n.saturating_sub(1))
}

/// Circle count: the domino `{n-1, 0}` is either absent or present.
pub fn domino_circle_recurrence(n: u64) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("need n >= 3, got {n}")));
    }
    Ok(path_matchings(n) + path_matchings(n - 2))
}

/// `L_{n+1} L_{n-1} = L_n² + (-1)^{n+1} 5` and `L_n = F_{n-1} + F_{n+1}`.
pub fn lucas_identity_check(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    let l = |k| BigInt::from(lucas(k));
    let five = BigInt::from(5);
    let correction = if n % 2 == 1 { five } else { -five };
    let product = l(n + 1) * l(n - 1) == l(n) * l(n) + correction;
    let sum = lucas(n) == fibonacci(n - 1) + fibonacci(n + 1);
    Ok(product && sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Outcome of checking that every prime factor of `L_n` is `2` or `±1 mod 5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub n: u64,
    pub value: BigUint,
    /// Prime factors with multiplicity; empty when inconclusive.
    pub factors: Vec<BigUint>,
    pub verdict: Verdict,
}

impl CongruenceReport {
    /// Residues of the factors mod 5, written in `{-2, …, 2}`.
    pub fn residues(&self) -> Vec<i8> {
        self.factors
            .iter()
            .map(|q| match (q % 5u32).to_u8().unwrap_or(0) {
                r @ 0..=2 => r as i8,
                r => r as i8 - 5,
            })
            .collect()
    }

    /// `139·461` style.
    pub fn factor_string(&self) -> String {
        self.factors.iter().map(|q| q.to_string()).collect::<Vec<_>>().join("·")
    }
}

pub fn factor_congruence_check(n: u64, budget: FactorBudget, seed: u64) -> Result<CongruenceReport> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("n must be odd and at least 3, got {n}")));
    }
    let value = lucas(n);
    let Some(factors) = factorize(&value, budget, seed) else {
        return Ok(CongruenceReport { n, value, factors: Vec::new(), verdict: Verdict::Inconclusive });
    };
    let admissible = |q: &BigUint| {
        let r = (q % 5u32).to_u8().unwrap_or(0);
        *q == BigUint::from(2u32) || r == 1 || r == 4
    };
    let verdict = if factors.iter().all(admissible) { Verdict::Pass } else { Verdict::Fail };
    Ok(CongruenceReport { n, value, factors, verdict })
}

/// The double binomial sum for the norm of `1 + ζ - ζ²`.
pub fn binomials_formula(p: u64) -> Result<BigInt> {
    require_odd_prime(p)?;
    let m = p as usize - 1;
    let table = BinomialTable::new(m);
    let mut total = BigInt::zero();
    for n0 in 0..=m {
        let rest = m - n0;
        for n2 in 0..=rest.min(n0) {
            let term = table.get(rest, n2);
            if (rest - n2).is_multiple_of(2) {
                total += term;
            } else {
                total -= term;
            }
        }
        for n2 in n0 + 1..=rest {
            total += table.get(m - n2, n0);
        }
    }
    Ok(total)
}

/// `L_n` as a signed integer, for comparisons with norms.
pub fn lucas_signed(n: u64) -> BigInt {
    BigInt::from(lucas(n))
}

/// Whether `L_n` is even.
pub fn lucas_is_even(n: u64) -> bool {
    (lucas(n) % 2u32).is_zero()
}

/// `F_n = Σ_k C(n-1-k, k)`.
pub fn fibonacci_by_diagonals(n: u64) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    let m = n as usize - 1;
    let table = BinomialTable::new(m);
    (0..=m / 2)
        .map(|k| table.get(m - k, k).to_biguint().unwrap_or_default())
        .fold(BigUint::zero(), |acc, x| acc + x)
}
