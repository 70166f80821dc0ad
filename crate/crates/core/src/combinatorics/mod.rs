//! Counting identities over `F_p^×`: subset sums, coefficient sequences, the
//! partition lattice and linear forms with coefficients in `{0, 1, 2}`.

mod linear_form;
mod partition;

pub use linear_form::{
    brute_linear_form_difference, linear_form_difference, LinearForm, LinearFormCounts,
    MAX_BRUTE_PRIME,
};
pub use partition::{
    enumerate_partitions, mobius, mobius_inversion_difference, Partition, PartitionLattice,
    MAX_LATTICE_N,
};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{require_odd_prime, BinomialTable};
use crate::{Error, Result};

/// Cap on the number of objects any exhaustive count may visit.
pub const ENUMERATION_BOUND: u128 = 10_000_000;

fn binomial_u128(n: u64, k: u64) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `A_i(n, p)`: number of `n`-element subsets of `F_p^×` summing to `i`.
pub fn subset_count(i: u64, n: u64, p: u64) -> Result<u64> {
    require_odd_prime(p)?;
    if n > p - 1 {
        return Err(Error::InvalidArgument(format!("subset size {n} exceeds p - 1 = {}", p - 1)));
    }
    let visits = binomial_u128(p - 1, n);
    if visits > ENUMERATION_BOUND {
        return Err(Error::EnumerationBound { requested: visits, bound: ENUMERATION_BOUND });
    }
    let target = i % p;
    Ok((1..p)
        .combinations(n as usize)
        .filter(|subset| subset.iter().sum::<u64>() % p == target)
        .count() as u64)
}

/// `E_x(n, p)` from its closed form; the count does not depend on the
/// coefficients `k_i ∈ F_p^×`.
pub fn sequence_count_closed_form(x: u64, n: u32, p: u64) -> Result<BigInt> {
    require_odd_prime(p)?;
    let pb = BigInt::from(p);
    let power = num_traits::pow(BigInt::from(p - 1), n as usize);
    let numerator = match (n.is_multiple_of(2), x.is_multiple_of(p)) {
        (true, true) => power + &pb - 1,
        (true, false) => power - 1,
        (false, true) => power - &pb + 1,
        (false, false) => power + 1,
    };
    Ok(numerator / pb)
}

/// `E^{k_1..k_n}_x(n, p)` by enumerating all of `(F_p^×)^n`.
pub fn sequence_count_enumerated(x: u64, coefficients: &[u64], p: u64) -> Result<u64> {
    require_odd_prime(p)?;
    let n = coefficients.len();
    let visits = (p as u128 - 1).checked_pow(n as u32).unwrap_or(u128::MAX);
    if visits > ENUMERATION_BOUND {
        return Err(Error::EnumerationBound { requested: visits, bound: ENUMERATION_BOUND });
    }
    if let Some(&k) = coefficients.iter().find(|&&k| k % p == 0) {
        return Err(Error::ResidueOutOfRange { residue: k, p });
    }
    let target = x % p;
    Ok((0..n)
        .map(|_| 1..p)
        .multi_cartesian_product()
        .filter(|xs| xs.iter().zip(coefficients).map(|(a, k)| a * k).sum::<u64>() % p == target)
        .count() as u64)
}

/// Both sides of `Σ_{k=0}^m (-1)^{k+n} C(n, k) = (-1)^{m+n} C(n-1, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingSum {
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl AlternatingSum {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn binomial_alternating_sum(m: usize, n: usize) -> Result<AlternatingSum> {
    if n == 0 || m > n {
        return Err(Error::InvalidArgument(format!("need n >= m and n >= 1, got m = {m}, n = {n}")));
    }
    let table = BinomialTable::new(n);
    let lhs = (0..=m).fold(BigInt::zero(), |acc, k| {
        let term = table.get(n, k);
        if (k + n).is_multiple_of(2) {
            acc + term
        } else {
            acc - term
        }
    });
    let magnitude = table.get(n - 1, m);
    let rhs = if (m + n).is_multiple_of(2) { magnitude } else { -magnitude };
    Ok(AlternatingSum { lhs, rhs })
}
