use itertools::Itertools;
use num_bigint::BigInt;

use crate::arith::{require_odd_prime, BinomialTable};
use crate::{Error, Result};

/// Largest prime accepted by the permutation oracle.
pub const MAX_BRUTE_PRIME: u64 = 9;

/// `f(x) = f_1 x_1 + … + f_{p-1} x_{p-1}` with `f_k ∈ {0, 1, 2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    p: u64,
    coefficients: Vec<u8>,
}

impl LinearForm {
    pub fn new(p: u64, coefficients: Vec<u8>) -> Result<Self> {
        require_odd_prime(p)?;
        if coefficients.len() as u64 != p - 1 {
            return Err(Error::WeightCount { expected: p as usize - 1, got: coefficients.len() });
        }
        if let Some(&c) = coefficients.iter().find(|&&c| c > 2) {
            return Err(Error::InvalidArgument(format!("coefficient {c} not in {{0, 1, 2}}")));
        }
        Ok(Self { p, coefficients })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coefficients(&self) -> &[u8] {
        &self.coefficients
    }

    /// `n_c(f)`: number of slots with coefficient `c`.
    pub fn count(&self, c: u8) -> usize {
        self.coefficients.iter().filter(|&&k| k == c).count()
    }

    pub fn n0(&self) -> usize {
        self.count(0)
    }

    pub fn n1(&self) -> usize {
        self.count(1)
    }

    pub fn n2(&self) -> usize {
        self.count(2)
    }

    /// `f(1, 1, …, 1)`, the coefficient sum.
    pub fn weight(&self) -> usize {
        self.n1() + 2 * self.n2()
    }

    /// `2 - f`, exchanging the roles of `n_0` and `n_2`.
    pub fn complement(&self) -> Self {
        Self { p: self.p, coefficients: self.coefficients.iter().map(|c| 2 - c).collect() }
    }

    /// Value of the form at `x`, reduced mod `p`.
    pub fn evaluate(&self, x: &[u64]) -> u64 {
        self.coefficients.iter().zip(x).map(|(&c, &v)| c as u64 * v).sum::<u64>() % self.p
    }
}

/// `A_0(f, p) - A_1(f, p)` in closed form.
pub fn linear_form_difference(f: &LinearForm) -> BigInt {
    let (n0, n1, n2) = (f.n0(), f.n1(), f.n2());
    let table = BinomialTable::new(f.coefficients.len());
    let (top, bottom, odd) = if (f.weight() as u64) < f.p {
        (n1 + n2, n1, (n1 + n2) % 2 == 1)
    } else {
        (n0 + n1, n0, (n0 + n1) % 2 == 1)
    };
    let value = table.get(top, bottom);
    if odd {
        -value
    } else {
        value
    }
}

/// Exhaustive counts over all permutations of `F_p^×`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormCounts {
    /// `B_i` for `i = 0..p`.
    pub b: Vec<u64>,
    /// `A_i = B_i / (n_0! n_1! n_2!)`.
    pub a: Vec<u64>,
}

impl LinearFormCounts {
    pub fn difference(&self) -> i64 {
        self.a[0] as i64 - self.a[1] as i64
    }
}

pub fn brute_linear_form_difference(f: &LinearForm) -> Result<LinearFormCounts> {
    if f.p > MAX_BRUTE_PRIME {
        return Err(Error::EnumerationBound {
            requested: f.p as u128,
            bound: MAX_BRUTE_PRIME as u128,
        });
    }
    let p = f.p;
    let mut b = vec![0u64; p as usize];
    for perm in (1..p).permutations(p as usize - 1) {
        b[f.evaluate(&perm) as usize] += 1;
    }
    let factorial = |n: usize| (1..=n as u64).product::<u64>();
    let symmetry = factorial(f.n0()) * factorial(f.n1()) * factorial(f.n2());
    debug_assert!(b.iter().all(|&x| x % symmetry == 0));
    let a = b.iter().map(|&x| x / symmetry).collect();
    Ok(LinearFormCounts { b, a })
}
