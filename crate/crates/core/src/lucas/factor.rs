//! Integer factorisation for numbers of a few dozen digits.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::is_prime;

const TRIAL_LIMIT: u64 = 10_000;
const PROBABILISTIC_ROUNDS: usize = 40;
const BATCH: u64 = 128;

/// Limits on how much work a factorisation may do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Inputs with more decimal digits are not attempted.
    pub max_digits: usize,
    /// Total rho iterations across all splits.
    pub max_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        Self { max_digits: 24, max_iterations: 1 << 26 }
    }
}

/// Prime factors with multiplicity, ascending; `None` if the budget ran out.
pub fn factorize(n: &BigUint, budget: FactorBudget, seed: u64) -> Option<Vec<BigUint>> {
    if n.to_string().len() > budget.max_digits {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    let mut rest = n.clone();
    if rest.is_zero() {
        return None;
    }
    for q in (2..TRIAL_LIMIT).filter(|&q| is_prime(q)) {
        let qb = BigUint::from(q);
        while (&rest % &qb).is_zero() {
            factors.push(qb.clone());
            rest /= &qb;
        }
    }
    let mut remaining = budget.max_iterations;
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m, &mut rng) {
            factors.push(m);
            continue;
        }
        let d = split(&m, &mut rng, &mut remaining)?;
        stack.push(&m / &d);
        stack.push(d);
    }
    factors.sort();
    Some(factors)
}

/// Miller-Rabin: deterministic below `2^64`, randomised above.
pub fn is_probable_prime(n: &BigUint, rng: &mut impl Rng) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let twos = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> twos;
    'witness: for _ in 0..PROBABILISTIC_ROUNDS {
        let a = BigUint::from(rng.gen_range(2..u64::MAX));
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..twos {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial divisor of the composite `n` by Brent's variant of rho.
fn split(n: &BigUint, rng: &mut impl Rng, remaining: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    loop {
        let c = BigUint::from(rng.gen_range(1..u64::MAX)) % n;
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(rng.gen::<u64>()) % n;
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                *remaining = remaining.checked_sub(steps)?;
                for _ in 0..steps {
                    y = f(&y);
                    q = q * abs_diff(&x, &y) % n;
                }
                g = q.gcd(n);
                k += steps;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = abs_diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}
