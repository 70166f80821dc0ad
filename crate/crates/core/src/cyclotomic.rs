//! Exact arithmetic in `Z[T]/(T^p - 1)`, products over cosets of subgroups of
//! `F_p^×`, and norm/trace extraction from Galois-symmetric expansions.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{require_odd_prime, root_of_unity};
use crate::{Error, Result};

/// An element `C_0 + C_1 T + … + C_{p-1} T^{p-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl RingElement {
    pub fn new(p: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        require_odd_prime(p)?;
        if coeffs.len() as u64 != p {
            return Err(Error::WeightCount { expected: p as usize, got: coeffs.len() });
        }
        Ok(Self { p, coeffs })
    }

    pub fn zero(p: u64) -> Result<Self> {
        Self::new(p, vec![BigInt::zero(); p as usize])
    }

    pub fn one(p: u64) -> Result<Self> {
        Self::monomial(p, BigInt::one(), 0)
    }

    /// `c · T^e`, exponent reduced mod `p`.
    pub fn monomial(p: u64, c: BigInt, e: u64) -> Result<Self> {
        let mut out = Self::zero(p)?;
        out.coeffs[(e % p) as usize] = c;
        Ok(out)
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Result<Self> {
        let mut out = Self::zero(p)?;
        for (i, &c) in coeffs.iter().enumerate() {
            out.coeffs[i % p as usize] += c;
        }
        Ok(out)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: u64) -> &BigInt {
        &self.coeffs[(i % self.p) as usize]
    }

    pub fn mul_mod(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::RingMismatch(self.p as usize, other.p as usize));
        }
        let p = self.p as usize;
        let mut out = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out[(i + j) % p] += a * b;
            }
        }
        Ok(Self { p: self.p, coeffs: out })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::RingMismatch(self.p as usize, other.p as usize));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { p: self.p, coeffs })
    }

    /// Multiplies in place by `Σ c_k T^{e_k}`.
    fn mul_sparse(&mut self, factor: &[(BigInt, u64)]) {
        let p = self.p as usize;
        let mut out = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (c, e) in factor {
                out[(i + *e as usize) % p] += a * c;
            }
        }
        self.coeffs = out;
    }

    /// `Σ C_i ζ_p^{ij}` in double precision.
    pub fn evaluate_numeric(&self, j: u64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| root_of_unity(self.p, (i as u64 * (j % self.p)) as i128) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// Whether `C_1 = C_2 = … = C_{p-1}`.
    pub fn is_symmetric(&self) -> bool {
        self.coeffs[1..].iter().all(|c| *c == self.coeffs[1])
    }
}

impl Mul for &RingElement {
    type Output = RingElement;

    fn mul(self, rhs: &RingElement) -> RingElement {
        self.mul_mod(rhs).expect("ring elements over the same prime")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}T")?,
                _ => write!(f, "{c}T^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A polynomial `Σ c_k T^{e_k}` whose value at `T^j` is a factor of a product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support {
    terms: Vec<(BigInt, u64)>,
}

impl Support {
    pub fn new(terms: Vec<(BigInt, u64)>) -> Self {
        Self { terms }
    }

    /// Dense coefficient list: `[1, 1, -1]` is `1 + T - T²`.
    pub fn from_coefficients(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(e, &c)| (BigInt::from(c), e as u64))
                .collect(),
        )
    }

    pub fn parse(literal: &str) -> Result<Self> {
        let coeffs = literal
            .split(',')
            .map(|s| s.trim().trim_start_matches('+').parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::MalformedLiteral(literal.to_string()))?;
        Ok(Self::from_coefficients(&coeffs))
    }

    /// `1 - T`.
    pub fn one_minus_t() -> Self {
        Self::from_coefficients(&[1, -1])
    }

    /// `1 + T - T²`.
    pub fn golden() -> Self {
        Self::from_coefficients(&[1, 1, -1])
    }

    pub fn terms(&self) -> &[(BigInt, u64)] {
        &self.terms
    }

    fn at_power(&self, j: u64, p: u64) -> Vec<(BigInt, u64)> {
        self.terms.iter().map(|(c, e)| (c.clone(), e * j % p)).collect()
    }
}

/// `∏_{j ∈ indices} support(T^j)` expanded exactly.
pub fn product_over_set(p: u64, support: &Support, indices: &[u64]) -> Result<RingElement> {
    let mut acc = RingElement::one(p)?;
    for &j in indices {
        if j % p == 0 {
            return Err(Error::ResidueOutOfRange { residue: j, p });
        }
        acc.mul_sparse(&support.at_power(j % p, p));
    }
    Ok(acc)
}

/// `C_0 - C_1` for a Galois-symmetric expansion.
pub fn norm_from_expansion(e: &RingElement) -> Result<BigInt> {
    if !e.is_symmetric() {
        return Err(Error::AsymmetricExpansion);
    }
    Ok(&e.coeffs[0] - &e.coeffs[1])
}

/// A subgroup `Γ ⊆ F_p^×` together with its cosets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSystem {
    p: u64,
    generators: Vec<u64>,
    gamma: Vec<u64>,
    cosets: Vec<Vec<u64>>,
}

impl CosetSystem {
    pub fn new(p: u64, generators: &[u64]) -> Result<Self> {
        require_odd_prime(p)?;
        if let Some(&g) = generators.iter().find(|&&g| g % p == 0) {
            return Err(Error::ResidueOutOfRange { residue: g, p });
        }
        let mut member = vec![false; p as usize];
        member[1] = true;
        let mut gamma = vec![1u64];
        let mut frontier = vec![1u64];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = x * (g % p) % p;
                if !member[y as usize] {
                    member[y as usize] = true;
                    gamma.push(y);
                    frontier.push(y);
                }
            }
        }
        gamma.sort_unstable();

        let mut used = vec![false; p as usize];
        let mut cosets = Vec::new();
        for a in 1..p {
            if used[a as usize] {
                continue;
            }
            let mut coset: Vec<u64> = gamma.iter().map(|g| a * g % p).collect();
            coset.sort_unstable();
            for &x in &coset {
                used[x as usize] = true;
            }
            cosets.push(coset);
        }
        Ok(Self { p, generators: generators.to_vec(), gamma, cosets })
    }

    /// `Γ = ⟨b⟩`.
    pub fn generated_by(p: u64, b: u64) -> Result<Self> {
        Self::new(p, &[b])
    }

    /// `Γ` = the nonzero squares.
    pub fn squares(p: u64) -> Result<Self> {
        require_odd_prime(p)?;
        let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
        Self::new(p, &squares)
    }

    pub fn full(p: u64) -> Result<Self> {
        Self::new(p, &(1..p).collect::<Vec<_>>())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn gamma(&self) -> &[u64] {
        &self.gamma
    }

    pub fn cosets(&self) -> &[Vec<u64>] {
        &self.cosets
    }

    /// Smallest element of each coset.
    pub fn representatives(&self) -> Vec<u64> {
        self.cosets.iter().map(|c| c[0]).collect()
    }

    /// Index of the coset containing `a`.
    pub fn coset_of(&self, a: u64) -> Option<usize> {
        let a = a % self.p;
        self.cosets.iter().position(|c| c.binary_search(&a).is_ok())
    }
}

/// `ξ^{[a]} = ∏_{j ∈ aΓ} support(T^j)`, one per coset.
pub fn coset_products(system: &CosetSystem, support: &Support) -> Result<Vec<RingElement>> {
    system.cosets.iter().map(|c| product_over_set(system.p, support, c)).collect()
}

/// `Σ_a ξ^{[a]}` read off as a rational integer.
pub fn trace_of_coset_products(system: &CosetSystem, support: &Support) -> Result<BigInt> {
    let mut total = RingElement::zero(system.p)?;
    for e in coset_products(system, support)? {
        total = total.add(&e)?;
    }
    norm_from_expansion(&total)
}

pub fn evaluate_numeric(e: &RingElement, j: u64) -> Complex64 {
    e.evaluate_numeric(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_between;
    use crate::sequences::{build_twist, MultiplicativeSequence};
    use crate::spectral::eigenvalues_of_m;

    fn full_set(p: u64) -> Vec<u64> {
        (1..p).collect()
    }

    #[test]
    fn ring_examples() {
        let a = RingElement::from_i64(5, &[1, 1]).unwrap();
        let b = RingElement::from_i64(5, &[1, -1]).unwrap();
        assert_eq!(&a * &b, RingElement::from_i64(5, &[1, 0, -1]).unwrap());

        let x = RingElement::monomial(7, BigInt::one(), 6).unwrap();
        let y = RingElement::monomial(7, BigInt::one(), 2).unwrap();
        assert_eq!(&x * &y, RingElement::monomial(7, BigInt::one(), 1).unwrap());

        for p in [3u64, 5, 11] {
            let ones = RingElement::from_i64(p, &vec![1; p as usize]).unwrap();
            let scaled = RingElement::from_i64(p, &vec![p as i64; p as usize]).unwrap();
            assert_eq!(&ones * &ones, scaled);
        }

        let other = RingElement::one(7).unwrap();
        assert_eq!(a.mul_mod(&other), Err(Error::RingMismatch(5, 7)));
        assert!(RingElement::new(5, vec![BigInt::one(); 4]).is_err());
    }

    #[test]
    fn product_examples() {
        let e = product_over_set(5, &Support::one_minus_t(), &full_set(5)).unwrap();
        assert_eq!(e, RingElement::from_i64(5, &[4, -1, -1, -1, -1]).unwrap());
        let g = product_over_set(5, &Support::golden(), &full_set(5)).unwrap();
        assert_eq!(norm_from_expansion(&g).unwrap(), BigInt::from(11));
        assert_eq!(
            product_over_set(7, &Support::golden(), &[]).unwrap(),
            RingElement::one(7).unwrap()
        );
        assert!(product_over_set(5, &Support::golden(), &[0]).is_err());
        assert!(product_over_set(5, &Support::golden(), &[10]).is_err());
    }

    #[test]
    fn norm_examples() {
        let e = product_over_set(7, &Support::one_minus_t(), &full_set(7)).unwrap();
        assert_eq!(norm_from_expansion(&e).unwrap(), BigInt::from(7));
        let g = product_over_set(7, &Support::golden(), &full_set(7)).unwrap();
        assert_eq!(norm_from_expansion(&g).unwrap(), BigInt::from(29));
        assert_eq!(norm_from_expansion(&RingElement::one(7).unwrap()).unwrap(), BigInt::one());
        let t = RingElement::from_i64(7, &[0, 1]).unwrap();
        assert_eq!(norm_from_expansion(&t), Err(Error::AsymmetricExpansion));
    }

    #[test]
    fn support_parsing() {
        assert_eq!(Support::parse("1,1,-1").unwrap(), Support::golden());
        assert_eq!(Support::parse("1, +1, -1").unwrap(), Support::golden());
        assert!(Support::parse("1,x").is_err());
    }

    #[test]
    fn one_minus_t_product_is_corollary_shape() {
        for p in primes_between(3, 31) {
            let e = product_over_set(p, &Support::one_minus_t(), &full_set(p)).unwrap();
            let mut expected = vec![-1i64; p as usize];
            expected[0] = p as i64 - 1;
            assert_eq!(e, RingElement::from_i64(p, &expected).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn coset_systems() {
        let sq = CosetSystem::squares(7).unwrap();
        assert_eq!(sq.gamma(), &[1, 2, 4]);
        assert_eq!(sq.cosets(), &[vec![1, 2, 4], vec![3, 5, 6]]);
        assert_eq!(sq.coset_of(6), Some(1));
        let two = CosetSystem::generated_by(17, 2).unwrap();
        assert_eq!(two.gamma().len(), 8);
        assert_eq!(two.representatives(), vec![1, 3]);
        let full = CosetSystem::full(11).unwrap();
        assert_eq!(full.cosets().len(), 1);
        assert!(CosetSystem::new(5, &[5]).is_err());
        for p in primes_between(3, 60) {
            for b in 2..p {
                let sys = CosetSystem::generated_by(p, b).unwrap();
                let mut all: Vec<u64> = sys.cosets().concat();
                all.sort_unstable();
                assert_eq!(all, full_set(p));
                assert!(sys.cosets().iter().all(|c| c.len() == sys.gamma().len()));
            }
        }
    }

    #[test]
    fn degenerate_and_square_cosets() {
        let full = CosetSystem::full(5).unwrap();
        let products = coset_products(&full, &Support::one_minus_t()).unwrap();
        assert_eq!(products, vec![product_over_set(5, &Support::one_minus_t(), &full_set(5)).unwrap()]);

        let sq = CosetSystem::squares(5).unwrap();
        let products = coset_products(&sq, &Support::one_minus_t()).unwrap();
        let joined = &products[0] * &products[1];
        assert_eq!(norm_from_expansion(&joined).unwrap(), BigInt::from(5));

        let sq7 = CosetSystem::squares(7).unwrap();
        for xi in coset_products(&sq7, &Support::one_minus_t()).unwrap() {
            let z = xi.evaluate_numeric(1);
            assert!(z.re.abs() < 1e-9 * z.norm());
        }
    }

    #[test]
    fn trace_examples() {
        let rows = [(5u64, 5i64), (13, 13), (17, 34), (29, 29), (37, 74), (41, 410)];
        for (p, trace) in rows {
            let sys = CosetSystem::squares(p).unwrap();
            assert_eq!(
                trace_of_coset_products(&sys, &Support::one_minus_t()).unwrap(),
                BigInt::from(trace),
                "p = {p}"
            );
        }
    }

    #[test]
    fn numeric_evaluation() {
        assert_eq!(RingElement::one(5).unwrap().evaluate_numeric(3), Complex64::new(1.0, 0.0));
        let e = product_over_set(5, &Support::one_minus_t(), &full_set(5)).unwrap();
        assert!((evaluate_numeric(&e, 1) - Complex64::new(5.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn norm_is_multiplicative_over_cosets() {
        for p in primes_between(3, 43) {
            for support in [Support::one_minus_t(), Support::golden()] {
                let whole = product_over_set(p, &support, &full_set(p)).unwrap();
                for sys in [CosetSystem::squares(p).unwrap(), CosetSystem::generated_by(p, 2).unwrap()] {
                    let parts = coset_products(&sys, &support).unwrap();
                    let joined = parts.iter().fold(RingElement::one(p).unwrap(), |acc, e| &acc * e);
                    assert_eq!(joined, whole);
                    assert_eq!(norm_from_expansion(&joined), norm_from_expansion(&whole));
                }
            }
        }
    }

    #[test]
    fn phase_follows_subgroup_parity() {
        for p in primes_between(3, 47) {
            for b in 2..p {
                let sys = CosetSystem::generated_by(p, b).unwrap();
                let even = sys.gamma().len().is_multiple_of(2);
                for xi in coset_products(&sys, &Support::one_minus_t()).unwrap() {
                    let z = xi.evaluate_numeric(1);
                    if even {
                        assert!(z.im.abs() < 1e-6 * z.norm() && z.re > 0.0, "p={p} b={b}");
                    } else {
                        assert!(z.re.abs() < 1e-6 * z.norm(), "p={p} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn twisted_digit_sum_is_a_coset_product() {
        let cases = [(2u64, 3u64, "+-"), (2, 5, "+-"), (2, 7, "+-"), (3, 5, "+-+"), (3, 7, "+--")];
        for (b, p, literal) in cases {
            let t = MultiplicativeSequence::from_signs(literal).unwrap();
            assert_eq!(t.base(), b);
            let twist = build_twist(&t, p, 1).unwrap();
            let numeric = twist.digit_sums().total();
            let support = Support::new(
                t.weights().iter().enumerate().map(|(c, w)| (BigInt::from(w.re as i64), c as u64)).collect(),
            );
            let sys = CosetSystem::generated_by(p, b).unwrap();
            let xi = product_over_set(p, &support, sys.gamma()).unwrap();
            let exact = xi.evaluate_numeric(1);
            assert!((numeric - exact).norm() < 1e-6, "b={b} p={p}: {numeric} vs {exact}");
        }
    }

    #[test]
    fn spectrum_is_the_two_coset_products() {
        for p in primes_between(3, 61) {
            let eig = eigenvalues_of_m(p).unwrap();
            let sys = CosetSystem::generated_by(p, 2).unwrap();
            let xis = coset_products(&sys, &Support::one_minus_t()).unwrap();
            for (a, lambda) in eig.iter().enumerate().skip(1) {
                let coset = sys.coset_of(a as u64).unwrap();
                let z = xis[coset].evaluate_numeric(1);
                assert!((z - lambda).norm() < 1e-6 * z.norm().max(1.0), "p={p} a={a}");
            }
        }
    }
}
