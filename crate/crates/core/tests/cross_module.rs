use rarefact::arith::{multiplicative_order, pow_mod, primes_between};
use rarefact::cyclotomic::{norm_from_expansion, product_over_set, Support};
use rarefact::lucas::{binomials_formula, lucas};
use rarefact::sequences::{rarefied_sum, rarefied_sum_via_twists, MultiplicativeSequence};
use rarefact::spectral::eigenvalues_of_m;
use rarefact::{BigInt, Complex64};

#[test]
fn golden_norm_is_lucas_number() {
    for p in primes_between(5, 80) {
        let all: Vec<u64> = (1..p).collect();
        let e = product_over_set(p, &Support::golden(), &all).unwrap();
        let l = BigInt::from(lucas(p));
        assert_eq!(norm_from_expansion(&e).unwrap(), l, "p = {p}");
        assert_eq!(binomials_formula(p).unwrap(), l, "p = {p}");
    }
}

#[test]
fn exact_products_match_the_spectrum() {
    for p in primes_between(3, 40) {
        let s = multiplicative_order(2, p);
        let orbit: Vec<u64> = (0..s).map(|m| pow_mod(2, m, p)).collect();
        let e = product_over_set(p, &Support::one_minus_t(), &orbit).unwrap();
        for (j, lambda) in eigenvalues_of_m(p).unwrap().into_iter().enumerate() {
            let z = e.evaluate_numeric(j as u64);
            assert!((z - lambda).norm() <= 1e-9 * lambda.norm().max(1.0), "p = {p}, j = {j}");
        }
    }
}

#[test]
fn twisted_and_direct_rarefied_sums_agree() {
    let sequences = [
        MultiplicativeSequence::thue_morse(),
        MultiplicativeSequence::parse("++-").unwrap(),
        MultiplicativeSequence::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
        ])
        .unwrap(),
    ];
    for seq in &sequences {
        for p in [2, 3, 5, 7, 11].into_iter().filter(|p| seq.base() % p != 0) {
            for n in [0, 1, 17, 1000, 65_537] {
                let direct = rarefied_sum(seq, p, n, 10_000_000).unwrap();
                let twisted = rarefied_sum_via_twists(seq, p, n).unwrap();
                assert!(
                    (direct - twisted).norm() <= 1e-9 * direct.norm().max(1.0),
                    "{} p = {p} N = {n}: {direct} vs {twisted}",
                    seq.to_literal()
                );
            }
        }
    }
}
