//! Invariant suites behind `rarefact verify`.

use std::fmt;

use clap::ValueEnum;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use rayon::prelude::*;

use rarefact::arith::{multiplicative_order, primes_between};
use rarefact::combinatorics::{
    brute_linear_form_difference, linear_form_difference, mobius_inversion_difference, subset_count,
    LinearForm, PartitionLattice,
};
use rarefact::cyclotomic::{
    coset_products, norm_from_expansion, product_over_set, trace_of_coset_products, CosetSystem,
    RingElement, Support,
};
use rarefact::fractal::{Expansion, FractalProfile};
use rarefact::lucas::{
    binomials_formula, domino_circle, domino_interval, factor_congruence_check, fibonacci, lucas,
    lucas_identity_check, FactorBudget, Verdict,
};
use rarefact::sequences::{
    closed_form_partial_sum, naive_partial_sum, rarefied_sum, rarefied_sum_via_twists,
    thue_morse_fast, MultiplicativeSequence, MAX_TWIST_BASE,
};
use rarefact::spectral::{log_product_nonzero, spectral_report};

use crate::{seed_from_env, Cell, CliError, Report, RunStatus, Table, VerifyArgs};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Suite {
    All,
    Sequences,
    Fractal,
    Spectral,
    Combinatorics,
    Cyclotomic,
    Lucas,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.to_possible_value().expect("no skipped variants");
        f.write_str(name.get_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

struct Context {
    pmax: u64,
    tol: f64,
    seed: u64,
}

type Outcome = Result<String, String>;
type CheckFn = fn(&Context) -> Outcome;

const CHECKS: &[(Suite, &str, CheckFn)] = &[
    (Suite::Sequences, "closed-form-sums", closed_form_sums),
    (Suite::Sequences, "twisted-rarefied-sums", twisted_rarefied_sums),
    (Suite::Sequences, "newman-positivity", newman_positivity),
    (Suite::Fractal, "scaling", scaling),
    (Suite::Fractal, "periodicity", periodicity),
    (Suite::Fractal, "two-expansions", two_expansions),
    (Suite::Fractal, "difference-quotients", difference_quotients),
    (Suite::Spectral, "eigenvalue-product", eigenvalue_product),
    (Suite::Spectral, "r-never-two", r_never_two),
    (Suite::Combinatorics, "subset-sums", subset_sums),
    (Suite::Combinatorics, "mobius", mobius_values),
    (Suite::Combinatorics, "linear-forms", linear_forms),
    (Suite::Cyclotomic, "one-minus-t-product", one_minus_t_product),
    (Suite::Cyclotomic, "trace-table", traces),
    (Suite::Cyclotomic, "coset-phases", coset_phases),
    (Suite::Lucas, "norm-equals-lucas", norm_equals_lucas),
    (Suite::Lucas, "dominoes", dominoes),
    (Suite::Lucas, "identities", identities),
    (Suite::Lucas, "factor-congruences", factor_congruences),
];

pub fn run(args: &VerifyArgs) -> Result<(Report, RunStatus), CliError> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    if args.pmax < 3 {
        return Err(CliError::Usage("--pmax must be at least 3".into()));
    }
    let ctx = Context { pmax: args.pmax, tol: args.tol, seed: seed_from_env()? };
    let selected: Vec<_> = CHECKS
        .iter()
        .filter(|(suite, _, _)| args.suite == Suite::All || *suite == args.suite)
        .collect();
    let checks: Vec<Check> = selected
        .par_iter()
        .map(|&&(suite, name, f)| {
            let (status, detail) = match f(&ctx) {
                Ok(detail) if detail.starts_with(INCONCLUSIVE) => (Status::Inconclusive, detail),
                Ok(detail) => (Status::Pass, detail),
                Err(detail) => (Status::Fail, detail),
            };
            Check { suite, name, status, detail }
        })
        .collect();
    let status = if checks.iter().any(|c| c.status == Status::Fail) {
        RunStatus::Failed
    } else {
        RunStatus::Success
    };
    let rows = checks
        .into_iter()
        .map(|c| {
            vec![
                Cell::Text(c.suite.to_string()),
                Cell::Text(c.name.to_string()),
                Cell::Text(c.status.to_string()),
                Cell::Text(c.detail),
            ]
        })
        .collect();
    Ok((Report::Table(Table::new(&["suite", "check", "status", "detail"], rows)), status))
}

const INCONCLUSIVE: &str = "inconclusive: ";

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: rarefact::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn sample_sequences() -> Vec<MultiplicativeSequence> {
    let mut out = vec![MultiplicativeSequence::thue_morse()];
    for literal in ["++-", "+-+", "[[1,0],[0,1]]", "[[1,0],[0.6,0.8],[-1,0]]"] {
        out.push(MultiplicativeSequence::parse(literal).expect("literal"));
    }
    out
}

fn closed_form_sums(ctx: &Context) -> Outcome {
    let seqs = sample_sequences();
    let ns: Vec<u64> = (0..=2000).chain((1..=20).map(|k| k * 4999)).collect();
    for seq in &seqs {
        for &n in &ns {
            let closed = closed_form_partial_sum(seq, n);
            let naive = lib(naive_partial_sum(seq, n, u64::MAX))?;
            ensure(close(closed, naive, ctx.tol), || format!("{} at N = {n}: {closed} vs {naive}", seq.to_literal()))?;
        }
    }
    Ok(format!("{} sequences, {} values of N", seqs.len(), ns.len()))
}

fn twisted_rarefied_sums(ctx: &Context) -> Outcome {
    let tm = MultiplicativeSequence::thue_morse();
    let mut primes = Vec::new();
    for p in primes_between(3, ctx.pmax) {
        let order = multiplicative_order(2, p);
        if order > MAX_TWIST_BASE.trailing_zeros() as u64 {
            continue;
        }
        for n in (0..=3000).step_by(7) {
            let naive = lib(rarefied_sum(&tm, p, n, u64::MAX))?;
            let twisted = lib(rarefied_sum_via_twists(&tm, p, n))?;
            ensure(close(twisted, naive, 1e-6), || format!("p = {p}, N = {n}: {twisted} vs {naive}"))?;
        }
        primes.push(p);
    }
    Ok(format!("primes {primes:?}"))
}

fn newman_positivity(_: &Context) -> Outcome {
    let mut running = 0i64;
    for n in 1..=100_000u64 {
        if (n - 1) % 3 == 0 {
            running += thue_morse_fast(n - 1) as i64;
        }
        ensure(running > 0, || format!("S_3({n}) = {running}"))?;
    }
    Ok("S_3(N) > 0 for N <= 100000".into())
}

fn one_i_profile() -> Result<FractalProfile, String> {
    lib(FractalProfile::new(lib(MultiplicativeSequence::parse("[[1,0],[0,1]]"))?))
}

fn scaling(ctx: &Context) -> Outcome {
    let profile = one_i_profile()?;
    let d = profile.growth();
    let mut count = 0;
    for num in (1..4000u64).step_by(37) {
        for den in [1u64, 3, 7, 10, 1024] {
            let x = lib(profile.psi_ratio(num, den))?;
            let bx = lib(profile.psi_ratio(2 * num, den))?;
            ensure(close(bx, d * x, ctx.tol), || format!("x = {num}/{den}: {bx} vs {}", d * x))?;
            count += 1;
        }
    }
    Ok(format!("{count} arguments"))
}

fn periodicity(_: &Context) -> Outcome {
    let profile = one_i_profile()?;
    for k in 0..64u64 {
        let y = (k * 0x9e37_79b9 % (1 << 32)) as f64 / (1u64 << 32) as f64;
        let (a, b) = (lib(profile.profile_f(y))?, lib(profile.profile_f(y + 1.0))?);
        ensure((a - b).norm() <= 1e-8, || format!("y = {y}: {a} vs {b}"))?;
    }
    Ok("64 dyadic points".into())
}

fn two_expansions(ctx: &Context) -> Outcome {
    let profile = one_i_profile()?;
    for den_exp in 1..=12u32 {
        let den = 1u64 << den_exp;
        for num in (1..4 * den).step_by(2) {
            let x = lib(Expansion::from_ratio(num.into(), den.into(), 2))?;
            let alt = x.alternate().ok_or_else(|| format!("{num}/{den} has no second expansion"))?;
            let (a, b) = (lib(profile.psi(&x))?, lib(profile.psi(&alt))?);
            let tol = 2.0 * profile.tail_bound() + ctx.tol * a.norm();
            ensure((a - b).norm() <= tol, || format!("{num}/{den}: {a} vs {b}"))?;
        }
    }
    Ok("odd numerators over 2^1..2^12".into())
}

fn difference_quotients(_: &Context) -> Outcome {
    let profile = one_i_profile()?;
    for (num, den) in [(1u64, 3u64), (1, 5), (3, 7), (1, 10)] {
        let x = lib(Expansion::from_ratio(num.into(), den.into(), 2))?;
        let report = lib(profile.difference_quotient_probe(&x, 20))?;
        ensure(report.diverges && report.is_increasing_after(3), || {
            format!("{num}/{den}: {:?}", report.quotients)
        })?;
    }
    Ok("4 points, depth 20".into())
}

fn eigenvalue_product(ctx: &Context) -> Outcome {
    let primes = primes_between(3, ctx.pmax);
    for &p in &primes {
        let report = lib(spectral_report(p))?;
        let s = report.s as f64;
        let log_prod = log_product_nonzero(&report.eigenvalues);
        let rel = (Complex64::new(log_prod.re - s * (p as f64).ln(), log_prod.im).exp() - 1.0).norm();
        ensure(rel < 1e-6, || format!("p = {p}: relative error {rel}"))?;
    }
    Ok(format!("{} primes", primes.len()))
}

fn r_never_two(ctx: &Context) -> Outcome {
    for p in primes_between(3, ctx.pmax) {
        let report = lib(spectral_report(p))?;
        ensure(report.r != 2, || format!("p = {p}"))?;
    }
    Ok(format!("primes up to {}", ctx.pmax))
}

fn subset_sums(ctx: &Context) -> Outcome {
    let primes = primes_between(3, ctx.pmax.min(13));
    for &p in &primes {
        for n in 0..p {
            let a0 = lib(subset_count(0, n, p))? as i64;
            let a1 = lib(subset_count(1, n, p))? as i64;
            ensure(a0 - a1 == if n % 2 == 0 { 1 } else { -1 }, || format!("p = {p}, n = {n}"))?;
        }
    }
    Ok(format!("primes {primes:?}"))
}

fn mobius_values(ctx: &Context) -> Outcome {
    let top = ctx.pmax.min(8) as usize;
    let mut factorial = 1i64;
    for n in 0..=top {
        if n > 0 {
            factorial *= n as i64;
        }
        let lattice = lib(PartitionLattice::get(n))?;
        for (x, mu) in lattice.iter() {
            ensure(mu == x.mobius_product(), || format!("{:?}", x.blocks()))?;
        }
        let sum = lib(mobius_inversion_difference(n))?;
        ensure(sum == if n % 2 == 0 { factorial } else { -factorial }, || format!("n = {n}: {sum}"))?;
    }
    Ok(format!("n <= {top}"))
}

fn linear_forms(ctx: &Context) -> Outcome {
    let mut count = 0;
    for p in [5u64, 7].into_iter().filter(|&p| p <= ctx.pmax) {
        let slots = p as u32 - 1;
        for code in 0..3u32.pow(slots) {
            let coefficients = (0..slots).map(|k| (code / 3u32.pow(k) % 3) as u8).collect();
            let f = lib(LinearForm::new(p, coefficients))?;
            let brute = lib(brute_linear_form_difference(&f))?;
            ensure(linear_form_difference(&f) == BigInt::from(brute.difference()), || {
                format!("{:?}", f.coefficients())
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} forms"))
}

fn one_minus_t_product(ctx: &Context) -> Outcome {
    for p in primes_between(3, ctx.pmax) {
        let e = lib(product_over_set(p, &Support::one_minus_t(), &(1..p).collect::<Vec<_>>()))?;
        let mut expected = vec![-1i64; p as usize];
        expected[0] = p as i64 - 1;
        ensure(e == lib(RingElement::from_i64(p, &expected))?, || format!("p = {p}: {e}"))?;
        ensure(lib(norm_from_expansion(&e))? == BigInt::from(p), || format!("p = {p}"))?;
    }
    Ok(format!("primes up to {}", ctx.pmax))
}

const TRACE_ROWS: [(u64, i64); 10] =
    [(5, 5), (13, 13), (17, 34), (29, 29), (37, 74), (41, 410), (53, 53), (61, 305), (73, 18250), (89, 9434)];

fn traces(ctx: &Context) -> Outcome {
    let rows: Vec<_> = TRACE_ROWS.iter().filter(|(p, _)| *p <= ctx.pmax).collect();
    for &&(p, expected) in &rows {
        let trace = lib(trace_of_coset_products(&lib(CosetSystem::squares(p))?, &Support::one_minus_t()))?;
        ensure(trace == BigInt::from(expected), || format!("p = {p}: {trace}"))?;
    }
    Ok(format!("{} rows", rows.len()))
}

fn coset_phases(ctx: &Context) -> Outcome {
    for p in primes_between(3, ctx.pmax) {
        for b in 2..p {
            let system = lib(CosetSystem::generated_by(p, b))?;
            let even = system.gamma().len() % 2 == 0;
            for xi in lib(coset_products(&system, &Support::one_minus_t()))? {
                let z = xi.evaluate_numeric(1);
                let ok = if even {
                    z.im.abs() < 1e-6 * z.norm() && z.re > 0.0
                } else {
                    z.re.abs() < 1e-6 * z.norm()
                };
                ensure(ok, || format!("p = {p}, b = {b}: {z}"))?;
            }
        }
    }
    Ok(format!("all subgroups for primes up to {}", ctx.pmax))
}

fn norm_equals_lucas(ctx: &Context) -> Outcome {
    let primes = primes_between(5, ctx.pmax);
    for &p in &primes {
        let e = lib(product_over_set(p, &Support::golden(), &(1..p).collect::<Vec<_>>()))?;
        let norm = lib(norm_from_expansion(&e))?;
        let formula = lib(binomials_formula(p))?;
        let l = BigInt::from(lucas(p));
        ensure(norm == l && formula == l, || format!("p = {p}: {norm}, {formula}, {l}"))?;
    }
    Ok(format!("{} primes", primes.len()))
}

fn dominoes(ctx: &Context) -> Outcome {
    let top = ctx.pmax.clamp(3, 20) as u32;
    for n in 2..=top {
        ensure(BigUint::from(lib(domino_interval(n))?) == fibonacci(n as u64), || format!("interval {n}"))?;
        if n >= 3 {
            ensure(BigUint::from(lib(domino_circle(n))?) == lucas(n as u64), || format!("circle {n}"))?;
        }
    }
    Ok(format!("n <= {top}"))
}

fn identities(_: &Context) -> Outcome {
    for n in 1..=60 {
        ensure(lib(lucas_identity_check(n))?, || format!("n = {n}"))?;
        ensure((lucas(n) % 2u32 == BigUint::from(0u32)) == (n % 3 == 0), || format!("parity at n = {n}"))?;
    }
    Ok("n <= 60".into())
}

fn factor_congruences(ctx: &Context) -> Outcome {
    let mut inconclusive = Vec::new();
    let mut checked = 0;
    for n in (3..=ctx.pmax).step_by(2) {
        let report = lib(factor_congruence_check(n, FactorBudget::default(), ctx.seed))?;
        match report.verdict {
            Verdict::Pass => checked += 1,
            Verdict::Fail => return Err(format!("L_{n} = {}", report.factor_string())),
            Verdict::Inconclusive => inconclusive.push(n),
        }
    }
    if inconclusive.is_empty() {
        Ok(format!("{checked} odd indices"))
    } else {
        Ok(format!("{INCONCLUSIVE}{checked} passed, budget exceeded for n in {inconclusive:?}"))
    }
}
