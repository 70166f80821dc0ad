//! Command-line front end: argument model, report formatting and the
//! verification suites.

mod output;
mod verify;

use std::fmt;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use rayon::prelude::*;

use rarefact::arith::primes_between;
use rarefact::cyclotomic::{
    coset_products, norm_from_expansion, product_over_set, trace_of_coset_products, CosetSystem,
    Support,
};
use rarefact::fractal::{sample_points, FractalProfile, DEFAULT_TAIL_TOLERANCE};
use rarefact::lucas::{factor_congruence_check, lucas, FactorBudget, DEFAULT_SEED};
use rarefact::sequences::{
    build_twist, closed_form_partial_sum, naive_partial_sum, rarefied_sum, rarefied_sum_via_twists,
    MultiplicativeSequence, DEFAULT_ORACLE_BOUND,
};
use rarefact::spectral::spectral_report;

pub use output::{Cell, Report, Scalar, Table};
pub use verify::{Check, Status, Suite};

/// Environment variable overriding the factorisation seed.
pub const SEED_VAR: &str = "RAREFACT_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "rarefact", version, about = "Rarefied sums, fractal profiles and cyclotomic norms")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Partial sum of a sequence over n < N.
    Sum(SumArgs),
    /// Partial sum restricted to multiples of p.
    Rarefy(RarefyArgs),
    /// Samples of the periodic profile F on [0, 1).
    SampleF(SampleArgs),
    /// Spectral data of M for each prime up to pmax.
    Spectral(PmaxArgs),
    /// Norm of the product of support(T^j) over all nonzero j.
    Norm(NormArgs),
    /// Coset products evaluated at a primitive root of unity.
    Xi(XiArgs),
    /// Traces of the square-coset products of 1 - T.
    TraceTable(PmaxArgs),
    /// Lucas numbers at primes, optionally factored.
    Lucas(LucasArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SumArgs {
    /// Sign string such as "+-" or JSON weights such as [[1,0],[0,1]].
    #[arg(long)]
    pub seq: String,
    #[arg(long = "N")]
    pub n: u64,
    /// Accumulate term by term instead of using the digit formula.
    #[arg(long)]
    pub naive: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RarefyArgs {
    #[arg(long)]
    pub seq: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub naive: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub seq: String,
    #[arg(long, default_value_t = 256)]
    pub count: usize,
    /// Branch k of log d(b).
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub branch: i64,
    /// Twist the sequence by ζ_p^{jn} first.
    #[arg(long, requires = "twist_j")]
    pub twist_p: Option<u64>,
    #[arg(long, requires = "twist_p")]
    pub twist_j: Option<u64>,
    /// Tail tolerance for infinite expansions.
    #[arg(long, default_value_t = DEFAULT_TAIL_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PmaxArgs {
    #[arg(long)]
    pub pmax: u64,
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    #[arg(long)]
    pub p: u64,
    /// Coefficients of the support polynomial, lowest degree first.
    #[arg(long, allow_hyphen_values = true)]
    pub support: String,
}

#[derive(Debug, Clone, Args)]
pub struct XiArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value = "1,-1", allow_hyphen_values = true)]
    pub support: String,
    /// Use the subgroup generated by this residue instead of the squares.
    #[arg(long)]
    pub generator: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct LucasArgs {
    #[arg(long)]
    pub pmax: u64,
    /// Factor L_p and check the residues of its prime factors mod 5.
    #[arg(long)]
    pub factor: bool,
    /// Largest L_p, in decimal digits, that will be factored.
    #[arg(long, default_value_t = FactorBudget::default().max_digits)]
    pub max_digits: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 13)]
    pub pmax: u64,
    /// Relative tolerance for floating comparisons.
    #[arg(long, default_value_t = verify::DEFAULT_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(rarefact::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<rarefact::Error> for CliError {
    fn from(e: rarefact::Error) -> Self {
        CliError::Library(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }
}

/// Outcome of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Success,
    Failed,
}

impl RunStatus {
    pub fn exit_code(self) -> u8 {
        match self {
            RunStatus::Success => 0,
            RunStatus::Failed => 1,
        }
    }
}

/// Seed from `RAREFACT_SEED` (decimal or `0x` hex), else the library default.
pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var(SEED_VAR) {
        Err(_) => Ok(DEFAULT_SEED),
        Ok(raw) => {
            let s = raw.trim();
            let parsed = match s.strip_prefix("0x") {
                Some(hex) => u64::from_str_radix(hex, 16),
                None => s.parse(),
            };
            parsed.map_err(|_| CliError::Usage(format!("{SEED_VAR} is not an integer: {raw:?}")))
        }
    }
}

pub fn run(config: &RunConfig, out: &mut impl Write) -> Result<RunStatus, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(jobs);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let (report, status) = pool.install(|| execute(&config.command))?;
    out.write_all(report.render(config.format).as_bytes())?;
    Ok(status)
}

fn execute(command: &Command) -> Result<(Report, RunStatus), CliError> {
    let ok = |r: Report| Ok((r, RunStatus::Success));
    match command {
        Command::Sum(a) => ok(sum(a)?),
        Command::Rarefy(a) => ok(rarefy(a)?),
        Command::SampleF(a) => ok(sample_f(a)?),
        Command::Spectral(a) => ok(spectral(a)?),
        Command::Norm(a) => ok(norm(a)?),
        Command::Xi(a) => ok(xi(a)?),
        Command::TraceTable(a) => ok(trace_table(a)?),
        Command::Lucas(a) => ok(lucas_table(a)?),
        Command::Verify(a) => verify::run(a),
    }
}

fn sum(a: &SumArgs) -> Result<Report, CliError> {
    let seq = MultiplicativeSequence::parse(&a.seq)?;
    let value = if a.naive {
        naive_partial_sum(&seq, a.n, DEFAULT_ORACLE_BOUND)?
    } else {
        closed_form_partial_sum(&seq, a.n)
    };
    Ok(Report::Scalar(Scalar::Complex(value)))
}

fn rarefy(a: &RarefyArgs) -> Result<Report, CliError> {
    let seq = MultiplicativeSequence::parse(&a.seq)?;
    let value = if a.naive {
        rarefied_sum(&seq, a.p, a.n, DEFAULT_ORACLE_BOUND)?
    } else {
        rarefied_sum_via_twists(&seq, a.p, a.n)?
    };
    Ok(Report::Scalar(Scalar::Complex(value)))
}

fn sample_f(a: &SampleArgs) -> Result<Report, CliError> {
    if a.count < 2 {
        return Err(CliError::Usage("--count must be at least 2".into()));
    }
    if !(a.tol > 0.0 && a.tol < 1.0) {
        return Err(CliError::Usage("--tol must lie in (0, 1)".into()));
    }
    let mut seq = MultiplicativeSequence::parse(&a.seq)?;
    if let (Some(p), Some(j)) = (a.twist_p, a.twist_j) {
        seq = build_twist(&seq, p, j)?;
    }
    let profile = FractalProfile::with_options(seq, a.branch, a.tol)?;
    let ys: Vec<f64> = sample_points(a.count).collect();
    let rows = ys
        .par_iter()
        .map(|&y| {
            let v = profile.profile_f(y)?;
            Ok(vec![Cell::Real(y), Cell::Real(v.re), Cell::Real(v.im)])
        })
        .collect::<Result<Vec<_>, rarefact::Error>>()?;
    Ok(Report::Table(Table::new(&["y", "re", "im"], rows)))
}

fn require_pmax(pmax: u64, min: u64) -> Result<(), CliError> {
    if pmax < min {
        return Err(CliError::Usage(format!("--pmax must be at least {min}")));
    }
    Ok(())
}

fn spectral(a: &PmaxArgs) -> Result<Report, CliError> {
    require_pmax(a.pmax, 3)?;
    let rows = primes_between(3, a.pmax)
        .par_iter()
        .map(|&p| {
            let r = spectral_report(p)?;
            Ok(vec![
                Cell::int(p),
                Cell::int(r.s),
                Cell::int(r.r),
                Cell::Real(r.lambda1),
                Cell::Real(r.lambda2),
                Cell::Real(r.alpha),
                Cell::Real(r.beta),
                Cell::Real(r.dominant.re),
                Cell::Real(r.dominant.im),
            ])
        })
        .collect::<Result<Vec<_>, rarefact::Error>>()?;
    let header = ["p", "s", "r", "lambda1", "lambda2", "alpha", "beta", "dominant_re", "dominant_im"];
    Ok(Report::Table(Table::new(&header, rows)))
}

fn norm(a: &NormArgs) -> Result<Report, CliError> {
    let support = Support::parse(&a.support)?;
    let indices: Vec<u64> = (1..a.p.max(1)).collect();
    let expansion = product_over_set(a.p, &support, &indices)?;
    Ok(Report::Scalar(Scalar::Integer(norm_from_expansion(&expansion)?)))
}

fn xi(a: &XiArgs) -> Result<Report, CliError> {
    let support = Support::parse(&a.support)?;
    let system = match a.generator {
        Some(g) => CosetSystem::generated_by(a.p, g)?,
        None => CosetSystem::squares(a.p)?,
    };
    let products = coset_products(&system, &support)?;
    let rows = system
        .representatives()
        .into_iter()
        .zip(&products)
        .map(|(rep, e)| {
            let z: Complex64 = e.evaluate_numeric(1);
            vec![Cell::int(rep), Cell::int(system.gamma().len() as u64), Cell::Real(z.re), Cell::Real(z.im)]
        })
        .collect();
    Ok(Report::Table(Table::new(&["representative", "size", "re", "im"], rows)))
}

fn trace_table(a: &PmaxArgs) -> Result<Report, CliError> {
    require_pmax(a.pmax, 5)?;
    let primes: Vec<u64> = primes_between(5, a.pmax).into_iter().filter(|p| p % 4 == 1).collect();
    let rows = primes
        .par_iter()
        .map(|&p| {
            let trace = trace_of_coset_products(&CosetSystem::squares(p)?, &Support::one_minus_t())?;
            Ok(vec![Cell::int(p), Cell::Int(trace)])
        })
        .collect::<Result<Vec<_>, rarefact::Error>>()?;
    Ok(Report::Table(Table::new(&["p", "trace"], rows)))
}

fn lucas_table(a: &LucasArgs) -> Result<Report, CliError> {
    require_pmax(a.pmax, 5)?;
    let primes = primes_between(5, a.pmax);
    if !a.factor {
        let rows = primes
            .iter()
            .map(|&p| vec![Cell::int(p), Cell::Int(BigInt::from(lucas(p)))])
            .collect();
        return Ok(Report::Table(Table::new(&["p", "L_p"], rows)));
    }
    let seed = seed_from_env()?;
    let budget = FactorBudget { max_digits: a.max_digits, ..FactorBudget::default() };
    let rows = primes
        .par_iter()
        .map(|&p| {
            let report = factor_congruence_check(p, budget, seed)?;
            Ok(vec![
                Cell::int(p),
                Cell::Int(BigInt::from(report.value.clone())),
                Cell::Text(report.factor_string()),
                Cell::Text(report.verdict.to_string()),
            ])
        })
        .collect::<Result<Vec<_>, rarefact::Error>>()?;
    Ok(Report::Table(Table::new(&["p", "L_p", "factors", "congruence_verdict"], rows)))
}
