//! `hdk`: JSON front end to hdk-core.

mod commands;
mod parse;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hdk_core::completions::{Place, Target};
use hdk_core::config::Config;
use hdk_core::internal::{IndexFilterSpec, IndexSet, IndexedElement};
use hdk_core::lattice::PrimeSet;
use num_rational::BigRational;

#[derive(Parser, Debug)]
#[command(name = "hdk", version, about = "Ideals, valuations and adeles of the internal integers", propagate_version = true)]
pub struct Cli {
    /// Seed for sampled suites; overrides the config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Divisor of a nonzero rational.
    Factor {
        #[arg(value_parser = parse::rational, allow_hyphen_values = true)]
        q: BigRational,
    },
    /// Ideal arithmetic on divisors, CRT, and ideal classification.
    Ideal(IdealArgs),
    /// Filters on the supported lattices.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Classify a divisor filter, or an element at a place.
    Classify(ClassifyArgs),
    /// Residue fields at maximal ideals and CRT witnesses.
    Residue(ResidueArgs),
    /// Order in the value group `ℤ^I / F`.
    Valuegroup {
        #[command(subcommand)]
        cmd: ValueGroupCmd,
    },
    /// Valuations centered on prime ideals.
    Valuation(ValuationArgs),
    /// Fixed-precision p-adic arithmetic.
    Padic(PadicArgs),
    /// Weak approximation at finitely many places.
    Approx(ApproxArgs),
    /// Adele and idele arithmetic on diagonal images.
    Adele(AdeleArgs),
    /// Run a module's self-check battery.
    Suite(SuiteArgs),
}

/// A divisor given directly (`2:1,3:-1` or JSON) or through a rational.
#[derive(Clone, Debug)]
pub enum Operand {
    Divisor(hdk_core::divisor::Divisor),
    Rational(BigRational),
}

fn operand(s: &str) -> Result<Operand, String> {
    if s.contains(':') || s.trim_start().starts_with('{') {
        parse::divisor(s).map(Operand::Divisor)
    } else {
        parse::rational(s).map(Operand::Rational)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdealOp {
    Sum,
    Intersect,
    Product,
    Invert,
    Radical,
    Crt,
    Classify,
}

#[derive(Args, Debug)]
pub struct IdealArgs {
    #[arg(long, value_enum)]
    pub op: IdealOp,
    /// Operands: rationals or divisors.
    #[arg(value_parser = operand, allow_hyphen_values = true)]
    pub operands: Vec<Operand>,
    /// `residue:modulus` with a prime-power modulus (for `crt`).
    #[arg(long = "congruence")]
    pub congruences: Vec<String>,
    /// Ground primes (for `classify`).
    #[arg(long, value_parser = parse::prime_set)]
    pub ground: Option<PrimeSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LatticeChoice {
    Powerset,
    FinSubsets,
    DivisorMonoid,
    DualPowerset,
    DualDivisorMonoid,
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Properness, primality and maximality of a filter.
    Classify {
        #[arg(long, value_enum)]
        kind: LatticeChoice,
        /// Comma-separated primes, or `all` for every prime.
        #[arg(long)]
        ground: String,
        /// A generator as JSON: `[2,3]` for sets, `{"2":1}` for divisors.
        #[arg(long = "filter")]
        filters: Vec<String>,
        /// The Fréchet filter of cofinite sets instead of generators.
        #[arg(long)]
        frechet: bool,
    },
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Classify the divisor filter generated by `--gen` on `--ground`.
    #[arg(long)]
    pub divisor_filter: bool,
    #[arg(long, value_parser = parse::prime_set)]
    pub ground: Option<PrimeSet>,
    #[arg(long = "gen", value_parser = parse::divisor)]
    pub gens: Vec<hdk_core::divisor::Divisor>,
    /// An element (JSON or rational).
    #[arg(long, value_parser = parse::element, allow_hyphen_values = true)]
    pub element: Option<IndexedElement>,
    /// Place for the element; without it the real size class is reported.
    #[arg(long, value_parser = parse::place)]
    pub place: Option<Place>,
}

#[derive(Args, Debug)]
pub struct ResidueArgs {
    /// Primes of the hyperfinite support, in index order.
    #[arg(long, value_parser = parse::prime_set)]
    pub support: PrimeSet,
    /// Ultrafilter on support positions: `ultra:i`, `principal:…`, `frechet`.
    #[arg(long, value_parser = parse::index_filter)]
    pub filter: Option<IndexFilterSpec>,
    #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
    pub x: Option<BigRational>,
    /// Comma-separated residue targets, one per support prime.
    #[arg(long, allow_hyphen_values = true)]
    pub targets: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum ValueGroupCmd {
    /// Compare two families modulo a filter.
    Compare {
        #[arg(long, value_parser = parse::element, allow_hyphen_values = true)]
        a: IndexedElement,
        #[arg(long, value_parser = parse::element, allow_hyphen_values = true)]
        b: IndexedElement,
        #[arg(long, value_parser = parse::index_filter, default_value = "frechet")]
        filter: IndexFilterSpec,
    },
    /// Embed an integer through each witness set and compare the classes.
    Embed {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, value_parser = parse::index_filter, default_value = "frechet")]
        filter: IndexFilterSpec,
        #[arg(long = "witness", value_parser = parse::index_set, required = true)]
        witnesses: Vec<IndexSet>,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct ValuationArgs {
    #[command(subcommand)]
    pub cmd: Option<ValuationCmd>,
    /// Center: `(0)`, `m_p` or `m_p^inf`.
    #[arg(long)]
    pub at: Option<String>,
    /// 1 for the standard valuation, 2 for `ℤω ⊕ ℤ`.
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
    #[arg(long, value_parser = parse::element, allow_hyphen_values = true)]
    pub of: Option<IndexedElement>,
}

#[derive(Subcommand, Debug)]
pub enum ValuationCmd {
    /// Horizontal specialization `v|U` by the convex subgroup of rank `--segment`.
    Specialize {
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        segment: usize,
    },
    /// Vertical generization `v/U` by the convex subgroup of rank `--segment`.
    Generize {
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        segment: usize,
    },
    /// The specialization diagram of the rank-2 valuation at `m_p`.
    Diagram {
        #[arg(long)]
        at: String,
        /// Graphviz output instead of JSON.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PadicOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
}

#[derive(Args, Debug)]
pub struct PadicArgs {
    #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
    pub q: BigRational,
    #[arg(long, value_parser = parse::prime)]
    pub p: hdk_core::Prime,
    /// Relative precision; defaults to the configured value.
    #[arg(long)]
    pub precision: Option<u32>,
    #[arg(long, value_enum)]
    pub op: Option<PadicOp>,
    #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
    pub r: Option<BigRational>,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    /// `place:value:eps`, e.g. `2:1:1/8` or `inf:1/2:1/10`.
    #[arg(long = "target", value_parser = parse::target, required = true, allow_hyphen_values = true)]
    pub targets: Vec<Target>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub max_exponent: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AdeleOp {
    Embed,
    Add,
    Mul,
    Inv,
}

#[derive(Args, Debug)]
pub struct AdeleArgs {
    #[arg(long, value_enum, default_value = "embed")]
    pub op: AdeleOp,
    #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
    pub x: BigRational,
    #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
    pub y: Option<BigRational>,
    /// Exceptional places, e.g. `2,3,inf`.
    #[arg(long, value_parser = parse::place, value_delimiter = ',')]
    pub places: Vec<Place>,
    #[arg(long)]
    pub precision: Option<u32>,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    /// Module name, or `all`.
    #[arg(long, default_value = "all")]
    pub module: String,
    #[arg(long)]
    pub trials: Option<usize>,
}

/// What went wrong, and which exit code it maps to.
pub enum Failure {
    Usage(String),
    Domain(hdk_core::Error),
    /// The command ran but some check failed; the JSON is still printed.
    Checks(serde_json::Value),
}

impl From<hdk_core::Error> for Failure {
    fn from(e: hdk_core::Error) -> Failure {
        Failure::Domain(e)
    }
}

fn emit_error(code: &str, message: &str) {
    let v = serde_json::json!({ "error": code, "message": message });
    let _ = writeln!(std::io::stderr(), "{v}");
}

fn print(out: &commands::Output) {
    let mut stdout = std::io::stdout().lock();
    let _ = match out {
        commands::Output::Json(v) => writeln!(stdout, "{v}"),
        commands::Output::Text(s) => write!(stdout, "{s}"),
    };
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit_error("Usage", e.render().to_string().trim());
            return ExitCode::from(2);
        }
    };
    let mut cfg = match Config::from_env() {
        Ok(c) => c,
        Err(e) => {
            emit_error("Usage", &e.to_string());
            return ExitCode::from(2);
        }
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    match commands::run(cli.cmd, &cfg) {
        Ok(out) => {
            print(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            emit_error("Usage", &m);
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            emit_error(e.code(), &e.to_string());
            ExitCode::from(1)
        }
        Err(Failure::Checks(v)) => {
            print(&commands::Output::Json(v));
            emit_error("ChecksFailed", "some checks failed");
            ExitCode::from(1)
        }
    }
}
