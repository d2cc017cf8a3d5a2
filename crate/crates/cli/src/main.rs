//! `multiram`: evaluate multiple Ramanujan-type sums, verify identities
//! and tabulate values.
//!
//! Exit codes: 0 ok, 1 identity mismatch, 2 bad input, 3 arity mismatch,
//! 4 resource ceiling.

mod commands;
mod expr;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "multiram", version, about = "Multiple Ramanujan sums, Dirichlet identities and hyperdeterminants")]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// The multiple sum `S^{γ,ξ}_f`.
#[derive(Args, Debug, Clone)]
pub struct SpecArgs {
    /// Exponents γ_1..γ_m (comma-separated; empty for m = 0). Defaults to all 1.
    #[arg(long, allow_hyphen_values = true)]
    pub gammas: Option<String>,

    /// Functions f_1..f_{m+1} as expressions, e.g. `mu,pow:1`.
    #[arg(long)]
    pub fns: Option<String>,

    /// Product weight ξ(d_1..d_m) = g_1(d_1)⋯g_m(d_m), one expression per slot.
    #[arg(long)]
    pub weight: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the multiple sum at one argument tuple.
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        /// Arguments n_1..n_{m+1}.
        #[arg(long)]
        ns: String,
    },
    /// Check an identity; prints a JSON report.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Tabulate values.
    Table {
        #[command(subcommand)]
        target: TableTarget,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyTarget {
    /// Series of a chained γ-convolution against its product formula.
    GammaChain {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long = "N", default_value_t = 200)]
        bound: u64,
    },
    /// Multivariable Dirichlet series of the multiple sum.
    #[command(name = "multivariable-L")]
    MultivariableL {
        #[command(flatten)]
        spec: SpecArgs,
        /// γ_0, dividing γ_1.
        #[arg(long, default_value_t = 1)]
        gamma0: u32,
        #[arg(long = "N", default_value_t = 30)]
        bound: u64,
    },
    /// Series in one variable with the others fixed.
    PhiSeries {
        #[command(flatten)]
        spec: SpecArgs,
        /// The m fixed arguments, in order, skipping the running one.
        #[arg(long)]
        fixed: String,
        /// Running variable (1-based); all when omitted.
        #[arg(long)]
        j: Option<usize>,
        #[arg(long = "N", default_value_t = 40)]
        bound: u64,
    },
    /// Series of a product of two single sums; `--fns f1,f2,g1,g2`.
    DoubleSeries {
        #[arg(long)]
        fns: String,
        #[arg(long, default_value_t = 1)]
        gamma: u32,
        /// Check the single-variable diagonal specialization instead.
        #[arg(long)]
        diagonal: bool,
        #[arg(long = "N", default_value_t = 40)]
        bound: u64,
    },
    /// Series of generalized Ramanujan sums in their first k variables.
    GenRamanujan {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Exponents a_1..a_{m+1-k}.
        #[arg(long, allow_hyphen_values = true)]
        exps: String,
        /// Fixed arguments n_{k+1}..n_{m+1}.
        #[arg(long)]
        fixed: String,
        #[arg(long = "N", default_value_t = 20)]
        bound: u64,
    },
    /// Closed-form Fourier coefficients against the direct ones.
    FourierTheorem {
        #[command(flatten)]
        spec: SpecArgs,
        /// Moduli n_1 to check.
        #[arg(long)]
        n1: String,
    },
    /// Hyperdeterminant of the multiple sum over a factor-closed set.
    Smith {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        set: String,
    },
    /// Hyperdeterminant of a family of even functions.
    Prop41 {
        /// `c` (products of Ramanujan sums) or `random` (seeded coefficient tables).
        #[arg(long, default_value = "c")]
        family: String,
        /// Variables per modulus, k_1..k_m.
        #[arg(long, default_value = "1")]
        ks: String,
        #[arg(long)]
        set: String,
        /// Signature; defaults to the smallest even one containing the variable axes.
        #[arg(long)]
        signature: Option<String>,
    },
    /// Randomized checks of the hyperdeterminant lemmas.
    Lemmas {
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum TableTarget {
    /// Ramanujan sums c(k, n).
    C {
        #[arg(long)]
        kmax: u64,
        #[arg(long)]
        nmax: u64,
        #[arg(long, default_value_t = 1_000_000)]
        max_entries: u64,
    },
    /// The multiple sum over [1, nmax]^{m+1}.
    Sums {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        nmax: u64,
        #[arg(long, default_value_t = 1_000_000)]
        max_entries: u64,
    },
    /// Even Fourier coefficients of n ↦ S(n_1, n) via the closed form.
    Fourier {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n1: u64,
    },
    /// Smallest factor-closed superset.
    Closure {
        #[arg(long)]
        set: String,
    },
    /// Hypermatrix of the multiple sum over a factor-closed set.
    Hypermatrix {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        set: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
