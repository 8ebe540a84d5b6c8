use std::str::FromStr;

use cdset_core::search::DEFAULT_NODE_BUDGET;
use cdset_core::{Congruence, DEFAULT_SIEVE_CAP};
use clap::{ArgGroup, Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "cdset",
    version,
    about = "Exact analysis of coprime-disjoint congruence sets"
)]
pub struct Cli {
    /// Emit the JSON report instead of plain lines.
    #[arg(long, global = true)]
    pub json: bool,

    /// Largest lcm period the coverage sieve will allocate for.
    #[arg(long, global = true, default_value_t = DEFAULT_SIEVE_CAP)]
    pub sieve_cap: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct BudgetArgs {
    /// Node limit per search.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,

    /// Optional wall-clock limit per search, in milliseconds.
    #[arg(long)]
    pub time_limit_ms: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inclusion–exclusion density of a CD set with the given moduli.
    DensityFormula {
        #[arg(required = true, num_args = 1..)]
        moduli: Vec<u64>,
    },

    /// Check whether congruences `a:d` form a CD set.
    CheckCd {
        #[arg(required = true, num_args = 1..)]
        congruences: Vec<CongruenceArg>,
    },

    /// Decide whether n (or a moduli list) admits a CD residue assignment.
    #[command(group(ArgGroup::new("target").required(true).args(["n", "moduli"])))]
    Decide {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, num_args = 1..)]
        moduli: Option<Vec<u64>>,
        #[command(flatten)]
        budget: BudgetArgs,
    },

    /// Case classification and exact no-covering bound for n.
    Report { n: u64 },

    /// Explicit CD set for n = p^k or n = q·p^k.
    Construct { n: u64 },

    /// Search every n in a range and compare with the smallest-prime condition.
    Scan {
        #[arg(long, default_value_t = 2)]
        min: u64,
        #[arg(long)]
        max: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Worker threads; output order is always ascending n.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Search every k-th n that fails the condition (0 = none).
        #[arg(long, default_value_t = 1)]
        lemma3_stride: u64,
    },

    /// Run the built-in golden checks.
    VerifyPaper {
        /// Corrupt one expected value (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

/// `a:d` on the command line.
#[derive(Debug, Clone, Copy)]
pub struct CongruenceArg(pub Congruence);

impl FromStr for CongruenceArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, d) = s
            .split_once(':')
            .ok_or_else(|| format!("expected `a:d`, got `{s}`"))?;
        let a: u64 = a.parse().map_err(|_| format!("bad residue in `{s}`"))?;
        let d: u64 = d.parse().map_err(|_| format!("bad modulus in `{s}`"))?;
        if a >= d {
            return Err(format!("residue must satisfy 0 <= a < d in `{s}`"));
        }
        Congruence::from_unsigned(a, d)
            .map(CongruenceArg)
            .map_err(|e| e.to_string())
    }
}
