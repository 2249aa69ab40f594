//! `forestconn`: verifiers, tables, scans and samplers for random forests
//! and bridge-alterable graph classes.
//!
//! Every subcommand except `sample` prints one report row per line (JSON by
//! default, CSV with `--format csv`). Exit status: 0 all pass, 1 any fail,
//! 2 usage or guard error, 3 flags but no fails.

mod commands;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use forestconn::report::{Report, ReportRow, Status};

use crate::output::{write_report, Format};

#[derive(Debug, Parser)]
#[command(name = "forestconn", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format for report rows.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Forest count cache file; read when present, written when extended.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Taylor terms for exponential enclosures.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassKind {
    Forests,
    All,
    Closure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleKind {
    Uniform,
    WeightedTree,
    WeightedForest,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forest and tree counts for 1 <= n <= n_max.
    Counts {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Forests on [n] with j vertices outside a largest component.
    Frag {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: Option<usize>,
    },
    /// Connectivity probability of the uniform random forest for 1 <= n <= n_max.
    Renyi {
        #[arg(long, default_value_t = 50)]
        n_max: usize,
    },
    /// Partial sums of the forest and tree EGFs at 1/e and their limits.
    Egf {
        #[arg(long, default_value_t = 6)]
        k_max: usize,
    },
    /// Pr(F_n connected) < e^{-1/3} for 2 <= n <= n_max.
    Lemma22 {
        #[arg(long, default_value_t = 500)]
        n_max: usize,
    },
    /// Pr(F_n connected) < e^{-12/25} for 2 <= n <= n_max.
    Lemma31 {
        #[arg(long, default_value_t = 500)]
        n_max: usize,
    },
    /// Where (n)_j/n^j (1-j/n)^-2 >= 1.
    Bracket {
        #[arg(long, default_value_t = 6)]
        j_max: usize,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
    },
    /// (1 - j/n)^(n-j) >= e^{-j}, for one pair or every 1 <= j < n <= n_max.
    StandardIneq {
        #[arg(long, requires = "j")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        j: Option<usize>,
        #[arg(long, default_value_t = 30)]
        n_max: usize,
    },
    /// Forest mass, tree mass total and forest mass total.
    Mass {
        #[arg(long)]
        weights: String,
        /// Forest on [t] in graph literal form.
        #[arg(long)]
        forest: Option<String>,
    },
    /// Pr(F^w connected) = tree mass / forest mass.
    WeightedConn {
        #[arg(long)]
        weights: String,
    },
    /// mass(F_t^k) <= N (n/t)^(t-2) |F_t^k|, for one vector or an exhaustive grid.
    Massk {
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 5)]
        t_max: usize,
        #[arg(long, default_value_t = 4)]
        w_max: u64,
    },
    /// Component-count distribution and its ratio bound.
    Kappa {
        #[arg(long)]
        weights: String,
    },
    /// Right-hand sides of the per-class and the alpha bounds.
    Rhs {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/3")]
        alpha: String,
    },
    /// The per-class bound dominates the alpha = 1/3 bound.
    Deduction {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
    },
    /// Bridgeless-core equivalence classes of all graphs on [n].
    Classes {
        #[arg(long)]
        n: usize,
    },
    /// Class connectivity ratio equals the weighted forest probability.
    ClassIdentity {
        #[arg(long)]
        n: usize,
    },
    /// Connectivity lower bound for a bridge-alterable class.
    Theorem {
        #[arg(long, value_enum)]
        class: ClassKind,
        #[arg(long)]
        n: usize,
        /// Seed graphs for `--class closure`, one literal per line.
        #[arg(long)]
        graphs: Option<PathBuf>,
        /// Random seed graphs for `--class closure` when no file is given.
        #[arg(long, default_value_t = 5)]
        seeds: usize,
    },
    /// Bridge-alterable closure of a seed class.
    Closure {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        graphs: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        seeds: usize,
    },
    /// Dump sampled forests, one graph literal per line.
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Monte Carlo estimate of Pr(F_n connected).
    Estimate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Empirical scan of the two open conjectures on Pr(F_n connected).
    ScanConjectures {
        #[arg(long, default_value_t = 200)]
        n_max: usize,
    },
}

/// What a subcommand produced.
pub enum Output {
    Report(Report),
    Lines(Vec<String>),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let (result, code) = match commands::run(&cli) {
        Ok(Output::Report(report)) => {
            let code = report.exit_code();
            (write_report(&report, cli.common.format, &mut out), code)
        }
        Ok(Output::Lines(lines)) => {
            let res = lines.iter().try_for_each(|l| writeln!(out, "{l}"));
            (res, 0)
        }
        Err(err) => {
            let report: Report =
                std::iter::once(ReportRow::new("error", Status::Error).note(err.to_string()))
                    .collect();
            (write_report(&report, cli.common.format, &mut out), 2)
        }
    };
    if let Err(e) = result.and_then(|_| out.flush()) {
        eprintln!("forestconn: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
