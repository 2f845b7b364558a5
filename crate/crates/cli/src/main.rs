//! `dt-regge`: exact enumeration, dual graphs, measures and the duality pairing.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dt_regge::io::parse_q_list;

/// A comma-separated integer list held as one clap value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<u32>);

impl std::ops::Deref for IntList {
    type Target = Vec<u32>;
    fn deref(&self) -> &Vec<u32> {
        &self.0
    }
}

fn q_arg(s: &str) -> Result<IntList, String> {
    parse_q_list(s).map(IntList).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "dt-regge", version, about = "Exact dynamical-triangulation / Regge / intersection-number toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Catalog cache directory (overrides $DT_REGGE_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct Key {
    #[arg(long)]
    pub genus: u32,
    #[arg(long)]
    pub vertices: usize,
    /// Curvature assignment, e.g. `--q 2,2,2`.
    #[arg(long, value_parser = q_arg)]
    pub q: IntList,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct EnumFlags {
    /// Refuse keys needing more faces than this.
    #[arg(long, default_value_t = dt_regge::pairing::enumerate::DEFAULT_MAX_FACES)]
    pub max_faces: usize,
    /// Disable the worker pool.
    #[arg(long)]
    pub serial: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate labelled triangulations with curvature assignment q.
    Enumerate {
        #[command(flatten)]
        key: Key,
        #[command(flatten)]
        flags: EnumFlags,
    },
    /// Dual ribbon graph of a triangulation file.
    Dual {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run one of the exact checks.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        /// Triangulation, ribbon graph or catalog file (gauss-bonnet, kontsevich);
        /// corner fan file (median, optional).
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Seed for randomly drawn fans (median).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random fans (median).
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Polygon side counts (rank); defaults to 3..=8.
        #[arg(long, value_parser = q_arg)]
        q: Option<IntList>,
        /// Decimal digits for real approximations (rank).
        #[arg(long, default_value_t = 50)]
        precision: u32,
    },
    /// Leray volume of the metric cell of each ribbon graph.
    Volume {
        #[arg(long = "in")]
        input: PathBuf,
        /// Perimeters by boundary label; defaults to the boundary side counts.
        #[arg(long, value_parser = q_arg)]
        q: Option<IntList>,
    },
    /// Intersection numbers: `--d` for one bracket, `--q` for F_g(q).
    Tau {
        #[arg(long)]
        genus: u32,
        /// Exponents d_1,..,d_n of ⟨τ_d1 … τ_dn⟩_g.
        #[arg(long, value_parser = parse_d_list)]
        d: Option<IntList>,
        #[arg(long, value_parser = q_arg)]
        q: Option<IntList>,
        /// Genus >= 2 through the DVV recursion (needs the `dvv` build feature).
        #[arg(long)]
        enable_dvv: bool,
    },
    /// Both sides of the duality pairing at one key.
    Pairing {
        #[command(flatten)]
        key: Key,
        #[command(flatten)]
        flags: EnumFlags,
        #[arg(long)]
        enable_dvv: bool,
        /// Skip the all-cells diagnostic sum on mismatch.
        #[arg(long)]
        no_diagnostics: bool,
    },
    /// Inspect the catalog cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    GaussBonnet,
    Kontsevich,
    Median,
    Rank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    Ls,
    Verify,
}

/// Like `parse_q_list` but zero exponents are allowed.
fn parse_d_list(s: &str) -> Result<IntList, String> {
    let t = s.trim();
    let t = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).unwrap_or(t);
    if t.trim().is_empty() {
        return Ok(IntList(Vec::new()));
    }
    t.split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| format!("invalid exponent {:?}", p.trim())))
        .collect::<Result<_, _>>()
        .map(IntList)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
