//! Command-line front end: each subcommand reads one JSON scenario and
//! writes JSON and CSV artifacts stamped with the configuration hash.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{Config, Overrides};
pub use crate::error::CliError;
use crate::output::Sink;

#[derive(Debug, Parser)]
#[command(
    name = "skelflow",
    version,
    about = "Patch dynamics, blow-up skeletons and inverse constructions"
)]
pub struct Cli {
    /// Scenario configuration (JSON). Defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Gap enumeration depth for compact scenarios.
    #[arg(long, global = true, value_name = "K")]
    pub depth: Option<u32>,
    /// Particle count for the oracle.
    #[arg(long, global = true, value_name = "N")]
    pub particles: Option<usize>,
    /// Final time for the oracle.
    #[arg(long = "t-final", global = true, value_name = "T")]
    pub t_final: Option<f64>,
    /// Recorded in the configuration; reserved for randomized corpora.
    #[arg(long, global = true, value_name = "S")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Snapshots of the patch on the t-grid.
    Evolve,
    /// Limit measure at the collapse time.
    Skeleton,
    /// Open initial set collapsing onto `measure.atoms`.
    InverseOpen,
    /// Compact initial set collapsing onto `measure.cantor`.
    InverseCompact,
    /// Compare the pushforward CDF with the target at every gap endpoint.
    VerifyPushforward,
    /// Particle simulation and empirical skeleton.
    Oracle,
    /// Box-counting dimension of a skeleton.
    Dimension,
    /// Weak-convergence table on the dyadic ladder.
    Converge,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Skeleton => "skeleton",
            Command::InverseOpen => "inverse-open",
            Command::InverseCompact => "inverse-compact",
            Command::VerifyPushforward => "verify-pushforward",
            Command::Oracle => "oracle",
            Command::Dimension => "dimension",
            Command::Converge => "converge",
        }
    }
}

/// Run one command; returns the written artifact paths.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let overrides = Overrides {
        depth: cli.depth,
        particles: cli.particles,
        t_final: cli.t_final,
        seed: cli.seed,
    };
    let cfg = Config::load(cli.config.as_deref(), overrides)?;
    let hash = cfg.hash();
    let mut sink = Sink::new(&cli.out, cli.command.name(), &cfg.scenario, &hash);
    let result = match cli.command {
        Command::Evolve => commands::evolve_cmd(&cfg, &mut sink),
        Command::Skeleton => commands::skeleton_cmd(&cfg, &mut sink),
        Command::InverseOpen => commands::inverse_open_cmd(&cfg, &mut sink),
        Command::InverseCompact => commands::inverse_compact_cmd(&cfg, &mut sink),
        Command::VerifyPushforward => commands::verify_pushforward_cmd(&cfg, &mut sink),
        Command::Oracle => commands::oracle_cmd(&cfg, &mut sink),
        Command::Dimension => commands::dimension_cmd(&cfg, &mut sink),
        Command::Converge => commands::converge_cmd(&cfg, &mut sink),
    };
    result.map(|()| sink.written)
}
