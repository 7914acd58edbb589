//! Experiment driver for the vcg-lab library.
//!
//! Exit codes: 0 all checks passed, 1 a statistical gate failed,
//! 2 configuration error, 3 exact-identity violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod output;
mod sysspec;

use commands::{AuditArgs, ConditionalArgs, EstimateArgs, MstArgs};
use output::RunConfig;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Parser)]
#[command(
    name = "vcg-lab",
    about = "VCG procurement auctions over matroids and set systems: exact audits and Monte Carlo studies",
    version
)]
struct Cli {
    /// Worker threads for replication batches (env: VCG_LAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact per-sample identity audit on random instances of a matroid system.
    Audit {
        /// uniform:N,K | graphic:<k3|kN|cN|tree|treeN|FILE> | complete:N
        #[arg(long)]
        system: String,
        /// uniform | exp | beta, optionally with :PARAM
        #[arg(long, default_value = "uniform")]
        dist: String,
        /// Distribution parameter, overriding any :PARAM suffix.
        #[arg(long)]
        param: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Moment estimation with the applicable statistical test suite.
    Estimate {
        /// uniform:N,K | graphic:... | complete:N | k3path | family:FILE
        #[arg(long)]
        system: String,
        #[arg(long, default_value = "uniform")]
        dist: String,
        #[arg(long)]
        param: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Conditional-law study of the nominal cost given the VCG total.
    Conditional {
        #[arg(long)]
        system: String,
        #[arg(long, default_value = "uniform")]
        dist: String,
        #[arg(long)]
        param: Option<f64>,
        #[arg(long, default_value_t = 200_000)]
        reps: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of equal-width bins over the VCG totals.
        #[arg(long, default_value_t = 20)]
        bins: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Minimum-spanning-tree scaling sweep on complete graphs.
    MstScaling {
        /// Comma-separated graph sizes, e.g. 25,50,100,200.
        #[arg(long = "n-list", value_delimiter = ',')]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Memory guard on the largest allowed graph.
        #[arg(long, default_value_t = vcg_lab::mc::MST_DEFAULT_MAX_N)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Dump every closed-form constant as JSON.
    OracleDump {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn resolve_threads(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| {
        std::env::var("VCG_LAB_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = resolve_threads(cli.threads) {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        // ignore failure if a pool is already installed
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let threads = resolve_threads(cli.threads);

    let result = match cli.command {
        Command::Audit {
            system,
            dist,
            param,
            reps,
            seed,
            out,
            format,
        } => {
            let mut cfg = RunConfig::new("audit", format.as_str());
            cfg.threads = threads;
            commands::run_audit(
                AuditArgs {
                    system,
                    dist,
                    param,
                    reps,
                    seed,
                    out,
                    format,
                },
                cfg,
            )
        }
        Command::Estimate {
            system,
            dist,
            param,
            reps,
            seed,
            out,
            format,
        } => {
            let mut cfg = RunConfig::new("estimate", format.as_str());
            cfg.threads = threads;
            commands::run_estimate(
                EstimateArgs {
                    system,
                    dist,
                    param,
                    reps,
                    seed,
                    out,
                    format,
                },
                cfg,
            )
        }
        Command::Conditional {
            system,
            dist,
            param,
            reps,
            seed,
            bins,
            out,
            format,
        } => {
            let mut cfg = RunConfig::new("conditional", format.as_str());
            cfg.threads = threads;
            commands::run_conditional(
                ConditionalArgs {
                    system,
                    dist,
                    param,
                    reps,
                    seed,
                    bins,
                    out,
                    format,
                },
                cfg,
            )
        }
        Command::MstScaling {
            n_list,
            reps,
            seed,
            max_n,
            out,
            format,
        } => {
            let mut cfg = RunConfig::new("mst-scaling", format.as_str());
            cfg.threads = threads;
            commands::run_mst_scaling(
                MstArgs {
                    n_list,
                    reps,
                    seed,
                    max_n,
                    out,
                    format,
                },
                cfg,
            )
        }
        Command::OracleDump { out } => {
            let mut cfg = RunConfig::new("oracle-dump", "json");
            cfg.threads = threads;
            commands::run_oracle_dump(out, cfg)
        }
    };

    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<vcg_lab::Error>() {
                Some(vcg_lab::Error::IdentityViolation { .. }) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
