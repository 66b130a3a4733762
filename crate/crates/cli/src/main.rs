use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use graphwh_cli::config::ParamsConfig;
use graphwh_cli::error::{CliError, EXIT_ERROR};
use graphwh_cli::{run, CommandName, ExperimentConfig, Report};

/// Audits weak-Haagerup kernels on graph products of finite groups.
///
/// Exit status: 0 when every asserted check passes, 2 when an invariant
/// fails, 3 on a structural, config or usage error.
#[derive(Parser, Debug)]
#[command(name = "graphwh", version)]
struct Cli {
    /// JSON config file; `-` reads stdin.
    #[arg(long, global = true, default_value = "-")]
    config: PathBuf,
    /// Print the JSON report instead of the human summary.
    #[arg(long, global = true)]
    json: bool,
    /// Directory for CSV sidecar files.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Override `params.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Vertex-data axioms, vertex Hilbert-space identities and Exp truncation.
    Validate,
    /// Canonical forms of configured words, oracle cross-check, metric axioms.
    Reduce {
        /// Longest sequence compared against the rewriting oracle.
        #[arg(long)]
        oracle_max_length: Option<usize>,
    },
    /// Separating-wall counts against twice the reduced distance.
    WallsAudit {
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Gram matrix of φ, CND certificates, σ positivity, tail bounds.
    KernelReport {
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        sample_size: Option<usize>,
    },
    /// ψ against the closed form on seeded random pairs.
    InvarianceTest {
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// Exact Schur norm of the φ Gram matrix along an index grid.
    B2Audit {
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        /// Overrides the scheduled index.
        #[arg(long)]
        n: Option<u32>,
        /// Comma-separated indices.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<u32>>,
    },
    /// Pointwise convergence of φ to 1 on a ball.
    Convergence {
        #[arg(long)]
        radius: Option<usize>,
        /// Comma-separated indices.
        #[arg(long, value_delimiter = ',')]
        ns: Option<Vec<u32>>,
    },
}

impl Cmd {
    fn name(&self) -> CommandName {
        match self {
            Cmd::Validate => CommandName::Validate,
            Cmd::Reduce { .. } => CommandName::Reduce,
            Cmd::WallsAudit { .. } => CommandName::WallsAudit,
            Cmd::KernelReport { .. } => CommandName::KernelReport,
            Cmd::InvarianceTest { .. } => CommandName::InvarianceTest,
            Cmd::B2Audit { .. } => CommandName::B2Audit,
            Cmd::Convergence { .. } => CommandName::Convergence,
        }
    }

    fn apply(&self, cfg: &mut ExperimentConfig) {
        let c = &mut cfg.commands;
        match self {
            Cmd::Validate => {}
            Cmd::Reduce { oracle_max_length } => {
                if let Some(v) = oracle_max_length {
                    c.reduce.oracle_max_length = *v;
                }
            }
            Cmd::WallsAudit { radius } => {
                if radius.is_some() {
                    c.walls_audit.radius = *radius;
                }
            }
            Cmd::KernelReport { radius, sample_size } => {
                if radius.is_some() {
                    c.kernel_report.radius = *radius;
                }
                if let Some(v) = sample_size {
                    c.kernel_report.sample_size = *v;
                }
            }
            Cmd::InvarianceTest { pairs, max_length } => {
                if let Some(v) = pairs {
                    c.invariance_test.pairs = *v;
                }
                if let Some(v) = max_length {
                    c.invariance_test.max_length = *v;
                }
            }
            Cmd::B2Audit { radius, eps, delta, n, grid } => {
                if let Some(v) = radius {
                    c.b2_audit.radius = *v;
                }
                if n.is_some() {
                    c.b2_audit.n = *n;
                }
                if grid.is_some() {
                    c.b2_audit.grid = grid.clone();
                }
                if let Some(v) = eps {
                    cfg.params.eps = *v;
                }
                if let Some(v) = delta {
                    cfg.params.delta = *v;
                }
            }
            Cmd::Convergence { radius, ns } => {
                if let Some(v) = radius {
                    c.convergence.radius = *v;
                }
                if let Some(v) = ns {
                    c.convergence.ns = v.clone();
                }
            }
        }
    }
}

fn emit(report: &Report, json: bool) -> ExitCode {
    let text = if json { report.to_json() } else { report.summary() };
    let _ = std::io::stdout().write_all(text.as_bytes());
    ExitCode::from(report.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if std::env::args().any(|a| a == "--json") {
                let err = match e.kind() {
                    ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand => {
                        CliError::UnknownCommand(std::env::args().nth(1).unwrap_or_default())
                    }
                    _ => CliError::Usage(e.kind().to_string()),
                };
                return emit(&Report::from_error("", ParamsConfig::default(), &err), true);
            }
            let _ = e.print();
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let name = cli.command.name();
    let mut cfg = match ExperimentConfig::load(&cli.config) {
        Ok(cfg) => cfg,
        Err(e) => return emit(&Report::from_error(name.as_str(), ParamsConfig::default(), &e), cli.json),
    };
    if let Some(seed) = cli.seed {
        cfg.params.seed = seed;
    }
    cli.command.apply(&mut cfg);
    if let Some(dir) = &cli.out_dir {
        if let Err(e) = std::fs::create_dir_all(dir) {
            let err = CliError::Io(format!("{}: {e}", dir.display()));
            return emit(&Report::from_error(name.as_str(), cfg.params.clone(), &err), cli.json);
        }
    }
    emit(&run(&cfg, name, cli.out_dir.as_deref()), cli.json)
}
