mod commands;
mod input;
mod off;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] mckay_core::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("check failed")]
    CheckFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(mckay_core::Error::OracleMismatch(_)) | CliError::CheckFailed => 3,
            CliError::Write { .. } => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Exact McKay quiver flows, IC-trees, moduli polytopes and their fans.
#[derive(Debug, Parser)]
#[command(name = "mckay", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct ActionArgs {
    /// Group action `r:w1,...,wn`; repeat for a product of cyclic factors.
    #[arg(long = "action", required = true)]
    pub action: Vec<String>,
    /// Accept weights that are not units modulo r.
    #[arg(long)]
    pub allow_non_free: bool,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    /// ζ as a comma list of integers or num/den rationals summing to zero.
    #[arg(long, allow_hyphen_values = true)]
    pub zeta: Option<String>,
    /// File with one ζ per line (blank lines and `#` comments skipped).
    #[arg(long)]
    pub zeta_file: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write JSON here instead of standard output.
    #[arg(long, short)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum QuiverFormat {
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The McKay quiver of the action.
    Quiver {
        #[command(flatten)]
        action: ActionArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: QuiverFormat,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Catalog of IC spanning trees.
    IcTrees {
        #[command(flatten)]
        action: ActionArgs,
        /// One tree per vertex-translation class.
        #[arg(long)]
        reduce: bool,
        /// Keep only trees with a singular tangent cone.
        #[arg(long)]
        singular_only: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Vertices, facets and faces of C_ζ.
    Polytope {
        #[command(flatten)]
        action: ActionArgs,
        #[command(flatten)]
        zeta: ZetaArgs,
        /// Also write a truncated OFF mesh (three types only).
        #[arg(long)]
        off: Option<std::path::PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The normal fan of C_ζ.
    Fan {
        #[command(flatten)]
        action: ActionArgs,
        #[command(flatten)]
        zeta: ZetaArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Singularity type of every vertex cone.
    Classify {
        #[command(flatten)]
        action: ActionArgs,
        #[command(flatten)]
        zeta: ZetaArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Whether every fan ray lies on the hyperplane of coordinate sum one.
    Crepancy {
        #[command(flatten)]
        action: ActionArgs,
        #[command(flatten)]
        zeta: ZetaArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Group ζ samples by the vertex supports of C_ζ.
    Chambers {
        #[command(flatten)]
        action: ActionArgs,
        #[command(flatten)]
        zeta: ZetaArgs,
        /// Add one sample per open cell of the wall arrangement (at most five vertices).
        #[arg(long)]
        cells: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the fast paths against the oracles.
    Check {
        #[command(flatten)]
        action: ActionArgs,
        #[command(flatten)]
        zeta: ZetaArgs,
        /// Sweep every integral ζ with entries in LO..HI.
        #[arg(long, allow_hyphen_values = true, value_name = "LO..HI")]
        all_zeta: Option<String>,
        /// Run the basic-solution oracle on every N-th sweep point.
        #[arg(long, default_value_t = 25)]
        basic_stride: usize,
        /// Check the exact sequence of flow lattices.
        #[arg(long)]
        exactness: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write quiver, polytope, fan, classification and crepancy files (plus OFF for three types).
    Export {
        #[command(flatten)]
        action: ActionArgs,
        #[command(flatten)]
        zeta: ZetaArgs,
        #[arg(long)]
        dir: std::path::PathBuf,
    },
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("MCKAY_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| {
        CliError::Input(format!(
            "MCKAY_THREADS must be a positive integer, got `{v}`"
        ))
    })?;
    if n == 0 {
        return Err(CliError::Input("MCKAY_THREADS must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(e.to_string()))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Quiver {
            action,
            format,
            output,
        } => commands::quiver(&action, format, &output),
        Command::IcTrees {
            action,
            reduce,
            singular_only,
            output,
        } => commands::ic_trees(&action, reduce, singular_only, &output),
        Command::Polytope {
            action,
            zeta,
            off,
            output,
        } => commands::polytope(&action, &zeta, off.as_deref(), &output),
        Command::Fan {
            action,
            zeta,
            output,
        } => commands::fan(&action, &zeta, &output),
        Command::Classify {
            action,
            zeta,
            output,
        } => commands::classify(&action, &zeta, &output),
        Command::Crepancy {
            action,
            zeta,
            output,
        } => commands::crepancy(&action, &zeta, &output),
        Command::Chambers {
            action,
            zeta,
            cells,
            output,
        } => commands::chambers(&action, &zeta, cells, &output),
        Command::Check {
            action,
            zeta,
            all_zeta,
            basic_stride,
            exactness,
            output,
        } => commands::check(
            &action,
            &zeta,
            all_zeta.as_deref(),
            basic_stride,
            exactness,
            &output,
        ),
        Command::Export { action, zeta, dir } => commands::export(&action, &zeta, &dir),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::CheckFailed) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
