//! `m0n`: census, pairings, matrices and tree operations on the boundary of
//! the moduli space of stable genus-zero labeled curves.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CliError, Output};

#[derive(Debug, Parser)]
#[command(name = "m0n", version, about)]
struct Cli {
    /// Largest label count accepted by enumerations.
    #[arg(long, global = true, env = "M0N_MAX_N")]
    max_n: Option<usize>,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Closed,
    Expanded,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixAction {
    Emit,
    Rank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TreeAction {
    Validate,
    Signature,
    Contract,
    Forget,
    Pi,
    TypeKey,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count boundary curves by type and by class.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Intersection number of a boundary divisor with a boundary curve class.
    Pair {
        /// Stable 2-partition, e.g. 123|456.
        #[arg(long)]
        sigma: String,
        /// Distinguished partition, e.g. 1|2|3|456.
        #[arg(long)]
        pi: String,
    },
    /// Anticanonical degree of a boundary curve class.
    MinusK {
        #[arg(long)]
        pi: String,
        #[arg(long, value_enum, default_value = "both")]
        route: Route,
    },
    /// Divisor-curve intersection matrix, or its exact rank.
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "rank")]
        action: MatrixAction,
        /// Output format for `emit` (json or tsv).
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Operations on a dual tree literal such as [abc];[d];[ef]/0-1,1-2.
    Tree {
        #[arg(long, value_enum)]
        action: TreeAction,
        #[arg(long)]
        tree: String,
        /// Edge to contract, as i-j in the literal's vertex numbering.
        #[arg(long)]
        edge: Option<String>,
        /// Labels to forget, e.g. 13 or a,c.
        #[arg(long)]
        forget_set: Option<String>,
    },
    /// Rank of the divisor class group.
    Picard {
        #[arg(long)]
        n: usize,
    },
    /// Expected dimension of a space of stable maps.
    Vdim {
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long)]
        sigma_size: u32,
        #[arg(long)]
        target_dim: u32,
        #[arg(long, allow_hyphen_values = true)]
        minus_k: i64,
    },
}

fn dispatch(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Census { n, format } => commands::census(*n, *format),
        Command::Pair { sigma, pi } => commands::pair(sigma, pi),
        Command::MinusK { pi, route } => commands::minus_k(pi, *route),
        Command::Matrix { n, action, format } => commands::matrix(*n, *action, *format),
        Command::Tree {
            action,
            tree,
            edge,
            forget_set,
        } => commands::tree(*action, tree, edge.as_deref(), forget_set.as_deref()),
        Command::Picard { n } => commands::picard(*n),
        Command::Vdim {
            genus,
            sigma_size,
            target_dim,
            minus_k,
        } => Ok(commands::vdim(*genus, *sigma_size, *target_dim, *minus_k)),
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.max_n {
        Some(n) => m0n_core::limit::set_max_n(n),
        None => {
            m0n_core::limit::from_env();
        }
    }

    let (text, code) = match dispatch(&cli.command) {
        Ok(out) => (out.text, out.code),
        Err(e) => {
            eprintln!("m0n: {}", e.message);
            match e.payload {
                Some(text) => (text, e.code),
                None => return ExitCode::from(e.code),
            }
        }
    };
    if let Err(e) = emit(&text, cli.output.as_ref()) {
        eprintln!("m0n: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
