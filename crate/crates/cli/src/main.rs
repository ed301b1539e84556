use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod render;
mod verify;

use commands::ShowWhat;
use config::{Config, Format, Suite};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] qmckay::Error),
    #[error("cannot write output: {0}")]
    Output(String),
}

pub struct Output {
    pub text: String,
    pub failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            failed: false,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qmckay",
    version,
    about = "Quantum McKay correspondence at desk scale"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// ADE label such as D6 or E8
    #[arg(long, global = true)]
    graph: Option<String>,
    /// Graph file (`type=D rank=6` plus optional `edge=i,j` lines)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// key=value configuration file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    h: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Path-length cap for the mesh quotient (default 4h)
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a table or diagram
    Show {
        #[arg(value_enum)]
        what: ShowWhat,
        /// Ext^1 instead of Hom for `homtable`
        #[arg(long)]
        ext: bool,
    },
    /// Run verification suites; exit 1 if any check fails
    Verify {
        #[arg(long, value_enum, value_delimiter = ',')]
        suite: Vec<Suite>,
    },
    /// Dimension vectors of rho_h on every indecomposable
    Restrict {
        /// `bipartite` or comma-separated values
        #[arg(long)]
        height: Option<String>,
    },
    /// Check the reflection square at one vertex
    Reflect {
        #[arg(long)]
        height: Option<String>,
        /// 1-based vertex
        #[arg(long)]
        vertex: usize,
        /// `+` at a source, `-` at a sink
        #[arg(long, allow_hyphen_values = true)]
        sign: String,
    },
    /// Action matrices of a graph, or the admissible graphs for an h
    Subgroup {
        #[arg(long)]
        list: bool,
    },
}

fn configure(cli: &Cli) -> Result<Config, CliError> {
    let base = match &cli.global.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let mut flags = Config {
        graph: cli.global.graph.clone(),
        input: cli.global.input.clone(),
        h: cli.global.h,
        format: cli.global.format,
        cap: cli.global.cap,
        jobs: cli.global.jobs,
        ..Config::default()
    };
    match &cli.command {
        Command::Verify { suite } => flags.suites = suite.clone(),
        Command::Restrict { height } | Command::Reflect { height, .. } => {
            flags.height = height.clone()
        }
        _ => {}
    }
    let config = base.overlay(flags);
    // surface graph/h inconsistencies before running anything
    config.graph()?;
    Ok(config)
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let config = configure(cli)?;
    match &cli.command {
        Command::Show { what, ext } => commands::show(&config, *what, *ext),
        Command::Verify { .. } => verify::verify(&config),
        Command::Restrict { .. } => commands::restrict(&config),
        Command::Reflect { vertex, sign, .. } => commands::reflect(&config, *vertex, sign),
        Command::Subgroup { list } => commands::subgroup(&config, *list),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            ExitCode::from(u8::from(out.failed))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
