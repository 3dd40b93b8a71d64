use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qfsplit_cli::catalog::Kind;
use qfsplit_cli::commands::{cmd_batch, cmd_check, cmd_witt, WittOp};
use qfsplit_cli::config::{load, Overrides};
use qfsplit_cli::report::{render_text, ReportOptions};
use qfsplit_cli::{CliError, EXIT_INPUT};

/// F-splitting and quasi-F-splitting tests for hypersurface singularities.
#[derive(Parser)]
#[command(name = "qfsplit", version)]
struct Cli {
    /// Config file (`key = value`); defaults to $QFSPLIT_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    truncation_degree: Option<u64>,
    #[arg(long, global = true)]
    candidate_slack: Option<u64>,
    #[arg(long, global = true)]
    witt_length_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ReportFlags {
    /// Include intermediate computations.
    #[arg(long)]
    explain: bool,
    /// Record wall-clock time in reports (makes them non-reproducible).
    #[arg(long)]
    timing: bool,
}

impl From<ReportFlags> for ReportOptions {
    fn from(f: ReportFlags) -> Self {
        ReportOptions {
            explain: f.explain,
            timing: f.timing,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one polynomial.
    Check {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Emit the JSON report instead of text.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        flags: ReportFlags,
        poly: String,
    },
    /// Analyze a JSON Lines catalog.
    Batch {
        catalog: PathBuf,
        /// Output file for the JSON Lines reports; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Worker threads.
        #[arg(short, long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        flags: ReportFlags,
    },
    /// Witt vector arithmetic.
    #[command(subcommand)]
    Witt(WittCommand),
}

#[derive(Args)]
struct WittArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    n: usize,
}

#[derive(Subcommand)]
enum WittCommand {
    /// Sum of two vectors, each `[f]` or `(a0; a1; ...)`.
    Add {
        #[command(flatten)]
        args: WittArgs,
        a: String,
        b: String,
    },
    /// Product of two vectors.
    Mul {
        #[command(flatten)]
        args: WittArgs,
        a: String,
        b: String,
    },
    /// Teichmüller lift of a polynomial.
    Teich {
        #[command(flatten)]
        args: WittArgs,
        f: String,
    },
    /// Carry polynomial Δ(f).
    Delta {
        #[arg(long)]
        p: u64,
        f: String,
    },
    /// Checks [f] = f([x]) + VΔ(f) in W_2.
    Identity {
        #[arg(long)]
        p: u64,
        f: String,
    },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let overrides = Overrides {
        truncation_degree: cli.truncation_degree,
        candidate_slack: cli.candidate_slack,
        witt_length_cap: cli.witt_length_cap,
    };
    let config = load(cli.config.as_deref(), &overrides)?;
    match cli.command {
        Command::Check {
            p,
            kind,
            json,
            flags,
            poly,
        } => {
            let report = cmd_check(p, kind, &poly, flags.into(), &config)?;
            if json {
                println!("{}", report.to_json());
            } else {
                println!("{}", render_text(&report));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Batch {
            catalog,
            output,
            jobs,
            flags,
        } => {
            let summary = match output {
                Some(path) => {
                    let file = File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    let mut w = BufWriter::new(file);
                    let s = cmd_batch(&catalog, &mut w, jobs, flags.into(), &config)?;
                    w.flush().map_err(|e| CliError::Io(e.to_string()))?;
                    s
                }
                None => cmd_batch(&catalog, &mut io::stdout().lock(), jobs, flags.into(), &config)?,
            };
            eprintln!("{summary}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Witt(w) => {
            let cap = config.witt_length_cap;
            let out = match &w {
                WittCommand::Add { args, a, b } => cmd_witt(WittOp::Add, args.p, args.n, &[a, b], cap)?,
                WittCommand::Mul { args, a, b } => cmd_witt(WittOp::Mul, args.p, args.n, &[a, b], cap)?,
                WittCommand::Teich { args, f } => cmd_witt(WittOp::Teich, args.p, args.n, &[f], cap)?,
                WittCommand::Delta { p, f } => cmd_witt(WittOp::Delta, *p, 2, &[f], cap)?,
                WittCommand::Identity { p, f } => cmd_witt(WittOp::Identity, *p, 2, &[f], cap)?,
            };
            println!("{}", out.text);
            Ok(if out.ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
