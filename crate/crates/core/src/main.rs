use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kmhecke::cli::{self, Session, SessionConfig};
use kmhecke::Error;

#[derive(Parser)]
#[command(name = "kmhecke", version, about = "Hecke algebras of Kac-Moody root data and principal series irreducibility")]
struct Args {
    /// JSON session file; the built-in rank-2 fixture when omitted.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the truncation L of the config.
    #[arg(short = 'L', long, global = true)]
    truncation: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Root datum, parameter constraints and Weyl group basics.
    Show,
    /// Irreducibility verdict for a named character.
    Verdict { character: String },
    /// W_tau, W_(tau) and the tau-simple reflections.
    Fixers { character: String },
    /// Weight and generalized weight spaces of chi = w.tau on a ball.
    Weights {
        character: String,
        #[arg(long, default_value = "tau")]
        chi: String,
        #[arg(long, default_value_t = 3)]
        length: usize,
    },
    /// Coefficient tables of F_w, B_w, zeta or the Q recursion.
    Tables {
        #[arg(value_parser = ["F", "B", "zeta", "Q"])]
        which: String,
        #[arg(long, default_value_t = 2)]
        length: usize,
        /// Dominant regular lambda for Q, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<i64>>,
    },
    /// Runs the invariant suite.
    Selftest {
        /// Truncation 2.
        #[arg(long)]
        quick: bool,
    },
}

fn run(args: Args) -> Result<(serde_json::Value, bool), Error> {
    let mut config = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            SessionConfig::from_json(&text)?
        }
        None => SessionConfig::default_f1(),
    };
    if let Some(l) = args.truncation {
        config.l = l;
    }
    let sess = Session::load(config)?;
    log::info!("loaded rank {} root datum over Q(zeta_{})", sess.rd().rank(), sess.field.order());
    match args.cmd {
        Cmd::Show => Ok((cli::cmd_show(&sess)?, true)),
        Cmd::Verdict { character } => Ok((cli::cmd_verdict(&sess, &character)?, true)),
        Cmd::Fixers { character } => Ok((cli::cmd_fixers(&sess, &character)?, true)),
        Cmd::Weights { character, chi, length } => Ok((cli::cmd_weights(&sess, &character, &chi, length)?, true)),
        Cmd::Tables { which, length, lambda } => Ok((cli::cmd_tables(&sess, &which, length, lambda)?, true)),
        Cmd::Selftest { quick } => {
            let (ok, report) = cli::selftest(&sess, quick)?;
            Ok((report, ok))
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    match run(Args::parse()) {
        Ok((report, ok)) => {
            emit(&serde_json::to_string_pretty(&report).expect("reports serialize"));
            if ok {
                ExitCode::SUCCESS
            } else {
                log::error!("an identity check failed");
                ExitCode::from(3)
            }
        }
        Err(e) => {
            let code = cli::exit_code(&e);
            emit(&serde_json::json!({"error": e.to_string(), "exit_code": code}).to_string());
            log::error!("{e}");
            ExitCode::from(code as u8)
        }
    }
}
