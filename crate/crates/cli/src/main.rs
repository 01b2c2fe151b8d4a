//! `pentarec`: command-line access to the partition recurrences, the
//! brackets P_nu, Hecke data, Dirichlet sums and the Kloosterman-Bessel
//! series.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 internal
//! error.

mod commands;
mod config;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::{GlobalArgs, RunConfig};
use output::{Document, Record, Timing};

#[derive(Parser, Debug)]
#[command(name = "pentarec", version, about = "Pentagonal-number partition recurrences and their modular-form data")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// p(n) for one n or an inclusive range a..b.
    Partition {
        /// `n` or `a..b`.
        range: String,
        /// euler, theorem2:NU or rademacher:C; repeat to compare methods.
        #[arg(long = "method", default_value = "euler")]
        methods: Vec<String>,
        /// Fail with exit code 1 unless all methods agree (Euler is always included).
        #[arg(long = "cross-check")]
        cross_check: bool,
    },
    /// Coefficients of P_nu and its Eisenstein/cusp decomposition.
    Pnu { nu: u32 },
    /// The polynomial g_nu(n, k).
    Gpoly {
        nu: u32,
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        k: i64,
    },
    /// Hecke traces Tr_{2nu}(n) for 1 <= n < prec.
    Trace { nu: u32 },
    /// Normalized Hecke eigenforms of the given weight.
    Eigenforms { weight: i64 },
    /// Truncated Dirichlet sums and Petersson norm estimates.
    Dirichlet { nu: u32 },
    /// The Kloosterman-Bessel series for p(n), for one n or a range a..b.
    Rademacher { range: String },
    /// Runs an invariant suite (or `all`).
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

/// A command failure with its exit code.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
}

impl From<pentarec::Error> for Failure {
    fn from(e: pentarec::Error) -> Failure {
        use pentarec::Error as E;
        let code = match e {
            E::InvalidArgument(_)
            | E::InsufficientPrecision { .. }
            | E::UnsupportedHeckeField { .. }
            | E::GammaPole(_) => 2,
            E::NotInSpace { .. } => 1,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

/// What a command hands back for rendering.
pub struct Outcome {
    pub records: Vec<Record>,
    /// False when a verification inside the command failed.
    pub ok: bool,
    pub check_timings: Record,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn ok(records: Vec<Record>) -> Outcome {
        Outcome { records, ok: true, check_timings: Record::new(), notes: Vec::new() }
    }
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Partition { .. } => "partition",
        Command::Pnu { .. } => "pnu",
        Command::Gpoly { .. } => "gpoly",
        Command::Trace { .. } => "trace",
        Command::Eigenforms { .. } => "eigenforms",
        Command::Dirichlet { .. } => "dirichlet",
        Command::Rademacher { .. } => "rademacher",
        Command::Verify { .. } => "verify",
    }
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, Failure> {
    match cmd {
        Command::Partition { range, methods, cross_check } => commands::partition(cfg, range, methods, *cross_check),
        Command::Pnu { nu } => commands::pnu(cfg, *nu),
        Command::Gpoly { nu, n, k } => commands::gpoly(*nu, *n, *k),
        Command::Trace { nu } => commands::trace(cfg, *nu),
        Command::Eigenforms { weight } => commands::eigenforms(cfg, *weight),
        Command::Dirichlet { nu } => commands::dirichlet(cfg, *nu),
        Command::Rademacher { range } => commands::rademacher(cfg, range),
        Command::Verify { suite } => commands::verify(suite),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let cfg = RunConfig::resolve(&cli.global).map_err(Failure::usage)?;
    let start = Instant::now();
    let outcome = dispatch(&cli.command, &cfg)?;
    let doc = Document {
        command: name(&cli.command),
        config: &cfg,
        status: if outcome.ok { "ok" } else { "fail" },
        records: &outcome.records,
        timing: Timing { seconds: output::float(start.elapsed().as_secs_f64()), checks: outcome.check_timings },
    };
    let bytes = output::render(&doc, cfg.format).map_err(|m| Failure { code: 3, message: m })?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| Failure { code: 3, message: e.to_string() })?;
        }
    }
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    Ok(if outcome.ok { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("pentarec: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
