use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use perfval::ring_core::rng::DEFAULT_SEED;
use perfval::Error;

mod commands;

/// Exact normalized lengths, tilts and almost purity over model perfectoid
/// valuation rings.
#[derive(Parser, Debug)]
#[command(name = "perfval", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for every sampled batch (default: $PERFVAL_SEED, else 7).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Model ring flags. Files that carry their own ring take precedence.
#[derive(Args, Debug, Clone)]
pub struct RingArgs {
    /// `char_p` or `mixed`.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub prime: Option<u32>,
    /// Precision cap N, as "num/den".
    #[arg(long)]
    pub precision: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ring element arithmetic.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Normalized lengths of presented and cut modules.
    #[command(subcommand)]
    Length(LengthCmd),
    /// Property checks on seeded batches.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Tilt of the mixed model: inspect an element or run the batch checks.
    Tilt(TiltArgs),
    /// Almost sections of almost surjective maps.
    #[command(subcommand)]
    Section(SectionCmd),
    /// Concrete extensions: length ledger, discriminant tower, Frobenius.
    #[command(subcommand)]
    Purity(PurityCmd),
}

#[derive(Subcommand, Debug)]
pub enum RingCmd {
    /// Parse, canonicalize and optionally operate on an element.
    Eval {
        expr: String,
        #[command(flatten)]
        ring: RingArgs,
        /// show, add, sub, mul, div, neg, invert, frobenius, pth-root
        #[arg(long, default_value = "show")]
        op: String,
        /// Second operand for binary operations.
        #[arg(long)]
        with: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum LengthCmd {
    /// `λ` of the module presented by a matrix file.
    Fp {
        #[arg(long)]
        matrix: String,
    },
    /// `λ` of a cut module (file path or inline JSON literal).
    Cut {
        #[arg(long)]
        cut: String,
        /// Also report `bM` for `v(b)` given as "num/den".
        #[arg(long)]
        b_valuation: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    /// `λ(M^[F]) = λ(M)/p` on random presentations (sizes up to 4x6).
    Pullback {
        #[arg(long, default_value_t = 2)]
        prime: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value = "4")]
        precision: String,
        /// Also check the matrix in this file.
        #[arg(long)]
        matrix: Option<String>,
        /// Also compare Smith divisors with the Fitting ideal.
        #[arg(long)]
        oracle: bool,
    },
    /// Additivity, subadditivity, zero length and finiteness on random cuts.
    Additivity {
        #[arg(long, default_value_t = 2)]
        prime: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value = "4")]
        precision: String,
    },
    /// Both sides of the flatness isomorphism for `v(a) = 1/p^j`.
    Flatness {
        #[arg(long, default_value_t = 2)]
        prime: u32,
        #[arg(long, default_value_t = 5)]
        jmax: u32,
        #[arg(long, default_value = "4")]
        precision: String,
        /// Check this element instead of the grid.
        #[arg(long)]
        a: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct TiltArgs {
    #[arg(long, default_value_t = 2)]
    pub prime: u32,
    #[arg(long, default_value = "4")]
    pub precision: String,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Semicolon-separated components `x_0; x_1; …` to inspect.
    #[arg(long)]
    pub components: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Subcommand, Debug)]
pub enum SectionCmd {
    /// Minimal-defect section of a matrix, with the bound and optional lift.
    Solve {
        #[arg(long)]
        problem: String,
        /// Lift level by level up to this level and compare.
        #[arg(long)]
        lift: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PurityCmd {
    /// Length ledger of the order for a scalar `b`.
    Ledger {
        #[arg(long)]
        extension: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Discriminant valuations along the p-power root tower.
    Tower {
        #[arg(long)]
        extension: String,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Frobenius surjectivity on seeded residues.
    Frobsurj {
        #[arg(long)]
        extension: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[command(flatten)]
        ring: RingArgs,
    },
}

/// Result of one command: a payload plus the checked claims.
pub struct Outcome {
    pub name: &'static str,
    pub value: Value,
    pub reports: Vec<perfval::Report>,
    pub text: Vec<String>,
}

/// Errors at the CLI boundary.
pub enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(
                Error::PrecisionExhausted(_)
                | Error::NoRootBelowPrecision(_)
                | Error::LiftObstructed { .. },
            ) => 3,
            Failure::Lib(Error::NotAlmostSurjective(_) | Error::RootSearchExceeded { .. }) => 1,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(m) => m.clone(),
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("PERFVAL_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Io(format!("PERFVAL_SEED is not an integer: {v:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Writes a line to stdout; a closed pipe is not an error for a report tool.
fn emit(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let seed = resolve_seed(cli.seed)?;
    match &cli.command {
        Command::Ring(RingCmd::Eval { expr, ring, op, with }) => {
            commands::ring_eval(expr, ring, op, with.as_deref())
        }
        Command::Length(c) => commands::length(c),
        Command::Check(c) => commands::check(c, seed),
        Command::Tilt(a) => commands::tilt(a, seed),
        Command::Section(SectionCmd::Solve { problem, lift }) => commands::section(problem, *lift),
        Command::Purity(c) => commands::purity(c, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let pass = out.reports.iter().all(perfval::Report::passed);
            match cli.format {
                Format::Json => {
                    let doc = json!({
                        "command": out.name,
                        "verdict": if pass { "pass" } else { "fail" },
                        "result": out.value,
                        "reports": out.reports,
                    });
                    emit(&serde_json::to_string_pretty(&doc).expect("serializable"));
                }
                Format::Text => {
                    for line in &out.text {
                        emit(line);
                    }
                    let failed = out.reports.iter().filter(|r| !r.passed()).count();
                    for r in out.reports.iter().filter(|r| !r.passed()) {
                        emit(&format!("[fail] {}: {} vs {}", r.claim, r.lhs, r.rhs));
                    }
                    if !out.reports.is_empty() {
                        emit(&format!(
                            "{} of {} checks passed",
                            out.reports.len() - failed,
                            out.reports.len()
                        ));
                    }
                }
            }
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(f) => {
            let code = f.exit_code();
            if cli.format == Format::Json {
                let doc = json!({ "error": f.message(), "exit_code": code });
                emit(&serde_json::to_string_pretty(&doc).expect("serializable"));
            }
            eprintln!("error: {}", f.message());
            ExitCode::from(code)
        }
    }
}
