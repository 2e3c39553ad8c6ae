use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::Output;

/// Exact Hirzebruch-Jung continued fractions, contractions, generalized
/// T-singularities, discrepancies and K^2 accumulation families.
#[derive(Parser, Debug)]
#[command(name = "hjchain", version)]
struct Cli {
    /// Emit one JSON document per result.
    #[arg(long, global = true)]
    json: bool,

    /// Attach contraction traces and step witnesses.
    #[arg(long, global = true)]
    trace: bool,

    /// Batch mode: read one input per line from PATH.
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fraction of n/q.
    Expand { fraction: Option<String> },
    /// Value p/q of a chain.
    Evaluate { chain: Option<String> },
    /// Dual fraction n/(n-q) and its chain.
    Dual { fraction: Option<String> },
    /// Discrepancies of the exceptional curves of a chain.
    Discrepancies { chain: Option<String> },
    /// Contract every 1 in a chain.
    Contract { chain: Option<String> },
    /// Admissibility, core and T-singularity status of a chain.
    Classify { chain: Option<String> },
    /// Minimal core, insertions and T-steps producing a chain.
    Decompose { chain: Option<String> },
    /// Where the middle copy of [c,1,c,1,c] survives after contraction.
    Survivors { chain: Option<String> },
    #[command(subcommand)]
    Enumerate(Enumerate),
    #[command(subcommand)]
    Accumulate(Accumulate),
    /// Bound checks for a chain with a canonical-class ledger.
    VerifyBounds(BoundArgs),
}

#[derive(Subcommand, Debug)]
enum Enumerate {
    /// Generalized T-singularities of a center.
    Gent {
        #[arg(long, default_value = "[4]")]
        center: String,
        #[arg(long)]
        max_length: usize,
    },
    /// Cores with bounded sum (e - 2) and length.
    Cores {
        #[arg(long)]
        max_weight: i64,
        #[arg(long)]
        max_length: usize,
    },
}

#[derive(Args, Debug)]
struct SeqArgs {
    #[arg(long, default_value_t = 20)]
    kmax: usize,
    /// Cauchy tolerance, rational or decimal.
    #[arg(long, default_value = "1e-9")]
    tol: String,
}

#[derive(Subcommand, Debug)]
enum Accumulate {
    /// Chains [2 x k, 4+k, n0, 4].
    Example210 {
        #[arg(long)]
        n0: i64,
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Repeated blow-ups of an ample seed chain.
    Blowup {
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 0)]
        ks2: i64,
        #[arg(long, default_value_t = 0)]
        m0: i64,
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Iterated formation rule from a seed fraction.
    Formation {
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 0)]
        ks2: i64,
        #[arg(long, default_value_t = 0)]
        m0: i64,
        #[command(flatten)]
        seq: SeqArgs,
    },
}

#[derive(Args, Debug)]
struct BoundArgs {
    chain: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    ks2: i64,
    #[arg(long)]
    m: i64,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<i64>,
    #[arg(long, default_value = "A")]
    delta_case: String,
    #[arg(long)]
    l: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
}

enum Failure {
    Usage(String),
    /// A batch line did not parse; the line itself already carries the message.
    BatchUsage,
    Domain,
}

/// Unparsable chains and fractions are usage errors; everything else is a
/// domain error.
fn failure(e: &hjchain::Error) -> Failure {
    match e {
        hjchain::Error::Parse { .. } => Failure::Usage(e.to_string()),
        _ => {
            eprintln!("error: {e}");
            Failure::Domain
        }
    }
}

fn usage(msg: &str) -> Failure {
    Failure::Usage(msg.to_string())
}

type SingleOp = fn(&str, &Flags) -> commands::Result;

/// The per-input operation of a command, or `None` for commands without one.
fn single_input(cmd: &Command) -> Option<(&Option<String>, SingleOp)> {
    Some(match cmd {
        Command::Expand { fraction } => (fraction, commands::expand),
        Command::Evaluate { chain } => (chain, commands::evaluate),
        Command::Dual { fraction } => (fraction, commands::dual),
        Command::Discrepancies { chain } => (chain, commands::discrepancies),
        Command::Contract { chain } => (chain, commands::contract),
        Command::Classify { chain } => (chain, commands::classify),
        Command::Decompose { chain } => (chain, commands::decompose),
        Command::Survivors { chain } => (chain, commands::survivors),
        _ => return None,
    })
}

pub struct Flags {
    pub json: bool,
    pub trace: bool,
}

fn emit(out: &mut impl Write, o: &Output, flags: &Flags, compact: bool) -> io::Result<()> {
    if flags.json {
        let doc = if compact {
            serde_json::to_string(&o.json)
        } else {
            serde_json::to_string_pretty(&o.json)
        };
        writeln!(out, "{}", doc.expect("json values serialize"))
    } else if compact {
        writeln!(out, "{}", o.text.trim_end().replace('\n', "; "))
    } else {
        writeln!(out, "{}", o.text.trim_end())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let flags = Flags {
        json: cli.json,
        trace: cli.trace,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();

    if let Some((arg, op)) = single_input(&cli.command) {
        return match (&cli.input, arg) {
            (Some(_), Some(_)) => Err(usage("give either a positional input or --input, not both")),
            (None, None) => Err(usage("missing input")),
            (None, Some(s)) => match op(s, &flags) {
                Ok(o) => emit(&mut out, &o, &flags, false).map_err(|_| Failure::Domain),
                Err(e) => Err(failure(&e)),
            },
            (Some(path), None) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| usage(&format!("cannot read {}: {e}", path.display())))?;
                // Every line gets a result; the exit status reports the first failure.
                let mut failed = None;
                for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
                    let o = op(line, &flags).unwrap_or_else(|e| {
                        failed.get_or_insert(e.clone());
                        commands::error_output(line, &e)
                    });
                    emit(&mut out, &o, &flags, true).map_err(|_| Failure::Domain)?;
                }
                match failed {
                    None => Ok(()),
                    Some(hjchain::Error::Parse { .. }) => Err(Failure::BatchUsage),
                    Some(_) => Err(Failure::Domain),
                }
            }
        };
    }

    if cli.input.is_some() {
        return Err(usage("--input is only accepted by commands taking one chain or fraction"));
    }
    let result = match &cli.command {
        Command::Enumerate(Enumerate::Gent { center, max_length }) => {
            commands::enumerate_gent(center, *max_length, &flags)
        }
        Command::Enumerate(Enumerate::Cores {
            max_weight,
            max_length,
        }) => commands::enumerate_cores(*max_weight, *max_length, &flags),
        Command::Accumulate(Accumulate::Example210 { n0, seq }) => {
            commands::accumulate_example(*n0, seq.kmax, &seq.tol, &flags)
        }
        Command::Accumulate(Accumulate::Blowup { seed, ks2, m0, seq }) => {
            commands::accumulate_blowup(seed, *ks2, *m0, seq.kmax, &seq.tol, &flags)
        }
        Command::Accumulate(Accumulate::Formation { seed, ks2, m0, seq }) => {
            commands::accumulate_formation(seed, *ks2, *m0, seq.kmax, &seq.tol, &flags)
        }
        Command::VerifyBounds(b) => {
            let chain = b.chain.as_deref().ok_or_else(|| usage("missing input"))?;
            commands::verify_bounds(
                chain,
                &commands::BoundInput {
                    ks2: b.ks2,
                    m: b.m,
                    lambda: b.lambda.as_deref(),
                    chi: b.chi,
                    delta_case: &b.delta_case,
                    l: b.l,
                    k: b.k,
                },
                &flags,
            )
        }
        _ => unreachable!("single-input commands handled above"),
    };
    match result {
        Ok(o) => emit(&mut out, &o, &flags, false).map_err(|_| Failure::Domain),
        Err(e) => Err(failure(&e)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests print normally and succeed.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain) => ExitCode::from(1),
        Err(Failure::BatchUsage) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            use clap::CommandFactory;
            eprintln!("error: {msg}\n");
            let _ = Cli::command().write_help(&mut io::stderr());
            ExitCode::from(2)
        }
    }
}
