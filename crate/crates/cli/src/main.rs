use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use compcodes::bits::BitString;
use compcodes::channel::{corrupt, random_plan, ErrorPlan};
use compcodes::compositions::{multi_compositions, CompositionMultiset};
use compcodes::oracle::{MessageMode, PlanMode, SweepMode};
use compcodes::params::{BuiltScheme, ParamFile};
use compcodes::single::Verdict;

/// Encode, corrupt and reconstruct binary strings through their
/// prefix-suffix composition multisets.
#[derive(Parser)]
#[command(name = "compcodes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate parameters and print the canonical parameter file.
    Params {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Encode a message into codeword bits, one string per line.
    Encode {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Message text; read from --input (or stdin) when absent.
        #[arg(short, long)]
        message: Option<String>,
        #[arg(short, long)]
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute the prefix-suffix composition multiset of codeword bits.
    Compose {
        /// Whitespace-separated bit strings; stdin when absent.
        #[arg(short, long)]
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply composition errors to a multiset.
    Corrupt {
        #[arg(short, long)]
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Number of size groups to corrupt with a random plan.
        #[arg(short, long, default_value_t = 0)]
        budget: usize,
        #[arg(short, long, default_value_t = 0)]
        seed: u64,
        /// Apply this plan file instead of drawing one.
        #[arg(long, conflicts_with = "budget")]
        plan: Option<PathBuf>,
        /// Where to write the applied plan.
        #[arg(long)]
        plan_out: Option<PathBuf>,
    },
    /// Reconstruct the message from a multiset.
    Decode {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(short, long)]
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run an encode-corrupt-decode sweep and print the report.
    Verify {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Enumerate every message and every plan.
        #[arg(long)]
        exhaustive: bool,
        /// Random messages (0 means all, when enumerable).
        #[arg(long, default_value_t = 0)]
        messages: usize,
        /// Random plans per message (ignored with --exhaustive).
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Largest number of corrupted groups per plan; defaults to the
        /// scheme budget.
        #[arg(short, long)]
        budget: Option<usize>,
        #[arg(short, long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Default)]
struct SchemeArgs {
    /// Parameter file; inline flags are ignored when given.
    #[arg(short, long)]
    params: Option<PathBuf>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    erasures: Option<usize>,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    good_t: Option<usize>,
    /// enumerative or interleave.
    #[arg(long)]
    dominant: Option<String>,
}

/// Error categories and their exit codes.
#[derive(Debug)]
enum Failure {
    Usage(anyhow::Error),
    Params(anyhow::Error),
    Input(anyhow::Error),
    Io(anyhow::Error),
    Decode(String),
    Sweep(String),
}

impl Failure {
    fn category(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Params(_) => "params",
            Failure::Input(_) => "input",
            Failure::Io(_) => "io",
            Failure::Decode(_) => "decode",
            Failure::Sweep(_) => "sweep",
        }
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Decode(_) | Failure::Sweep(_) => 2,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(e) | Failure::Params(e) | Failure::Input(e) | Failure::Io(e) => format!("{e:#}"),
            Failure::Decode(s) | Failure::Sweep(s) => s.clone(),
        }
    }
}

impl SchemeArgs {
    fn file(&self) -> Result<ParamFile, Failure> {
        if let Some(path) = &self.params {
            let text = read_path(path).map_err(Failure::Io)?;
            return ParamFile::parse(&text)
                .with_context(|| format!("in {}", path.display()))
                .map_err(Failure::Params);
        }
        let scheme = self
            .scheme
            .clone()
            .ok_or_else(|| Failure::Usage(anyhow!("give --params FILE or --scheme with its fields")))?;
        Ok(ParamFile {
            scheme,
            n: self.n,
            n1: self.n1,
            n2: self.n2,
            p: self.p,
            t: self.t,
            erasures: self.erasures,
            h: self.h,
            k: self.k,
            good_t: self.good_t,
            dominant: self.dominant.clone(),
        })
    }

    fn build(&self) -> Result<BuiltScheme, Failure> {
        self.file()?.build().map_err(|e| Failure::Params(e.into()))
    }
}

fn read_path(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) => read_path(p).map_err(Failure::Io),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin").map_err(Failure::Io)?;
            Ok(s)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Io),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing stdout")
            .map_err(Failure::Io),
    }
}

fn read_multiset(path: Option<&Path>) -> Result<CompositionMultiset, Failure> {
    read_input(path)?
        .parse::<CompositionMultiset>()
        .map_err(|e| Failure::Input(anyhow!("multiset: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Params { scheme, output } => {
            let text = scheme.file()?.to_canonical_text().map_err(|e| Failure::Params(e.into()))?;
            write_output(output.as_deref(), &text)
        }
        Command::Encode {
            scheme,
            message,
            input,
            output,
        } => {
            let built = scheme.build()?;
            let msg = match message {
                Some(m) => m,
                None => read_input(input.as_deref())?,
            };
            let strings = built.encode_text(&msg).map_err(|e| Failure::Input(e.into()))?;
            let text: String = strings.iter().map(|c| format!("{c}\n")).collect();
            write_output(output.as_deref(), &text)
        }
        Command::Compose { input, output } => {
            let text = read_input(input.as_deref())?;
            let strings = text
                .split_whitespace()
                .map(|s| s.parse::<BitString>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Input(anyhow!("bits: {e}")))?;
            let y = multi_compositions(&strings).map_err(|e| Failure::Input(e.into()))?;
            write_output(output.as_deref(), &y.to_string())
        }
        Command::Corrupt {
            input,
            output,
            budget,
            seed,
            plan,
            plan_out,
        } => {
            let x = read_multiset(input.as_deref())?;
            let (plan, header) = match plan {
                Some(path) => {
                    let text = read_path(&path).map_err(Failure::Io)?;
                    let plan = text
                        .parse::<ErrorPlan>()
                        .map_err(|e| Failure::Input(anyhow!("plan: {e}")))?;
                    (plan, format!("# plan {}\n", path.display()))
                }
                None => {
                    let plan = random_plan(&x, budget, seed).map_err(|e| Failure::Input(e.into()))?;
                    (plan, format!("# seed={seed} budget={budget}\n"))
                }
            };
            let y = corrupt(&x, &plan).map_err(|e| Failure::Input(e.into()))?;
            let plan_text = format!("{header}{plan}");
            match plan_out {
                Some(p) => write_output(Some(&p), &plan_text)?,
                None => eprint!("{plan_text}"),
            }
            write_output(output.as_deref(), &y.to_string())
        }
        Command::Decode { scheme, input, output } => {
            let built = scheme.build()?;
            let y = read_multiset(input.as_deref())?;
            let outcome = built.decode(&y);
            write_output(output.as_deref(), &outcome.to_string())?;
            match outcome.verdict {
                Verdict::Recovered => Ok(()),
                v => Err(Failure::Decode(format!("{v}: {}", outcome.error.unwrap_or_default()))),
            }
        }
        Command::Verify {
            scheme,
            exhaustive,
            messages,
            trials,
            budget,
            seed,
            output,
        } => {
            let built = scheme.build()?;
            let max_events = budget.unwrap_or(built.budget());
            let messages = if messages == 0 {
                MessageMode::All
            } else {
                MessageMode::Random { count: messages, seed }
            };
            let plans = if exhaustive {
                PlanMode::Exhaustive { max_events }
            } else {
                PlanMode::Random {
                    count: trials,
                    max_events,
                    seed,
                }
            };
            let report = built
                .sweep(SweepMode { messages, plans })
                .map_err(|e| Failure::Usage(e.into()))?;
            write_output(output.as_deref(), &report.to_string())?;
            if report.all_recovered() {
                Ok(())
            } else {
                Err(Failure::Sweep(format!(
                    "{} of {} cases not recovered",
                    report.total - report.recovered,
                    report.total
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error[{}]: {}", f.category(), f.message());
            ExitCode::from(f.code())
        }
    }
}
