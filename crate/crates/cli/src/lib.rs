//! The `dkit` command line: argument parsing and dispatch. [`run`] returns
//! the exit code and both output streams so that it can be driven from
//! tests without spawning a process.

mod cartier;
mod census;
mod examples;
mod module;
mod points;
mod witt;

use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use dkit_core::config::{Budgets, Config};
use dkit_core::cosmooth::Presentation;
use dkit_core::{Ring, RingHom};

pub use examples::{run_suite, ExampleStep};

#[derive(Parser, Debug)]
#[command(name = "dkit", version, about = "Witt vectors, Cartier-Dieudonne modules and cosmooth presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Base ring, e.g. `fp 2`, `gf 2 d=2 mod=x^2+x+1`, `mq 2 vars=l,T bounds=*,4`
    #[arg(long, global = true)]
    ring: Option<String>,
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Level (Witt length)
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Rank
    #[arg(long, global = true)]
    r: Option<usize>,
    /// Presentation file
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    /// Substitution such as `lambda=1`
    #[arg(long, global = true)]
    at: Option<String>,
    /// Cap on every exhaustive scan, e.g. `4096` or `2^12`
    #[arg(long, global = true)]
    budget: Option<String>,
    /// key=value file with default budgets and guards
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV output where supported
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truncated Witt vector arithmetic
    Witt {
        verb: WittVerb,
        args: Vec<String>,
    },
    /// Elements of the truncated Cartier ring E_n
    Cartier {
        verb: CartierVerb,
        args: Vec<String>,
    },
    /// Presentations of cosmooth modules
    Module {
        verb: ModuleVerb,
        args: Vec<String>,
    },
    /// Points Hom(M, W_n(S)) over a finite algebra S
    Points {
        verb: PointsVerb,
    },
    /// Isomorphism classes and lifting witnesses over a finite ring
    Census {
        verb: CensusVerb,
    },
    /// The worked examples
    Examples {
        verb: ExamplesVerb,
        #[arg(default_value = "all")]
        which: ExampleName,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum WittVerb {
    Add,
    Sub,
    Mul,
    Neg,
    Frobenius,
    Verschiebung,
    Teichmuller,
    Poly,
    Check,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum CartierVerb {
    Normal,
    Add,
    Sub,
    Mul,
    Neg,
    Act,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum ModuleVerb {
    Make,
    Show,
    Verify,
    Truncate,
    Lift,
    Thicken,
    BaseChange,
    Hom,
    Injective,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum PointsVerb {
    List,
    Group,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum CensusVerb {
    Classes,
    Enumerate,
    Lift,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum ExamplesVerb {
    Run,
    List,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    Zpn,
    Lambda,
    Hochschild,
    All,
}

/// Failures that end a command with exit code 2.
#[derive(Debug)]
pub(crate) enum CliError {
    Core(dkit_core::Error),
    Usage(String),
    Io(String),
}

impl From<dkit_core::Error> for CliError {
    fn from(e: dkit_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

pub(crate) type CmdResult = Result<Outcome, CliError>;

/// Command output; `ok == false` means a verification or coverage failure.
pub(crate) struct Outcome {
    pub out: String,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(out: impl Into<String>) -> Outcome {
        Outcome { out: out.into(), ok: true }
    }
}

/// Parsed global options.
pub(crate) struct Ctx {
    ring: Option<String>,
    pub p: Option<u32>,
    pub n: Option<usize>,
    pub r: Option<usize>,
    file: Option<PathBuf>,
    pub at: Option<String>,
    pub budgets: Budgets,
    pub csv: bool,
}

impl Ctx {
    pub fn ring(&self) -> Result<Ring, CliError> {
        match &self.ring {
            Some(spec) => Ok(Ring::parse_spec(spec)?),
            None => match self.p {
                Some(p) => Ok(Ring::prime_field(p)?),
                None => Err(CliError::Usage("a base ring is required: pass --ring or --p".into())),
            },
        }
    }

    pub fn has_ring(&self) -> bool {
        self.ring.is_some()
    }

    pub fn require_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| CliError::Usage("--n is required".into()))
    }

    pub fn read_file(&self) -> Result<String, CliError> {
        let path = self.file.as_ref().ok_or_else(|| CliError::Usage("--file is required".into()))?;
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
    }

    /// The presentation in `--file`, specialized along `--at` when given.
    pub fn presentation(&self) -> Result<Presentation, CliError> {
        let pres = Presentation::from_text(&self.read_file()?)?;
        match &self.at {
            Some(at) => {
                let h = RingHom::specialize(pres.ring(), at)?;
                Ok(pres.base_change(&h)?)
            }
            None => Ok(pres),
        }
    }
}

fn budgets_from(cli: &Cli) -> Result<Budgets, CliError> {
    let cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            Config::parse(&text)?
        }
        None => Config::default(),
    };
    let cfg = cfg.with_env()?;
    cfg.apply_guards();
    let mut budgets = cfg.budgets;
    if let Some(b) = &cli.budget {
        let cap = Config::parse(&format!("budget={b}"))?.budgets.presentations;
        budgets = Budgets::uniform(cap);
    }
    Ok(budgets)
}

fn dispatch(cli: Cli) -> CmdResult {
    let ctx = Ctx {
        budgets: budgets_from(&cli)?,
        ring: cli.ring,
        p: cli.p,
        n: cli.n,
        r: cli.r,
        file: cli.file,
        at: cli.at,
        csv: cli.csv,
    };
    match cli.command {
        Command::Witt { verb, args } => witt::run(&ctx, verb, &args),
        Command::Cartier { verb, args } => cartier::run(&ctx, verb, &args),
        Command::Module { verb, args } => module::run(&ctx, verb, &args),
        Command::Points { verb } => points::run(&ctx, verb),
        Command::Census { verb } => census::run(&ctx, verb),
        Command::Examples { verb, which } => examples::run(&ctx, verb, which),
    }
}

/// Run the command line `argv` (including the program name) and return
/// `(exit code, stdout, stderr)`.
pub fn run<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    (0, text, String::new())
                }
                _ => (2, String::new(), text),
            };
        }
    };
    match dispatch(cli) {
        Ok(Outcome { out, ok: true }) => (0, out, String::new()),
        Ok(Outcome { out, ok: false }) => (1, out, "error: verification failed\n".into()),
        Err(e) => (2, String::new(), format!("error: {e}\n")),
    }
}

/// Append a line to an output buffer.
pub(crate) fn line(out: &mut String, text: impl AsRef<str>) {
    out.push_str(text.as_ref());
    out.push('\n');
}
