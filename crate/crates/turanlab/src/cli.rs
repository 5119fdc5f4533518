//! Command-line grammar and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use turanlab_core::covering::{
    build_special_covering, fano_covering, CoveringError, CoveringType, ResolutionOptions,
};
use turanlab_core::density::{is_two_balanced, two_density, DensityError};
use turanlab_core::extremal::ExtremalError;
use turanlab_core::graph::{count_copies, enumerate_copies};
use turanlab_core::probability::{psi_t, ProbabilityError};
use turanlab_core::sim::{extract_disjoint_core, sample_gnp, SimError};
use turanlab_core::{Graph, Rational};

use crate::config::{Config, ConfigError};
use crate::exec::{self, Exec};
use crate::graphs::{parse_graph_arg, GraphArgError};
use crate::report::{
    ConcentrationOut, CoreOut, CoveringOut, DensityOut, Format, JansonOut, NoCsv, PsiOut, Report, ScanRowOut,
};

#[derive(Debug, Parser)]
#[command(name = "turanlab", version, about = "Exact and simulated generalized random Turán computations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "TURANLAB_THREADS")]
    pub threads: Option<usize>,
    /// Sequential branch-and-bound: reproducible witnesses and node counts,
    /// no timings.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub max_n_ex: Option<usize>,
    #[arg(long, global = true)]
    pub max_pool_exx: Option<usize>,
    #[arg(long, global = true)]
    pub max_edges_sample: Option<usize>,
    /// TOML file with seed, trials, format, deterministic, threads and a
    /// [guards] table; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Graphs are builtin names (K2..K8, C3..C8, P2..P6, K33, Petersen), edge
/// lists `n; u-v,...`, graph6 strings, or files holding either.
#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// 2-density and 2-balancedness.
    Density {
        #[arg(long)]
        graph: String,
    },
    /// The T-resolution of H with threshold exponents.
    Resolution {
        #[arg(long = "T")]
        t: String,
        #[arg(long = "H")]
        h: String,
        /// Evaluate even when H maps homomorphically into T.
        #[arg(long)]
        allow_blow_up: bool,
    },
    /// All covering types of H by copies of T.
    Coverings {
        #[arg(long = "T")]
        t: String,
        #[arg(long = "H")]
        h: String,
        /// Keep only types of T-density at most this.
        #[arg(long)]
        max_density: Option<Rational>,
    },
    /// ex(n,T,H).
    Ex {
        #[arg(long)]
        n: usize,
        #[arg(long = "T")]
        t: String,
        #[arg(long = "H")]
        h: String,
    },
    /// êx(n,T,F) for a family of covering types.
    Exx {
        #[arg(long)]
        n: usize,
        #[arg(long = "T")]
        t: String,
        #[arg(long = "H")]
        h: Option<String>,
        #[arg(long, value_enum, default_value_t = Family::Fe)]
        family: Family,
        /// Use only the first k types of the family.
        #[arg(long)]
        prefix: Option<usize>,
        #[arg(long)]
        allow_blow_up: bool,
    },
    /// The (μ, π) sequence surrogate at n.
    PiSeq {
        #[arg(long)]
        n: usize,
        #[arg(long = "T")]
        t: String,
        #[arg(long = "H")]
        h: String,
        #[arg(long)]
        allow_blow_up: bool,
    },
    /// Ψ_T(n,p) with its minimizing subgraph.
    Psi {
        #[arg(long = "T")]
        t: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Janson's lower-tail bound for the T-copies of K_n (or of --host).
    Janson {
        #[arg(long = "T")]
        t: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, conflicts_with = "shortfall_frac")]
        shortfall: Option<f64>,
        /// Shortfall as a fraction of μ.
        #[arg(long)]
        shortfall_frac: Option<f64>,
        #[arg(long)]
        host: Option<String>,
        /// Also estimate P(X <= μ - t) from --trials samples.
        #[arg(long)]
        check: bool,
    },
    /// Exact ex(G(n,p),T,H) over a grid of exponents a, p = n^-a.
    Scan {
        #[arg(long = "T")]
        t: String,
        #[arg(long = "H")]
        h: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<Rational>,
    },
    /// Mean and spread of N_T(G(n,p)).
    Concentration {
        #[arg(long = "T")]
        t: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Edges of a graph lying in exactly one T-copy (after removing shared
    /// edges); the graph is --graph or a sample G(n,p).
    Core {
        #[arg(long = "T")]
        t: String,
        #[arg(long, conflicts_with_all = ["n", "p"])]
        graph: Option<String>,
        #[arg(long, requires = "p")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// The special covering F^e of H.
    Fe,
    /// The T-resolution of H.
    Resolution,
    /// Every covering type of H.
    Coverings,
    /// The Fano plane as a triangle covering of K7.
    Fano,
}

/// A failed command: bad input (exit 1) or a size-guard refusal (exit 2).
#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Guard(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Input(_) => 1,
            CommandError::Guard(_) => 2,
        }
    }
}

macro_rules! input_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CommandError {
            fn from(e: $t) -> Self {
                CommandError::Input(e.to_string())
            }
        }
    )*};
}
input_errors!(GraphArgError, DensityError, ProbabilityError, ConfigError, NoCsv, std::io::Error);

impl From<CoveringError> for CommandError {
    fn from(e: CoveringError) -> Self {
        match e {
            CoveringError::TooLarge(_) => CommandError::Guard(e.to_string()),
            e => CommandError::Input(e.to_string()),
        }
    }
}

impl From<ExtremalError> for CommandError {
    fn from(e: ExtremalError) -> Self {
        match e {
            ExtremalError::Covering(c) => c.into(),
            e if e.is_guard() => CommandError::Guard(e.to_string()),
            e => CommandError::Input(e.to_string()),
        }
    }
}

impl From<SimError> for CommandError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Extremal(x) => x.into(),
            e => CommandError::Input(e.to_string()),
        }
    }
}

/// Defaults, then the config file, then flags.
pub fn build_config(g: &GlobalArgs) -> Result<Config, CommandError> {
    let mut c = Config::default();
    if let Some(path) = &g.config {
        c.apply(Config::load(path)?);
    }
    c.seed = g.seed.unwrap_or(c.seed);
    c.trials = g.trials.unwrap_or(c.trials);
    c.output_format = g.format.or(c.output_format);
    c.deterministic |= g.deterministic;
    c.threads = g.threads.unwrap_or(c.threads);
    c.guards.max_n_ex = g.max_n_ex.unwrap_or(c.guards.max_n_ex);
    c.guards.max_pool_exx = g.max_pool_exx.unwrap_or(c.guards.max_pool_exx);
    c.guards.max_edges_sample_solver = g.max_edges_sample.unwrap_or(c.guards.max_edges_sample_solver);
    c.validate()?;
    Ok(c)
}

fn graph(arg: &str) -> Result<Graph, CommandError> {
    Ok(parse_graph_arg(arg)?)
}

fn options(allow_blow_up: bool) -> ResolutionOptions {
    ResolutionOptions { allow_blow_up }
}

fn exx_family(
    exec: &Exec,
    t: &Graph,
    h: Option<&str>,
    family: Family,
    allow_blow_up: bool,
) -> Result<Vec<CoveringType>, CommandError> {
    if family == Family::Fano {
        return Ok(vec![CoveringType::from_covering(fano_covering())]);
    }
    let h = graph(h.ok_or_else(|| CommandError::Input("--H is required for this family".into()))?)?;
    Ok(match family {
        Family::Fe => vec![CoveringType::from_covering(build_special_covering(t, &h)?)],
        Family::Resolution => exec::resolution(exec, t, &h, options(allow_blow_up))?.types,
        Family::Coverings => exec::covering_types(exec, t, &h, None)?,
        Family::Fano => unreachable!(),
    })
}

/// Runs one command and returns its report.
pub fn execute(command: &Command, config: &Config, exec: &Exec) -> Result<Report, CommandError> {
    let guards = &config.guards;
    Ok(match command {
        Command::Density { graph: g } => {
            let g = graph(g)?;
            Report::Density(DensityOut { m2: two_density(&g)?.value.to_string(), two_balanced: is_two_balanced(&g)? })
        }
        Command::Resolution { t, h, allow_blow_up } => {
            let r = exec::resolution(exec, &graph(t)?, &graph(h)?, options(*allow_blow_up))?;
            Report::Resolution((&r).into())
        }
        Command::Coverings { t, h, max_density } => {
            let types = exec::covering_types(exec, &graph(t)?, &graph(h)?, *max_density)?;
            Report::Coverings(types.iter().map(CoveringOut::from).collect())
        }
        Command::Ex { n, t, h } => Report::Extremal((&exec::ex(exec, *n, &graph(t)?, &graph(h)?, guards)?).into()),
        Command::Exx { n, t, h, family, prefix, allow_blow_up } => {
            let t = graph(t)?;
            let mut fam = exx_family(exec, &t, h.as_deref(), *family, *allow_blow_up)?;
            if let Some(k) = prefix {
                if *k > fam.len() {
                    return Err(CommandError::Input(format!("--prefix {k} exceeds the family size {}", fam.len())));
                }
                fam.truncate(*k);
            }
            Report::Extremal((&exec::exx(exec, *n, &t, &fam, guards)?).into())
        }
        Command::PiSeq { n, t, h, allow_blow_up } => {
            let s = exec::pi_sequence(exec, *n, &graph(t)?, &graph(h)?, options(*allow_blow_up), guards)?;
            Report::PiSequence((&s).into())
        }
        Command::Psi { t, n, p } => Report::Psi(PsiOut::new(*n, *p, &psi_t(&graph(t)?, *n, *p)?)),
        Command::Janson { t, n, p, shortfall, shortfall_frac, host, check } => {
            let t = graph(t)?;
            let host = match host {
                Some(h) => graph(h)?,
                None => Graph::complete(*n),
            };
            let pool = enumerate_copies(&t, &host);
            let mu = turanlab_core::probability::janson_mu(&pool, *p);
            let shortfall = match (shortfall, shortfall_frac) {
                (Some(s), _) => *s,
                (None, Some(f)) => f * mu,
                (None, None) => return Err(CommandError::Input("one of --shortfall or --shortfall-frac is required".into())),
            };
            let report = exec::janson(exec, &pool, *p, shortfall)?;
            let tail = match check {
                true => Some(exec::janson_check(exec, &pool, host.vertex_count(), &report, *p, config.trials, config.seed)?),
                false => None,
            };
            Report::Janson(JansonOut::new(&report, tail.as_ref()))
        }
        Command::Scan { t, h, n, exponents } => {
            let rows = exec::phase_scan(exec, &graph(t)?, &graph(h)?, *n, exponents, config.trials, config.seed, guards)?;
            Report::Scan(rows.iter().map(ScanRowOut::from).collect())
        }
        Command::Concentration { t, n, p } => {
            let c = exec::concentration(exec, &graph(t)?, *n, *p, config.trials, config.seed)?;
            Report::Concentration(ConcentrationOut::new(*n, *p, &c))
        }
        Command::Core { t, graph: g, n, p, trial } => {
            let t = graph(t)?;
            let input = match (g, n, p) {
                (Some(g), _, _) => graph(g)?,
                (None, Some(n), Some(p)) => sample_gnp(*n, *p, config.seed, *trial)?.graph,
                _ => return Err(CommandError::Input("either --graph or both --n and --p are required".into())),
            };
            let core = extract_disjoint_core(&input, &t);
            Report::Core(CoreOut::new(&input, &core, count_copies(&t, &core)))
        }
    })
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `stdout` or `--out`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match run_cli(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn run_cli(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CommandError> {
    let config = build_config(&cli.global)?;
    let exec = Exec::new(config.threads, config.deterministic);
    let report = execute(&cli.command, &config, &exec)?;
    let text = report.render(config.output_format.unwrap_or(report.default_format()))?;
    match &cli.global.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}
