//! `purify` command line: `analyze`, `pair` and `search`.
//!
//! Every command builds one report object; `--json` prints it with
//! 17-significant-digit floats, otherwise [`render`] formats the same object.

pub mod render;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use purify_core::canonical::w_canonicalize;
use purify_core::io::{to_json_string, ClassificationReport, PurificationJson, SearchJson, StateSpec};
use purify_core::oracle::{search_best_protocol, SearchConfig};
use purify_core::protocol::{optimal_probability, purify_pair};
use purify_core::range::{analyze_range, classify_range};
use purify_core::{DensityMatrix2Q, Error, Tolerances};
use serde::{Deserialize, Serialize};

/// A search exceeding the analytic optimum by more than this is a failure.
pub const OPTIMUM_SLACK: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "purify", version, about = "Two-copy purification of two-qubit mixed states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a state's range and report n-copy purifiability.
    Analyze {
        /// State file (dense or w_param JSON).
        state: PathBuf,
        /// Validation and numerical-rank tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run the purification protocol on two states.
    Pair {
        /// First state file (A, B).
        state_a: PathBuf,
        /// Second state file (A′, B′).
        state_b: PathBuf,
        /// Validation and numerical-rank tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Search product filters numerically and compare with the analytic optimum.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// First state file (A, B).
    pub state_a: PathBuf,
    /// Second state file (A′, B′).
    pub state_b: PathBuf,
    /// JSON file with a full search configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// RNG seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent restarts [default: 64].
    #[arg(long)]
    pub restarts: Option<usize>,
    /// CMA-ES generations per restart [default: 2000].
    #[arg(long)]
    pub iters: Option<usize>,
    /// Allowed output impurity for a feasible protocol [default: 1e-4].
    #[arg(long)]
    pub purity_eps: Option<f64>,
    /// Allowed Schmidt-coefficient deviation for a feasible protocol [default: 1e-4].
    #[arg(long)]
    pub entanglement_eps: Option<f64>,
    /// Validation and numerical-rank tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    /// Purifiable, or the search found a feasible protocol.
    Success = 0,
    /// Well-formed input that is not purifiable.
    NotPurifiable = 1,
    InvalidInput = 2,
    /// An internal certificate failed.
    VerificationFailed = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Report printed by `--json`, with the input paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<R> {
    pub command: String,
    pub inputs: Vec<String>,
    pub report: R,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: String, source: Error },
    #[error("{0}")]
    Verification(Error),
}

impl CliError {
    fn status(&self) -> ExitStatus {
        match self {
            Self::Read { .. } | Self::Input { .. } => ExitStatus::InvalidInput,
            Self::Verification(_) => ExitStatus::VerificationFailed,
        }
    }
}

fn load_state(path: &Path, tols: &Tolerances) -> Result<DensityMatrix2Q, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: shown.clone(), source })?;
    StateSpec::from_json(&text)
        .and_then(|spec| spec.to_state(tols))
        .map_err(|source| CliError::Input { path: shown, source })
}

fn load_config(path: Option<&Path>) -> Result<SearchConfig, CliError> {
    let Some(path) = path else { return Ok(SearchConfig::default()) };
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: shown.clone(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Input { path: shown, source: Error::Parse(e.to_string()) })
}

fn tolerances(tol: f64) -> Result<Tolerances, CliError> {
    if tol > 0.0 && tol < 1.0 {
        Ok(Tolerances::with_tol(tol))
    } else {
        Err(CliError::Input { path: "--tol".into(), source: Error::InvalidConfig(format!("{tol} outside (0, 1)")) })
    }
}

fn paths(ps: &[&PathBuf]) -> Vec<String> {
    ps.iter().map(|p| p.display().to_string()).collect()
}

/// What a command produced: text for stdout and the exit status.
struct Outcome {
    text: String,
    status: ExitStatus,
}

fn emit<R: Serialize>(
    command: &str,
    inputs: Vec<String>,
    report: R,
    json: bool,
    human: String,
) -> Result<String, CliError> {
    if !json {
        return Ok(human);
    }
    let env = Envelope { command: command.into(), inputs, report };
    to_json_string(&env).map_err(CliError::Verification)
}

fn analyze(state: &PathBuf, tol: f64, json: bool) -> Result<Outcome, CliError> {
    let tols = tolerances(tol)?;
    let rho = load_state(state, &tols)?;
    let analysis = analyze_range(&rho, &tols).map_err(CliError::Verification)?;
    let report = ClassificationReport::new(&rho, &analysis, &[1, 2], &tols).map_err(CliError::Verification)?;
    let purifiable = report.n_copies.iter().any(|c| c.n == 2 && c.purifiable);
    let human = render::classification(&report);
    Ok(Outcome {
        text: emit("analyze", paths(&[state]), report, json, human)?,
        status: if purifiable { ExitStatus::Success } else { ExitStatus::NotPurifiable },
    })
}

fn pair(a: &PathBuf, b: &PathBuf, tol: f64, json: bool) -> Result<Outcome, CliError> {
    let tols = tolerances(tol)?;
    let (rho, sigma) = (load_state(a, &tols)?, load_state(b, &tols)?);
    let report = purify_pair(&rho, &sigma, &tols).map_err(CliError::Verification)?;
    let report = PurificationJson::new(&report, &tols);
    let status = if report.verdict == "purifiable" { ExitStatus::Success } else { ExitStatus::NotPurifiable };
    let human = render::purification(&report);
    Ok(Outcome { text: emit("pair", paths(&[a, b]), report, json, human)?, status })
}

/// Analytic optimum when both inputs are W class.
fn analytic(rho: &DensityMatrix2Q, sigma: &DensityMatrix2Q, tols: &Tolerances) -> Result<Option<f64>, CliError> {
    let w = |s| classify_range(s, tols).map(|c| c.is_w_class()).map_err(CliError::Verification);
    if !(w(rho)? && w(sigma)?) {
        return Ok(None);
    }
    let fa = w_canonicalize(rho, tols).map_err(CliError::Verification)?;
    let fb = w_canonicalize(sigma, tols).map_err(CliError::Verification)?;
    Ok(Some(optimal_probability(&fa, &fb)))
}

fn search(args: &SearchArgs) -> Result<Outcome, CliError> {
    let tols = tolerances(args.tol)?;
    let mut cfg = load_config(args.config.as_deref())?;
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.restarts = args.restarts.unwrap_or(cfg.restarts);
    cfg.iterations_per_restart = args.iters.unwrap_or(cfg.iterations_per_restart);
    cfg.purity_eps = args.purity_eps.unwrap_or(cfg.purity_eps);
    cfg.entanglement_eps = args.entanglement_eps.unwrap_or(cfg.entanglement_eps);
    cfg.validate().map_err(|source| CliError::Input { path: "search configuration".into(), source })?;
    let (a, b) = (&args.state_a, &args.state_b);
    let (rho, sigma) = (load_state(a, &tols)?, load_state(b, &tols)?);
    let optimum = analytic(&rho, &sigma, &tols)?;
    let result = search_best_protocol(&rho, &sigma, &cfg).map_err(CliError::Verification)?;
    let report = SearchJson::new(&cfg, &result, optimum);
    let status = match report.gap {
        Some(gap) if report.feasible && gap > OPTIMUM_SLACK => ExitStatus::VerificationFailed,
        _ if report.feasible => ExitStatus::Success,
        _ => ExitStatus::NotPurifiable,
    };
    let human = render::search(&report);
    Ok(Outcome { text: emit("search", paths(&[a, b]), report, args.json, human)?, status })
}

/// Parses `args` (including the program name), runs the command and writes
/// its report to `out` and diagnostics to `err`.
pub fn run<I, S>(args: I, out: &mut impl Write, err: &mut impl Write) -> ExitStatus
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let benign = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if benign { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if benign { ExitStatus::Success } else { ExitStatus::InvalidInput };
        }
    };
    let outcome = match &cli.command {
        Command::Analyze { state, tol, json } => analyze(state, *tol, *json),
        Command::Pair { state_a, state_b, tol, json } => pair(state_a, state_b, *tol, *json),
        Command::Search(args) => search(args),
    };
    match outcome {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            o.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.status()
        }
    }
}
