use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgamma_core::{EvalConfig, PropertyId, StatId};

#[derive(Debug, Parser)]
#[command(name = "qgamma", version, about = "q-gamma and q-polygamma evaluation, special points and inequality sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function at one point.
    Eval(EvalArgs),
    /// Print q0, p0, the upper end of J, and x_q for each --q.
    Constants(ConstantsArgs),
    /// Locate x_q, y_q or z_q.
    Roots(RootsArgs),
    /// Sweep the inequality catalog over a grid.
    Verify(VerifyArgs),
    /// Write the data behind one of the four figures as CSV.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct EvalOpts {
    /// Absolute tolerance on series tails.
    #[arg(long, default_value_t = 1e-14)]
    pub tol: f64,
    /// Cap on series terms per evaluation.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_terms: usize,
    /// Half-width of the band around q = 1 handled by the classical functions.
    #[arg(long, default_value_t = 1e-6)]
    pub near_one_delta: f64,
}

impl EvalOpts {
    pub fn config(&self) -> EvalConfig {
        EvalConfig { tol_abs: self.tol, max_terms: self.max_terms, near_one_delta: self.near_one_delta }
    }
}

/// What `eval --fn` computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FnSpec {
    Gamma,
    LogGamma,
    /// `psi` for 0, `psi1`..`psi3` for the derivatives.
    Psi(u8),
    Stat(StatId),
}

impl FromStr for FnSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "gamma" => FnSpec::Gamma,
            "loggamma" => FnSpec::LogGamma,
            "psi" => FnSpec::Psi(0),
            "psi1" => FnSpec::Psi(1),
            "psi2" => FnSpec::Psi(2),
            "psi3" => FnSpec::Psi(3),
            _ => match s.strip_prefix("stat:") {
                Some(name) => FnSpec::Stat(name.parse().map_err(|e: qgamma_core::Error| e.to_string())?),
                None => {
                    return Err(format!("unknown function `{s}`; expected gamma, loggamma, psi, psi1..psi3 or stat:<name>"))
                }
            },
        })
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// gamma | loggamma | psi | psi1 | psi2 | psi3 | stat:<name>
    #[arg(long = "fn", value_name = "FN")]
    pub function: FnSpec,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub q: f64,
    /// Power-mean exponent for stat:G_mean.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    /// Coefficient for stat:h_lin.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Order for stat:S_qk.
    #[arg(long)]
    pub k: Option<u32>,
    /// Exponent for stat:g_alpha.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub opts: EvalOpts,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    /// Also print x_q at these q (repeatable or comma separated).
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    #[command(flatten)]
    pub opts: EvalOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RootKind {
    Xq,
    Yq,
    Zq,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[arg(long, value_enum)]
    pub kind: RootKind,
    #[arg(long)]
    pub q: f64,
    #[command(flatten)]
    pub opts: EvalOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Properties to run, e.g. P13,P20. Default: all 24.
    #[arg(long, value_delimiter = ',')]
    pub props: Option<Vec<PropertyId>>,
    /// q values to sweep. Default: the standard 15-point set.
    #[arg(long, value_delimiter = ',')]
    pub q_set: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-3)]
    pub x_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub x_max: f64,
    #[arg(long, default_value_t = 400)]
    pub x_count: usize,
    /// Radius of the window dropped around poles and roots.
    #[arg(long, default_value_t = 1e-4)]
    pub exclusion: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for the sweep.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Leave wall time out of the report so output is byte-reproducible.
    #[arg(long)]
    pub no_timing: bool,
    #[command(flatten)]
    pub opts: EvalOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FigureId(pub u8);

impl FromStr for FigureId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let n = s.strip_prefix("fig").unwrap_or(s);
        match n.parse::<u8>() {
            Ok(k @ 1..=4) => Ok(FigureId(k)),
            _ => Err(format!("unknown figure `{s}`; expected 1..4")),
        }
    }
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// 1..4 (or fig1..fig4)
    #[arg(long)]
    pub fig: FigureId,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[command(flatten)]
    pub opts: EvalOpts,
}
