//! Flag parsing and the effective run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use retvol::estimators::{
    DEFAULT_BETA_FIT_RANGE, DEFAULT_BINS_PER_DECADE, DEFAULT_PERSISTENCE_FIT_RANGE,
    DEFAULT_TAIL_FIT_RANGE,
};
use retvol::generators::{DEFAULT_EZ_ACTIVITY, DEFAULT_EZ_AGENTS};
use retvol::retarded::default_c_grid;
use retvol::{GeneratorKind, ZNormalization};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "retvol",
    version,
    about = "Return-volatility correlation analysis and the retarded volatility model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Leverage, volatility autocorrelation, persistence and tail statistics of a series.
    Analyze(Flags),
    /// Calibrate a decoupling kernel, remove the leverage effect and re-analyze.
    Decouple(Flags),
    /// Generate returns with the feedback model.
    Simulate(Flags),
    /// Leverage curves restricted to |r(t')| below each threshold.
    Threshold(Flags),
    /// Write a reference volatility sequence.
    GenerateSigma(Flags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Decouple(_) => "decouple",
            Command::Simulate(_) => "simulate",
            Command::Threshold(_) => "threshold",
            Command::GenerateSigma(_) => "generate-sigma",
        }
    }

    pub fn flags(&self) -> &Flags {
        match self {
            Command::Analyze(f)
            | Command::Decouple(f)
            | Command::Simulate(f)
            | Command::Threshold(f)
            | Command::GenerateSigma(f) => f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    /// Header-less `timestamp,price` lines.
    Prices,
    /// `index,value` returns as written by this tool.
    Returns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorName {
    Gaussian,
    Ez,
    LongMemory,
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file given with `--config`, then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// key=value file; keys are long flag names without the dashes.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub input_kind: Option<InputKind>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub max_lag: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Marks the input as intraday data with this many steps per day.
    #[arg(long)]
    pub steps_per_day: Option<usize>,
    /// Also emit a leverage curve averaged over a window of this many days.
    #[arg(long)]
    pub smooth_days: Option<usize>,
    /// Comma-separated thresholds in units of sigma; `inf` for no restriction.
    #[arg(long)]
    pub thresholds: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub tmax: Option<usize>,
    /// Comma-separated list of C values.
    #[arg(long)]
    pub c_grid: Option<String>,
    /// Normalize conditional leverage curves with the full-series Z.
    #[arg(long)]
    pub global_z: bool,
    /// Drop the first tmax points of generated or decoupled returns
    /// (default for `simulate`).
    #[arg(long, conflicts_with = "no_burn_in")]
    pub burn_in: bool,
    /// Keep the cold-start transient of `simulate`.
    #[arg(long)]
    pub no_burn_in: bool,
    /// Reserved; overnight gaps are treated as ordinary steps.
    #[arg(long)]
    pub split_days: bool,
    #[arg(long, value_enum)]
    pub generator: Option<GeneratorName>,
    #[arg(long)]
    pub length: Option<usize>,
    #[arg(long)]
    pub n_agents: Option<usize>,
    #[arg(long)]
    pub ez_a: Option<f64>,
    #[arg(long)]
    pub hurst: Option<f64>,
    #[arg(long)]
    pub vol_of_logvol: Option<f64>,
    /// Reference volatility file (`index,value`) for `simulate`.
    #[arg(long)]
    pub sigma_input: Option<PathBuf>,
    #[arg(long)]
    pub bins_per_decade: Option<usize>,
    /// lo,hi lag range of the volatility autocorrelation exponent.
    #[arg(long)]
    pub beta_range: Option<String>,
    /// lo,hi lag range of the persistence exponent.
    #[arg(long)]
    pub persistence_range: Option<String>,
    /// lo,hi range of |r| for the tail exponent.
    #[arg(long)]
    pub tail_range: Option<String>,
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub input: Option<PathBuf>,
    pub input_kind: InputKind,
    pub out: PathBuf,
    pub max_lag: usize,
    pub seed: u64,
    pub steps_per_day: Option<usize>,
    pub smooth_days: Option<usize>,
    pub thresholds: Vec<f64>,
    pub m: f64,
    pub tau: f64,
    pub tmax: usize,
    pub c_grid: Vec<f64>,
    pub z_norm: ZNormalization,
    pub burn_in: bool,
    pub generator: GeneratorKind,
    pub length: usize,
    pub sigma_input: Option<PathBuf>,
    pub bins_per_decade: usize,
    pub beta_range: (f64, f64),
    pub persistence_range: (f64, f64),
    pub tail_range: (f64, f64),
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Input(format!("{}:{}: expected key=value", path.display(), i + 1))
        })?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

fn parse_list(key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "all" => Ok(f64::INFINITY),
            _ => s
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("--{key}: cannot parse {s:?}"))),
        })
        .collect()
}

fn parse_range(key: &str, text: &str) -> Result<(f64, f64), CliError> {
    match parse_list(key, text)?.as_slice() {
        [lo, hi] if lo < hi && *lo > 0.0 && hi.is_finite() => Ok((*lo, *hi)),
        _ => Err(CliError::Input(format!(
            "--{key}: expected lo,hi with 0 < lo < hi"
        ))),
    }
}

struct Resolver {
    file: BTreeMap<String, String>,
}

impl Resolver {
    fn get<T: FromStr>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Input(format!("config {key}: cannot parse {v:?}"))),
        }
    }

    fn text(&self, key: &str, flag: &Option<String>) -> Option<String> {
        flag.clone().or_else(|| self.file.get(key).cloned())
    }

    fn switch(&self, key: &str, flag: bool) -> Result<bool, CliError> {
        Ok(flag || self.get::<bool>(key, None)?.unwrap_or(false))
    }

    fn choice<T: ValueEnum>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => T::from_str(v, true)
                .map(Some)
                .map_err(|_| CliError::Input(format!("config {key}: unknown value {v:?}"))),
        }
    }
}

pub fn resolve(command: &Command) -> Result<RunConfig, CliError> {
    let flags = command.flags();
    let file = match &flags.config {
        Some(p) => read_config_file(p)?,
        None => BTreeMap::new(),
    };
    let r = Resolver { file };
    let name = command.name();

    let out = r
        .get::<PathBuf>("out", flags.out.clone())?
        .ok_or_else(|| CliError::Input("--out is required".into()))?;
    let input = r.get::<PathBuf>("input", flags.input.clone())?;
    if matches!(name, "analyze" | "decouple" | "threshold") && input.is_none() {
        return Err(CliError::Input(format!("{name} needs --input")));
    }
    let max_lag = r.get("max-lag", flags.max_lag)?.unwrap_or(64);
    let tmax = r.get("tmax", flags.tmax)?.unwrap_or(max_lag);
    if max_lag == 0 || tmax == 0 {
        return Err(CliError::Input(
            "--max-lag and --tmax must be positive".into(),
        ));
    }
    let c_grid = match r.text("c-grid", &flags.c_grid) {
        Some(t) => parse_list("c-grid", &t)?,
        None => default_c_grid(),
    };
    if c_grid.is_empty() || c_grid.iter().any(|c| !(*c > 0.0) || !c.is_finite()) {
        return Err(CliError::Input(
            "--c-grid must list at least one positive value".into(),
        ));
    }
    let thresholds = match r.text("thresholds", &flags.thresholds) {
        Some(t) => parse_list("thresholds", &t)?,
        None => vec![2.0, 8.0, f64::INFINITY],
    };
    if thresholds.is_empty() || thresholds.iter().any(|t| !(*t > 0.0)) {
        return Err(CliError::Input("--thresholds must be positive".into()));
    }
    let range = |key: &str, flag: &Option<String>, default| -> Result<(f64, f64), CliError> {
        r.text(key, flag)
            .map(|t| parse_range(key, &t))
            .unwrap_or(Ok(default))
    };
    let generator = match r
        .choice("generator", flags.generator)?
        .unwrap_or(GeneratorName::Gaussian)
    {
        GeneratorName::Gaussian => GeneratorKind::GaussianUnit,
        GeneratorName::Ez => GeneratorKind::EzModel {
            n_agents: r
                .get("n-agents", flags.n_agents)?
                .unwrap_or(DEFAULT_EZ_AGENTS),
            a: r.get("ez-a", flags.ez_a)?.unwrap_or(DEFAULT_EZ_ACTIVITY),
        },
        GeneratorName::LongMemory => GeneratorKind::LongMemory {
            hurst: r.get("hurst", flags.hurst)?.unwrap_or(0.85),
            vol_of_logvol: r.get("vol-of-logvol", flags.vol_of_logvol)?.unwrap_or(0.6),
        },
    };
    let steps_per_day = r.get("steps-per-day", flags.steps_per_day)?;
    if steps_per_day == Some(0) {
        return Err(CliError::Input("--steps-per-day must be positive".into()));
    }
    let smooth_days = r.get("smooth-days", flags.smooth_days)?;
    if smooth_days == Some(0) {
        return Err(CliError::Input("--smooth-days must be positive".into()));
    }
    if r.switch("split-days", flags.split_days)? {
        return Err(CliError::Input(
            "--split-days is reserved and not implemented".into(),
        ));
    }

    Ok(RunConfig {
        command: name,
        input,
        input_kind: r
            .choice("input-kind", flags.input_kind)?
            .unwrap_or(InputKind::Prices),
        out,
        max_lag,
        seed: r.get("seed", flags.seed)?.unwrap_or(0),
        steps_per_day,
        smooth_days,
        thresholds,
        m: r.get("m", flags.m)?.unwrap_or(0.1),
        tau: r.get("tau", flags.tau)?.unwrap_or(40.0),
        tmax,
        c_grid,
        z_norm: if r.switch("global-z", flags.global_z)? {
            ZNormalization::Global
        } else {
            ZNormalization::Restricted
        },
        burn_in: if flags.burn_in {
            true
        } else if flags.no_burn_in {
            false
        } else {
            r.get("burn-in", None)?.unwrap_or(name == "simulate")
        },
        generator,
        length: r.get("length", flags.length)?.unwrap_or(200_000),
        sigma_input: r.get::<PathBuf>("sigma-input", flags.sigma_input.clone())?,
        bins_per_decade: r
            .get("bins-per-decade", flags.bins_per_decade)?
            .unwrap_or(DEFAULT_BINS_PER_DECADE),
        beta_range: range("beta-range", &flags.beta_range, DEFAULT_BETA_FIT_RANGE)?,
        persistence_range: range(
            "persistence-range",
            &flags.persistence_range,
            DEFAULT_PERSISTENCE_FIT_RANGE,
        )?,
        tail_range: range("tail-range", &flags.tail_range, DEFAULT_TAIL_FIT_RANGE)?,
    })
}

fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

impl RunConfig {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "input": self.input.as_ref().map(|p| p.display().to_string()),
            "input_kind": format!("{:?}", self.input_kind).to_lowercase(),
            "out": self.out.display().to_string(),
            "max_lag": self.max_lag,
            "seed": self.seed,
            "steps_per_day": self.steps_per_day,
            "smooth_days": self.smooth_days,
            "thresholds": self.thresholds.iter().map(|t| num(*t)).collect::<Vec<_>>(),
            "m": self.m,
            "tau": self.tau,
            "tmax": self.tmax,
            "c_grid": self.c_grid,
            "z_normalization": self.z_norm,
            "burn_in": self.burn_in,
            "generator": self.generator,
            "length": self.length,
            "sigma_input": self.sigma_input.as_ref().map(|p| p.display().to_string()),
            "bins_per_decade": self.bins_per_decade,
            "beta_range": [self.beta_range.0, self.beta_range.1],
            "persistence_range": [self.persistence_range.0, self.persistence_range.1],
            "tail_range": [self.tail_range.0, self.tail_range.1],
        })
    }
}
