//! The subcommands. Every command builds its artifacts in memory first and
//! only then hands them to [`crate::output`], so a failure leaves no files.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use serde_json::{json, Value};

use retvol::estimators::{PersistenceSide, Side};
use retvol::generators::LONG_MEMORY_METHOD;
use retvol::io::{self, DecoupleSummary};
use retvol::noise::GENERATOR_ID;
use retvol::series::DEFAULT_PROFILE_FLOOR;
use retvol::{
    calibrate_c, fit_exponential_decay, fit_power_law, generate_sigma, intraday_profile,
    kernel_exponential, kernel_from_leverage, leverage_curve, leverage_curve_conditional,
    load_prices, log_returns, normalize, persistence_curve, remove_intraday, simulate_feedback,
    smooth_lag_window, tail_histogram, volatility_autocorrelation, GeneratorSpec, LagCurve, Origin,
    ReturnSeries,
};

use crate::config::{InputKind, RunConfig};
use crate::output::Artifacts;
use crate::CliError;

/// Seed of the feedback noise in `simulate`, kept apart from the stream that
/// drives the reference volatility generator.
pub fn feedback_seed(seed: u64) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15
}

pub fn run(cfg: &RunConfig) -> Result<Artifacts, CliError> {
    let mut arts = Artifacts::default();
    let extra = match cfg.command {
        "analyze" => analyze(cfg, &mut arts)?,
        "decouple" => decouple(cfg, &mut arts)?,
        "simulate" => simulate(cfg, &mut arts)?,
        "threshold" => threshold(cfg, &mut arts)?,
        "generate-sigma" => generate(cfg, &mut arts)?,
        other => return Err(CliError::Input(format!("unknown command {other}"))),
    };
    let mut outputs = arts.names();
    outputs.push("run_metadata.json".into());
    let meta = json!({
        "tool": "retvol",
        "version": env!("CARGO_PKG_VERSION"),
        "noise_generator": GENERATOR_ID,
        "feedback_seed": "seed XOR 0x9E3779B97F4A7C15",
        "long_memory_method": LONG_MEMORY_METHOD,
        "config": cfg.to_json(),
        "summary": extra,
        "outputs": outputs,
    });
    arts.json("run_metadata.json", &meta)?;
    Ok(arts)
}

fn input_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn read_values(path: &Path) -> Result<Vec<f64>, CliError> {
    let file = File::open(path).map_err(|e| input_error(path, e))?;
    io::read_returns(BufReader::new(file)).map_err(|e| input_error(path, e))
}

/// Loads `--input` as a normalized return series.
fn load_input(cfg: &RunConfig) -> Result<ReturnSeries, CliError> {
    let path = cfg
        .input
        .as_deref()
        .ok_or_else(|| CliError::Input("--input is required".into()))?;
    let raw = match cfg.input_kind {
        InputKind::Prices => {
            let file = File::open(path).map_err(|e| input_error(path, e))?;
            let prices = load_prices(BufReader::new(file)).map_err(|e| input_error(path, e))?;
            log_returns(&prices, 1).map_err(|e| input_error(path, e))?
        }
        InputKind::Returns => read_values(path)?,
    };
    normalize(&raw).map_err(|e| input_error(path, e))
}

fn fit_json(fit: retvol::Result<Value>) -> Value {
    fit.unwrap_or_else(|e| json!({ "error": e.to_string() }))
}

fn truncate(curve: &LagCurve, max_lag: usize) -> Result<LagCurve, CliError> {
    Ok(LagCurve::new(
        curve.kind,
        curve.values[..max_lag].to_vec(),
        curve.counts[..max_lag].to_vec(),
        curve.stderr[..max_lag].to_vec(),
    )?)
}

/// Odd number of lags covered by the smoothing window.
pub fn smoothing_window(cfg: &RunConfig) -> Option<usize> {
    cfg.smooth_days.map(|days| {
        let w = days * cfg.steps_per_day.unwrap_or(1);
        2 * (w / 2) + 1
    })
}

fn lag_limit(wanted: f64, max_lag: usize, cap: usize) -> usize {
    (wanted.ceil() as usize).max(max_lag).min(cap)
}

/// Writes leverage, autocorrelation, persistence and tail artifacts for `r`
/// under `dir` and returns the fitted exponents.
fn analysis_suite(
    r: &ReturnSeries,
    cfg: &RunConfig,
    dir: &str,
    arts: &mut Artifacts,
) -> Result<Value, CliError> {
    let x = r.values();
    let n = x.len();
    let path = |name: &str| {
        if dir.is_empty() {
            name.to_string()
        } else {
            format!("{dir}/{name}")
        }
    };

    let leverage = leverage_curve(x, cfg.max_lag)?;
    arts.lag_curve(&path("leverage.csv"), &leverage)?;
    if let Some(window) = smoothing_window(cfg) {
        // extend the raw curve so no smoothed lag up to max_lag is one-sided
        let wide = leverage_curve(x, (cfg.max_lag + window / 2).max(window))?;
        let smoothed = truncate(&smooth_lag_window(&wide, window)?, cfg.max_lag)?;
        arts.lag_curve(&path("leverage_smoothed.csv"), &smoothed)?;
    }

    let vol = match cfg.steps_per_day {
        Some(spd) => {
            let profile = intraday_profile(x, spd, DEFAULT_PROFILE_FLOOR)?;
            remove_intraday(r, &profile, spd)?
        }
        None => r.clone(),
    };
    let autocorr = volatility_autocorrelation(
        vol.values(),
        lag_limit(cfg.beta_range.1, cfg.max_lag, n.saturating_sub(2).max(1)),
    )?;
    arts.lag_curve(&path("autocorr.csv"), &autocorr)?;
    let persistence = persistence_curve(
        vol.values(),
        lag_limit(
            cfg.persistence_range.1,
            cfg.max_lag,
            n.saturating_sub(1).max(1),
        ),
        PersistenceSide::Below,
    )?;
    arts.lag_curve(&path("persistence.csv"), &persistence)?;

    let pos = tail_histogram(x, Side::Positive, cfg.bins_per_decade)?;
    let neg = tail_histogram(x, Side::Negative, cfg.bins_per_decade)?;
    arts.tail(&path("tails_pos.csv"), &pos)?;
    arts.tail(&path("tails_neg.csv"), &neg)?;

    let sign = if leverage.at(1) < 0.0 { -1.0 } else { 1.0 };
    let fits = json!({
        "n_returns": n,
        "beta": fit_json(fit_power_law(&autocorr, cfg.beta_range).map(|f| json!(f))),
        "theta": fit_json(fit_power_law(&persistence, cfg.persistence_range).map(|f| json!(f))),
        "tail_pos_density": fit_json(fit_power_law(&pos, cfg.tail_range).map(|f| json!(f))),
        "tail_neg_density": fit_json(fit_power_law(&neg, cfg.tail_range).map(|f| json!(f))),
        "leverage_decay": fit_json(fit_exponential_decay(
            &leverage,
            (1.0, cfg.max_lag as f64),
            sign,
        )
        .map(|f| json!(f))),
        "leverage_lag1": leverage.at(1),
    });
    arts.json(&path("fits.json"), &fits)?;
    Ok(fits)
}

fn analyze(cfg: &RunConfig, arts: &mut Artifacts) -> Result<Value, CliError> {
    let r = load_input(cfg)?;
    analysis_suite(&r, cfg, "", arts)
}

fn decouple(cfg: &RunConfig, arts: &mut Artifacts) -> Result<Value, CliError> {
    let r = load_input(cfg)?;
    let input_fits = analysis_suite(&r, cfg, "", arts)?;

    let leverage = leverage_curve(r.values(), cfg.tmax)?;
    let calibration = calibrate_c(&r, &leverage, &cfg.c_grid)?;
    let kernel = kernel_from_leverage(&leverage, calibration.c)?;
    let report = &calibration.report;
    let r0 = if cfg.burn_in {
        let kept = report.series.values().get(cfg.tmax..).unwrap_or(&[]);
        normalize(kept)?.with_origin(Origin::Decoupled)
    } else {
        report.series.clone()
    };

    arts.kernel("kernel.csv", &kernel)?;
    let mut grid = String::from("C,score\n");
    for (c, s) in &calibration.scores {
        grid.push_str(&format!("{},{}\n", io::fmt_f64(*c), io::fmt_f64(*s)));
    }
    arts.text("calibration.csv", grid);
    let summary = DecoupleSummary::from(report);
    arts.json("decouple_report.json", &json!(summary))?;
    arts.returns("decoupled_returns.csv", r0.values())?;
    let decoupled_fits = analysis_suite(&r0, cfg, "decoupled", arts)?;
    Ok(json!({
        "report": summary,
        "input": input_fits,
        "decoupled": decoupled_fits,
    }))
}

fn sigma_reference(cfg: &RunConfig, length: usize) -> Result<Vec<f64>, CliError> {
    match &cfg.sigma_input {
        Some(path) => read_values(path),
        None => {
            let spec = GeneratorSpec {
                kind: cfg.generator,
                length,
                seed: cfg.seed,
            };
            spec.validate()
                .map_err(|e| CliError::Input(e.to_string()))?;
            Ok(generate_sigma(&spec)?)
        }
    }
}

fn simulate(cfg: &RunConfig, arts: &mut Artifacts) -> Result<Value, CliError> {
    let kernel =
        kernel_exponential(cfg.m, cfg.tau, cfg.tmax).map_err(|e| CliError::Input(e.to_string()))?;
    let extra = if cfg.burn_in { cfg.tmax } else { 0 };
    let sigma = sigma_reference(cfg, cfg.length + extra)?;
    let r = simulate_feedback(&kernel, &sigma, feedback_seed(cfg.seed), cfg.burn_in)?;
    arts.kernel("kernel.csv", &kernel)?;
    arts.returns("simulated_returns.csv", r.values())?;
    analysis_suite(&r, cfg, "", arts)
}

/// File name of the curve restricted to `|r| < threshold`.
pub fn threshold_file(threshold: f64) -> String {
    if threshold.is_finite() {
        format!("leverage_lt_{threshold}.csv")
    } else {
        "leverage_all.csv".into()
    }
}

fn threshold(cfg: &RunConfig, arts: &mut Artifacts) -> Result<Value, CliError> {
    let r = load_input(cfg)?;
    let mut thresholds = cfg.thresholds.clone();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let mut summary = Vec::new();
    for th in thresholds {
        let curve = leverage_curve_conditional(r.values(), cfg.max_lag, th, cfg.z_norm)?;
        let name = threshold_file(th);
        arts.lag_curve(&name, &curve)?;
        let excluded = r.values().iter().filter(|v| v.abs() >= th).count();
        summary.push(json!({ "file": name, "excluded_returns": excluded }));
    }
    Ok(Value::Array(summary))
}

fn generate(cfg: &RunConfig, arts: &mut Artifacts) -> Result<Value, CliError> {
    let sigma = sigma_reference(cfg, cfg.length)?;
    arts.returns("sigma.csv", &sigma)?;
    Ok(json!({ "length": sigma.len() }))
}
