//! Return-volatility correlation toolkit.
//!
//! Measures the leverage (and anti-leverage) effect of a return series
//! together with the other stylized facts it is usually compared against:
//! volatility autocorrelation, persistence of volatility and the tails of the
//! return distribution. The retarded volatility model is implemented in both
//! directions, as a feedback generator that plants a return-volatility
//! correlation into a synthetic series, and as a decoupling transform that
//! removes it from an observed one.
//!
//! The crate is organised by stage:
//!
//! - [`series`]: price ingestion, log returns, normalization, intraday pattern.
//! - [`estimators`]: lag curves, tail histograms and power-law fits.
//! - [`retarded`]: kernels, feedback simulation, decoupling and calibration.
//! - [`generators`]: reference volatility sequences.
//! - [`io`]: the CSV/JSON artifact formats.

pub mod error;
pub mod estimators;
pub mod generators;
pub mod io;
pub mod noise;
pub mod retarded;
pub mod series;

mod numeric;

pub use error::{Error, Result};
pub use estimators::{
    fit_exponential_decay, fit_power_law, leverage_curve, leverage_curve_conditional,
    persistence_curve, smooth_lag_window, tail_histogram, volatility_autocorrelation, CurveKind,
    DecayFit, LagCurve, PersistenceSide, Side, TailFit, TailHistogram, ZNormalization,
};
pub use generators::{generate_sigma, EzMarket, GeneratorKind, GeneratorSpec};
pub use retarded::{
    audit_perturbation, calibrate_c, decouple, kernel_exponential, kernel_from_leverage,
    simulate_feedback, Calibration, DecoupleReport, Kernel, KernelForm, PerturbationAudit,
};
pub use series::{
    intraday_profile, load_prices, log_returns, normalize, remove_intraday, Interval,
    IntradayProfile, Origin, PriceSeries, ReturnSeries,
};
