//! Reference volatility sequences `sigma(t')` for the feedback model.
//!
//! Three sources are provided: a constant unit volatility, magnitudes of the
//! Eguiluz-Zimmermann herding model (fat tails without volatility memory) and
//! a log-normal long-memory process (fat tails and power-law volatility
//! correlation). All outputs are strictly positive and rescaled to unit mean.

mod ez;
mod long_memory;

use serde::{Deserialize, Serialize};

pub use ez::EzMarket;
pub use long_memory::fractional_gaussian_noise;

use crate::error::{Error, Result};
use crate::noise::Noise;
use crate::numeric;

/// Default number of agents in the herding model.
pub const DEFAULT_EZ_AGENTS: usize = 10_000;
/// Default probability that a step is a trade rather than a merge.
pub const DEFAULT_EZ_ACTIVITY: f64 = 0.3;

/// Method used to synthesize long-memory Gaussian noise.
pub const LONG_MEMORY_METHOD: &str =
    "fractional Gaussian noise by circulant embedding (Davies-Harte)";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GeneratorKind {
    GaussianUnit,
    EzModel { n_agents: usize, a: f64 },
    LongMemory { hurst: f64, vol_of_logvol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub length: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::BadParameters(
                "generator length must be positive".into(),
            ));
        }
        match self.kind {
            GeneratorKind::GaussianUnit => Ok(()),
            GeneratorKind::EzModel { n_agents, a } => {
                if n_agents == 0 || !(a > 0.0 && a < 1.0) {
                    Err(Error::BadParameters(format!(
                        "EZ model needs n_agents > 0 and 0 < a < 1 (n_agents = {n_agents}, a = {a})"
                    )))
                } else {
                    Ok(())
                }
            }
            GeneratorKind::LongMemory {
                hurst,
                vol_of_logvol,
            } => {
                if !(hurst > 0.5 && hurst < 1.0)
                    || !(vol_of_logvol > 0.0)
                    || !vol_of_logvol.is_finite()
                {
                    Err(Error::BadParameters(format!(
                        "long-memory generator needs 0.5 < hurst < 1 and vol_of_logvol > 0 \
                         (hurst = {hurst}, vol_of_logvol = {vol_of_logvol})"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Produces `spec.length` reference volatilities.
pub fn generate_sigma(spec: &GeneratorSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut noise = Noise::new(spec.seed);
    let raw = match spec.kind {
        GeneratorKind::GaussianUnit => return Ok(vec![1.0; spec.length]),
        GeneratorKind::EzModel { n_agents, a } => {
            let mut market = EzMarket::new(n_agents);
            let mut sizes = Vec::with_capacity(spec.length);
            while sizes.len() < spec.length {
                let emitted = market.step(a, &mut noise);
                if emitted != 0.0 {
                    sizes.push(emitted.abs());
                }
            }
            sizes
        }
        GeneratorKind::LongMemory {
            hurst,
            vol_of_logvol,
        } => fractional_gaussian_noise(spec.length, hurst, &mut noise)?
            .into_iter()
            .map(|g| (vol_of_logvol * g).exp())
            .collect(),
    };
    let mean = numeric::mean(&raw);
    Ok(raw.into_iter().map(|s| s / mean).collect())
}
