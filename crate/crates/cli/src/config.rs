//! Run configuration: plain `key = value` lines.
//!
//! ```text
//! # five adjacent point targets
//! family = cdf97
//! scales = 3
//! bandwidth_hz = 8e6
//! time_bandwidth = 160
//! window = 244
//! targets = 59:0.8:0; 61:0.8598:0.266; 62:0.8253:0.5646
//! analytic_factor_2 = true
//! db_reference = 1.0
//! seed = 1
//! random_targets = 0
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys are errors.

use std::str::FromStr;

use liftcorr_core::sidwt::ComplexCorrOptions;
use liftcorr_core::signal::{gen_backscatter, gen_chirp, ChirpParams, ComplexSeq, Target, TargetScene};
use liftcorr_core::Family;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub family: Family,
    /// Number of decomposition levels `J`.
    pub scales: usize,
    /// Chirp bandwidth `B` in Hz, also the sampling rate.
    pub bandwidth_hz: f64,
    /// Time-bandwidth product `B·T_p`.
    pub time_bandwidth: f64,
    /// Receive window `L_w` in samples, before padding.
    pub window: usize,
    pub targets: Vec<Target>,
    /// Extra targets drawn from `seed`.
    pub random_targets: usize,
    pub analytic_factor_2: bool,
    /// Magnitude that maps to 0 dB.
    pub db_reference: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    /// Five adjacent point targets with `BT_p = 160` in a 244-sample window.
    fn default() -> Self {
        let target = |delay, re, im| Target { delay, reflectivity: Complex64::new(re, im) };
        Self {
            family: Family::Cdf97,
            scales: 3,
            bandwidth_hz: 8e6,
            time_bandwidth: 160.0,
            window: 244,
            targets: vec![
                target(59, 0.8, 0.0),
                target(61, 0.8598, 0.266),
                target(62, 0.8253, 0.5646),
                target(64, 0.5594, 0.705),
                target(66, 0.2899, 0.7456),
            ],
            random_targets: 0,
            analytic_factor_2: true,
            db_reference: 1.0,
            seed: 1,
        }
    }
}

/// Template and received signals, both zero-padded to the transform length.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub chirp: ComplexSeq,
    pub template: ComplexSeq,
    pub received: ComplexSeq,
    pub targets: Vec<Target>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = Self::default();
        let mut seen_targets = false;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| CliError::Usage(format!("config line {}: {msg}", i + 1));
            let (key, value) =
                line.split_once('=').ok_or_else(|| bad(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "family" => config.family = value.parse().map_err(|e| bad(format!("{e}")))?,
                "scales" => config.scales = number(key, value).map_err(bad)?,
                "bandwidth_hz" => config.bandwidth_hz = number(key, value).map_err(bad)?,
                "time_bandwidth" => config.time_bandwidth = number(key, value).map_err(bad)?,
                "window" => config.window = number(key, value).map_err(bad)?,
                "targets" => {
                    config.targets = parse_targets(value).map_err(bad)?;
                    seen_targets = true;
                }
                "random_targets" => config.random_targets = number(key, value).map_err(bad)?,
                "analytic_factor_2" => config.analytic_factor_2 = number(key, value).map_err(bad)?,
                "db_reference" => config.db_reference = number(key, value).map_err(bad)?,
                "seed" => config.seed = number(key, value).map_err(bad)?,
                _ => return Err(bad(format!("unknown key `{key}`"))),
            }
        }
        // a config file that draws random targets starts from an empty list
        if !seen_targets && config.random_targets > 0 {
            config.targets.clear();
        }
        Ok(config)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Transform length: the next power of two at or above the window.
    pub fn padded_len(&self) -> usize {
        self.window.next_power_of_two()
    }

    pub fn chirp_params(&self) -> ChirpParams {
        ChirpParams::from_time_bandwidth(self.bandwidth_hz, self.time_bandwidth)
    }

    pub fn options(&self) -> ComplexCorrOptions {
        ComplexCorrOptions { analytic_factor_2: self.analytic_factor_2 }
    }

    /// Explicit targets followed by the seeded random ones.
    pub fn all_targets(&self) -> Vec<Target> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut targets = self.targets.clone();
        targets.extend((0..self.random_targets).map(|_| Target {
            delay: rng.gen_range(0..self.window),
            reflectivity: Complex64::from_polar(
                rng.gen_range(0.25..1.0),
                rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            ),
        }));
        targets
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if self.scales < 1 {
            return usage("scales must be at least 1".into());
        }
        if self.window < 2 {
            return usage(format!("window of {} samples is too short", self.window));
        }
        let len = self.padded_len();
        if len >> self.scales == 0 {
            return usage(format!(
                "{} scales need at least {} samples, the padded window has {len}",
                self.scales,
                1usize << self.scales
            ));
        }
        if !(self.bandwidth_hz > 0.0 && self.bandwidth_hz.is_finite()) {
            return usage(format!("bandwidth_hz must be positive, got {}", self.bandwidth_hz));
        }
        if !(self.time_bandwidth >= 2.0 && self.time_bandwidth.is_finite()) {
            return usage(format!("time_bandwidth must be at least 2, got {}", self.time_bandwidth));
        }
        let samples = self.chirp_params().sample_count();
        if samples > self.window {
            return usage(format!("chirp of {samples} samples does not fit the window of {} samples", self.window));
        }
        if !(self.db_reference > 0.0 && self.db_reference.is_finite()) {
            return usage(format!("db_reference must be positive, got {}", self.db_reference));
        }
        TargetScene { targets: self.all_targets(), window: self.window }
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Validates the configuration and builds the chirp and the backscatter.
    pub fn scenario(&self) -> Result<Scenario> {
        self.validate()?;
        let chirp = gen_chirp(&self.chirp_params()).map_err(|e| CliError::Usage(e.to_string()))?;
        let targets = self.all_targets();
        let received = gen_backscatter(&chirp, &TargetScene { targets: targets.clone(), window: self.window })
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let len = self.padded_len();
        let pad = |s: &ComplexSeq| {
            let mut samples = s.samples.clone();
            samples.resize(len, Complex64::new(0.0, 0.0));
            ComplexSeq::new(samples)
        };
        Ok(Scenario { template: pad(&chirp), received: pad(&received), chirp, targets })
    }
}

fn number<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value.parse().map_err(|_| format!("invalid value `{value}` for `{key}`"))
}

/// Parses `d1:re1:im1; d2:re2:im2; ...`. An empty list is accepted here and
/// rejected by validation.
pub fn parse_targets(text: &str) -> std::result::Result<Vec<Target>, String> {
    text.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let fields: Vec<&str> = t.split(':').map(str::trim).collect();
            let [d, re, im] = fields[..] else {
                return Err(format!("target `{t}` is not `delay:re:im`"));
            };
            Ok(Target {
                delay: number("target delay", d)?,
                reflectivity: Complex64::new(number("target re", re)?, number("target im", im)?),
            })
        })
        .collect()
}
