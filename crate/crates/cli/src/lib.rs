//! Command-line driver: configurable chirp scenes, multiresolution matched
//! filtering with CSV output, self-verification and operation-count reports.

pub mod bench;
pub mod config;
pub mod csv;
pub mod error;
pub mod verify;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use liftcorr_core::sidwt::{complex_decompose, CorrelationResult};
use liftcorr_core::Family;

use crate::config::RunConfig;
pub use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "liftcorr", version, about = "Multiresolution matched filtering of LFM chirp backscatter")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Run configuration (`key = value` lines); defaults to the five-target scene.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Filterbank: daub4, legall53 or cdf97.
    #[arg(long, global = true, value_parser = parse_family)]
    pub family: Option<Family>,

    /// Number of decomposition levels J.
    #[arg(long, global = true)]
    pub scales: Option<usize>,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for random targets and verification inputs.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Report correlations of the real part without the analytic factor 2.
    #[arg(long, global = true)]
    pub no_factor2: bool,

    /// Cross-check every scale against explicitly materialized circulant matrices.
    #[arg(long, global = true)]
    pub debug_dense: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the transmitted chirp as `n,re,im` rows.
    Chirp,
    /// Write the padded received backscatter as `n,re,im` rows.
    Scene,
    /// Correlate the chirp with the backscatter at every scale.
    Correlate,
    /// Run the self-check suites.
    Verify,
    /// Report operation counts against the load formulas.
    Bench,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: liftcorr_core::Error| e.to_string())
}

impl Cli {
    /// The configuration file (or default) with command-line overrides applied.
    pub fn run_config(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(f) = self.family {
            config.family = f;
        }
        if let Some(j) = self.scales {
            config.scales = j;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if self.no_factor2 {
            config.analytic_factor_2 = false;
        }
        Ok(config)
    }
}

/// Runs a parsed command line. Summaries go to `console`; data goes to
/// `--out`, or to `console` when no file is given.
pub fn run(cli: &Cli, console: &mut dyn Write) -> Result<()> {
    let config = cli.run_config()?;
    match cli.command {
        Command::Chirp => {
            let scenario = config.scenario()?;
            with_output(cli, console, |w| csv::write_samples(w, &scenario.chirp))
        }
        Command::Scene => {
            let scenario = config.scenario()?;
            with_output(cli, console, |w| csv::write_samples(w, &scenario.received))
        }
        Command::Correlate => {
            let results = correlate(&config, cli.debug_dense)?;
            with_output(cli, console, |w| csv::write_correlations(w, &results, config.db_reference))?;
            // keep standard output parseable when it carries the CSV
            if cli.out.is_some() {
                write_summary(console, &config, &results)?;
            } else {
                write_summary(&mut std::io::stderr(), &config, &results)?;
            }
            Ok(())
        }
        Command::Verify => {
            let families = match cli.family {
                Some(f) => vec![f],
                None => Family::ALL.to_vec(),
            };
            let checks: Vec<verify::Check> =
                families.iter().flat_map(|&f| verify::verify_family(f, config.seed)).collect();
            with_output(cli, console, |w| {
                for c in &checks {
                    writeln!(w, "{c}")?;
                }
                Ok(())
            })?;
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(format!("{} check(s) failed: {}", failed.len(), failed.join(", "))))
            }
        }
        Command::Bench => {
            let report = bench::run(&config)?;
            with_output(cli, console, |w| Ok(write!(w, "{report}")?))
        }
    }
}

/// Correlations at scales `0 .. J−1` for the configured scene.
pub fn correlate(config: &RunConfig, debug_dense: bool) -> Result<Vec<CorrelationResult>> {
    let scenario = config.scenario()?;
    let options = config.options();
    let dec = complex_decompose(&scenario.template, &scenario.received, config.family, config.scales)?;
    let results = (0..config.scales).map(|j| dec.scale(j, options)).collect::<liftcorr_core::Result<Vec<_>>>()?;
    if debug_dense {
        for r in &results {
            let dense = dec.scale_dense(r.scale, options)?;
            let err = r.values.iter().zip(&dense.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            if err > 1e-9 * r.peak_magnitude.max(f64::MIN_POSITIVE) {
                return Err(CliError::Internal(format!(
                    "scale {}: lifted and dense correlations differ by {err:.3e}",
                    r.scale
                )));
            }
        }
    }
    Ok(results)
}

fn write_summary(w: &mut dyn Write, config: &RunConfig, results: &[CorrelationResult]) -> Result<()> {
    writeln!(
        w,
        "family {}  J = {}  L = {}  targets {}",
        config.family,
        config.scales,
        config.padded_len(),
        config.all_targets().len()
    )?;
    for r in results {
        writeln!(
            w,
            "scale {}: peak lag {} (delay {}) peak {:.2} dB",
            r.scale,
            r.peak_lag,
            -r.peak_lag,
            csv::magnitude_db(num_complex::Complex64::new(r.peak_magnitude, 0.0), config.db_reference)
        )?;
    }
    Ok(())
}

fn with_output(cli: &Cli, console: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &cli.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            body(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => body(console),
    }
}
