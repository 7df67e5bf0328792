//! Flat `key = value` experiment configuration.

use std::fmt;
use std::path::{Path, PathBuf};

use jointrank_core::cdma::ScenarioParams;

use crate::error::{HarnessError, Result};

/// Everything one experiment needs. Keys in the config file use the field
/// names below; scenario fields are flattened.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: ScenarioParams,
    /// Rank `D` of the reduced-rank schemes.
    pub rank: usize,
    /// Largest rank visited by the rank sweep.
    pub max_rank: usize,
    pub num_runs: usize,
    pub num_symbols: usize,
    pub training_symbols: usize,
    /// `f_d T` of the fading experiment.
    pub normalized_doppler: f64,
    pub base_seed: u64,
    pub fullrank_mu: f64,
    pub jio_mu: f64,
    pub jio_eta: f64,
    pub krylov_mu: f64,
    /// Symbols between rebuilds of the Krylov projection.
    pub krylov_refresh: usize,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioParams::default(),
            rank: 3,
            max_rank: 8,
            num_runs: 100,
            num_symbols: 1500,
            training_symbols: 500,
            normalized_doppler: 0.001,
            base_seed: 1,
            fullrank_mu: 0.03,
            jio_mu: 0.05,
            jio_eta: 0.05,
            krylov_mu: 0.05,
            krylov_refresh: 10,
            output: None,
        }
    }
}

const KEYS: &[&str] = &[
    "num_users",
    "spreading_gain",
    "channel_window",
    "isi_span",
    "snr_db",
    "power_sigma_db",
    "rank",
    "max_rank",
    "num_runs",
    "num_symbols",
    "training_symbols",
    "normalized_doppler",
    "base_seed",
    "fullrank_mu",
    "jio_mu",
    "jio_eta",
    "krylov_mu",
    "krylov_refresh",
    "output",
];

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses config text on top of the defaults and validates the result.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen: Vec<&str> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(HarnessError::Syntax {
                    line: n + 1,
                    text: raw.to_string(),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(HarnessError::UnknownKey {
                    line: n + 1,
                    key: key.to_string(),
                });
            };
            if seen.contains(&known) {
                return Err(HarnessError::DuplicateKey {
                    line: n + 1,
                    key: key.to_string(),
                });
            }
            seen.push(known);
            cfg.set(known, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets one field from its textual value without validating the whole
    /// config.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let s = &mut self.scenario;
        match key {
            "num_users" => s.num_users = parse_value(key, value)?,
            "spreading_gain" => s.spreading_gain = parse_value(key, value)?,
            "channel_window" => s.channel_window = parse_value(key, value)?,
            "isi_span" => s.isi_span = parse_value(key, value)?,
            "snr_db" => s.snr_db = parse_value(key, value)?,
            "power_sigma_db" => s.power_sigma_db = parse_value(key, value)?,
            "rank" => self.rank = parse_value(key, value)?,
            "max_rank" => self.max_rank = parse_value(key, value)?,
            "num_runs" => self.num_runs = parse_value(key, value)?,
            "num_symbols" => self.num_symbols = parse_value(key, value)?,
            "training_symbols" => self.training_symbols = parse_value(key, value)?,
            "normalized_doppler" => self.normalized_doppler = parse_value(key, value)?,
            "base_seed" => self.base_seed = parse_value(key, value)?,
            "fullrank_mu" => self.fullrank_mu = parse_value(key, value)?,
            "jio_mu" => self.jio_mu = parse_value(key, value)?,
            "jio_eta" => self.jio_eta = parse_value(key, value)?,
            "krylov_mu" => self.krylov_mu = parse_value(key, value)?,
            "krylov_refresh" => self.krylov_refresh = parse_value(key, value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            _ => {
                return Err(HarnessError::UnknownKey {
                    line: 0,
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    pub fn observation_dim(&self) -> usize {
        self.scenario.observation_dim()
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate().map_err(|e| invalid("scenario", e.to_string()))?;
        let m = self.observation_dim();
        if self.rank == 0 {
            return Err(invalid("rank", "must be at least 1".into()));
        }
        if self.rank > m {
            return Err(invalid(
                "rank",
                format!("rank D = {} exceeds the observation dimension M = {m}", self.rank),
            ));
        }
        if self.max_rank == 0 || self.max_rank > m {
            return Err(invalid(
                "max_rank",
                format!("must lie in 1..={m} (the observation dimension M), got {}", self.max_rank),
            ));
        }
        if self.num_runs == 0 {
            return Err(invalid("num_runs", "at least one run is required".into()));
        }
        if self.num_symbols == 0 {
            return Err(invalid("num_symbols", "at least one symbol is required".into()));
        }
        if self.training_symbols > self.num_symbols {
            return Err(invalid(
                "training_symbols",
                format!(
                    "{} training symbols exceed num_symbols = {}",
                    self.training_symbols, self.num_symbols
                ),
            ));
        }
        if !(self.normalized_doppler > 0.0 && self.normalized_doppler < 0.5) {
            return Err(invalid(
                "normalized_doppler",
                format!("must lie in (0, 0.5), got {}", self.normalized_doppler),
            ));
        }
        for (name, v) in [
            ("fullrank_mu", self.fullrank_mu),
            ("jio_mu", self.jio_mu),
            ("krylov_mu", self.krylov_mu),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be positive and finite, got {v}")));
            }
        }
        if !(self.jio_eta >= 0.0 && self.jio_eta.is_finite()) {
            return Err(invalid("jio_eta", format!("must be nonnegative and finite, got {}", self.jio_eta)));
        }
        if self.krylov_refresh == 0 {
            return Err(invalid("krylov_refresh", "must be at least 1".into()));
        }
        Ok(())
    }

    /// Run seeds `base_seed, base_seed + 1, …`.
    pub fn run_seed(&self, run: usize) -> u64 {
        self.base_seed.wrapping_add(run as u64)
    }
}

/// Canonical `key = value` rendering; parsing it gives back the same config.
impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.scenario;
        writeln!(f, "num_users = {}", s.num_users)?;
        writeln!(f, "spreading_gain = {}", s.spreading_gain)?;
        writeln!(f, "channel_window = {}", s.channel_window)?;
        writeln!(f, "isi_span = {}", s.isi_span)?;
        writeln!(f, "snr_db = {:?}", s.snr_db)?;
        writeln!(f, "power_sigma_db = {:?}", s.power_sigma_db)?;
        writeln!(f, "rank = {}", self.rank)?;
        writeln!(f, "max_rank = {}", self.max_rank)?;
        writeln!(f, "num_runs = {}", self.num_runs)?;
        writeln!(f, "num_symbols = {}", self.num_symbols)?;
        writeln!(f, "training_symbols = {}", self.training_symbols)?;
        writeln!(f, "normalized_doppler = {:?}", self.normalized_doppler)?;
        writeln!(f, "base_seed = {}", self.base_seed)?;
        writeln!(f, "fullrank_mu = {:?}", self.fullrank_mu)?;
        writeln!(f, "jio_mu = {:?}", self.jio_mu)?;
        writeln!(f, "jio_eta = {:?}", self.jio_eta)?;
        writeln!(f, "krylov_mu = {:?}", self.krylov_mu)?;
        writeln!(f, "krylov_refresh = {}", self.krylov_refresh)?;
        if let Some(out) = &self.output {
            writeln!(f, "output = {}", out.display())?;
        }
        Ok(())
    }
}

fn parse_value<V: std::str::FromStr>(key: &str, value: &str) -> Result<V>
where
    V::Err: fmt::Display,
{
    value.parse().map_err(|e: V::Err| HarnessError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

fn invalid(field: &'static str, reason: String) -> HarnessError {
    HarnessError::InvalidConfig { field, reason }
}
