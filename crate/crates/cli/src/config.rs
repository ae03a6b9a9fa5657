//! Experiment configuration: JSON file, command-line flags, defaults.
//!
//! Keys of the JSON file are the long flag names (`"p-grid": [1.1, 1.5]`).
//! Flags override the file; unset fields fall back to defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vilenkin_core::RadixSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    TransformCheck,
    Weaktype,
    Extrapolation,
    Lemma1,
    Convergence,
}

/// Operator family used by `weaktype` and `extrapolation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyChoice {
    /// `S_1, ..., S_{M_N}`.
    PartialSums,
    /// `{S_{M_N}}`.
    Identity,
}

/// Settings shared by the file and the command line; `None` means unset.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// Only meaningful in a config file; the subcommand takes precedence.
    #[arg(skip)]
    pub experiment: Option<Experiment>,
    /// Radices m_1,...,m_N, e.g. 2,3,2 [default: 2,2,2,2,2,2,2,2].
    #[arg(long)]
    pub radices: Option<String>,
    /// Repeat the radix list this many times [default: 1].
    #[arg(long)]
    pub level_repeat: Option<usize>,
    /// Exponents p in (1, 2) [default: 1.1,1.3,1.5,1.8].
    #[arg(long, value_delimiter = ',')]
    pub p_grid: Option<Vec<f64>>,
    /// Epsilon values [default: 0,0.01,0.02,0.05,0.1,0.2,0.5,1].
    #[arg(long, value_delimiter = ',')]
    pub eps_grid: Option<Vec<f64>>,
    /// Thresholds lambda [default: powers of two from 0.125 to 16].
    #[arg(long, value_delimiter = ',')]
    pub lambda_grid: Option<Vec<f64>>,
    /// Exponent m of phi_m [default: 1].
    #[arg(long)]
    pub phi_m: Option<f64>,
    /// Random seed [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random functions (transform-check) or candidate sets (weaktype) [default: 1000].
    #[arg(long)]
    pub trials: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Operator family [default: partial-sums].
    #[arg(long, value_enum)]
    pub family: Option<FamilyChoice>,
    /// Dirichlet kernel indices j of the approximation family {D_j} (lemma1) [default: 1,2,4,8].
    #[arg(long, value_delimiter = ',')]
    pub kernels: Option<Vec<usize>>,
    /// Target epsilon of the approximation (lemma1) [default: 0.1].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Number of test functions [default: 50].
    #[arg(long)]
    pub battery_size: Option<usize>,
    /// Enumerate all sets instead of sampling (weaktype, M_N <= 24).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub exhaustive: Option<bool>,
}

impl Settings {
    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            experiment: self.experiment.or(base.experiment),
            radices: self.radices.or(base.radices),
            level_repeat: self.level_repeat.or(base.level_repeat),
            p_grid: self.p_grid.or(base.p_grid),
            eps_grid: self.eps_grid.or(base.eps_grid),
            lambda_grid: self.lambda_grid.or(base.lambda_grid),
            phi_m: self.phi_m.or(base.phi_m),
            seed: self.seed.or(base.seed),
            trials: self.trials.or(base.trials),
            out: self.out.or(base.out),
            family: self.family.or(base.family),
            kernels: self.kernels.or(base.kernels),
            epsilon: self.epsilon.or(base.epsilon),
            battery_size: self.battery_size.or(base.battery_size),
            exhaustive: self.exhaustive.or(base.exhaustive),
        }
    }
}

/// Rejected configuration, naming the offending field or file position.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub location: String,
    pub message: String,
}

impl ConfigError {
    fn field(name: &str, message: impl Into<String>) -> Self {
        Self {
            location: format!("field `{name}`"),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}: {}", self.location, self.message)
    }
}

impl std::error::Error for ConfigError {}

pub fn read_settings(path: &Path) -> Result<Settings, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        location: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_settings(&text).map_err(|mut e| {
        e.location = format!("{} {}", path.display(), e.location);
        e
    })
}

pub fn parse_settings(text: &str) -> Result<Settings, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

/// Fully resolved configuration. Serializes to the canonical form that is
/// hashed into every output; the output path is not part of it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub radices: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub eps_grid: Vec<f64>,
    pub lambda_grid: Vec<f64>,
    pub phi_m: f64,
    pub seed: u64,
    pub trials: usize,
    pub family: FamilyChoice,
    pub kernels: Vec<usize>,
    pub epsilon: f64,
    pub battery_size: usize,
    pub exhaustive: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    radix: Option<Arc<RadixSequence>>,
}

pub const DEFAULT_RADICES: &str = "2,2,2,2,2,2,2,2";

/// Largest group for the dense naive transform table.
const MAX_ORDER_TRANSFORM: usize = 2048;
/// Largest group for the `O(M_N^2)` maximal-operator experiments.
const MAX_ORDER: usize = 8192;

fn check_grid(name: &str, grid: &[f64], ok: impl Fn(f64) -> bool, what: &str) -> Result<(), ConfigError> {
    if grid.is_empty() {
        return Err(ConfigError::field(name, "grid is empty"));
    }
    match grid.iter().find(|&&v| !v.is_finite() || !ok(v)) {
        Some(v) => Err(ConfigError::field(name, format!("value {v} is not {what}"))),
        None => Ok(()),
    }
}

impl ExperimentConfig {
    /// Resolves `settings` for `experiment`, filling defaults and validating
    /// the fields the experiment uses.
    pub fn resolve(experiment: Experiment, settings: Settings) -> Result<Self, ConfigError> {
        if let Some(e) = settings.experiment {
            if e != experiment {
                return Err(ConfigError::field(
                    "experiment",
                    format!("config file is for {e:?}, command is {experiment:?}"),
                ));
            }
        }
        let text = settings.radices.unwrap_or_else(|| DEFAULT_RADICES.into());
        let base: RadixSequence = text
            .parse()
            .map_err(|e| ConfigError::field("radices", format!("`{text}`: {e}")))?;
        let repeat = settings.level_repeat.unwrap_or(1);
        if repeat == 0 {
            return Err(ConfigError::field("level-repeat", "must be at least 1"));
        }
        let radix = base
            .repeat(repeat)
            .map_err(|e| ConfigError::field("level-repeat", e.to_string()))?;
        let config = Self {
            experiment,
            radices: radix.radices().to_vec(),
            p_grid: settings.p_grid.unwrap_or_else(|| vec![1.1, 1.3, 1.5, 1.8]),
            eps_grid: settings
                .eps_grid
                .unwrap_or_else(|| vec![0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0]),
            lambda_grid: settings
                .lambda_grid
                .unwrap_or_else(|| vec![0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0]),
            phi_m: settings.phi_m.unwrap_or(1.0),
            seed: settings.seed.unwrap_or(42),
            trials: settings.trials.unwrap_or(1000),
            family: settings.family.unwrap_or(FamilyChoice::PartialSums),
            kernels: settings.kernels.unwrap_or_else(|| vec![1, 2, 4, 8]),
            epsilon: settings.epsilon.unwrap_or(0.1),
            battery_size: settings.battery_size.unwrap_or(50),
            exhaustive: settings.exhaustive.unwrap_or(false),
            out: settings.out,
            radix: Some(Arc::new(radix)),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn radix(&self) -> Arc<RadixSequence> {
        self.radix.clone().expect("set by resolve")
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let m = self.radix().order();
        let limit = match self.experiment {
            Experiment::TransformCheck => MAX_ORDER_TRANSFORM,
            _ => MAX_ORDER,
        };
        if m > limit {
            return Err(ConfigError::field(
                "radices",
                format!("group order {m} exceeds {limit} for this experiment"),
            ));
        }
        if self.trials == 0 {
            return Err(ConfigError::field("trials", "must be at least 1"));
        }
        let uses_battery = matches!(
            self.experiment,
            Experiment::Extrapolation | Experiment::Lemma1 | Experiment::Convergence
        );
        if uses_battery && self.battery_size == 0 {
            return Err(ConfigError::field("battery-size", "must be at least 1"));
        }
        match self.experiment {
            Experiment::TransformCheck => {}
            Experiment::Weaktype => {
                check_grid("p-grid", &self.p_grid, |p| p > 1.0 && p < 2.0, "inside (1, 2)")?;
                if self.p_grid.len() < 3 {
                    return Err(ConfigError::field("p-grid", "the growth fit needs at least 3 values"));
                }
                if self.exhaustive && m > 24 {
                    return Err(ConfigError::field(
                        "exhaustive",
                        format!("exhaustive enumeration needs M_N <= 24, got {m}"),
                    ));
                }
            }
            Experiment::Extrapolation => {
                check_grid("eps-grid", &self.eps_grid, |e| e >= 0.0, "finite and >= 0")?;
                check_grid("lambda-grid", &self.lambda_grid, |l| l > 0.0, "positive")?;
                if !(self.phi_m >= 0.0 && self.phi_m.is_finite()) {
                    return Err(ConfigError::field("phi-m", format!("{} is not finite and >= 0", self.phi_m)));
                }
            }
            Experiment::Lemma1 => {
                if self.kernels.is_empty() {
                    return Err(ConfigError::field("kernels", "no kernel indices"));
                }
                if let Some(j) = self.kernels.iter().find(|&&j| j == 0 || j > m) {
                    return Err(ConfigError::field("kernels", format!("index {j} outside 1..={m}")));
                }
                if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
                    return Err(ConfigError::field("epsilon", format!("{} is not positive", self.epsilon)));
                }
            }
            Experiment::Convergence => {
                check_grid("lambda-grid", &self.lambda_grid, |l| l > 0.0, "positive")?;
            }
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_repeat() {
        let c = ExperimentConfig::resolve(Experiment::Weaktype, Settings::default()).unwrap();
        assert_eq!(c.radices, vec![2; 8]);
        assert_eq!(c.seed, 42);
        let s = Settings {
            radices: Some("2,3".into()),
            level_repeat: Some(4),
            ..Settings::default()
        };
        let c = ExperimentConfig::resolve(Experiment::Extrapolation, s).unwrap();
        assert_eq!(c.radices, vec![2, 3, 2, 3, 2, 3, 2, 3]);
        assert_eq!(c.radix().order(), 1296);
    }

    #[test]
    fn flags_override_file() {
        let file = parse_settings(r#"{"seed": 7, "p-grid": [1.2, 1.4, 1.6], "trials": 10}"#).unwrap();
        let flags = Settings {
            seed: Some(9),
            ..Settings::default()
        };
        let c = ExperimentConfig::resolve(Experiment::Weaktype, flags.over(file)).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.trials, 10);
        assert_eq!(c.p_grid, vec![1.2, 1.4, 1.6]);
    }

    #[test]
    fn errors_name_the_field_or_line() {
        let e = parse_settings("{\n  \"seed\": 1,\n  \"bogus\": 2\n}").unwrap_err();
        assert_eq!(e.location, "line 3 column 9");
        assert!(e.message.contains("bogus"));
        let s = Settings {
            p_grid: Some(vec![1.5, 2.5, 1.2]),
            ..Settings::default()
        };
        let e = ExperimentConfig::resolve(Experiment::Weaktype, s).unwrap_err();
        assert_eq!(e.location, "field `p-grid`");
        let s = Settings {
            radices: Some("2,1".into()),
            ..Settings::default()
        };
        let e = ExperimentConfig::resolve(Experiment::Convergence, s).unwrap_err();
        assert_eq!(e.location, "field `radices`");
        let s = Settings {
            trials: Some(0),
            ..Settings::default()
        };
        assert!(ExperimentConfig::resolve(Experiment::TransformCheck, s).is_err());
        let s = Settings {
            experiment: Some(Experiment::Lemma1),
            ..Settings::default()
        };
        assert!(ExperimentConfig::resolve(Experiment::Convergence, s).is_err());
        let s = Settings {
            kernels: Some(vec![1, 512]),
            ..Settings::default()
        };
        assert!(ExperimentConfig::resolve(Experiment::Lemma1, s).is_err());
    }

    #[test]
    fn hash_ignores_output_path_only() {
        let a = ExperimentConfig::resolve(Experiment::Convergence, Settings::default()).unwrap();
        let b = ExperimentConfig::resolve(
            Experiment::Convergence,
            Settings {
                out: Some("x.csv".into()),
                ..Settings::default()
            },
        )
        .unwrap();
        let c = ExperimentConfig::resolve(
            Experiment::Convergence,
            Settings {
                seed: Some(1),
                ..Settings::default()
            },
        )
        .unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
