//! Run configuration: defaults, the flat key=value file format, and
//! command-line overrides.
//!
//! Precedence is defaults < config file < flags. The resolved
//! configuration can be written back out in the same format, so a run
//! directory always carries a file that reproduces it.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::dataset::AttackClass;
use crate::detect::ScoreCriterion;
use crate::ebgan::TrainConfig;
use crate::{Error, Result};

/// Which threshold selections an evaluation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdChoice {
    /// Flag the top `ratio_percent`% of scores.
    Ratio,
    /// Flag scores above the maximum training-normal score.
    MaxTrain,
    /// Evaluate both selections.
    Both,
}

impl ThresholdChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            ThresholdChoice::Ratio => "ratio",
            ThresholdChoice::MaxTrain => "max-train",
            ThresholdChoice::Both => "both",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "ratio" => Some(ThresholdChoice::Ratio),
            "max-train" => Some(ThresholdChoice::MaxTrain),
            "both" => Some(ThresholdChoice::Both),
            _ => None,
        }
    }
}

/// Everything a run needs: data locations, the training recipe, and
/// the evaluation policy.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub train_data: PathBuf,
    pub test_data: PathBuf,
    /// Attack-name taxonomy file; the built-in table when unset.
    pub taxonomy: Option<PathBuf>,
    pub output_dir: PathBuf,
    /// Attack class whose records feed the generator and define the
    /// malicious side of evaluation.
    pub attack_class: AttackClass,
    pub train: TrainConfig,
    /// One full training run per seed.
    pub seeds: Vec<u64>,
    pub criterion: ScoreCriterion,
    pub threshold: ThresholdChoice,
    /// c of the top-c% threshold, in percent.
    pub ratio_percent: f64,
    /// Bin count for score histograms.
    pub bins: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            train_data: PathBuf::new(),
            test_data: PathBuf::new(),
            taxonomy: None,
            output_dir: PathBuf::from("out"),
            attack_class: AttackClass::Dos,
            train: TrainConfig::default(),
            seeds: vec![1, 2, 3, 4, 5],
            criterion: ScoreCriterion::Mse,
            threshold: ThresholdChoice::Ratio,
            ratio_percent: 44.0,
            bins: 50,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{value}` for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Config(format!(
            "invalid value `{value}` for {key} (expected true or false)"
        ))),
    }
}

/// Comma-separated list; an empty string is an empty list.
fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|item| parse_value(key, item.trim()))
        .collect()
}

impl RunConfig {
    /// Apply one key=value pair. Unknown keys are errors.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "train_data" => self.train_data = PathBuf::from(value),
            "test_data" => self.test_data = PathBuf::from(value),
            "taxonomy" => {
                self.taxonomy = if value.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(value))
                }
            }
            "output_dir" => self.output_dir = PathBuf::from(value),
            "attack_class" => {
                self.attack_class = AttackClass::parse(value).ok_or_else(|| {
                    Error::Config(format!(
                        "invalid value `{value}` for attack_class (expected dos, probe, or u2r+r2l)"
                    ))
                })?
            }
            "seeds" => self.seeds = parse_list(key, value)?,
            "criterion" => self.criterion = value.parse()?,
            "threshold" => {
                self.threshold = ThresholdChoice::parse(value).ok_or_else(|| {
                    Error::Config(format!(
                        "invalid value `{value}` for threshold (expected ratio, max-train, or both)"
                    ))
                })?
            }
            "ratio_percent" => self.ratio_percent = parse_value(key, value)?,
            "bins" => self.bins = parse_value(key, value)?,
            "margin" => self.train.margin = parse_value(key, value)?,
            "lambda_pt" => self.train.lambda_pt = parse_value(key, value)?,
            "learning_rate" => self.train.learning_rate = parse_value(key, value)?,
            "beta1" => self.train.beta1 = parse_value(key, value)?,
            "beta2" => self.train.beta2 = parse_value(key, value)?,
            "batch_size" => self.train.batch_size = parse_value(key, value)?,
            "epochs" => self.train.epochs = parse_value(key, value)?,
            "latent_dim" => self.train.latent_dim = parse_value(key, value)?,
            "sn" => self.train.sn_enabled = parse_bool(key, value)?,
            "noise_only_generator" => {
                self.train.noise_only_generator = parse_bool(key, value)?
            }
            "gen_hidden" => self.train.gen_hidden = parse_list(key, value)?,
            "enc_hidden" => self.train.enc_hidden = parse_list(key, value)?,
            "code_dim" => self.train.code_dim = parse_value(key, value)?,
            "dec_hidden" => self.train.dec_hidden = parse_list(key, value)?,
            "leaky_slope" => self.train.leaky_slope = parse_value(key, value)?,
            _ => return Err(Error::Config(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    /// Apply a whole config file: `key = value` lines, `#` comments.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<()> {
        for (number, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "{origin}:{}: expected key = value, got `{line}`",
                    number + 1
                ))
            })?;
            self.apply(key.trim(), value.trim()).map_err(|e| match e {
                Error::Config(message) => {
                    Error::Config(format!("{origin}:{}: {message}", number + 1))
                }
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        self.apply_text(&text, &path.display().to_string())
    }

    /// Checks that hold for every command.
    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds must not be empty".into()));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.seeds.len() {
            return Err(Error::Config("seeds must be distinct".into()));
        }
        if !(0.0..=100.0).contains(&self.ratio_percent) {
            return Err(Error::Config(format!(
                "ratio_percent must lie in [0, 100], got {}",
                self.ratio_percent
            )));
        }
        if self.bins == 0 {
            return Err(Error::Config("bins must be positive".into()));
        }
        if self.output_dir.as_os_str().is_empty() {
            return Err(Error::Config("output_dir must not be empty".into()));
        }
        self.train.validate()
    }

    pub fn require_train_data(&self) -> Result<&Path> {
        if self.train_data.as_os_str().is_empty() {
            return Err(Error::Config(
                "no training data configured (set train_data or pass --train-data)".into(),
            ));
        }
        Ok(&self.train_data)
    }

    pub fn require_test_data(&self) -> Result<&Path> {
        if self.test_data.as_os_str().is_empty() {
            return Err(Error::Config(
                "no test data configured (set test_data or pass --test-data)".into(),
            ));
        }
        Ok(&self.test_data)
    }

    /// Render the resolved configuration in the config-file format.
    /// The output parses back to an identical configuration.
    pub fn render(&self) -> String {
        fn join<T: std::fmt::Display>(items: &[T]) -> String {
            items
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
        let mut out = String::new();
        let mut line = |key: &str, value: String| {
            let _ = writeln!(out, "{key} = {value}");
        };
        line("train_data", self.train_data.display().to_string());
        line("test_data", self.test_data.display().to_string());
        line(
            "taxonomy",
            self.taxonomy
                .as_deref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
        );
        line("output_dir", self.output_dir.display().to_string());
        line("attack_class", self.attack_class.to_string());
        line("seeds", join(&self.seeds));
        line("criterion", self.criterion.to_string());
        line("threshold", self.threshold.as_str().to_string());
        line("ratio_percent", self.ratio_percent.to_string());
        line("bins", self.bins.to_string());
        line("margin", self.train.margin.to_string());
        line("lambda_pt", self.train.lambda_pt.to_string());
        line("learning_rate", self.train.learning_rate.to_string());
        line("beta1", self.train.beta1.to_string());
        line("beta2", self.train.beta2.to_string());
        line("batch_size", self.train.batch_size.to_string());
        line("epochs", self.train.epochs.to_string());
        line("latent_dim", self.train.latent_dim.to_string());
        line("sn", self.train.sn_enabled.to_string());
        line(
            "noise_only_generator",
            self.train.noise_only_generator.to_string(),
        );
        line("gen_hidden", join(&self.train.gen_hidden));
        line("enc_hidden", join(&self.train.enc_hidden));
        line("code_dim", self.train.code_dim.to_string());
        line("dec_hidden", join(&self.train.dec_hidden));
        line("leaky_slope", self.train.leaky_slope.to_string());
        out
    }
}
