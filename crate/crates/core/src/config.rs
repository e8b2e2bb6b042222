//! Flat `key = value` configuration files shared by the analysis pipeline and
//! the corpus generator. `#` lines are comments; unknown keys are errors so
//! typos surface immediately. Generator keys carry a `synth.` prefix and may
//! live in the same file as pipeline keys.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::features::{CountingMode, FeatureId, OverlapMode};
use crate::gra::{Direction, GraConfig};
use crate::pipeline::aggregate::GroupSpec;
use crate::pipeline::clean::CleaningRules;
use crate::stats::SdMode;
use crate::synth::SynthSpec;
use crate::text::{Lexicon, LexiconError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read '{path}': {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config line {line}: expected 'key = value'")]
    Syntax { line: usize },
    #[error("config line {line}: duplicate key '{key}'")]
    DuplicateKey { line: usize, key: String },
    #[error("config line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("config key '{key}': {reason}")]
    InvalidValue { key: String, reason: String },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("group configuration: {0}")]
    Groups(String),
}

/// Parsed key/value pairs with their line numbers.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: Vec<(String, String, usize)>,
}

impl ConfigFile {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries: Vec<(String, String, usize)> = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let line_no = index + 1;
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: line_no })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(ConfigError::Syntax { line: line_no });
            }
            if entries.iter().any(|(k, _, _)| *k == key) {
                return Err(ConfigError::DuplicateKey { line: line_no, key });
            }
            entries.push((key, value, line_no));
        }
        Ok(Self { entries })
    }

}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn parse_number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| invalid(key, format!("'{value}' is not a valid number")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(invalid(key, format!("'{other}' is not true/false"))),
    }
}

/// Everything the analysis pipeline needs, resolved against defaults.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub gra: GraConfig,
    pub counting_mode: CountingMode,
    pub overlap_mode: OverlapMode,
    pub cleaning: CleaningRules,
    pub stopwords: Lexicon,
    pub wh_words: Lexicon,
    pub directions: BTreeMap<FeatureId, Direction>,
    pub groups: GroupSpec,
    /// Rayon worker override for feature extraction; `None` uses the global
    /// pool. Results are identical either way.
    pub workers: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            gra: GraConfig::default(),
            counting_mode: CountingMode::Characters,
            overlap_mode: OverlapMode::AnswerOverlap,
            cleaning: CleaningRules::default(),
            stopwords: Lexicon::builtin_stopwords(),
            wh_words: Lexicon::builtin_wh_words(),
            directions: BTreeMap::new(),
            groups: GroupSpec::default(),
            workers: None,
        }
    }
}

impl PipelineConfig {
    pub fn direction_of(&self, feature: FeatureId) -> Direction {
        self.directions
            .get(&feature)
            .copied()
            .unwrap_or(Direction::HigherBetter)
    }

    /// The effective settings, echoed into report metadata.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut echo = vec![
            ("counting_mode".into(), token_of_mode(self.counting_mode).into()),
            ("delta".into(), self.gra.delta.to_string()),
            ("drop_anonymous".into(), self.cleaning.drop_anonymous.to_string()),
            (
                "min_samples_per_month".into(),
                self.cleaning.min_samples_per_month.to_string(),
            ),
            (
                "overlap_mode".into(),
                match self.overlap_mode {
                    OverlapMode::AnswerOverlap => "overlap".into(),
                    OverlapMode::NonStopFraction => "literal".into(),
                },
            ),
            (
                "sd_mode".into(),
                match self.cleaning.sd_mode {
                    SdMode::Population => "population".into(),
                    SdMode::Sample => "sample".into(),
                },
            ),
            ("sigma".into(), self.cleaning.sigma.to_string()),
            ("stopwords".into(), self.stopwords.source().to_string()),
            ("wh_words".into(), self.wh_words.source().to_string()),
        ];
        for (feature, direction) in &self.directions {
            echo.push((
                format!("direction.{feature}"),
                match direction {
                    Direction::HigherBetter => "higher_better".into(),
                    Direction::LowerBetter => "lower_better".into(),
                },
            ));
        }
        for (name, members) in self.groups.groups() {
            echo.push((
                format!("group.{name}"),
                members
                    .iter()
                    .map(|m| m.id())
                    .collect::<Vec<_>>()
                    .join(","),
            ));
        }
        echo.sort();
        echo
    }
}

fn token_of_mode(mode: CountingMode) -> &'static str {
    match mode {
        CountingMode::Characters => "characters",
        CountingMode::WhitespaceTokens => "whitespace_tokens",
    }
}

/// Build the pipeline configuration from an optional file. Generator keys
/// (`synth.*`) in the same file are ignored here.
pub fn pipeline_config(file: Option<&ConfigFile>) -> Result<PipelineConfig, ConfigError> {
    let mut config = PipelineConfig::default();
    let Some(file) = file else {
        return Ok(config);
    };

    let mut group_entries: Vec<(String, Vec<FeatureId>)> = Vec::new();
    for (key, value, line) in &file.entries {
        match key.as_str() {
            "delta" => {
                let delta: f64 = parse_number(key, value)?;
                config.gra = GraConfig::with_delta(delta)
                    .map_err(|e| invalid(key, e.to_string()))?;
            }
            "counting_mode" => {
                config.counting_mode = match value.as_str() {
                    "characters" => CountingMode::Characters,
                    "whitespace_tokens" => CountingMode::WhitespaceTokens,
                    other => {
                        return Err(invalid(
                            key,
                            format!("'{other}' is not characters/whitespace_tokens"),
                        ))
                    }
                };
            }
            "overlap_mode" => {
                config.overlap_mode = match value.as_str() {
                    "overlap" => OverlapMode::AnswerOverlap,
                    "literal" => OverlapMode::NonStopFraction,
                    other => return Err(invalid(key, format!("'{other}' is not overlap/literal"))),
                };
            }
            "sigma" => {
                let sigma: f64 = parse_number(key, value)?;
                if !(sigma > 0.0) {
                    return Err(invalid(key, "sigma must be positive"));
                }
                config.cleaning.sigma = sigma;
            }
            "sd_mode" => {
                config.cleaning.sd_mode = match value.as_str() {
                    "population" => SdMode::Population,
                    "sample" => SdMode::Sample,
                    other => {
                        return Err(invalid(key, format!("'{other}' is not population/sample")))
                    }
                };
            }
            "min_samples_per_month" => {
                let n: usize = parse_number(key, value)?;
                if n == 0 {
                    return Err(invalid(key, "must be positive"));
                }
                config.cleaning.min_samples_per_month = n;
            }
            "drop_anonymous" => {
                config.cleaning.drop_anonymous = parse_bool(key, value)?;
            }
            "stopwords_path" => {
                config.stopwords = Lexicon::from_path(Path::new(value))?;
            }
            "wh_words_path" => {
                config.wh_words = Lexicon::from_path(Path::new(value))?;
            }
            _ if key.starts_with("direction.") => {
                let feature: FeatureId = key["direction.".len()..]
                    .parse()
                    .map_err(|e: String| invalid(key, e))?;
                let direction = match value.as_str() {
                    "higher_better" => Direction::HigherBetter,
                    "lower_better" => Direction::LowerBetter,
                    other => {
                        return Err(invalid(
                            key,
                            format!("'{other}' is not higher_better/lower_better"),
                        ))
                    }
                };
                config.directions.insert(feature, direction);
            }
            _ if key.starts_with("group.") => {
                let name = key["group.".len()..].to_string();
                let members = value
                    .split(',')
                    .map(|m| m.trim().parse::<FeatureId>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| invalid(key, e))?;
                group_entries.push((name, members));
            }
            _ if key.starts_with("synth.") => {}
            _ => {
                return Err(ConfigError::UnknownKey {
                    line: *line,
                    key: key.clone(),
                })
            }
        }
    }

    // Any group.* key replaces the whole default grouping, which must still
    // partition the scale.
    if !group_entries.is_empty() {
        config.groups = GroupSpec::new(group_entries).map_err(ConfigError::Groups)?;
    }
    Ok(config)
}

/// Build the generator spec from `synth.*` keys; pipeline keys in the same
/// file are ignored here.
pub fn synth_spec(file: &ConfigFile) -> Result<SynthSpec, ConfigError> {
    let mut spec = SynthSpec::default();
    for (key, value, line) in &file.entries {
        let Some(synth_key) = key.strip_prefix("synth.") else {
            continue;
        };
        match synth_key {
            "months" => spec.months = parse_number(key, value)?,
            "records_per_month" => spec.records_per_month = parse_number(key, value)?,
            "seed" => spec.seed = parse_number(key, value)?,
            "noise_sd" => spec.noise_sd = parse_number(key, value)?,
            "unanswered_fraction" => spec.unanswered_fraction = parse_number(key, value)?,
            _ if synth_key.starts_with("weight.") => {
                let feature: FeatureId = synth_key["weight.".len()..]
                    .parse()
                    .map_err(|e: String| invalid(key, e))?;
                spec.planted_weights
                    .insert(feature, parse_number(key, value)?);
            }
            _ if synth_key.starts_with("marginal.") => {
                let target = &synth_key["marginal.".len()..];
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 4 {
                    return Err(invalid(key, "expected 'mean,sd,min,max'"));
                }
                let numbers: Vec<f64> = parts
                    .iter()
                    .map(|p| parse_number(key, p))
                    .collect::<Result<_, _>>()?;
                let marginal = crate::synth::Marginal {
                    mean: numbers[0],
                    sd: numbers[1],
                    min: numbers[2],
                    max: numbers[3],
                };
                if target == "pageviews" {
                    spec.pageview_marginal = marginal;
                } else {
                    let feature: FeatureId =
                        target.parse().map_err(|e: String| invalid(key, e))?;
                    spec.marginals.insert(feature, marginal);
                }
            }
            _ => {
                return Err(ConfigError::UnknownKey {
                    line: *line,
                    key: key.clone(),
                })
            }
        }
    }
    spec.validate()
        .map_err(|e| invalid("synth", e.to_string()))?;
    Ok(spec)
}
