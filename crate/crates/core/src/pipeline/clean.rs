//! Record cleaning: anonymous-questioner filtering followed by 3-sigma
//! outlier removal on the eligible features. Bounds are computed once over
//! the anonymous-filtered dataset, then every record is checked against all
//! of them in one pass, so a brute-force recheck against the same bounds can
//! confirm every removal.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

use crate::features::{FeatureId, FeatureVector};
use crate::record::QuestionRecord;
use crate::stats::{mean_and_sd, SdMode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CleanError {
    #[error("records ({records}) and features ({features}) are misaligned")]
    Misaligned { records: usize, features: usize },
    #[error("sigma must be positive, got {0}")]
    InvalidSigma(f64),
}

/// The cleaning knobs. `outlier_eligible` defaults to every count, length and
/// latency feature; the [0, 1]-bounded ratios and the badge flag are exempt
/// because sigma-trimming a bounded indicator is meaningless.
#[derive(Debug, Clone, PartialEq)]
pub struct CleaningRules {
    pub sigma: f64,
    pub min_samples_per_month: usize,
    pub drop_anonymous: bool,
    pub outlier_eligible: BTreeSet<FeatureId>,
    pub sd_mode: SdMode,
}

impl Default for CleaningRules {
    fn default() -> Self {
        Self {
            sigma: 3.0,
            min_samples_per_month: 2000,
            drop_anonymous: true,
            outlier_eligible: FeatureId::ALL
                .iter()
                .copied()
                .filter(|f| f.outlier_eligible())
                .collect(),
            sd_mode: SdMode::Population,
        }
    }
}

/// Interval used for one feature, with how many records it flagged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureBound {
    pub feature: FeatureId,
    pub mean: f64,
    pub sd: f64,
    pub lower: f64,
    pub upper: f64,
    pub flagged: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CleaningReport {
    pub input_records: usize,
    pub dropped_anonymous: usize,
    /// Distinct records removed by the outlier rule.
    pub dropped_outliers: usize,
    pub retained: usize,
    pub bounds: Vec<FeatureBound>,
}

/// Apply the rules, returning the retained records with their features and a
/// report. Missing values never contribute to a bound and never flag a
/// record.
pub fn clean_records(
    records: Vec<QuestionRecord>,
    features: Vec<FeatureVector>,
    rules: &CleaningRules,
) -> Result<(Vec<QuestionRecord>, Vec<FeatureVector>, CleaningReport), CleanError> {
    if records.len() != features.len() {
        return Err(CleanError::Misaligned {
            records: records.len(),
            features: features.len(),
        });
    }
    if !(rules.sigma > 0.0) {
        return Err(CleanError::InvalidSigma(rules.sigma));
    }

    let input_records = records.len();
    let mut pairs: Vec<(QuestionRecord, FeatureVector)> =
        records.into_iter().zip(features).collect();

    let before_anonymous = pairs.len();
    if rules.drop_anonymous {
        pairs.retain(|(record, _)| !record.questioner.anonymous);
    }
    let dropped_anonymous = before_anonymous - pairs.len();

    let mut bounds = Vec::new();
    for &feature in &rules.outlier_eligible {
        let values: Vec<f64> = pairs
            .iter()
            .filter_map(|(_, vector)| vector.get(feature))
            .collect();
        if values.is_empty() {
            continue;
        }
        // A constant column gets an exact zero-width bound so that every
        // record passes it bit-for-bit.
        let (mean, sd) = if values.iter().all(|v| *v == values[0]) {
            (values[0], 0.0)
        } else {
            mean_and_sd(&values, rules.sd_mode).expect("non-empty values")
        };
        bounds.push(FeatureBound {
            feature,
            mean,
            sd,
            lower: mean - rules.sigma * sd,
            upper: mean + rules.sigma * sd,
            flagged: 0,
        });
    }

    let mut retained_pairs = Vec::with_capacity(pairs.len());
    let mut dropped_outliers = 0usize;
    for (record, vector) in pairs {
        let mut drop = false;
        for bound in bounds.iter_mut() {
            if let Some(value) = vector.get(bound.feature) {
                if value < bound.lower || value > bound.upper {
                    bound.flagged += 1;
                    drop = true;
                }
            }
        }
        if drop {
            dropped_outliers += 1;
        } else {
            retained_pairs.push((record, vector));
        }
    }

    let retained = retained_pairs.len();
    let (records, features) = retained_pairs.into_iter().unzip();
    Ok((
        records,
        features,
        CleaningReport {
            input_records,
            dropped_anonymous,
            dropped_outliers,
            retained,
            bounds,
        },
    ))
}
