//! Monthly aggregation: bucket cleaned records by calendar month, reduce to
//! per-month means, build the feature-group composite series and align the
//! optional platform-traffic control. All means use compensated summation in
//! record order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{FeatureId, FeatureVector};
use crate::pipeline::ingest::{Month, TrafficSeries};
use crate::record::QuestionRecord;
use crate::stats::KahanSum;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AggregateError {
    #[error("need at least 2 months of data, got {0}")]
    TooFewMonths(usize),
    #[error("feature '{feature}' has only missing values in {month}")]
    AllMissingInMonth { feature: FeatureId, month: Month },
    #[error("group '{group}' references unknown member '{member}'")]
    UnknownMember { group: String, member: String },
    #[error("traffic does not cover months: {}", .0.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", "))]
    MissingControlMonth(Vec<Month>),
    #[error("records and features are misaligned")]
    Misaligned,
}

/// Mapping from group name to member features. The defaults follow the scale
/// structure: attention counters, questioner standing, questioner reach, the
/// text measures, and answer latency on its own.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    groups: Vec<(String, Vec<FeatureId>)>,
}

impl Default for GroupSpec {
    fn default() -> Self {
        use FeatureId::*;
        Self {
            groups: vec![
                (
                    "Digital popularity".into(),
                    vec![FollowerCount, CommentCount, AnswerCount],
                ),
                (
                    "Questioner reputation".into(),
                    vec![
                        EndorsementVoteup,
                        EndorsementThanks,
                        BadgeIndicator,
                        QuestionerAnswerCount,
                    ],
                ),
                ("Questioner popularity".into(), vec![QuestionerFollowerCount]),
                (
                    "Textual Features".into(),
                    vec![
                        TitleLength,
                        DetailLength,
                        UrlCount,
                        QaLengthRatio,
                        NonstopOverlapRatio,
                        WhTypeWordRatio,
                    ],
                ),
                ("Question difficulty".into(), vec![BestAnswerLatencyDays]),
            ],
        }
    }
}

impl GroupSpec {
    /// Build from explicit groups; they must partition the 15 features.
    pub fn new(groups: Vec<(String, Vec<FeatureId>)>) -> Result<Self, String> {
        let mut seen: BTreeMap<FeatureId, &str> = BTreeMap::new();
        for (name, members) in &groups {
            if name.trim().is_empty() {
                return Err("group name is empty".into());
            }
            if name.contains(',') || name.contains('\n') {
                return Err(format!("group name '{name}' contains a separator"));
            }
            for member in members {
                if let Some(previous) = seen.insert(*member, name) {
                    return Err(format!(
                        "feature '{member}' appears in both '{previous}' and '{name}'"
                    ));
                }
            }
        }
        for feature in FeatureId::ALL {
            if !seen.contains_key(&feature) {
                return Err(format!("feature '{feature}' is not assigned to any group"));
            }
        }
        Ok(Self { groups })
    }

    pub fn groups(&self) -> &[(String, Vec<FeatureId>)] {
        &self.groups
    }

    pub fn group_of(&self, feature: FeatureId) -> Option<&str> {
        self.groups
            .iter()
            .find(|(_, members)| members.contains(&feature))
            .map(|(name, _)| name.as_str())
    }
}

/// Records of one calendar month, by index into the cleaned dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthBucket {
    pub month: Month,
    pub indices: Vec<usize>,
}

/// The aligned monthly series: reference pageview means, one series per
/// feature, group composites, optional control, and per-month bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonthlySeriesSet {
    pub months: Vec<Month>,
    pub reference: Vec<f64>,
    pub features: BTreeMap<FeatureId, Vec<f64>>,
    pub groups: Vec<(String, Vec<f64>)>,
    pub control: Option<Vec<f64>>,
    pub sample_counts: Vec<usize>,
    pub missing_counts: BTreeMap<FeatureId, Vec<usize>>,
    pub low_sample_months: Vec<(Month, usize)>,
}

/// Bucket by UTC calendar month of `created_at`. Months with no records do
/// not appear; thin months are kept and flagged later.
pub fn bucket_monthly(records: &[QuestionRecord]) -> Vec<MonthBucket> {
    let mut buckets: BTreeMap<Month, Vec<usize>> = BTreeMap::new();
    for (index, record) in records.iter().enumerate() {
        buckets
            .entry(Month::of(&record.created_at))
            .or_default()
            .push(index);
    }
    buckets
        .into_iter()
        .map(|(month, indices)| MonthBucket { month, indices })
        .collect()
}

/// Reduce buckets to monthly means. The reference is the pageview mean; each
/// feature series averages its non-missing values. A feature with nothing but
/// missing values in some month is an error naming both.
pub fn monthly_means(
    records: &[QuestionRecord],
    features: &[FeatureVector],
    buckets: &[MonthBucket],
    min_samples_per_month: usize,
) -> Result<MonthlySeriesSet, AggregateError> {
    if records.len() != features.len() {
        return Err(AggregateError::Misaligned);
    }
    if buckets.len() < 2 {
        return Err(AggregateError::TooFewMonths(buckets.len()));
    }

    let months: Vec<Month> = buckets.iter().map(|b| b.month).collect();
    let mut reference = Vec::with_capacity(buckets.len());
    let mut sample_counts = Vec::with_capacity(buckets.len());
    let mut feature_series: BTreeMap<FeatureId, Vec<f64>> = FeatureId::ALL
        .iter()
        .map(|&f| (f, Vec::with_capacity(buckets.len())))
        .collect();
    let mut missing_counts: BTreeMap<FeatureId, Vec<usize>> = FeatureId::ALL
        .iter()
        .map(|&f| (f, Vec::with_capacity(buckets.len())))
        .collect();
    let mut low_sample_months = Vec::new();

    for bucket in buckets {
        sample_counts.push(bucket.indices.len());
        if bucket.indices.len() < min_samples_per_month {
            low_sample_months.push((bucket.month, bucket.indices.len()));
        }

        let mut pageviews = KahanSum::new();
        for &index in &bucket.indices {
            pageviews.add(records[index].pageviews as f64);
        }
        reference.push(pageviews.value() / bucket.indices.len() as f64);

        for feature in FeatureId::ALL {
            let mut sum = KahanSum::new();
            let mut present = 0usize;
            let mut missing = 0usize;
            for &index in &bucket.indices {
                match features[index].get(feature) {
                    Some(value) => {
                        sum.add(value);
                        present += 1;
                    }
                    None => missing += 1,
                }
            }
            if present == 0 {
                return Err(AggregateError::AllMissingInMonth {
                    feature,
                    month: bucket.month,
                });
            }
            feature_series
                .get_mut(&feature)
                .expect("all features present")
                .push(sum.value() / present as f64);
            missing_counts
                .get_mut(&feature)
                .expect("all features present")
                .push(missing);
        }
    }

    Ok(MonthlySeriesSet {
        months,
        reference,
        features: feature_series,
        groups: Vec::new(),
        control: None,
        sample_counts,
        missing_counts,
        low_sample_months,
    })
}

/// Append one composite series per group: the plain sum of its members'
/// monthly means, evaluated in member order with no tolerance.
pub fn group_composites(
    mut series_set: MonthlySeriesSet,
    spec: &GroupSpec,
) -> Result<MonthlySeriesSet, AggregateError> {
    let mut groups = Vec::with_capacity(spec.groups().len());
    for (name, members) in spec.groups() {
        let mut composite = vec![0.0; series_set.months.len()];
        for member in members {
            let series =
                series_set
                    .features
                    .get(member)
                    .ok_or_else(|| AggregateError::UnknownMember {
                        group: name.clone(),
                        member: member.to_string(),
                    })?;
            for (slot, value) in composite.iter_mut().zip(series) {
                *slot += value;
            }
        }
        groups.push((name.clone(), composite));
    }
    series_set.groups = groups;
    Ok(series_set)
}

/// Align the platform traffic to the months axis. Every data month must be
/// covered; uncovered months are listed in the error.
pub fn attach_control(
    mut series_set: MonthlySeriesSet,
    traffic: &TrafficSeries,
) -> Result<MonthlySeriesSet, AggregateError> {
    let mut control = Vec::with_capacity(series_set.months.len());
    let mut uncovered = Vec::new();
    for &month in &series_set.months {
        match traffic.visits(month) {
            Some(visits) => control.push(visits as f64),
            None => uncovered.push(month),
        }
    }
    if !uncovered.is_empty() {
        return Err(AggregateError::MissingControlMonth(uncovered));
    }
    series_set.control = Some(control);
    Ok(series_set)
}
