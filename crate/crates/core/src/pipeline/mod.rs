//! End-to-end orchestration: load, extract, clean, bucket, aggregate, group,
//! attach the control, run the relational analysis twice (features, then
//! groups against a fresh normalization context) and assemble the report.
//!
//! Every error names its stage. Feature extraction fans out across records;
//! all reductions run in fixed record order, so worker count never changes a
//! byte of the output.

pub mod aggregate;
pub mod clean;
pub mod ingest;

use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::config::PipelineConfig;
use crate::features::{extract_features, FeatureError, FeatureId, FeatureVector};
use crate::gra::{run_gra, GraError, RawSeries};
use crate::record::QuestionRecord;
use crate::report::{
    ControlRow, FeatureRow, GraReport, GroupRow, ReportMetadata, CONTROL_SERIES,
};
use aggregate::{
    attach_control, bucket_monthly, group_composites, monthly_means, AggregateError,
    MonthlySeriesSet,
};
use clean::{clean_records, CleanError, CleaningReport};
use ingest::{load_records, load_traffic, IngestError, LoadReport, TrafficSeries};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("load: {0}")]
    Load(IngestError),
    #[error("traffic: {0}")]
    Traffic(IngestError),
    #[error("extract: record {qid}: {source}")]
    Extract { qid: u64, source: FeatureError },
    #[error("extract: cannot build worker pool: {0}")]
    Workers(String),
    #[error("clean: {0}")]
    Clean(#[from] CleanError),
    #[error("aggregate: {0}")]
    Aggregate(AggregateError),
    #[error("groups: {0}")]
    Groups(AggregateError),
    #[error("control: {0}")]
    Control(AggregateError),
    #[error("gra: {0}")]
    Gra(#[from] GraError),
}

impl PipelineError {
    /// The pipeline stage that failed.
    pub fn stage(&self) -> &'static str {
        match self {
            Self::Load(_) => "load",
            Self::Traffic(_) => "traffic",
            Self::Extract { .. } | Self::Workers(_) => "extract",
            Self::Clean(_) => "clean",
            Self::Aggregate(_) => "aggregate",
            Self::Groups(_) => "groups",
            Self::Control(_) => "control",
            Self::Gra(_) => "gra",
        }
    }
}

/// Run the pipeline from files on disk.
pub fn run_pipeline(
    records_path: &Path,
    traffic_path: Option<&Path>,
    config: &PipelineConfig,
) -> Result<GraReport, PipelineError> {
    let (records, load_report) = load_records(records_path).map_err(PipelineError::Load)?;
    let traffic = match traffic_path {
        Some(path) => Some(load_traffic(path).map_err(PipelineError::Traffic)?),
        None => None,
    };
    run_stages(records, Some(load_report), traffic, config)
}

/// Run the pipeline over records already in memory.
pub fn run_pipeline_records(
    records: Vec<QuestionRecord>,
    traffic: Option<TrafficSeries>,
    config: &PipelineConfig,
) -> Result<GraReport, PipelineError> {
    run_stages(records, None, traffic, config)
}

/// Extract the scale for every record, optionally on a dedicated pool.
/// Output order always matches input order.
pub fn extract_all(
    records: &[QuestionRecord],
    config: &PipelineConfig,
) -> Result<Vec<FeatureVector>, PipelineError> {
    let extract_one = |record: &QuestionRecord| {
        extract_features(
            record,
            &config.stopwords,
            &config.wh_words,
            config.counting_mode,
            config.overlap_mode,
        )
        .map_err(|source| PipelineError::Extract {
            qid: record.qid,
            source,
        })
    };
    match config.workers {
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| PipelineError::Workers(e.to_string()))?;
            pool.install(|| records.par_iter().map(extract_one).collect())
        }
        None => records.par_iter().map(extract_one).collect(),
    }
}

fn run_stages(
    records: Vec<QuestionRecord>,
    load_report: Option<LoadReport>,
    traffic: Option<TrafficSeries>,
    config: &PipelineConfig,
) -> Result<GraReport, PipelineError> {
    let loaded = records.len();
    let features = extract_all(&records, config)?;
    let (records, features, cleaning) = clean_records(records, features, &config.cleaning)?;

    let buckets = bucket_monthly(&records);
    let series_set = monthly_means(
        &records,
        &features,
        &buckets,
        config.cleaning.min_samples_per_month,
    )
    .map_err(PipelineError::Aggregate)?;
    let series_set =
        group_composites(series_set, &config.groups).map_err(PipelineError::Groups)?;
    let series_set = match &traffic {
        Some(traffic) => attach_control(series_set, traffic).map_err(PipelineError::Control)?,
        None => series_set,
    };

    assemble_report(series_set, cleaning, load_report, loaded, config)
}

fn is_constant(values: &[f64]) -> bool {
    values.iter().all(|v| *v == values[0])
}

fn assemble_report(
    series_set: MonthlySeriesSet,
    cleaning: CleaningReport,
    load_report: Option<LoadReport>,
    records_loaded: usize,
    config: &PipelineConfig,
) -> Result<GraReport, PipelineError> {
    let reference = RawSeries::higher_better("pageviews", series_set.reference.clone());
    let mut degenerate = Vec::new();

    // Features plus the control enter one normalization context; constant
    // series are set aside by name instead of failing the run.
    let mut comparatives = Vec::new();
    for feature in FeatureId::ALL {
        let values = series_set.features[&feature].clone();
        if is_constant(&values) {
            degenerate.push(feature.id().to_string());
            continue;
        }
        comparatives.push(RawSeries::new(
            feature.id(),
            values,
            config.direction_of(feature),
        ));
    }
    if let Some(control) = &series_set.control {
        if is_constant(control) {
            degenerate.push(CONTROL_SERIES.to_string());
        } else {
            comparatives.push(RawSeries::higher_better(CONTROL_SERIES, control.clone()));
        }
    }
    let feature_results = run_gra(&reference, &comparatives, &config.gra)?;

    let mut control_row = None;
    let mut feature_rows = Vec::new();
    for result in feature_results {
        if result.name == CONTROL_SERIES {
            control_row = Some(ControlRow {
                name: result.name,
                grade: result.grade,
                class: result.influence,
            });
            continue;
        }
        let feature: FeatureId = result
            .name
            .parse()
            .expect("feature series are named by feature id");
        feature_rows.push(FeatureRow {
            // Ranks are reassigned below once the control is out.
            rank: 0,
            feature: result.name,
            grade: result.grade,
            class: result.influence,
            group: config
                .groups
                .group_of(feature)
                .expect("groups partition the scale")
                .to_string(),
        });
    }
    for (index, row) in feature_rows.iter_mut().enumerate() {
        row.rank = index + 1;
    }

    // Groups run against a fresh normalization context.
    let mut group_comparatives = Vec::new();
    for (name, values) in &series_set.groups {
        if is_constant(values) {
            degenerate.push(name.clone());
            continue;
        }
        group_comparatives.push(RawSeries::higher_better(name.clone(), values.clone()));
    }
    let group_rows: Vec<GroupRow> = run_gra(&reference, &group_comparatives, &config.gra)?
        .into_iter()
        .map(|result| GroupRow {
            group: result.name,
            grade: result.grade,
            class: result.influence,
        })
        .collect();

    let metadata = ReportMetadata {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        delta: config.gra.delta,
        months: series_set.months.iter().map(|m| m.to_string()).collect(),
        records_loaded,
        records_retained: cleaning.retained,
        dropped_anonymous: cleaning.dropped_anonymous,
        dropped_outliers: cleaning.dropped_outliers,
        outlier_removals: cleaning
            .bounds
            .iter()
            .map(|b| (b.feature.id().to_string(), b.flagged))
            .collect(),
        load_skipped: load_report.map(|r| r.skipped.len()).unwrap_or(0),
        low_sample_warnings: series_set
            .low_sample_months
            .iter()
            .map(|(month, count)| {
                format!(
                    "{month}: {count} records (threshold {})",
                    config.cleaning.min_samples_per_month
                )
            })
            .collect(),
        degenerate_series: degenerate,
        config_echo: config.echo(),
    };

    Ok(GraReport {
        feature_rows,
        group_rows,
        control_row,
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{render_report, OutputFormat};
    use crate::synth::{gen_corpus, SynthSpec};

    fn test_corpus() -> Vec<QuestionRecord> {
        gen_corpus(&SynthSpec {
            months: 4,
            records_per_month: 150,
            seed: 11,
            ..SynthSpec::default()
        })
        .unwrap()
    }

    fn test_config() -> PipelineConfig {
        PipelineConfig::default()
    }

    #[test]
    fn full_run_ranks_all_fifteen_features() {
        let report = run_pipeline_records(test_corpus(), None, &test_config()).unwrap();
        assert_eq!(report.feature_rows.len(), 15);
        assert_eq!(report.group_rows.len(), 5);
        assert!(report.control_row.is_none());
        assert!(report.metadata.degenerate_series.is_empty());

        let ranks: Vec<usize> = report.feature_rows.iter().map(|r| r.rank).collect();
        assert_eq!(ranks, (1..=15).collect::<Vec<_>>());
        for pair in report.feature_rows.windows(2) {
            assert!(pair[0].grade >= pair[1].grade);
        }
        for row in &report.feature_rows {
            assert!(report.group_rows.iter().any(|g| g.group == row.group));
        }
    }

    #[test]
    fn control_is_graded_but_not_ranked() {
        let records = test_corpus();
        let months: std::collections::BTreeSet<String> = records
            .iter()
            .map(|r| ingest::Month::of(&r.created_at).to_string())
            .collect();
        let csv = std::iter::once("month,visits".to_string())
            .chain(
                months
                    .iter()
                    .enumerate()
                    .map(|(i, m)| format!("{m},{}", 1000 + 137 * i)),
            )
            .collect::<Vec<_>>()
            .join("\n");
        let traffic = ingest::parse_traffic(&csv).unwrap();

        let report = run_pipeline_records(records, Some(traffic), &test_config()).unwrap();
        let control = report.control_row.expect("control graded");
        assert_eq!(control.name, CONTROL_SERIES);
        assert_eq!(report.feature_rows.len(), 15);
        assert!(report
            .feature_rows
            .iter()
            .all(|row| row.feature != CONTROL_SERIES));
    }

    #[test]
    fn degenerate_feature_is_dropped_and_named() {
        let mut records = test_corpus();
        // Force a constant column: nobody has a badge.
        for record in &mut records {
            record.questioner.badge_count = 0;
        }
        let report = run_pipeline_records(records, None, &test_config()).unwrap();
        assert_eq!(report.feature_rows.len(), 14);
        assert_eq!(
            report.metadata.degenerate_series,
            vec!["badge_indicator".to_string()]
        );
        let ranks: Vec<usize> = report.feature_rows.iter().map(|r| r.rank).collect();
        assert_eq!(ranks, (1..=14).collect::<Vec<_>>());
    }

    #[test]
    fn empty_records_file_fails_at_load_stage() {
        let file = tempfile::NamedTempFile::new().unwrap();
        let err = run_pipeline(file.path(), None, &test_config()).unwrap_err();
        assert_eq!(err.stage(), "load");
        assert!(err.to_string().starts_with("load:"));
    }

    #[test]
    fn missing_traffic_month_fails_at_control_stage() {
        let records = test_corpus();
        let traffic = ingest::parse_traffic("month,visits\n2017-01,5\n").unwrap();
        let err = run_pipeline_records(records, Some(traffic), &test_config()).unwrap_err();
        assert_eq!(err.stage(), "control");
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let records = test_corpus();
        let mut config = test_config();
        config.workers = Some(1);
        let single = run_pipeline_records(records.clone(), None, &config).unwrap();
        config.workers = Some(8);
        let parallel = run_pipeline_records(records, None, &config).unwrap();
        assert_eq!(
            render_report(&single, OutputFormat::StructuredObject),
            render_report(&parallel, OutputFormat::StructuredObject)
        );
    }
}
