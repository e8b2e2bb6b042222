//! Report assembly and rendering. Three output shapes: an aligned plain-text
//! table pair, a comma-separated dump, and a structured JSON document that
//! carries every report field. Table formats print grades to exactly six
//! decimal places.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::FeatureId;
use crate::gra::InfluenceClass;

/// Name used for the platform-traffic control series in reports.
pub const CONTROL_SERIES: &str = "platform_traffic";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write '{path}': {source}")]
    WriteFailure {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid report document: {0}")]
    Parse(String),
}

/// One ranked feature, with the group it belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub rank: usize,
    pub feature: String,
    pub grade: f64,
    pub class: InfluenceClass,
    pub group: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRow {
    pub group: String,
    pub grade: f64,
    pub class: InfluenceClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlRow {
    pub name: String,
    pub grade: f64,
    pub class: InfluenceClass,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub tool_version: String,
    pub delta: f64,
    pub months: Vec<String>,
    pub records_loaded: usize,
    pub records_retained: usize,
    pub dropped_anonymous: usize,
    pub dropped_outliers: usize,
    /// Per-feature outlier flag counts from cleaning.
    pub outlier_removals: Vec<(String, usize)>,
    pub load_skipped: usize,
    pub low_sample_warnings: Vec<String>,
    /// Series excluded from the analysis because they were constant.
    pub degenerate_series: Vec<String>,
    pub config_echo: Vec<(String, String)>,
}

/// The full analysis result: ranked features, ranked groups, the optional
/// control grade, and run metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraReport {
    pub feature_rows: Vec<FeatureRow>,
    pub group_rows: Vec<GroupRow>,
    pub control_row: Option<ControlRow>,
    pub metadata: ReportMetadata,
}

impl GraReport {
    /// Row content without metadata; what the comma-separated format carries.
    pub fn rows_eq(&self, other: &GraReport) -> bool {
        self.feature_rows == other.feature_rows
            && self.group_rows == other.group_rows
            && self.control_row == other.control_row
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    PlainTable,
    CommaSeparated,
    StructuredObject,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "table" | "md" | "plain" => Ok(Self::PlainTable),
            "csv" => Ok(Self::CommaSeparated),
            "json" => Ok(Self::StructuredObject),
            other => Err(format!(
                "unknown format '{other}' (expected table, csv or json)"
            )),
        }
    }
}

fn display_label(name: &str) -> String {
    if name == CONTROL_SERIES {
        return "Platform traffic".into();
    }
    match FeatureId::from_str(name) {
        Ok(feature) => feature.label().to_string(),
        Err(_) => name.to_string(),
    }
}

fn grade_str(grade: f64) -> String {
    format!("{grade:.6}")
}

fn render_table(columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = columns.iter().map(|c| c.len()).collect();
    for row in rows {
        for (width, cell) in widths.iter_mut().zip(row) {
            *width = (*width).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let format_row = |cells: &[String], widths: &[usize]| {
        cells
            .iter()
            .zip(widths)
            .map(|(cell, width)| format!("{cell:<width$}"))
            .collect::<Vec<_>>()
            .join(" | ")
            .trim_end()
            .to_string()
    };
    let header: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
    out.push_str(&format_row(&header, &widths));
    out.push('\n');
    out.push_str(
        &widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .join("-+-"),
    );
    out.push('\n');
    for row in rows {
        out.push_str(&format_row(row, &widths));
        out.push('\n');
    }
    out
}

fn render_plain(report: &GraReport) -> String {
    let feature_rows: Vec<Vec<String>> = report
        .feature_rows
        .iter()
        .map(|row| {
            vec![
                row.rank.to_string(),
                display_label(&row.feature),
                grade_str(row.grade),
                row.class.label().to_string(),
            ]
        })
        .collect();
    let group_rows: Vec<Vec<String>> = report
        .group_rows
        .iter()
        .map(|row| {
            vec![
                row.group.clone(),
                grade_str(row.grade),
                row.class.label().to_string(),
            ]
        })
        .collect();

    let mut out = String::new();
    out.push_str("Question quality features by grey relational grade\n\n");
    out.push_str(&render_table(
        &["Rank", "Feature", "Grade", "Class"],
        &feature_rows,
    ));
    out.push_str("\nFeature groups by grey relational grade\n\n");
    out.push_str(&render_table(&["Group", "Grade", "Class"], &group_rows));
    if let Some(control) = &report.control_row {
        out.push_str(&format!(
            "\nControl series: {} | {} | {}\n",
            display_label(&control.name),
            grade_str(control.grade),
            control.class.label()
        ));
    }

    let meta = &report.metadata;
    out.push('\n');
    if !meta.months.is_empty() {
        out.push_str(&format!(
            "months: {} ({}..{})\n",
            meta.months.len(),
            meta.months.first().unwrap(),
            meta.months.last().unwrap()
        ));
    }
    out.push_str(&format!("delta: {}\n", meta.delta));
    out.push_str(&format!(
        "records: {} loaded, {} retained ({} anonymous dropped, {} outliers dropped, {} lines skipped)\n",
        meta.records_loaded,
        meta.records_retained,
        meta.dropped_anonymous,
        meta.dropped_outliers,
        meta.load_skipped
    ));
    for warning in &meta.low_sample_warnings {
        out.push_str(&format!("warning: {warning}\n"));
    }
    for name in &meta.degenerate_series {
        out.push_str(&format!(
            "warning: series '{name}' was constant and left out of the analysis\n"
        ));
    }
    out
}

fn render_csv(report: &GraReport) -> String {
    let mut out = String::from("rank,feature,grade,class,group\n");
    for row in &report.feature_rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.rank,
            row.feature,
            grade_str(row.grade),
            row.class.token(),
            row.group
        ));
    }
    out.push_str("\ngroup,grade,class\n");
    for row in &report.group_rows {
        out.push_str(&format!(
            "{},{},{}\n",
            row.group,
            grade_str(row.grade),
            row.class.token()
        ));
    }
    if let Some(control) = &report.control_row {
        out.push_str("\ncontrol,grade,class\n");
        out.push_str(&format!(
            "{},{},{}\n",
            control.name,
            grade_str(control.grade),
            control.class.token()
        ));
    }
    out
}

/// Render the report in the requested shape. Pure: identical inputs give
/// identical bytes.
pub fn render_report(report: &GraReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::PlainTable => render_plain(report),
        OutputFormat::CommaSeparated => render_csv(report),
        OutputFormat::StructuredObject => {
            let mut text =
                serde_json::to_string_pretty(report).expect("report serialization is infallible");
            text.push('\n');
            text
        }
    }
}

pub fn parse_json_report(text: &str) -> Result<GraReport, ReportError> {
    serde_json::from_str(text).map_err(|e| ReportError::Parse(e.to_string()))
}

/// Parse the comma-separated shape back into a report. The metadata block is
/// not part of that format, so it comes back defaulted; the ranked rows and
/// grades (at their printed six-decimal precision) round-trip exactly.
pub fn parse_csv_report(text: &str) -> Result<GraReport, ReportError> {
    let mut feature_rows = Vec::new();
    let mut group_rows = Vec::new();
    let mut control_row = None;

    #[derive(PartialEq)]
    enum Block {
        None,
        Features,
        Groups,
        Control,
    }
    let mut block = Block::None;
    for (index, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() {
            block = Block::None;
            continue;
        }
        match line {
            "rank,feature,grade,class,group" => {
                block = Block::Features;
                continue;
            }
            "group,grade,class" => {
                block = Block::Groups;
                continue;
            }
            "control,grade,class" => {
                block = Block::Control;
                continue;
            }
            _ => {}
        }
        let fail = |reason: &str| ReportError::Parse(format!("line {}: {reason}", index + 1));
        let fields: Vec<&str> = line.split(',').collect();
        match block {
            Block::None => return Err(fail("content outside any block header")),
            Block::Features => {
                if fields.len() != 5 {
                    return Err(fail("expected rank,feature,grade,class,group"));
                }
                feature_rows.push(FeatureRow {
                    rank: fields[0].parse().map_err(|_| fail("bad rank"))?,
                    feature: fields[1].to_string(),
                    grade: fields[2].parse().map_err(|_| fail("bad grade"))?,
                    class: fields[3].parse().map_err(|_| fail("bad class"))?,
                    group: fields[4].to_string(),
                });
            }
            Block::Groups => {
                if fields.len() != 3 {
                    return Err(fail("expected group,grade,class"));
                }
                group_rows.push(GroupRow {
                    group: fields[0].to_string(),
                    grade: fields[1].parse().map_err(|_| fail("bad grade"))?,
                    class: fields[2].parse().map_err(|_| fail("bad class"))?,
                });
            }
            Block::Control => {
                if fields.len() != 3 {
                    return Err(fail("expected control,grade,class"));
                }
                control_row = Some(ControlRow {
                    name: fields[0].to_string(),
                    grade: fields[1].parse().map_err(|_| fail("bad grade"))?,
                    class: fields[2].parse().map_err(|_| fail("bad class"))?,
                });
            }
        }
    }
    if feature_rows.is_empty() {
        return Err(ReportError::Parse("no feature rows found".into()));
    }
    Ok(GraReport {
        feature_rows,
        group_rows,
        control_row,
        metadata: ReportMetadata::default(),
    })
}

/// Bar-chart data: `feature,grade` sorted by grade descending, six decimals.
pub fn emit_plot_data(report: &GraReport, out_path: &Path) -> Result<(), ReportError> {
    let mut out = String::from("feature,grade\n");
    for row in &report.feature_rows {
        out.push_str(&format!("{},{}\n", row.feature, grade_str(row.grade)));
    }
    fs::write(out_path, out).map_err(|source| ReportError::WriteFailure {
        path: out_path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_feature_report() -> GraReport {
        GraReport {
            feature_rows: vec![
                FeatureRow {
                    rank: 1,
                    feature: "follower_count".into(),
                    grade: 0.970055,
                    class: InfluenceClass::Marked,
                    group: "Digital popularity".into(),
                },
                FeatureRow {
                    rank: 2,
                    feature: "comment_count".into(),
                    grade: 0.96664,
                    class: InfluenceClass::Marked,
                    group: "Digital popularity".into(),
                },
            ],
            group_rows: vec![GroupRow {
                group: "Digital popularity".into(),
                grade: 0.946191,
                class: InfluenceClass::Marked,
            }],
            control_row: Some(ControlRow {
                name: CONTROL_SERIES.into(),
                grade: 0.901234,
                class: InfluenceClass::Marked,
            }),
            metadata: ReportMetadata {
                tool_version: "0.1.0".into(),
                delta: 0.5,
                months: vec!["2017-01".into(), "2017-02".into()],
                records_loaded: 10,
                records_retained: 9,
                ..ReportMetadata::default()
            },
        }
    }

    #[test]
    fn plain_table_shows_labels_and_six_decimals() {
        let text = render_report(&two_feature_report(), OutputFormat::PlainTable);
        assert!(text.contains("Follower count"));
        assert!(text.contains("0.970055"));
        assert!(text.contains("0.966640"));
        assert!(text.contains("Platform traffic"));
        let first_data_line = text
            .lines()
            .find(|l| l.starts_with("1 "))
            .expect("rank 1 row");
        assert!(first_data_line.contains("| Follower count"));
    }

    #[test]
    fn csv_round_trips_row_content() {
        let report = two_feature_report();
        let text = render_report(&report, OutputFormat::CommaSeparated);
        let parsed = parse_csv_report(&text).unwrap();
        assert!(report.rows_eq(&parsed));
    }

    #[test]
    fn csv_round_trips_without_control() {
        let mut report = two_feature_report();
        report.control_row = None;
        let text = render_report(&report, OutputFormat::CommaSeparated);
        let parsed = parse_csv_report(&text).unwrap();
        assert!(report.rows_eq(&parsed));
    }

    #[test]
    fn json_round_trips_everything() {
        let report = two_feature_report();
        let text = render_report(&report, OutputFormat::StructuredObject);
        let parsed = parse_json_report(&text).unwrap();
        assert_eq!(report, parsed);
    }

    #[test]
    fn rendering_is_pure() {
        let report = two_feature_report();
        for format in [
            OutputFormat::PlainTable,
            OutputFormat::CommaSeparated,
            OutputFormat::StructuredObject,
        ] {
            assert_eq!(render_report(&report, format), render_report(&report, format));
        }
    }

    #[test]
    fn two_feature_report_has_consecutive_ranks() {
        let report = two_feature_report();
        let ranks: Vec<usize> = report.feature_rows.iter().map(|r| r.rank).collect();
        assert_eq!(ranks, [1, 2]);
    }

    #[test]
    fn plot_data_keeps_six_decimal_precision() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plot.csv");
        emit_plot_data(&two_feature_report(), &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("feature,grade"));
        assert_eq!(lines.next(), Some("follower_count,0.970055"));
        assert_eq!(lines.next(), Some("comment_count,0.966640"));
    }

    #[test]
    fn format_parsing_accepts_aliases() {
        assert_eq!("md".parse::<OutputFormat>().unwrap(), OutputFormat::PlainTable);
        assert_eq!("table".parse::<OutputFormat>().unwrap(), OutputFormat::PlainTable);
        assert_eq!("csv".parse::<OutputFormat>().unwrap(), OutputFormat::CommaSeparated);
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::StructuredObject);
        assert!("yaml".parse::<OutputFormat>().is_err());
    }

    #[test]
    fn bad_csv_is_rejected() {
        assert!(parse_csv_report("no headers here").is_err());
        assert!(parse_csv_report("rank,feature,grade,class,group\n1,a,x,marked,g\n").is_err());
    }
}
