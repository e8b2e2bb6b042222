//! File ingestion: line-delimited question records and the monthly traffic
//! table. Malformed record lines are reported with their line number rather
//! than aborting the whole load; traffic problems are hard errors.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Datelike, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::record::QuestionRecord;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read '{path}': {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write '{path}': {source}")]
    WriteIo {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("no valid records in input")]
    EmptyDataset,
    #[error("traffic file must start with a 'month,visits' header")]
    MalformedHeader,
    #[error("traffic row {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("duplicate traffic month {0}")]
    DuplicateMonth(Month),
}

/// A calendar month in UTC, the bucket key of the whole pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Month {
    pub year: i32,
    pub month: u32,
}

impl Month {
    pub fn new(year: i32, month: u32) -> Option<Self> {
        (1..=12).contains(&month).then_some(Self { year, month })
    }

    pub fn of(timestamp: &DateTime<Utc>) -> Self {
        Self {
            year: timestamp.year(),
            month: timestamp.month(),
        }
    }

    pub fn plus_months(self, offset: u32) -> Self {
        let zero_based = self.month - 1 + offset;
        Self {
            year: self.year + (zero_based / 12) as i32,
            month: zero_based % 12 + 1,
        }
    }
}

impl std::fmt::Display for Month {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl std::str::FromStr for Month {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (year, month) = s
            .split_once('-')
            .ok_or_else(|| format!("'{s}' is not YYYY-MM"))?;
        let year: i32 = year.parse().map_err(|_| format!("bad year in '{s}'"))?;
        let month: u32 = month.parse().map_err(|_| format!("bad month in '{s}'"))?;
        Month::new(year, month).ok_or_else(|| format!("month out of range in '{s}'"))
    }
}

impl Serialize for Month {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Month {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A line that failed to load, with the 1-based line number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineIssue {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadReport {
    pub total_lines: usize,
    pub loaded: usize,
    pub skipped: Vec<LineIssue>,
}

/// Parse one record per line. Well-formed lines become records; anything
/// else lands in the report. Duplicate qids keep the first occurrence.
pub fn load_records(path: &Path) -> Result<(Vec<QuestionRecord>, LoadReport), IngestError> {
    let content = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut records = Vec::new();
    let mut report = LoadReport::default();
    let mut seen_qids = HashSet::new();
    for (index, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        report.total_lines += 1;
        let line_no = index + 1;
        match serde_json::from_str::<QuestionRecord>(line) {
            Err(err) => report.skipped.push(LineIssue {
                line: line_no,
                reason: err.to_string(),
            }),
            Ok(record) => match record.validate() {
                Err(err) => report.skipped.push(LineIssue {
                    line: line_no,
                    reason: err.to_string(),
                }),
                Ok(()) => {
                    if seen_qids.insert(record.qid) {
                        records.push(record);
                        report.loaded += 1;
                    } else {
                        report.skipped.push(LineIssue {
                            line: line_no,
                            reason: format!("duplicate qid {}", record.qid),
                        });
                    }
                }
            },
        }
    }
    if records.is_empty() {
        return Err(IngestError::EmptyDataset);
    }
    Ok((records, report))
}

/// Write records in the load format, one JSON object per line.
pub fn write_records(path: &Path, records: &[QuestionRecord]) -> Result<(), IngestError> {
    let mut buffer = Vec::new();
    for record in records {
        serde_json::to_writer(&mut buffer, record).expect("record serialization is infallible");
        buffer.push(b'\n');
    }
    let mut file = fs::File::create(path).map_err(|source| IngestError::WriteIo {
        path: path.to_path_buf(),
        source,
    })?;
    file.write_all(&buffer).map_err(|source| IngestError::WriteIo {
        path: path.to_path_buf(),
        source,
    })
}

/// Platform-wide monthly visit counts, the optional control series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficSeries {
    points: Vec<(Month, u64)>,
}

impl TrafficSeries {
    /// Build from unordered points; sorts ascending and rejects duplicates.
    pub fn new(mut points: Vec<(Month, u64)>) -> Result<Self, IngestError> {
        points.sort_by_key(|(month, _)| *month);
        for pair in points.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(IngestError::DuplicateMonth(pair[0].0));
            }
        }
        Ok(Self { points })
    }

    pub fn visits(&self, month: Month) -> Option<u64> {
        self.points
            .binary_search_by_key(&month, |(m, _)| *m)
            .ok()
            .map(|i| self.points[i].1)
    }

    pub fn points(&self) -> &[(Month, u64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Read the `month,visits` comma-separated table.
pub fn load_traffic(path: &Path) -> Result<TrafficSeries, IngestError> {
    let content = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_traffic(&content)
}

pub fn parse_traffic(content: &str) -> Result<TrafficSeries, IngestError> {
    let mut lines = content.lines().enumerate();
    let header = lines
        .next()
        .map(|(_, l)| l.trim())
        .ok_or(IngestError::MalformedHeader)?;
    if header != "month,visits" {
        return Err(IngestError::MalformedHeader);
    }
    let mut points = Vec::new();
    for (index, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let line_no = index + 1;
        let (month, visits) = line.split_once(',').ok_or(IngestError::MalformedRow {
            line: line_no,
            reason: "expected two comma-separated columns".into(),
        })?;
        let month: Month = month.trim().parse().map_err(|e| IngestError::MalformedRow {
            line: line_no,
            reason: e,
        })?;
        let visits: u64 = visits
            .trim()
            .parse()
            .map_err(|_| IngestError::MalformedRow {
                line: line_no,
                reason: format!("'{}' is not a visit count", visits.trim()),
            })?;
        points.push((month, visits));
    }
    TrafficSeries::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    use crate::record::{Answer, Questioner};

    fn record(qid: u64) -> QuestionRecord {
        let t0 = Utc.with_ymd_and_hms(2017, 1, 5, 10, 0, 0).unwrap();
        QuestionRecord {
            qid,
            created_at: t0,
            title: "t".into(),
            detail: "".into(),
            pageviews: 1,
            follower_count: 0,
            comment_count: 0,
            answers: vec![Answer {
                created_at: t0 + chrono::Duration::hours(1),
                content: "a".into(),
                voteup_count: 0,
            }],
            questioner: Questioner {
                follower_count: 0,
                answer_count: 0,
                voteup_received: 0,
                thanks_received: 0,
                badge_count: 0,
                anonymous: false,
            },
        }
    }

    fn write_lines(lines: &[String]) -> tempfile::NamedTempFile {
        let file = tempfile::NamedTempFile::new().unwrap();
        fs::write(file.path(), lines.join("\n")).unwrap();
        file
    }

    #[test]
    fn loads_valid_lines() {
        let lines: Vec<String> = (1..=3)
            .map(|i| serde_json::to_string(&record(i)).unwrap())
            .collect();
        let file = write_lines(&lines);
        let (records, report) = load_records(file.path()).unwrap();
        assert_eq!(records.len(), 3);
        assert!(report.skipped.is_empty());
        assert_eq!(report.loaded, 3);
    }

    #[test]
    fn bad_timestamp_is_reported_with_line_number() {
        let good = serde_json::to_string(&record(1)).unwrap();
        let bad = good.replace("2017-01-05T10:00:00Z", "not-a-time");
        let file = write_lines(&[good, bad]);
        let (records, report) = load_records(file.path()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(report.skipped.len(), 1);
        assert_eq!(report.skipped[0].line, 2);
    }

    #[test]
    fn duplicate_qid_keeps_first() {
        let lines = vec![
            serde_json::to_string(&record(9)).unwrap(),
            serde_json::to_string(&record(9)).unwrap(),
        ];
        let file = write_lines(&lines);
        let (records, report) = load_records(file.path()).unwrap();
        assert_eq!(records.len(), 1);
        assert!(report.skipped[0].reason.contains("duplicate qid 9"));
    }

    #[test]
    fn empty_file_is_empty_dataset() {
        let file = write_lines(&[String::new()]);
        assert!(matches!(
            load_records(file.path()),
            Err(IngestError::EmptyDataset)
        ));
    }

    #[test]
    fn unknown_fields_are_ignored_missing_fields_reject() {
        let mut value: serde_json::Value =
            serde_json::to_value(record(1)).unwrap();
        value["extra_field"] = serde_json::json!("ignored");
        let with_extra = serde_json::to_string(&value).unwrap();
        value.as_object_mut().unwrap().remove("pageviews");
        let missing = serde_json::to_string(&value).unwrap();
        let file = write_lines(&[with_extra, missing]);
        let (records, report) = load_records(file.path()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(report.skipped.len(), 1);
        assert!(report.skipped[0].reason.contains("pageviews"));
    }

    #[test]
    fn records_round_trip_through_files() {
        let out = tempfile::NamedTempFile::new().unwrap();
        let originals: Vec<QuestionRecord> = (1..=4).map(record).collect();
        write_records(out.path(), &originals).unwrap();
        let (loaded, _) = load_records(out.path()).unwrap();
        assert_eq!(loaded, originals);
    }

    #[test]
    fn traffic_happy_path() {
        let series = parse_traffic("month,visits\n2017-01,100\n2017-02,120\n").unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series.visits("2017-02".parse().unwrap()), Some(120));
    }

    #[test]
    fn traffic_duplicate_month() {
        let err = parse_traffic("month,visits\n2017-01,100\n2017-01,120\n").unwrap_err();
        assert!(matches!(err, IngestError::DuplicateMonth(m) if m.to_string() == "2017-01"));
    }

    #[test]
    fn traffic_malformed_row_names_line() {
        let err = parse_traffic("month,visits\n2017-01,lots\n").unwrap_err();
        match err {
            IngestError::MalformedRow { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn traffic_sorts_ascending() {
        let series = parse_traffic("month,visits\n2017-03,3\n2017-01,1\n").unwrap();
        let months: Vec<String> = series.points().iter().map(|(m, _)| m.to_string()).collect();
        assert_eq!(months, ["2017-01", "2017-03"]);
    }

    #[test]
    fn month_arithmetic_and_parse() {
        let m: Month = "2017-11".parse().unwrap();
        assert_eq!(m.plus_months(3).to_string(), "2018-02");
        assert!("2017-13".parse::<Month>().is_err());
        assert!("2017".parse::<Month>().is_err());
    }
}
