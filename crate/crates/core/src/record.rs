//! The question record as delivered by ingestion: one crawled question with
//! its answers, questioner metadata and pageview count.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecordError {
    #[error("qid must be positive")]
    InvalidQid,
    #[error("title is empty")]
    BlankTitle,
    #[error("answer {index} predates the question")]
    AnswerBeforeQuestion { index: usize },
    #[error("answer {index} has empty content")]
    BlankAnswerContent { index: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Answer {
    pub created_at: DateTime<Utc>,
    pub content: String,
    pub voteup_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Questioner {
    pub follower_count: u64,
    pub answer_count: u64,
    pub voteup_received: u64,
    pub thanks_received: u64,
    pub badge_count: u64,
    pub anonymous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionRecord {
    pub qid: u64,
    pub created_at: DateTime<Utc>,
    pub title: String,
    /// Question body; may be empty.
    pub detail: String,
    pub pageviews: u64,
    pub follower_count: u64,
    pub comment_count: u64,
    pub answers: Vec<Answer>,
    pub questioner: Questioner,
}

impl QuestionRecord {
    /// The invariants ingestion enforces before a record enters the pipeline.
    /// Feature extraction relies on them: a blank title or a best answer with
    /// empty content would otherwise surface mid-pipeline.
    pub fn validate(&self) -> Result<(), RecordError> {
        if self.qid == 0 {
            return Err(RecordError::InvalidQid);
        }
        if self.title.trim().is_empty() {
            return Err(RecordError::BlankTitle);
        }
        for (index, answer) in self.answers.iter().enumerate() {
            if answer.created_at < self.created_at {
                return Err(RecordError::AnswerBeforeQuestion { index });
            }
            if answer.content.trim().is_empty() {
                return Err(RecordError::BlankAnswerContent { index });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    pub(crate) fn sample_record() -> QuestionRecord {
        let t0 = Utc.with_ymd_and_hms(2017, 1, 5, 10, 0, 0).unwrap();
        QuestionRecord {
            qid: 1,
            created_at: t0,
            title: "What is grey analysis".into(),
            detail: "background detail".into(),
            pageviews: 100,
            follower_count: 3,
            comment_count: 1,
            answers: vec![Answer {
                created_at: t0 + chrono::Duration::hours(48),
                content: "grey relational analysis explained".into(),
                voteup_count: 5,
            }],
            questioner: Questioner {
                follower_count: 10,
                answer_count: 4,
                voteup_received: 20,
                thanks_received: 2,
                badge_count: 0,
                anonymous: false,
            },
        }
    }

    #[test]
    fn valid_record_passes() {
        assert!(sample_record().validate().is_ok());
    }

    #[test]
    fn rejects_zero_qid_and_blank_title() {
        let mut r = sample_record();
        r.qid = 0;
        assert_eq!(r.validate().unwrap_err(), RecordError::InvalidQid);
        let mut r = sample_record();
        r.title = "  ".into();
        assert_eq!(r.validate().unwrap_err(), RecordError::BlankTitle);
    }

    #[test]
    fn rejects_answer_before_question() {
        let mut r = sample_record();
        r.answers[0].created_at = r.created_at - chrono::Duration::hours(1);
        assert_eq!(
            r.validate().unwrap_err(),
            RecordError::AnswerBeforeQuestion { index: 0 }
        );
    }

    #[test]
    fn rejects_blank_answer_content() {
        let mut r = sample_record();
        r.answers[0].content = "".into();
        assert_eq!(
            r.validate().unwrap_err(),
            RecordError::BlankAnswerContent { index: 0 }
        );
    }

    #[test]
    fn timestamps_normalize_to_utc_on_parse() {
        let json = r#"{"qid":7,"created_at":"2017-01-05T18:00:00+08:00","title":"t","detail":"",
            "pageviews":1,"follower_count":0,"comment_count":0,"answers":[],
            "questioner":{"follower_count":0,"answer_count":0,"voteup_received":0,
            "thanks_received":0,"badge_count":0,"anonymous":false}}"#
            .replace('\n', "");
        let record: QuestionRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(
            record.created_at,
            Utc.with_ymd_and_hms(2017, 1, 5, 10, 0, 0).unwrap()
        );
    }
}
