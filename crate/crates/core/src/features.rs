//! The 15-feature question quality measurement scale: social counters copied
//! from the record plus textual features computed from the title, detail and
//! best answer. Fields that need a best answer are `None` when the record has
//! no answers; `None` is a value here, not an error.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::record::{Answer, QuestionRecord};
use crate::text::{grapheme_count, raw_token_count, tokens, Lexicon};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeatureError {
    #[error("title is empty")]
    EmptyTitle,
    #[error("question or answer text is empty")]
    EmptyText,
    #[error("best answer has zero length")]
    ZeroLengthAnswer,
    #[error("best answer predates the question")]
    NegativeLatency,
}

/// Identifier of one scale feature. The `id` form appears in config keys and
/// machine-readable output; the `label` form is the human table heading.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum FeatureId {
    FollowerCount,
    CommentCount,
    AnswerCount,
    BestAnswerLatencyDays,
    QuestionerFollowerCount,
    EndorsementThanks,
    EndorsementVoteup,
    BadgeIndicator,
    QuestionerAnswerCount,
    TitleLength,
    DetailLength,
    UrlCount,
    QaLengthRatio,
    NonstopOverlapRatio,
    WhTypeWordRatio,
}

impl FeatureId {
    pub const ALL: [FeatureId; 15] = [
        FeatureId::FollowerCount,
        FeatureId::CommentCount,
        FeatureId::AnswerCount,
        FeatureId::BestAnswerLatencyDays,
        FeatureId::QuestionerFollowerCount,
        FeatureId::EndorsementThanks,
        FeatureId::EndorsementVoteup,
        FeatureId::BadgeIndicator,
        FeatureId::QuestionerAnswerCount,
        FeatureId::TitleLength,
        FeatureId::DetailLength,
        FeatureId::UrlCount,
        FeatureId::QaLengthRatio,
        FeatureId::NonstopOverlapRatio,
        FeatureId::WhTypeWordRatio,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::FollowerCount => "follower_count",
            Self::CommentCount => "comment_count",
            Self::AnswerCount => "answer_count",
            Self::BestAnswerLatencyDays => "best_answer_latency_days",
            Self::QuestionerFollowerCount => "questioner_follower_count",
            Self::EndorsementThanks => "endorsement_thanks",
            Self::EndorsementVoteup => "endorsement_voteup",
            Self::BadgeIndicator => "badge_indicator",
            Self::QuestionerAnswerCount => "questioner_answer_count",
            Self::TitleLength => "title_length",
            Self::DetailLength => "detail_length",
            Self::UrlCount => "url_count",
            Self::QaLengthRatio => "qa_length_ratio",
            Self::NonstopOverlapRatio => "nonstop_overlap_ratio",
            Self::WhTypeWordRatio => "wh_type_word_ratio",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::FollowerCount => "Follower count",
            Self::CommentCount => "Comment count",
            Self::AnswerCount => "Answer count",
            Self::BestAnswerLatencyDays => "Best answer received time (Days)",
            Self::QuestionerFollowerCount => "Questioner follower count",
            Self::EndorsementThanks => "User endorsement (thanks)",
            Self::EndorsementVoteup => "User endorsement (vote up)",
            Self::BadgeIndicator => "Badge",
            Self::QuestionerAnswerCount => "Questioner answer count",
            Self::TitleLength => "Title length",
            Self::DetailLength => "Question detail length",
            Self::UrlCount => "URL count",
            Self::QaLengthRatio => "Question and best answer length ratio",
            Self::NonstopOverlapRatio => "Nonstop word ratio",
            Self::WhTypeWordRatio => "Wh-type work ratio",
        }
    }

    /// Whether the 3-sigma outlier rule applies. Counts, lengths and latency
    /// qualify; the bounded ratio features and the badge flag are exempt.
    pub fn outlier_eligible(self) -> bool {
        !matches!(
            self,
            Self::BadgeIndicator
                | Self::QaLengthRatio
                | Self::NonstopOverlapRatio
                | Self::WhTypeWordRatio
        )
    }
}

impl std::str::FromStr for FeatureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FeatureId::ALL
            .iter()
            .copied()
            .find(|f| f.id() == s)
            .ok_or_else(|| format!("unknown feature '{s}'"))
    }
}

impl std::fmt::Display for FeatureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Unit used for title length and wh-word counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountingMode {
    /// Extended grapheme clusters; suits unsegmented scripts.
    Characters,
    /// Whitespace-separated tokens.
    WhitespaceTokens,
}

/// Which reading of the non-stop-word feature to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapMode {
    /// Distinct non-stop question tokens that also occur in the best answer,
    /// over the question token count.
    AnswerOverlap,
    /// Non-stop question tokens over the question token count, ignoring the
    /// answer entirely.
    NonStopFraction,
}

/// The computed scale for one question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub follower_count: u64,
    pub comment_count: u64,
    pub answer_count: u64,
    pub best_answer_latency_days: Option<f64>,
    pub questioner_follower_count: u64,
    pub endorsement_thanks: u64,
    pub endorsement_voteup: u64,
    pub badge_indicator: u8,
    pub questioner_answer_count: u64,
    pub title_length: u64,
    pub detail_length: u64,
    pub url_count: u64,
    pub qa_length_ratio: Option<f64>,
    pub nonstop_overlap_ratio: Option<f64>,
    pub wh_type_word_ratio: f64,
}

impl FeatureVector {
    /// Numeric view of a feature; `None` means the record had no best answer.
    pub fn get(&self, id: FeatureId) -> Option<f64> {
        match id {
            FeatureId::FollowerCount => Some(self.follower_count as f64),
            FeatureId::CommentCount => Some(self.comment_count as f64),
            FeatureId::AnswerCount => Some(self.answer_count as f64),
            FeatureId::BestAnswerLatencyDays => self.best_answer_latency_days,
            FeatureId::QuestionerFollowerCount => Some(self.questioner_follower_count as f64),
            FeatureId::EndorsementThanks => Some(self.endorsement_thanks as f64),
            FeatureId::EndorsementVoteup => Some(self.endorsement_voteup as f64),
            FeatureId::BadgeIndicator => Some(self.badge_indicator as f64),
            FeatureId::QuestionerAnswerCount => Some(self.questioner_answer_count as f64),
            FeatureId::TitleLength => Some(self.title_length as f64),
            FeatureId::DetailLength => Some(self.detail_length as f64),
            FeatureId::UrlCount => Some(self.url_count as f64),
            FeatureId::QaLengthRatio => self.qa_length_ratio,
            FeatureId::NonstopOverlapRatio => self.nonstop_overlap_ratio,
            FeatureId::WhTypeWordRatio => Some(self.wh_type_word_ratio),
        }
    }
}

/// Title length in the configured unit. Token counting is over raw
/// whitespace-separated chunks.
pub fn title_length(title: &str, mode: CountingMode) -> Result<u64, FeatureError> {
    if title.trim().is_empty() {
        return Err(FeatureError::EmptyTitle);
    }
    Ok(match mode {
        CountingMode::Characters => grapheme_count(title) as u64,
        CountingMode::WhitespaceTokens => raw_token_count(title) as u64,
    })
}

/// Grapheme count of the detail body; the empty detail is 0.
pub fn detail_length(detail: &str) -> u64 {
    grapheme_count(detail) as u64
}

/// Non-overlapping substrings starting with `http://` or `https://` followed
/// by at least one non-whitespace character. Bare domains never count.
pub fn url_count(text: &str) -> u64 {
    let mut count = 0u64;
    let mut rest = text;
    while let Some(pos) = rest.find("http") {
        rest = &rest[pos..];
        let after_scheme = if let Some(r) = rest.strip_prefix("https://") {
            Some(r)
        } else {
            rest.strip_prefix("http://")
        };
        match after_scheme {
            Some(tail) if tail.chars().next().is_some_and(|c| !c.is_whitespace()) => {
                count += 1;
                // Consume the whole link so its tail cannot re-match.
                let link_end = tail.find(char::is_whitespace).unwrap_or(tail.len());
                rest = &tail[link_end..];
            }
            _ => {
                rest = &rest[4..];
            }
        }
    }
    count
}

/// Share of the title taken up by wh-lexicon matches, in the unit of `mode`.
/// Token mode counts matching tokens; character mode greedily matches lexicon
/// entries anywhere in the title and each match contributes its grapheme
/// length.
pub fn wh_ratio(title: &str, wh_words: &Lexicon, mode: CountingMode) -> Result<f64, FeatureError> {
    if title.trim().is_empty() {
        return Err(FeatureError::EmptyTitle);
    }
    match mode {
        CountingMode::WhitespaceTokens => {
            let total = raw_token_count(title);
            let matched = tokens(title).filter(|t| wh_words.contains(t)).count();
            Ok(matched as f64 / total as f64)
        }
        CountingMode::Characters => {
            let graphemes: Vec<&str> =
                unicode_segmentation::UnicodeSegmentation::graphemes(title, true).collect();
            // Longest entry first so 为什么 wins over 什么 at the same spot.
            let mut entries: Vec<Vec<String>> = wh_words
                .entries()
                .map(|e| {
                    unicode_segmentation::UnicodeSegmentation::graphemes(e, true)
                        .map(str::to_string)
                        .collect()
                })
                .collect();
            entries.sort_by_key(|e| std::cmp::Reverse(e.len()));

            let mut matched = 0usize;
            let mut i = 0usize;
            while i < graphemes.len() {
                let hit = entries.iter().find_map(|entry| {
                    let k = entry.len();
                    if i + k <= graphemes.len()
                        && graphemes[i..i + k]
                            .iter()
                            .zip(entry)
                            .all(|(g, e)| g.to_lowercase() == *e)
                    {
                        Some(k)
                    } else {
                        None
                    }
                });
                match hit {
                    Some(k) => {
                        matched += k;
                        i += k;
                    }
                    None => i += 1,
                }
            }
            Ok(matched as f64 / graphemes.len() as f64)
        }
    }
}

/// Question/answer token overlap, or the literal non-stop fraction, over the
/// question token count.
pub fn nonstop_overlap_ratio(
    question_text: &str,
    best_answer_text: &str,
    stopwords: &Lexicon,
    mode: OverlapMode,
) -> Result<f64, FeatureError> {
    if question_text.trim().is_empty() || best_answer_text.trim().is_empty() {
        return Err(FeatureError::EmptyText);
    }
    let total = raw_token_count(question_text) as f64;
    let matched = match mode {
        OverlapMode::AnswerOverlap => {
            let answer_tokens: HashSet<String> =
                tokens(best_answer_text).map(|t| t.into_owned()).collect();
            let mut seen = HashSet::new();
            let mut hits = 0usize;
            for token in tokens(question_text) {
                if stopwords.contains(&token) {
                    continue;
                }
                if seen.insert(token.clone().into_owned()) && answer_tokens.contains(token.as_ref())
                {
                    hits += 1;
                }
            }
            hits
        }
        OverlapMode::NonStopFraction => tokens(question_text)
            .filter(|t| !stopwords.contains(t))
            .count(),
    };
    Ok(matched as f64 / total)
}

/// Question length over best-answer length; `None` passes through when there
/// is no best answer.
pub fn qa_length_ratio(
    question_length: u64,
    best_answer_length: Option<u64>,
) -> Result<Option<f64>, FeatureError> {
    match best_answer_length {
        None => Ok(None),
        Some(0) => Err(FeatureError::ZeroLengthAnswer),
        Some(len) => Ok(Some(question_length as f64 / len as f64)),
    }
}

/// The answer with the maximum vote-up count; ties go to the earliest
/// submission. The platform has no accepted-answer flag, so vote-ups stand in
/// for the quality signal.
pub fn best_answer(record: &QuestionRecord) -> Option<&Answer> {
    let mut best: Option<&Answer> = None;
    for answer in &record.answers {
        match best {
            None => best = Some(answer),
            Some(current) => {
                if answer.voteup_count > current.voteup_count
                    || (answer.voteup_count == current.voteup_count
                        && answer.created_at < current.created_at)
                {
                    best = Some(answer);
                }
            }
        }
    }
    best
}

/// Days from question posting to the best answer posting, as a real.
pub fn best_answer_latency_days(record: &QuestionRecord) -> Result<Option<f64>, FeatureError> {
    match best_answer(record) {
        None => Ok(None),
        Some(answer) => {
            let millis = (answer.created_at - record.created_at).num_milliseconds();
            if millis < 0 {
                return Err(FeatureError::NegativeLatency);
            }
            Ok(Some(millis as f64 / 86_400_000.0))
        }
    }
}

/// Compute the full scale for one validated record.
pub fn extract_features(
    record: &QuestionRecord,
    stopwords: &Lexicon,
    wh_words: &Lexicon,
    mode: CountingMode,
    overlap_mode: OverlapMode,
) -> Result<FeatureVector, FeatureError> {
    let title_len = title_length(&record.title, mode)?;
    let detail_len = detail_length(&record.detail);
    let question_text = if record.detail.trim().is_empty() {
        record.title.clone()
    } else {
        format!("{} {}", record.title, record.detail)
    };

    let best = best_answer(record);
    let (latency, qa_ratio, overlap) = match best {
        None => (None, None, None),
        Some(answer) => {
            let latency = best_answer_latency_days(record)?;
            // Size ratio is grapheme-based regardless of the counting mode.
            let question_graphemes = grapheme_count(&record.title) as u64 + detail_len;
            let answer_graphemes = grapheme_count(&answer.content) as u64;
            let ratio = qa_length_ratio(question_graphemes, Some(answer_graphemes))?;
            let overlap =
                nonstop_overlap_ratio(&question_text, &answer.content, stopwords, overlap_mode)?;
            (latency, ratio, Some(overlap))
        }
    };

    Ok(FeatureVector {
        follower_count: record.follower_count,
        comment_count: record.comment_count,
        answer_count: record.answers.len() as u64,
        best_answer_latency_days: latency,
        questioner_follower_count: record.questioner.follower_count,
        endorsement_thanks: record.questioner.thanks_received,
        endorsement_voteup: record.questioner.voteup_received,
        badge_indicator: u8::from(record.questioner.badge_count > 0),
        questioner_answer_count: record.questioner.answer_count,
        title_length: title_len,
        detail_length: detail_len,
        url_count: url_count(&question_text),
        qa_length_ratio: qa_ratio,
        nonstop_overlap_ratio: overlap,
        wh_type_word_ratio: wh_ratio(&record.title, wh_words, mode)?,
    })
}
