//! Tokenization, grapheme counting and lexicon files for the textual
//! features. Tokenization is deliberately minimal and language-agnostic:
//! split on Unicode whitespace, strip leading/trailing non-alphanumerics,
//! case-fold for matching. No segmentation, no stemming.

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use unicode_segmentation::UnicodeSegmentation;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon '{path}': {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("lexicon '{0}' has no entries")]
    Empty(String),
}

/// Extended grapheme cluster count.
pub fn grapheme_count(text: &str) -> usize {
    text.graphemes(true).count()
}

/// Number of whitespace-separated chunks, before any punctuation stripping.
/// This is the token denominator: punctuation-only chunks count toward it
/// even though they can never match a lexicon entry.
pub fn raw_token_count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Case-folded tokens with surrounding non-alphanumerics stripped. Chunks
/// that are all punctuation vanish.
pub fn tokens(text: &str) -> impl Iterator<Item = Cow<'_, str>> {
    text.split_whitespace().filter_map(|raw| {
        let stripped = raw.trim_matches(|c: char| !c.is_alphanumeric());
        if stripped.is_empty() {
            None
        } else if stripped.chars().any(char::is_uppercase) {
            Some(Cow::Owned(stripped.to_lowercase()))
        } else {
            Some(Cow::Borrowed(stripped))
        }
    })
}

/// A set of unique, case-folded lookup entries loaded from a word-list file
/// or baked in as a default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeSet<String>,
    source: String,
}

impl Lexicon {
    /// One entry per line; `#` lines and blank lines are ignored; entries are
    /// trimmed of surrounding whitespace and case-folded.
    pub fn from_path(path: &Path) -> Result<Self, LexiconError> {
        let content = fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_lines(&path.display().to_string(), content.lines())
    }

    pub fn from_lines<'a>(
        source: &str,
        lines: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self, LexiconError> {
        let entries: BTreeSet<String> = lines
            .into_iter()
            .map(str::trim)
            .filter(|line| !line.is_empty() && !line.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        if entries.is_empty() {
            return Err(LexiconError::Empty(source.to_string()));
        }
        Ok(Self {
            entries,
            source: source.to_string(),
        })
    }

    pub fn builtin_wh_words() -> Self {
        Self::from_lines("<built-in wh words>", BUILTIN_WH_WORDS.iter().copied())
            .expect("built-in list is non-empty")
    }

    pub fn builtin_stopwords() -> Self {
        Self::from_lines("<built-in stopwords>", BUILTIN_STOPWORDS.iter().copied())
            .expect("built-in list is non-empty")
    }

    /// Membership test; the argument must already be case-folded.
    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains(token)
    }

    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// English interrogatives plus common Chinese question words. Replace via
/// the `wh_words_path` config key when the corpus needs a different list.
const BUILTIN_WH_WORDS: &[&str] = &[
    "what", "why", "where", "when", "who", "which", "how", "什么", "为什么", "如何", "哪", "谁",
    "怎么", "何时",
];

/// Small bilingual function-word list for the overlap feature. Replace via
/// the `stopwords_path` config key.
const BUILTIN_STOPWORDS: &[&str] = &[
    "a", "an", "the", "is", "are", "was", "were", "be", "been", "being", "am", "do", "does",
    "did", "to", "of", "in", "on", "at", "by", "for", "with", "about", "and", "or", "but", "not",
    "no", "so", "if", "then", "than", "it", "its", "this", "that", "these", "those", "i", "you",
    "he", "she", "we", "they", "me", "my", "your", "his", "her", "our", "their", "what", "why",
    "where", "when", "who", "which", "how", "can", "could", "will", "would", "should", "的",
    "了", "是", "在", "我", "你", "他", "她", "它", "们", "这", "那", "吗", "呢", "啊", "和",
    "与", "或", "也", "都", "很", "就", "不", "没", "有",
];
