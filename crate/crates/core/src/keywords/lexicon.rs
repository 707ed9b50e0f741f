use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use super::Tag;

const BUILTIN: &str = include_str!("../../lexicon/en.tsv");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon `{}` could not be loaded: {source}", path.display())]
    Missing {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// Word → tag lookup. A word may carry several tags; the first listed is its
/// default reading.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Lexicon {
    entries: HashMap<String, Vec<Tag>>,
}

impl Lexicon {
    /// Parses `word<TAB>TAG` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut entries: HashMap<String, Vec<Tag>> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (word, tag) = raw
                .split_once('\t')
                .ok_or_else(|| LexiconError::Malformed { line, reason: "expected word<TAB>TAG".into() })?;
            let word = word.trim();
            if word.is_empty() || word.chars().any(|c| c.is_uppercase() || c.is_whitespace()) {
                return Err(LexiconError::Malformed { line, reason: format!("bad word `{word}`") });
            }
            let tag: Tag = tag
                .trim()
                .parse()
                .map_err(|_| LexiconError::Malformed { line, reason: format!("unknown tag `{}`", tag.trim()) })?;
            let tags = entries.entry(word.to_string()).or_default();
            if !tags.contains(&tag) {
                tags.push(tag);
            }
        }
        Ok(Self { entries })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| LexiconError::Missing { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    /// The lexicon shipped with the crate.
    pub fn builtin() -> Arc<Lexicon> {
        static LEXICON: OnceLock<Arc<Lexicon>> = OnceLock::new();
        LEXICON
            .get_or_init(|| Arc::new(Lexicon::parse(BUILTIN).expect("builtin lexicon is well-formed")))
            .clone()
    }

    pub fn tags(&self, word: &str) -> Option<&[Tag]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    /// Closed-class reading of `word`, which takes precedence over any other.
    pub fn closed_class(&self, word: &str) -> Option<Tag> {
        self.tags(word)?.iter().copied().find(|t| t.is_closed_class())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
