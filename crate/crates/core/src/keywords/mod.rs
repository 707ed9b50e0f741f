//! Keyword extraction: sentence splitting, tokenization, rule-based tagging,
//! and noun-phrase chunking, reduced to normalized verbs and noun phrases.

mod chunk;
mod lexicon;
mod stem;
mod tagger;
mod text;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

pub use chunk::{ChunkPattern, ChunkPatternError, Phrase};
pub use lexicon::{Lexicon, LexiconError};
pub use stem::normalize;
pub use tagger::{pos_tag, TaggedToken};
pub use text::{split_sentences, tokenize, Token};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Noun,
    Verb,
    Adj,
    Det,
    Prep,
    Pron,
    Conj,
    Num,
    Other,
}

impl Tag {
    pub const ALL: [Tag; 9] =
        [Tag::Noun, Tag::Verb, Tag::Adj, Tag::Det, Tag::Prep, Tag::Pron, Tag::Conj, Tag::Num, Tag::Other];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Noun => "N",
            Tag::Verb => "V",
            Tag::Adj => "ADJ",
            Tag::Det => "DET",
            Tag::Prep => "PREP",
            Tag::Pron => "PRON",
            Tag::Conj => "CONJ",
            Tag::Num => "NUM",
            Tag::Other => "OTHER",
        }
    }

    pub fn is_closed_class(self) -> bool {
        matches!(self, Tag::Det | Tag::Prep | Tag::Pron | Tag::Conj)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Tag::ALL.into_iter().find(|t| t.as_str() == s).ok_or(())
    }
}

#[derive(Debug, Error)]
pub enum KeywordError {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    ChunkPattern(#[from] ChunkPatternError),
}

/// Normalized keywords of one text.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KeywordSet {
    pub verbs: BTreeSet<String>,
    pub noun_phrases: BTreeSet<String>,
    /// Final noun of each noun phrase.
    pub head_nouns: BTreeSet<String>,
}

impl KeywordSet {
    /// Verbs and noun phrases together, each term once.
    pub fn terms(&self) -> BTreeSet<&str> {
        self.verbs.iter().chain(&self.noun_phrases).map(String::as_str).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.verbs.is_empty() && self.noun_phrases.is_empty()
    }

    /// Order-independent identity: sorted terms joined by `|`.
    pub fn canonical_key(&self) -> String {
        self.terms().into_iter().collect::<Vec<_>>().join("|")
    }
}

/// Keywords in order of appearance, duplicates kept.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Occurrences {
    pub verbs: Vec<String>,
    pub phrases: Vec<Phrase>,
}

impl Occurrences {
    pub fn to_keyword_set(&self) -> KeywordSet {
        KeywordSet {
            verbs: self.verbs.iter().cloned().collect(),
            noun_phrases: self.phrases.iter().map(|p| p.text.clone()).collect(),
            head_nouns: self.phrases.iter().map(|p| p.head.clone()).collect(),
        }
    }
}

const AUXILIARIES: [&str; 17] = [
    "be", "am", "is", "are", "was", "were", "been", "being", "have", "has", "had", "having", "do",
    "does", "did", "done", "doing",
];

/// Extraction pipeline bound to a lexicon and a chunk pattern.
#[derive(Clone, Debug)]
pub struct Extractor {
    lexicon: Arc<Lexicon>,
    pattern: ChunkPattern,
}

impl Default for Extractor {
    fn default() -> Self {
        Self { lexicon: Lexicon::builtin(), pattern: ChunkPattern::default() }
    }
}

impl Extractor {
    pub fn new(lexicon: Arc<Lexicon>, chunk_pattern: &str) -> Result<Self, KeywordError> {
        Ok(Self { lexicon, pattern: ChunkPattern::parse(chunk_pattern)? })
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    /// Tagged tokens of every sentence in `text`.
    pub fn tag_sentences(&self, text: &str) -> Vec<Vec<TaggedToken>> {
        split_sentences(text).iter().map(|s| pos_tag(&self.lexicon, tokenize(s))).collect()
    }

    pub fn occurrences(&self, text: &str) -> Occurrences {
        let mut occ = Occurrences::default();
        for tagged in self.tag_sentences(text) {
            for t in &tagged {
                if t.tag == Tag::Verb && !AUXILIARIES.contains(&t.token.surface.to_lowercase().as_str()) {
                    occ.verbs.push(t.token.normalized.clone());
                }
            }
            occ.phrases.extend(self.pattern.chunk(&tagged));
        }
        occ
    }

    pub fn extract(&self, text: &str) -> KeywordSet {
        self.occurrences(text).to_keyword_set()
    }
}

/// Extracts keywords with the built-in lexicon and default chunk pattern.
pub fn extract_keywords(text: &str) -> KeywordSet {
    Extractor::default().extract(text)
}
