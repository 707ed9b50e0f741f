//! Noun-phrase chunking over tag sequences.

use regex::Regex;
use thiserror::Error;

use super::tagger::TaggedToken;
use super::Tag;
use crate::config::DEFAULT_CHUNK_PATTERN;

#[derive(Debug, Error, PartialEq)]
#[error("invalid chunk pattern `{pattern}`: {reason}")]
pub struct ChunkPatternError {
    pub pattern: String,
    pub reason: String,
}

/// A chunked noun phrase; `start..end` indexes the tagged tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phrase {
    /// Normalized words joined by single spaces.
    pub text: String,
    /// Normalized final noun.
    pub head: String,
    pub start: usize,
    pub end: usize,
}

/// Tag pattern describing a noun phrase.
///
/// The built-in `(ADJ|N)*N` runs as a direct scan; any other pattern over tag
/// names with `( ) | * + ?` is compiled to a regex over one code per token.
#[derive(Clone, Debug, Default)]
pub enum ChunkPattern {
    #[default]
    AdjNounRun,
    Custom(Regex),
}


fn tag_code(tag: Tag) -> char {
    match tag {
        Tag::Noun => 'n',
        Tag::Verb => 'v',
        Tag::Adj => 'a',
        Tag::Det => 'd',
        Tag::Prep => 'p',
        Tag::Pron => 'r',
        Tag::Conj => 'c',
        Tag::Num => 'm',
        Tag::Other => 'o',
    }
}

impl ChunkPattern {
    pub fn parse(pattern: &str) -> Result<Self, ChunkPatternError> {
        let compact: String = pattern.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == DEFAULT_CHUNK_PATTERN {
            return Ok(ChunkPattern::AdjNounRun);
        }
        let err = |reason: String| ChunkPatternError { pattern: pattern.to_string(), reason };
        let mut re = String::new();
        let chars: Vec<char> = compact.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                let tag: Tag = name.parse().map_err(|_| err(format!("unknown tag `{name}`")))?;
                re.push(tag_code(tag));
                continue;
            }
            if !matches!(c, '(' | ')' | '|' | '*' | '+' | '?') {
                return Err(err(format!("unexpected character `{c}`")));
            }
            re.push(c);
            i += 1;
        }
        if re.is_empty() {
            return Err(err("empty pattern".into()));
        }
        Regex::new(&re).map(ChunkPattern::Custom).map_err(|e| err(e.to_string()))
    }

    /// Token spans of the maximal, non-overlapping matches, left to right.
    fn spans(&self, tags: &[Tag]) -> Vec<(usize, usize)> {
        match self {
            ChunkPattern::AdjNounRun => {
                let mut spans = Vec::new();
                let mut i = 0;
                while i < tags.len() {
                    if !matches!(tags[i], Tag::Adj | Tag::Noun) {
                        i += 1;
                        continue;
                    }
                    let start = i;
                    let mut last_noun = None;
                    while i < tags.len() && matches!(tags[i], Tag::Adj | Tag::Noun) {
                        if tags[i] == Tag::Noun {
                            last_noun = Some(i);
                        }
                        i += 1;
                    }
                    if let Some(last) = last_noun {
                        spans.push((start, last + 1));
                    }
                }
                spans
            }
            ChunkPattern::Custom(re) => {
                // every code is one ASCII byte, so byte offsets are token indices
                let codes: String = tags.iter().map(|&t| tag_code(t)).collect();
                re.find_iter(&codes).filter(|m| !m.is_empty()).map(|m| (m.start(), m.end())).collect()
            }
        }
    }

    /// Noun phrases of a tagged sentence. Matches without a noun are skipped.
    pub fn chunk(&self, tagged: &[TaggedToken]) -> Vec<Phrase> {
        let tags: Vec<Tag> = tagged.iter().map(|t| t.tag).collect();
        self.spans(&tags)
            .into_iter()
            .filter_map(|(start, end)| {
                let head_idx = (start..end).rev().find(|&i| tags[i] == Tag::Noun)?;
                let text = tagged[start..end]
                    .iter()
                    .map(|t| t.token.normalized.as_str())
                    .collect::<Vec<_>>()
                    .join(" ");
                Some(Phrase { text, head: tagged[head_idx].token.normalized.clone(), start, end })
            })
            .collect()
    }
}
