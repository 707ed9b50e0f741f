//! Sentence splitting and tokenization.

use super::stem::normalize;

/// Words that end in a period without ending the sentence.
const ABBREVIATIONS: [&str; 14] =
    ["mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "e.g", "i.e", "inc", "ltd", "no"];

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '?' | '!')
}

fn is_closing(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

/// Whether the period at `chars[dot]` follows an abbreviation or a lone letter.
fn guarded_period(chars: &[char], dot: usize) -> bool {
    let mut start = dot;
    while start > 0 && !chars[start - 1].is_whitespace() {
        start -= 1;
    }
    let word: String = chars[start..dot].iter().collect::<String>().to_lowercase();
    let word = word.trim_start_matches(|c: char| !c.is_alphanumeric());
    (word.chars().count() == 1 && word.chars().all(char::is_alphabetic)) || ABBREVIATIONS.contains(&word)
}

/// Splits text on `.`, `?`, `!` and newlines.
///
/// Terminal punctuation ends a sentence only when followed by whitespace or
/// the end of input, and a period after a single letter or a known
/// abbreviation is never a boundary. Sentences keep their delimiters and are
/// trimmed; blank segments are dropped.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut start = 0;
    let push = |from: usize, to: usize, out: &mut Vec<String>| {
        let s: String = chars[from..to].iter().collect();
        let s = s.trim();
        if !s.is_empty() {
            out.push(s.to_string());
        }
    };
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            push(start, i, &mut out);
            start = i + 1;
            i += 1;
            continue;
        }
        if is_terminal(c) {
            let mut end = i;
            while end < chars.len() && is_terminal(chars[end]) {
                end += 1;
            }
            while end < chars.len() && is_closing(chars[end]) {
                end += 1;
            }
            let at_break = end == chars.len() || chars[end].is_whitespace();
            let lone_period = c == '.' && end == i + 1;
            if at_break && !(lone_period && guarded_period(&chars, i)) {
                push(start, end, &mut out);
                start = end;
            }
            i = end;
            continue;
        }
        i += 1;
    }
    push(start, chars.len(), &mut out);
    out
}

/// A word from a sentence, before tagging.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Lowercased, stemmed surface.
    pub normalized: String,
    /// Character index of the first character within the sentence.
    pub offset: usize,
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits a sentence into word tokens.
///
/// Punctuation is dropped. Hyphens between alphanumerics and `.`/`,` between
/// digits stay inside the token; clitics after an apostrophe (`'s`, `'t`) are
/// dropped.
pub fn tokenize(sentence: &str) -> Vec<Token> {
    let chars: Vec<char> = sentence.chars().collect();
    let joins = |i: usize| -> bool {
        let (prev, next) = (chars[i - 1], chars.get(i + 1).copied());
        match (chars[i], next) {
            ('-', Some(n)) => prev.is_alphanumeric() && n.is_alphanumeric(),
            ('.' | ',', Some(n)) => prev.is_ascii_digit() && n.is_ascii_digit(),
            _ => false,
        }
    };
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].is_alphanumeric() {
            i += 1;
            continue;
        }
        let start = i;
        i += 1;
        while i < chars.len() && (chars[i].is_alphanumeric() || joins(i)) {
            i += 1;
        }
        let surface: String = chars[start..i].iter().collect();
        tokens.push(Token { normalized: normalize(&surface), surface, offset: start });
        if i + 1 < chars.len() && is_apostrophe(chars[i]) && chars[i + 1].is_alphabetic() {
            i += 1;
            while i < chars.len() && chars[i].is_alphabetic() {
                i += 1;
            }
        }
    }
    tokens
}
