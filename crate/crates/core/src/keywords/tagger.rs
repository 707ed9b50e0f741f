//! Lexicon and suffix-rule part-of-speech tagger.

use super::lexicon::Lexicon;
use super::stem::normalize;
use super::text::Token;
use super::Tag;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedToken {
    pub token: Token,
    pub tag: Tag,
}

/// Inflection-stripped spellings tried when the surface form is not listed.
fn lookup_variants(word: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut strip = |suffix: &str, add: &str| {
        if let Some(base) = word.strip_suffix(suffix) {
            if base.chars().count() >= 2 {
                out.push(format!("{base}{add}"));
            }
        }
    };
    strip("ies", "y");
    strip("ied", "y");
    strip("s", "");
    strip("es", "");
    strip("d", "");
    strip("ed", "");
    strip("ing", "");
    strip("ing", "e");
    out.push(normalize(word));
    out
}

fn suffix_tag(word: &str) -> Option<Tag> {
    if word.chars().next().is_some_and(|c| c.is_ascii_digit())
        && word.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',')
    {
        return Some(Tag::Num);
    }
    let singular = word.strip_suffix('s').unwrap_or(word);
    let ends = |sufs: &[&str]| sufs.iter().any(|s| word.ends_with(s) || singular.ends_with(s));
    if ends(&["tion", "ment", "ness", "ity"]) {
        Some(Tag::Noun)
    } else if ends(&["ize", "ify", "ate"]) {
        Some(Tag::Verb)
    } else if ends(&["ous", "ful", "able"]) {
        Some(Tag::Adj)
    } else {
        None
    }
}

/// Picks one reading of an ambiguous open-class word from its left context.
fn disambiguate(tags: &[Tag], index: usize, prev: Option<Tag>, det_next: bool) -> Tag {
    if tags.len() > 1 {
        let has = |t: Tag| tags.contains(&t);
        match prev {
            None if index == 0 && has(Tag::Verb) => return Tag::Verb,
            // "the invoice lists the items"
            Some(Tag::Noun) if det_next && has(Tag::Verb) => return Tag::Verb,
            Some(Tag::Det | Tag::Adj | Tag::Prep | Tag::Num) if has(Tag::Noun) => return Tag::Noun,
            Some(Tag::Pron) if has(Tag::Verb) => return Tag::Verb,
            _ => {}
        }
    }
    tags[0]
}

/// Tags the tokens of one sentence.
///
/// Lookup order: closed-class reading, open-class lexicon entry (surface,
/// then inflection-stripped forms), suffix rules, then the position default:
/// an unknown sentence-initial word is a verb, any other unknown word a noun.
pub fn pos_tag(lexicon: &Lexicon, tokens: Vec<Token>) -> Vec<TaggedToken> {
    let lowered: Vec<String> = tokens.iter().map(|t| t.surface.to_lowercase()).collect();
    let mut out: Vec<TaggedToken> = Vec::with_capacity(tokens.len());
    for (index, token) in tokens.into_iter().enumerate() {
        let lower = &lowered[index];
        let prev = out.last().map(|t| t.tag);
        let det_next = lowered.get(index + 1).is_some_and(|n| lexicon.closed_class(n) == Some(Tag::Det));
        let tag = if let Some(tag) = lexicon.closed_class(lower) {
            tag
        } else if let Some(tags) = lexicon
            .tags(lower)
            .or_else(|| lookup_variants(lower).iter().find_map(|v| lexicon.tags(v)))
        {
            disambiguate(tags, index, prev, det_next)
        } else if let Some(tag) = suffix_tag(lower) {
            tag
        } else if index == 0 || (prev == Some(Tag::Noun) && det_next && lower.ends_with('s')) {
            Tag::Verb
        } else {
            Tag::Noun
        };
        out.push(TaggedToken { token, tag });
    }
    out
}
