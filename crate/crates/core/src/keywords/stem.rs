//! Lowercasing suffix stripper used for every keyword comparison.

const SUFFIXES: [&str; 5] = ["ing", "ed", "es", "s", "ly"];
const MIN_STEM: usize = 3;

fn strip_once(word: &str) -> Option<&str> {
    let len = word.chars().count();
    SUFFIXES
        .iter()
        .find(|suf| word.ends_with(*suf) && len - suf.len() >= MIN_STEM)
        // "address", "class": a double s is not a plural
        .filter(|suf| !(**suf == "s" && word.ends_with("ss")))
        .map(|suf| &word[..word.len() - suf.len()])
}

/// Lowercases `word` and strips suffixes until none applies.
///
/// Stripping repeats to a fixpoint so the result is itself normalized.
pub fn normalize(word: &str) -> String {
    let mut w = word.to_lowercase();
    while let Some(stem) = strip_once(&w) {
        w = stem.to_string();
    }
    w
}
