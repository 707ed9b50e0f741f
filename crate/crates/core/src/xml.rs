//! Small helpers shared by the XML readers and writers.

use std::collections::BTreeSet;

/// Escapes text for use in element content or a double-quoted attribute.
pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            _ => out.push(c),
        }
    }
    out
}

/// Escapes element content; newlines and tabs are kept literal.
pub(crate) fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
    out
}

/// Splits a comma-separated identifier list, trimming entries and dropping empties.
pub(crate) fn split_list(s: &str) -> BTreeSet<String> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::to_string).collect()
}

pub(crate) fn join_list<'a>(items: impl IntoIterator<Item = &'a String>) -> String {
    items.into_iter().map(String::as_str).collect::<Vec<_>>().join(",")
}

/// Whether the node is only insignificant whitespace, a comment or a PI.
pub(crate) fn is_ignorable(node: &roxmltree::Node<'_, '_>) -> bool {
    match node.node_type() {
        roxmltree::NodeType::Text => node.text().is_none_or(|t| t.trim().is_empty()),
        roxmltree::NodeType::Comment | roxmltree::NodeType::PI => true,
        _ => false,
    }
}
