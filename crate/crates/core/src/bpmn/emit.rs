use std::fmt::Write as _;

use super::{Node, NodeKind, ProcessGraph, Resolution};
use crate::xml::{escape, escape_text, join_list};

/// Writes the implemented-output document.
///
/// Output is a pure function of the graph: nodes then flows, each in document
/// order, fixed attribute order, two-space indentation, LF line endings.
pub fn emit_implemented(graph: &ProcessGraph) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = write!(out, "<process id=\"{}\"", escape(&graph.id));
    if !graph.inputs.is_empty() {
        let _ = write!(out, " inputs=\"{}\"", escape(&join_list(&graph.inputs)));
    }
    out.push_str(">\n");
    for node in &graph.nodes {
        emit_node(&mut out, node);
    }
    for e in &graph.edges {
        let _ = writeln!(
            out,
            "  <sequenceFlow id=\"{}\" source=\"{}\" target=\"{}\"/>",
            escape(&e.id),
            escape(&e.source),
            escape(&e.target)
        );
    }
    out.push_str("</process>\n");
    out
}

fn emit_node(out: &mut String, node: &Node) {
    let _ = write!(out, "  <{} id=\"{}\"", node.kind.element_name(), escape(&node.id));
    if !node.name.is_empty() {
        let _ = write!(out, " name=\"{}\"", escape(&node.name));
    }
    if node.kind != NodeKind::Task {
        out.push_str("/>\n");
        return;
    }
    out.push_str(">\n");
    let _ = writeln!(out, "    <description>{}</description>", escape_text(&node.description));
    if let Some(io) = &node.io {
        let _ = writeln!(
            out,
            "    <io inputs=\"{}\" outputs=\"{}\"/>",
            escape(&join_list(&io.inputs)),
            escape(&join_list(&io.outputs))
        );
    }
    match &node.resolution {
        Some(Resolution::Bound(b)) => {
            let services: Vec<&str> = b.services.iter().map(String::as_str).collect();
            let _ = writeln!(
                out,
                "    <binding kind=\"{}\" services=\"{}\" score=\"{:.2}\" qos=\"{}\"/>",
                b.kind.as_str(),
                escape(&services.join(",")),
                b.score,
                b.qos
            );
        }
        Some(Resolution::Unresolved(reason)) => {
            let _ = writeln!(out, "    <unresolved reason=\"{reason}\"/>");
        }
        None => {}
    }
    out.push_str("  </task>\n");
}
