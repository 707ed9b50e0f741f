use std::collections::BTreeSet;

use roxmltree::{Document, Node as XmlNode};

use super::{
    validate, Binding, BindingKind, FlowEdge, ModelError, Node, NodeKind, ProcessGraph,
    Resolution, TaskIo, UnresolvedReason,
};
use crate::xml::{is_ignorable, split_list};

type Result<T> = std::result::Result<T, ModelError>;

fn violation(el: &XmlNode<'_, '_>, reason: impl Into<String>) -> ModelError {
    ModelError::SchemaViolation {
        element: el.tag_name().name().to_string(),
        id: el.attribute("id").map(str::to_string),
        reason: reason.into(),
    }
}

fn check_attributes(el: &XmlNode<'_, '_>, allowed: &[&str]) -> Result<()> {
    for attr in el.attributes() {
        if attr.namespace().is_some() || !allowed.contains(&attr.name()) {
            return Err(violation(el, format!("unexpected attribute `{}`", attr.name())));
        }
    }
    Ok(())
}

fn required<'a>(el: &XmlNode<'a, '_>, name: &str) -> Result<&'a str> {
    el.attribute(name)
        .ok_or_else(|| violation(el, format!("missing required attribute `{name}`")))
}

/// Element children, rejecting stray text.
fn element_children<'a, 'i>(el: &XmlNode<'a, 'i>) -> Result<Vec<XmlNode<'a, 'i>>> {
    let mut out = Vec::new();
    for child in el.children() {
        if child.is_element() {
            out.push(child);
        } else if !is_ignorable(&child) {
            return Err(violation(el, "unexpected text content"));
        }
    }
    Ok(out)
}

/// Parses a design (or implemented) process document into a validated graph.
///
/// Task descriptions are kept exactly as decoded from the XML text, including
/// surrounding and internal whitespace.
pub fn parse_design(xml_text: &str) -> Result<ProcessGraph> {
    let doc = Document::parse(xml_text).map_err(|e| ModelError::MalformedXml(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "process" {
        return Err(violation(&root, "root element must be <process>"));
    }
    check_attributes(&root, &["id", "inputs"])?;
    let mut graph = ProcessGraph {
        id: required(&root, "id")?.to_string(),
        inputs: root.attribute("inputs").map(split_list).unwrap_or_default(),
        ..ProcessGraph::default()
    };

    for child in element_children(&root)? {
        let name = child.tag_name().name();
        if name == "sequenceFlow" {
            check_attributes(&child, &["id", "source", "target"])?;
            if !element_children(&child)?.is_empty() {
                return Err(violation(&child, "sequenceFlow takes no children"));
            }
            graph.edges.push(FlowEdge::new(
                required(&child, "id")?,
                required(&child, "source")?,
                required(&child, "target")?,
            ));
            continue;
        }
        let kind = NodeKind::from_element_name(name)
            .ok_or_else(|| violation(&child, "unknown element"))?;
        check_attributes(&child, &["id", "name"])?;
        let mut node = Node::new(required(&child, "id")?, kind);
        node.name = child.attribute("name").unwrap_or_default().to_string();
        if kind == NodeKind::Task {
            parse_task_body(&child, &mut node)?;
        } else if !element_children(&child)?.is_empty() {
            return Err(violation(&child, "only tasks take child elements"));
        }
        graph.nodes.push(node);
    }

    if let Some(diag) = validate(&graph).into_iter().next() {
        return Err(ModelError::GraphInvalid(diag));
    }
    Ok(graph)
}

fn parse_task_body(el: &XmlNode<'_, '_>, node: &mut Node) -> Result<()> {
    let mut description = None;
    for child in element_children(el)? {
        match child.tag_name().name() {
            "description" => {
                if description.is_some() {
                    return Err(violation(el, "more than one <description>"));
                }
                check_attributes(&child, &[])?;
                let mut text = String::new();
                for part in child.children() {
                    if part.is_element() {
                        return Err(violation(&child, "description must be plain text"));
                    }
                    if part.is_text() {
                        text.push_str(part.text().unwrap_or_default());
                    }
                }
                description = Some(text);
            }
            "io" => {
                if node.io.is_some() {
                    return Err(violation(el, "more than one <io>"));
                }
                check_attributes(&child, &["inputs", "outputs"])?;
                node.io = Some(TaskIo {
                    inputs: child.attribute("inputs").map(split_list).unwrap_or_default(),
                    outputs: child.attribute("outputs").map(split_list).unwrap_or_default(),
                });
            }
            "binding" => {
                if node.resolution.is_some() {
                    return Err(violation(el, "more than one resolution"));
                }
                node.resolution = Some(Resolution::Bound(parse_binding(&child)?));
            }
            "unresolved" => {
                if node.resolution.is_some() {
                    return Err(violation(el, "more than one resolution"));
                }
                check_attributes(&child, &["reason"])?;
                let reason = UnresolvedReason::parse(required(&child, "reason")?)
                    .ok_or_else(|| violation(&child, "unknown reason"))?;
                node.resolution = Some(Resolution::Unresolved(reason));
            }
            _ => return Err(violation(&child, "unknown element")),
        }
    }
    node.description = description.ok_or_else(|| violation(el, "task requires a <description>"))?;
    Ok(())
}

fn parse_binding(el: &XmlNode<'_, '_>) -> Result<Binding> {
    check_attributes(el, &["kind", "services", "score", "qos"])?;
    let kind = match required(el, "kind")? {
        "single" => BindingKind::Single,
        "composite" => BindingKind::Composite,
        other => return Err(violation(el, format!("unknown binding kind `{other}`"))),
    };
    let services: Vec<String> = required(el, "services")?
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    let arity_ok = match kind {
        BindingKind::Single => services.len() == 1,
        BindingKind::Composite => services.len() >= 2,
    };
    if !arity_ok {
        return Err(violation(el, "service count does not fit the binding kind"));
    }
    let score: f64 = required(el, "score")?
        .parse()
        .ok()
        .filter(|s: &f64| (0.0..=1.0).contains(s))
        .ok_or_else(|| violation(el, "score must be a number in [0,1]"))?;
    let qos: i64 =
        required(el, "qos")?.parse().map_err(|_| violation(el, "qos must be an integer"))?;
    Ok(Binding { kind, services, matched_concepts: BTreeSet::new(), qos, score })
}

#[cfg(test)]
mod tests {
    use super::super::DiagnosticCode;
    use super::*;

    const MINIMAL: &str = r#"<process id="p">
  <startEvent id="s"/>
  <task id="t1" name="Invoice"><description>send invoice</description></task>
  <endEvent id="e"/>
  <sequenceFlow id="f1" source="s" target="t1"/>
  <sequenceFlow id="f2" source="t1" target="e"/>
</process>"#;

    #[test]
    fn minimal_instance() {
        let g = parse_design(MINIMAL).unwrap();
        assert_eq!(g.nodes.len(), 3);
        assert_eq!(g.edges.len(), 2);
        let t1 = g.node("t1").unwrap();
        assert_eq!(t1.description, "send invoice");
        assert!(t1.resolution.is_none());
        assert!(g.inputs.is_empty());
    }

    #[test]
    fn truncated_input_is_malformed() {
        assert!(matches!(parse_design("<process"), Err(ModelError::MalformedXml(_))));
    }

    #[test]
    fn description_whitespace_is_preserved() {
        let xml = MINIMAL.replace("send invoice", "  send\n\t the   invoice &amp; receipt ");
        let g = parse_design(&xml).unwrap();
        assert_eq!(g.node("t1").unwrap().description, "  send\n\t the   invoice & receipt ");
    }

    #[test]
    fn schema_violations() {
        let cases = [
            MINIMAL.replace("<endEvent id=\"e\"/>", "<endEvent id=\"e\"/><lane id=\"l\"/>"),
            MINIMAL.replace("<task id=\"t1\"", "<task"),
            MINIMAL.replace("<description>send invoice</description>", ""),
            MINIMAL.replace("source=\"s\"", ""),
            MINIMAL.replace("<startEvent id=\"s\"/>", "<startEvent id=\"s\" color=\"red\"/>"),
            MINIMAL.replace("<process id=\"p\">", "<process id=\"p\">stray"),
        ];
        for xml in cases {
            assert!(
                matches!(parse_design(&xml), Err(ModelError::SchemaViolation { .. })),
                "{xml}"
            );
        }
    }

    #[test]
    fn graph_violations_carry_the_id() {
        let xml = MINIMAL.replace(
            "<endEvent id=\"e\"/>",
            "<endEvent id=\"e\"/><task id=\"t9\"><description>x</description></task>",
        );
        match parse_design(&xml) {
            Err(ModelError::GraphInvalid(d)) => {
                assert_eq!(d.code, DiagnosticCode::Unreachable);
                assert_eq!(d.id, "t9");
            }
            other => panic!("unexpected {other:?}"),
        }
        let xml = MINIMAL.replace("source=\"t1\" target=\"e\"", "source=\"t1\" target=\"t1\"");
        assert!(matches!(parse_design(&xml), Err(ModelError::GraphInvalid(_))));
    }

    #[test]
    fn io_and_process_inputs() {
        let xml = MINIMAL
            .replace("<process id=\"p\">", "<process id=\"p\" inputs=\"order, customer\">")
            .replace("</description>", "</description><io inputs=\"order\" outputs=\"invoice\"/>");
        let g = parse_design(&xml).unwrap();
        assert_eq!(g.inputs.len(), 2);
        let io = g.node("t1").unwrap().io.clone().unwrap();
        assert!(io.inputs.contains("order"));
        assert!(io.outputs.contains("invoice"));
    }

    #[test]
    fn resolutions_are_read_back() {
        let xml = MINIMAL.replace(
            "</description>",
            "</description><binding kind=\"single\" services=\"svc-mail\" score=\"0.75\" qos=\"-2\"/>",
        );
        let g = parse_design(&xml).unwrap();
        let b = g.node("t1").unwrap().binding().unwrap();
        assert_eq!(b.services, ["svc-mail"]);
        assert_eq!(b.qos, -2);
        let bad = xml.replace("kind=\"single\"", "kind=\"composite\"");
        assert!(matches!(parse_design(&bad), Err(ModelError::SchemaViolation { .. })));
    }
}
