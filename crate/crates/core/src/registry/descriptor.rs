use std::collections::BTreeSet;
use std::fmt::Write as _;

use chrono::NaiveDate;
use roxmltree::{Document, Node as XmlNode};

use super::{ComponentType, QosRecord, ServiceRecord};
use crate::xml::{escape, escape_text, is_ignorable};

type Result<T> = std::result::Result<T, String>;

fn attr<'a>(el: &XmlNode<'a, '_>, name: &str) -> Result<&'a str> {
    el.attribute(name)
        .ok_or_else(|| format!("<{}> is missing attribute `{name}`", el.tag_name().name()))
}

fn check_attributes(el: &XmlNode<'_, '_>, allowed: &[&str]) -> Result<()> {
    match el.attributes().find(|a| a.namespace().is_some() || !allowed.contains(&a.name())) {
        Some(a) => Err(format!("<{}> has unexpected attribute `{}`", el.tag_name().name(), a.name())),
        None => Ok(()),
    }
}

fn children<'a, 'i>(el: &XmlNode<'a, 'i>) -> Result<Vec<XmlNode<'a, 'i>>> {
    let mut out = Vec::new();
    for c in el.children() {
        if c.is_element() {
            out.push(c);
        } else if !is_ignorable(&c) {
            return Err(format!("<{}> has unexpected text", el.tag_name().name()));
        }
    }
    Ok(out)
}

fn count(el: &XmlNode<'_, '_>, name: &str) -> Result<u64> {
    attr(el, name)?.parse().map_err(|_| format!("`{name}` must be a nonnegative integer"))
}

/// Parses one service descriptor document.
pub fn parse_descriptor(text: &str) -> Result<ServiceRecord> {
    let doc = Document::parse(text).map_err(|e| format!("malformed XML: {e}"))?;
    let root = doc.root_element();
    if root.tag_name().name() != "service" {
        return Err("root element must be <service>".into());
    }
    check_attributes(&root, &["id", "publisher", "componentType", "url"])?;
    let id = attr(&root, "id")?.to_string();
    if id.trim().is_empty() || id.contains(',') {
        return Err("service id must be non-empty and contain no commas".into());
    }
    let component = attr(&root, "componentType")?;
    let component_type = ComponentType::parse(component)
        .ok_or_else(|| format!("unknown componentType `{component}`"))?;

    let mut description = None;
    let mut operation = None;
    let mut qos = QosRecord::default();
    let mut last_use = None;
    let mut saw_qos = false;
    for child in children(&root)? {
        match child.tag_name().name() {
            "description" if description.is_none() => {
                check_attributes(&child, &[])?;
                if child.children().any(|c| c.is_element()) {
                    return Err("<description> must be plain text".into());
                }
                let text: String =
                    child.children().filter(|c| c.is_text()).filter_map(|c| c.text()).collect();
                description = Some(text);
            }
            "operation" if operation.is_none() => {
                check_attributes(&child, &["name"])?;
                let name = attr(&child, "name")?.to_string();
                let mut inputs = BTreeSet::new();
                let mut outputs = BTreeSet::new();
                for io in children(&child)? {
                    let target = match io.tag_name().name() {
                        "input" => &mut inputs,
                        "output" => &mut outputs,
                        other => return Err(format!("unexpected <{other}> in <operation>")),
                    };
                    check_attributes(&io, &["type"])?;
                    let ty = attr(&io, "type")?.trim();
                    if ty.is_empty() || ty.contains(',') {
                        return Err("type concepts must be non-empty and contain no commas".into());
                    }
                    target.insert(ty.to_string());
                }
                operation = Some((name, inputs, outputs));
            }
            "qos" if !saw_qos => {
                saw_qos = true;
                check_attributes(&child, &["available", "calls", "responseSumMs", "lastUse"])?;
                qos = QosRecord::new(
                    count(&child, "available")?,
                    count(&child, "calls")?,
                    count(&child, "responseSumMs")?,
                )
                .ok_or("available exceeds calls")?;
                if let Some(date) = child.attribute("lastUse") {
                    last_use = Some(
                        NaiveDate::parse_from_str(date, "%Y-%m-%d")
                            .map_err(|_| format!("bad lastUse date `{date}`"))?,
                    );
                }
            }
            other => return Err(format!("unexpected or repeated <{other}>")),
        }
    }

    let description = description.ok_or("missing <description>")?;
    if description.trim().is_empty() {
        return Err("description must not be empty".into());
    }
    let (operation_name, inputs, outputs) = operation.ok_or("missing <operation>")?;
    if outputs.is_empty() {
        return Err("operation declares no outputs".into());
    }
    Ok(ServiceRecord {
        id,
        publisher: attr(&root, "publisher")?.to_string(),
        component_type,
        last_use,
        url: attr(&root, "url")?.to_string(),
        description,
        qos,
        operation_name,
        inputs,
        outputs,
    })
}

/// Writes a record back in descriptor form; `parse_descriptor` inverts it.
pub fn emit_descriptor(r: &ServiceRecord) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<service id=\"{}\" publisher=\"{}\" componentType=\"{}\" url=\"{}\">",
        escape(&r.id),
        escape(&r.publisher),
        r.component_type,
        escape(&r.url)
    );
    let _ = writeln!(out, "  <description>{}</description>", escape_text(&r.description));
    let _ = writeln!(out, "  <operation name=\"{}\">", escape(&r.operation_name));
    for t in &r.inputs {
        let _ = writeln!(out, "    <input type=\"{}\"/>", escape(t));
    }
    for t in &r.outputs {
        let _ = writeln!(out, "    <output type=\"{}\"/>", escape(t));
    }
    out.push_str("  </operation>\n");
    let _ = write!(
        out,
        "  <qos available=\"{}\" calls=\"{}\" responseSumMs=\"{}\"",
        r.qos.available, r.qos.calls, r.qos.response_sum_ms
    );
    if let Some(d) = r.last_use {
        let _ = write!(out, " lastUse=\"{}\"", d.format("%Y-%m-%d"));
    }
    out.push_str("/>\n</service>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::super::{Registry, RegistryError};
    use super::*;

    const EMAIL: &str = r#"<service id="svc-email" publisher="acme" componentType="callServiceTask" url="http://acme/email">
  <description>Send an email to the customer.</description>
  <operation name="EmailSender"><input type="address"/><output type="emailReceipt"/></operation>
</service>"#;

    #[test]
    fn one_descriptor_zeroed_qos() {
        let reg = Registry::load(&[EMAIL]).unwrap();
        assert_eq!(reg.len(), 1);
        let r = reg.get("svc-email").unwrap();
        assert_eq!(r.qos, QosRecord::default());
        assert_eq!(r.operation_name, "EmailSender");
        assert_eq!(r.last_use, None);
    }

    #[test]
    fn duplicate_ids() {
        assert_eq!(
            Registry::load(&[EMAIL, EMAIL]),
            Err(RegistryError::DuplicateServiceId("svc-email".into()))
        );
    }

    #[test]
    fn qos_element_is_read() {
        let text = EMAIL.replace(
            "</operation>",
            "</operation><qos available=\"4\" calls=\"5\" responseSumMs=\"900\" lastUse=\"2012-05-01\"/>",
        );
        let r = parse_descriptor(&text).unwrap();
        assert_eq!(r.qos, QosRecord::new(4, 5, 900).unwrap());
        assert_eq!(r.last_use, NaiveDate::from_ymd_opt(2012, 5, 1));
        assert_eq!(parse_descriptor(&emit_descriptor(&r)).unwrap(), r);
    }

    #[test]
    fn malformed_descriptors_report_index() {
        let bad = [
            EMAIL.replace("callServiceTask", "scriptTask"),
            EMAIL.replace("<output type=\"emailReceipt\"/>", ""),
            EMAIL.replace("Send an email to the customer.", "  "),
            EMAIL.replace("</operation>", "</operation><qos available=\"6\" calls=\"5\" responseSumMs=\"0\"/>"),
            EMAIL.replace(" publisher=\"acme\"", ""),
            "<service".to_string(),
        ];
        for text in &bad {
            match Registry::load(&[EMAIL.to_string(), text.clone()]) {
                Err(RegistryError::MalformedDescriptor { index, .. }) => assert_eq!(index, 1),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
