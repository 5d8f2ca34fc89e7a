//! Graphviz DOT export of feature flows.
//!
//! Screens become record-like boxes listing their elements; connectors
//! become edges labelled with the trigger's caption. Each feature is a
//! `cluster_` subgraph. A screen shared by several features is drawn once,
//! inside the cluster of the first feature (by id) that uses it. Edges are
//! emitted at the top level so they never pull nodes into another cluster.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::model::{ConnectorKind, Element, Feature, Project, Screen, ScreenTag};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotDocument {
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("E-UNKNOWN-FEATURE: no feature named `{0}`")]
    UnknownFeature(String),
}

fn quote(s: &str) -> String {
    let mut q = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => q.push_str("\\\""),
            '\\' => q.push_str("\\\\"),
            '\n' => q.push_str("\\n"),
            '\r' => {}
            c => q.push(c),
        }
    }
    q.push('"');
    q
}

fn node_label(screen: &Screen) -> String {
    let mut label = screen.title.clone();
    for el in &screen.elements {
        label.push('\n');
        let line = match el {
            Element::Layout { .. } => format!("[{}] {}", el.keyword(), el.caption()),
            Element::InputField { required, .. } => {
                let mark = match required {
                    crate::model::Required::Yes => "*",
                    _ => "",
                };
                format!("[field] {}{mark}", el.caption())
            }
            Element::TriggerText { .. } | Element::TriggerIcon { .. } => {
                format!("[{}] {}", el.keyword(), el.caption())
            }
        };
        label.push_str(&line);
    }
    label
}

fn node_attrs(screen: &Screen) -> String {
    let mut styles = Vec::new();
    if screen.has_tag(ScreenTag::Entry) {
        styles.push("bold");
    }
    if screen.has_tag(ScreenTag::Feedback) {
        styles.push("rounded");
    }
    let mut attrs = format!("label={}", quote(&node_label(screen)));
    if !styles.is_empty() {
        write!(attrs, ", style={}", quote(&styles.join(","))).unwrap();
    }
    if screen.has_tag(ScreenTag::Error) {
        attrs.push_str(", color=red");
    }
    attrs
}

pub fn to_dot(project: &Project, feature: Option<&str>) -> Result<DotDocument, RenderError> {
    let mut features: Vec<&Feature> = match feature {
        Some(id) => vec![project
            .feature(id)
            .ok_or_else(|| RenderError::UnknownFeature(id.to_string()))?],
        None => project.features.iter().collect(),
    };
    features.sort_by(|a, b| a.id.cmp(&b.id));

    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(&project.name)).unwrap();
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box, fontname=\"Helvetica\"];\n");
    out.push_str("  edge [fontname=\"Helvetica\"];\n");

    let mut placed = BTreeSet::new();
    for f in &features {
        writeln!(out, "  subgraph {} {{", quote(&format!("cluster_{}", f.id))).unwrap();
        writeln!(out, "    label={};", quote(&f.id)).unwrap();
        let mut ids: Vec<&String> = f.screens.iter().collect();
        ids.sort();
        for sid in ids {
            if !placed.insert(sid.as_str()) {
                continue;
            }
            match project.screen(sid) {
                Some(s) => writeln!(out, "    {} [{}];", quote(sid), node_attrs(s)).unwrap(),
                None => writeln!(out, "    {};", quote(sid)).unwrap(),
            }
        }
        out.push_str("  }\n");
    }

    let mut edges: Vec<(&str, &crate::model::Connector)> = features
        .iter()
        .flat_map(|f| f.connectors.iter().map(move |c| (f.id.as_str(), c)))
        .collect();
    edges.sort_by(|a, b| (a.0, &a.1.id).cmp(&(b.0, &b.1.id)));
    for (_, c) in edges {
        let caption = project
            .screen(&c.source_screen)
            .and_then(|s| s.element(&c.source_element))
            .map(Element::caption)
            .unwrap_or_else(|| c.source_element.clone());
        write!(
            out,
            "  {} -> {} [label={}",
            quote(&c.source_screen),
            quote(&c.target),
            quote(&caption)
        )
        .unwrap();
        match c.kind {
            ConnectorKind::Normal => {}
            ConnectorKind::Error => out.push_str(", style=dashed"),
            ConnectorKind::Back => out.push_str(", style=dotted"),
        }
        out.push_str("];\n");
    }
    out.push_str("}\n");
    Ok(DotDocument { text: out })
}
