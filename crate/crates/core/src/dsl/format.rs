use std::fmt::Write;

use crate::lint::LintConfig;
use crate::model::{Element, Feature, Project, Screen, UserStory};

/// Renders `project` in canonical form: header, config (only when it
/// differs from the defaults), stories, screens, then features, each in
/// declaration order. Output always uses LF line endings.
pub fn format(project: &Project) -> String {
    let mut out = String::new();
    writeln!(out, "project {}", quote(&project.name)).unwrap();

    if project.config != LintConfig::default() {
        out.push('\n');
        config(&mut out, &project.config);
    }
    if !project.stories.is_empty() {
        out.push('\n');
        for s in &project.stories {
            story(&mut out, s);
        }
    }
    for s in &project.screens {
        out.push('\n');
        screen(&mut out, s);
    }
    for f in &project.features {
        out.push('\n');
        feature(&mut out, f);
    }
    out
}

fn quote(text: &str) -> String {
    let mut q = String::with_capacity(text.len() + 2);
    q.push('"');
    for c in text.chars() {
        match c {
            '"' => q.push_str("\\\""),
            '\\' => q.push_str("\\\\"),
            '\n' => q.push_str("\\n"),
            '\t' => q.push_str("\\t"),
            c => q.push(c),
        }
    }
    q.push('"');
    q
}

fn config(out: &mut String, cfg: &LintConfig) {
    out.push_str("config {\n");
    for (rule, sev) in &cfg.severity {
        writeln!(out, "  severity {rule} {sev}").unwrap();
    }
    for rule in &cfg.disabled {
        writeln!(out, "  disable {rule}").unwrap();
    }
    writeln!(out, "  min-label {}", cfg.min_label_len).unwrap();
    out.push_str("  blocklist");
    for phrase in &cfg.blocklist {
        write!(out, " {}", quote(phrase)).unwrap();
    }
    out.push('\n');
    if cfg.strict_feedback {
        out.push_str("  strict-feedback\n");
    }
    out.push_str("}\n");
}

fn story(out: &mut String, s: &UserStory) {
    write!(out, "story {} as {} want {}", s.id, quote(&s.role), quote(&s.want)).unwrap();
    if let Some(why) = &s.why {
        write!(out, " why {}", quote(why)).unwrap();
    }
    writeln!(out, " prio {}", s.priority).unwrap();
}

fn screen(out: &mut String, s: &Screen) {
    write!(out, "screen {} {}", s.id, quote(&s.title)).unwrap();
    for tag in &s.tags {
        write!(out, " {}", tag.as_str()).unwrap();
    }
    out.push_str(" {\n");
    for el in &s.elements {
        out.push_str("  ");
        match el {
            Element::Layout { id, kind, label } => {
                write!(out, "layout {id} {kind}").unwrap();
                if let Some(l) = label {
                    write!(out, " {}", quote(l)).unwrap();
                }
            }
            Element::InputField { id, label, required } => {
                write!(out, "field {id} {} required {}", quote(label), required.as_str()).unwrap();
            }
            Element::TriggerText { id, label, submits } => {
                write!(out, "button {id} {}", quote(label)).unwrap();
                if *submits {
                    out.push_str(" submits");
                }
            }
            Element::TriggerIcon { id, icon, alt, submits } => {
                write!(out, "icon {id} {icon}").unwrap();
                if let Some(a) = alt {
                    write!(out, " alt {}", quote(a)).unwrap();
                }
                if *submits {
                    out.push_str(" submits");
                }
            }
        }
        out.push('\n');
    }
    out.push_str("}\n");
}

fn feature(out: &mut String, f: &Feature) {
    writeln!(out, "feature {} for {} {{", f.id, f.story).unwrap();
    if !f.screens.is_empty() {
        writeln!(out, "  use {}", f.screens.join(" ")).unwrap();
    }
    for c in &f.connectors {
        write!(
            out,
            "  connect {}.{} -> {}",
            c.source_screen, c.source_element, c.target
        )
        .unwrap();
        match c.kind {
            crate::model::ConnectorKind::Normal => {}
            kind => write!(out, " {}", kind.as_str()).unwrap(),
        }
        out.push('\n');
    }
    for t in &f.tasks {
        write!(out, "  task {} :", t.name).unwrap();
        let mut parts: Vec<String> = t.steps.iter().map(|s| format!("{}.{}", s.screen, s.trigger)).collect();
        parts.extend(t.end.clone());
        writeln!(out, " {}", parts.join(" -> ")).unwrap();
    }
    out.push_str("}\n");
}
