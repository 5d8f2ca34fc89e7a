use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::{LintConfig, Severity};
use super::{Defect, Location};
use crate::model::{ConnectorKind, Element, Feature, FlowGraph, Project, ScreenTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

impl RuleId {
    pub const ALL: [RuleId; 8] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
    ];

    pub fn rule(self) -> &'static Rule {
        &RULES[self as usize]
    }

    pub fn default_severity(self) -> Severity {
        self.rule().default_severity
    }

    pub fn as_str(self) -> &'static str {
        self.rule().id
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Rule {
    pub id: &'static str,
    pub heuristic: &'static str,
    pub question: &'static str,
    pub default_severity: Severity,
}

/// The eight Step-3 questioning points, each tied to the usability
/// heuristic it checks.
pub static RULES: [Rule; 8] = [
    Rule {
        id: "R1",
        heuristic: "Flexibility and efficiency of use",
        question: "Do all screens have at least one trigger for the user to activate?",
        default_severity: Severity::MAJOR,
    },
    Rule {
        id: "R2",
        heuristic: "Visibility of system status",
        question: "Towards the end of the feature, is there a screen that provides feedback indicating the completion of the task?",
        default_severity: Severity::MINOR,
    },
    Rule {
        id: "R3",
        heuristic: "Match between system and the real world",
        question: "Are triggers that have texts adequately described?",
        default_severity: Severity::MINOR,
    },
    Rule {
        id: "R4",
        heuristic: "Match between system and the real world",
        question: "Are icon/image-based triggers adequately represented?",
        default_severity: Severity::MINOR,
    },
    Rule {
        id: "R5",
        heuristic: "Error prevention",
        question: "If there are fields for data entry, are the mandatory fields marked?",
        default_severity: Severity::MINOR,
    },
    Rule {
        id: "R6",
        heuristic: "Help users recognize, diagnose, and recover from errors",
        question: "Does the interaction flow consider errors that users may make?",
        default_severity: Severity::MAJOR,
    },
    Rule {
        id: "R7",
        heuristic: "Flexibility and efficiency of use",
        question: "Are there triggers for the user to undo an action or return to the previous screen?",
        default_severity: Severity::MAJOR,
    },
    Rule {
        id: "R8",
        heuristic: "Consistency and standards",
        question: "Are all connectors starting from triggers?",
        default_severity: Severity::CATASTROPHIC,
    },
];

/// Everything a rule needs about one feature.
pub(crate) struct FlowContext<'a> {
    pub project: &'a Project,
    pub feature: &'a Feature,
    pub graph: &'a FlowGraph,
    pub config: &'a LintConfig,
    pub reachable: Vec<bool>,
}

impl<'a> FlowContext<'a> {
    pub fn new(project: &'a Project, feature: &'a Feature, graph: &'a FlowGraph, config: &'a LintConfig) -> Self {
        let adj = graph.adjacency(|_| true);
        let mut reachable = vec![false; graph.nodes.len()];
        if let Some(start) = graph.index_of(&graph.entry) {
            let mut queue = std::collections::VecDeque::from([start]);
            reachable[start] = true;
            while let Some(n) = queue.pop_front() {
                for &m in &adj[n] {
                    if !reachable[m] {
                        reachable[m] = true;
                        queue.push_back(m);
                    }
                }
            }
        }
        FlowContext {
            project,
            feature,
            graph,
            config,
            reachable,
        }
    }

    fn defect(&self, rule: RuleId, screen: &str, element: Option<&str>, message: String) -> Defect {
        Defect {
            rule,
            heuristic: rule.rule().heuristic.to_string(),
            severity: self.config.severity_of(rule),
            location: Location {
                feature: self.feature.id.clone(),
                screen: screen.to_string(),
                element: element.map(str::to_owned),
            },
            message,
        }
    }

    /// Screens of the feature that exist in the project, with their
    /// node index.
    fn screens(&self) -> impl Iterator<Item = (usize, &'a crate::model::Screen)> + '_ {
        self.graph
            .nodes
            .iter()
            .enumerate()
            .filter_map(|(i, id)| self.project.screen(id).map(|s| (i, s)))
    }

    fn reachable_screens(&self) -> impl Iterator<Item = (usize, &'a crate::model::Screen)> + '_ {
        self.screens().filter(|(i, _)| self.reachable[*i])
    }
}

pub(crate) fn check(rule: RuleId, cx: &FlowContext<'_>) -> Vec<Defect> {
    match rule {
        RuleId::R1 => every_screen_has_trigger(cx),
        RuleId::R2 => completion_feedback(cx),
        RuleId::R3 => text_triggers_described(cx),
        RuleId::R4 => icon_triggers_represented(cx),
        RuleId::R5 => mandatory_fields_marked(cx),
        RuleId::R6 => submissions_handle_errors(cx),
        RuleId::R7 => can_return(cx),
        RuleId::R8 => connectors_start_at_triggers(cx),
    }
}

fn every_screen_has_trigger(cx: &FlowContext<'_>) -> Vec<Defect> {
    cx.reachable_screens()
        .filter(|(_, s)| s.triggers().next().is_none())
        .map(|(_, s)| {
            cx.defect(
                RuleId::R1,
                &s.id,
                None,
                format!("screen `{}` has no trigger; the user is stuck here", s.id),
            )
        })
        .collect()
}

fn completion_feedback(cx: &FlowContext<'_>) -> Vec<Defect> {
    let forward = cx.graph.adjacency(|k| k == ConnectorKind::Normal);
    let terminals: Vec<_> = cx
        .reachable_screens()
        .filter(|(i, _)| forward[*i].is_empty())
        .map(|(_, s)| s)
        .collect();
    let mut out = Vec::new();
    if cx.config.strict_feedback {
        let mut sorted: Vec<_> = terminals
            .iter()
            .filter(|s| !s.has_tag(ScreenTag::Feedback) && !s.has_tag(ScreenTag::Error))
            .collect();
        sorted.sort_by(|a, b| a.id.cmp(&b.id));
        for s in sorted {
            out.push(cx.defect(
                RuleId::R2,
                &s.id,
                None,
                format!("flow ends at `{}` without completion feedback", s.id),
            ));
        }
        if terminals.is_empty() {
            out.push(cx.defect(RuleId::R2, &cx.graph.entry, None, "flow has no terminal screen".into()));
        }
    } else if !terminals.iter().any(|s| s.has_tag(ScreenTag::Feedback)) {
        match terminals.iter().map(|s| s.id.as_str()).min() {
            Some(first) => out.push(cx.defect(
                RuleId::R2,
                first,
                None,
                "no terminal screen of the flow is tagged feedback".into(),
            )),
            None => out.push(cx.defect(
                RuleId::R2,
                &cx.graph.entry,
                None,
                "flow has no terminal screen to report completion".into(),
            )),
        }
    }
    out
}

fn text_triggers_described(cx: &FlowContext<'_>) -> Vec<Defect> {
    let mut out = Vec::new();
    for (_, s) in cx.screens() {
        for el in &s.elements {
            let Element::TriggerText { id, label, .. } = el else {
                continue;
            };
            let trimmed = label.trim();
            let problem = if trimmed.is_empty() {
                Some("has an empty label".to_string())
            } else if trimmed.chars().count() < cx.config.min_label_len {
                Some(format!(
                    "label {trimmed:?} is shorter than {} characters",
                    cx.config.min_label_len
                ))
            } else if cx.config.is_blocked(trimmed) {
                Some(format!("label {trimmed:?} does not describe the action"))
            } else {
                None
            };
            if let Some(p) = problem {
                out.push(cx.defect(RuleId::R3, &s.id, Some(id), format!("button `{id}` {p}")));
            }
        }
    }
    out
}

fn icon_triggers_represented(cx: &FlowContext<'_>) -> Vec<Defect> {
    let mut out = Vec::new();
    for (_, s) in cx.screens() {
        for el in &s.elements {
            let Element::TriggerIcon { id, icon, alt, .. } = el else {
                continue;
            };
            let problem = if icon.trim().is_empty() {
                Some("names no icon")
            } else if alt.as_deref().is_none_or(|a| a.trim().is_empty()) {
                Some("has no alt text")
            } else {
                None
            };
            if let Some(p) = problem {
                out.push(cx.defect(RuleId::R4, &s.id, Some(id), format!("icon `{id}` {p}")));
            }
        }
    }
    out
}

fn mandatory_fields_marked(cx: &FlowContext<'_>) -> Vec<Defect> {
    let mut out = Vec::new();
    for (_, s) in cx.screens() {
        for el in &s.elements {
            if let Element::InputField {
                id,
                required: crate::model::Required::Unspecified,
                ..
            } = el
            {
                out.push(cx.defect(
                    RuleId::R5,
                    &s.id,
                    Some(id),
                    format!("field `{id}` does not say whether it is mandatory"),
                ));
            }
        }
    }
    out
}

fn submissions_handle_errors(cx: &FlowContext<'_>) -> Vec<Defect> {
    let mut out = Vec::new();
    for (_, s) in cx.screens().filter(|(_, s)| s.has_input_fields()) {
        let links_to_error_screen = cx.graph.outgoing(&s.id).any(|e| {
            cx.project
                .screen(&e.target)
                .is_some_and(|t| t.has_tag(ScreenTag::Error))
        });
        if links_to_error_screen {
            continue;
        }
        for el in s.elements.iter().filter(|e| e.is_trigger() && e.submits()) {
            let has_error_edge = cx
                .graph
                .outgoing(&s.id)
                .any(|e| e.trigger == el.id() && e.kind == ConnectorKind::Error);
            if !has_error_edge {
                out.push(cx.defect(
                    RuleId::R6,
                    &s.id,
                    Some(el.id()),
                    format!("submitting `{}` has no error flow", el.id()),
                ));
            }
        }
    }
    out
}

/// For each node, the set of nodes that lie before it on at least one
/// simple path from the entry.
pub(crate) fn entry_path_predecessors(graph: &FlowGraph) -> Vec<BTreeSet<usize>> {
    let adj = graph.adjacency(|_| true);
    let n = graph.nodes.len();
    let mut preds = vec![BTreeSet::new(); n];
    let Some(start) = graph.index_of(&graph.entry) else {
        return preds;
    };
    let mut path = vec![start];
    let mut on_path = vec![false; n];
    on_path[start] = true;
    // Explicit stack of (node, next child index) to avoid recursion depth limits.
    let mut stack = vec![(start, 0usize)];
    while let Some(top) = stack.len().checked_sub(1) {
        let (node, child) = stack[top];
        if let Some(&next) = adj[node].get(child) {
            stack[top].1 += 1;
            if on_path[next] {
                continue;
            }
            preds[next].extend(path.iter().copied());
            on_path[next] = true;
            path.push(next);
            stack.push((next, 0));
        } else {
            stack.pop();
            path.pop();
            on_path[node] = false;
        }
    }
    preds
}

fn can_return(cx: &FlowContext<'_>) -> Vec<Defect> {
    let preds = entry_path_predecessors(cx.graph);
    let mut out = Vec::new();
    for (i, s) in cx.reachable_screens() {
        if s.id == cx.graph.entry {
            continue;
        }
        let ok = cx.graph.outgoing(&s.id).any(|e| {
            e.kind == ConnectorKind::Back || cx.graph.index_of(&e.target).is_some_and(|t| preds[i].contains(&t))
        });
        if !ok {
            out.push(cx.defect(
                RuleId::R7,
                &s.id,
                None,
                format!("screen `{}` offers no way back to a previous screen", s.id),
            ));
        }
    }
    out
}

fn connectors_start_at_triggers(cx: &FlowContext<'_>) -> Vec<Defect> {
    cx.feature
        .connectors
        .iter()
        .filter_map(|c| {
            let screen = cx.project.screen(&c.source_screen)?;
            let el = screen.element(&c.source_element)?;
            (!el.is_trigger()).then(|| {
                cx.defect(
                    RuleId::R8,
                    &screen.id,
                    Some(el.id()),
                    format!(
                        "connector to `{}` starts at {} element `{}`",
                        c.target,
                        el.keyword(),
                        el.id()
                    ),
                )
            })
        })
        .collect()
}
