//! Wireflow domain model: stories, screens, features and the flow graph
//! derived from one feature's connectors.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lint::LintConfig;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserStory {
    pub id: String,
    pub role: String,
    pub want: String,
    pub why: Option<String>,
    pub priority: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Required {
    Yes,
    No,
    Unspecified,
}

impl Required {
    pub fn as_str(self) -> &'static str {
        match self {
            Required::Yes => "yes",
            Required::No => "no",
            Required::Unspecified => "unspecified",
        }
    }
}

/// One wireframe element. Layout elements are inert; the two trigger
/// variants are the only legal connector sources.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Element {
    Layout {
        id: String,
        kind: String,
        label: Option<String>,
    },
    InputField {
        id: String,
        label: String,
        required: Required,
    },
    TriggerText {
        id: String,
        label: String,
        submits: bool,
    },
    TriggerIcon {
        id: String,
        icon: String,
        alt: Option<String>,
        submits: bool,
    },
}

impl Element {
    pub fn id(&self) -> &str {
        match self {
            Element::Layout { id, .. }
            | Element::InputField { id, .. }
            | Element::TriggerText { id, .. }
            | Element::TriggerIcon { id, .. } => id,
        }
    }

    pub fn is_trigger(&self) -> bool {
        matches!(self, Element::TriggerText { .. } | Element::TriggerIcon { .. })
    }

    pub fn submits(&self) -> bool {
        match self {
            Element::TriggerText { submits, .. } | Element::TriggerIcon { submits, .. } => *submits,
            _ => false,
        }
    }

    /// Short name of the variant as written in source.
    pub fn keyword(&self) -> &'static str {
        match self {
            Element::Layout { .. } => "layout",
            Element::InputField { .. } => "field",
            Element::TriggerText { .. } => "button",
            Element::TriggerIcon { .. } => "icon",
        }
    }

    /// Human-facing caption: the label, alt text or icon name.
    pub fn caption(&self) -> String {
        match self {
            Element::Layout { kind, label, .. } => match label {
                Some(l) => format!("{kind}: {l}"),
                None => kind.clone(),
            },
            Element::InputField { label, .. } | Element::TriggerText { label, .. } => label.clone(),
            Element::TriggerIcon { icon, alt, .. } => alt.clone().unwrap_or_else(|| icon.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScreenTag {
    Entry,
    Feedback,
    Error,
}

impl ScreenTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ScreenTag::Entry => "entry",
            ScreenTag::Feedback => "feedback",
            ScreenTag::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Screen {
    pub id: String,
    pub title: String,
    pub elements: Vec<Element>,
    pub tags: BTreeSet<ScreenTag>,
}

impl Screen {
    pub fn element(&self, id: &str) -> Option<&Element> {
        self.elements.iter().find(|e| e.id() == id)
    }

    pub fn has_tag(&self, tag: ScreenTag) -> bool {
        self.tags.contains(&tag)
    }

    pub fn triggers(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter().filter(|e| e.is_trigger())
    }

    pub fn has_input_fields(&self) -> bool {
        self.elements.iter().any(|e| matches!(e, Element::InputField { .. }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConnectorKind {
    #[default]
    Normal,
    Error,
    Back,
}

impl ConnectorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConnectorKind::Normal => "normal",
            ConnectorKind::Error => "error",
            ConnectorKind::Back => "back",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connector {
    pub id: String,
    pub source_screen: String,
    pub source_element: String,
    pub target: String,
    pub kind: ConnectorKind,
}

impl Connector {
    /// Connectors carry no explicit name in source; their id is derived
    /// from the endpoints, so two identical arrows collide as duplicates.
    pub fn new(
        source_screen: impl Into<String>,
        source_element: impl Into<String>,
        target: impl Into<String>,
        kind: ConnectorKind,
    ) -> Self {
        let source_screen = source_screen.into();
        let source_element = source_element.into();
        let target = target.into();
        Connector {
            id: format!("{source_screen}.{source_element}->{target}"),
            source_screen,
            source_element,
            target,
            kind,
        }
    }
}

/// A scripted walk through a feature's flow: each step activates one
/// trigger, optionally ending on a named screen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskPath {
    pub name: String,
    pub steps: Vec<TaskStep>,
    pub end: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskStep {
    pub screen: String,
    pub trigger: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feature {
    pub id: String,
    pub story: String,
    pub screens: Vec<String>,
    pub connectors: Vec<Connector>,
    pub tasks: Vec<TaskPath>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Project {
    pub name: String,
    pub stories: Vec<UserStory>,
    pub features: Vec<Feature>,
    pub screens: Vec<Screen>,
    pub config: LintConfig,
}

impl Project {
    pub fn new(name: impl Into<String>) -> Self {
        Project {
            name: name.into(),
            stories: Vec::new(),
            features: Vec::new(),
            screens: Vec::new(),
            config: LintConfig::default(),
        }
    }

    pub fn screen(&self, id: &str) -> Option<&Screen> {
        self.screens.iter().find(|s| s.id == id)
    }

    pub fn feature(&self, id: &str) -> Option<&Feature> {
        self.features.iter().find(|f| f.id == id)
    }

    pub fn story(&self, id: &str) -> Option<&UserStory> {
        self.stories.iter().find(|s| s.id == id)
    }

    /// Locates a task by name across all features.
    pub fn task(&self, name: &str) -> Option<(&Feature, &TaskPath)> {
        self.features
            .iter()
            .find_map(|f| f.tasks.iter().find(|t| t.name == name).map(|t| (f, t)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StructureCode {
    #[serde(rename = "E-CONN-SRC")]
    ConnectorSource,
    #[serde(rename = "E-DUP")]
    Duplicate,
    #[serde(rename = "E-EMPTY")]
    EmptyFeature,
    #[serde(rename = "E-ENTRY")]
    MultipleEntries,
    #[serde(rename = "E-REF")]
    DanglingReference,
    #[serde(rename = "E-STORY")]
    BadStory,
}

impl StructureCode {
    pub fn as_str(self) -> &'static str {
        match self {
            StructureCode::ConnectorSource => "E-CONN-SRC",
            StructureCode::Duplicate => "E-DUP",
            StructureCode::EmptyFeature => "E-EMPTY",
            StructureCode::MultipleEntries => "E-ENTRY",
            StructureCode::DanglingReference => "E-REF",
            StructureCode::BadStory => "E-STORY",
        }
    }
}

impl fmt::Display for StructureCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureError {
    pub code: StructureCode,
    pub feature: Option<String>,
    pub connector: Option<String>,
    pub message: String,
}

impl StructureError {
    fn sort_key(&self) -> (&str, &str, StructureCode, &str) {
        (
            self.feature.as_deref().unwrap_or(""),
            self.connector.as_deref().unwrap_or(""),
            self.code,
            &self.message,
        )
    }
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)?;
        match (&self.feature, &self.connector) {
            (Some(feat), Some(conn)) => write!(f, " {feat}/{conn}")?,
            (Some(feat), None) => write!(f, " {feat}")?,
            _ => {}
        }
        write!(f, ": {}", self.message)
    }
}

/// Returns every structural violation, ordered by feature id, then
/// connector id, then code. Project-level findings (no feature) sort first.
pub fn validate_structure(project: &Project) -> Vec<StructureError> {
    let mut errors = Vec::new();
    let mut push = |code, feature: Option<&str>, connector: Option<&str>, message: String| {
        errors.push(StructureError {
            code,
            feature: feature.map(str::to_owned),
            connector: connector.map(str::to_owned),
            message,
        })
    };

    for dup in duplicates(project.stories.iter().map(|s| s.id.as_str())) {
        push(
            StructureCode::Duplicate,
            None,
            None,
            format!("duplicate story id `{dup}`"),
        );
    }
    for dup in duplicates(project.screens.iter().map(|s| s.id.as_str())) {
        push(
            StructureCode::Duplicate,
            None,
            None,
            format!("duplicate screen id `{dup}`"),
        );
    }
    for dup in duplicates(project.features.iter().map(|f| f.id.as_str())) {
        push(
            StructureCode::Duplicate,
            None,
            None,
            format!("duplicate feature id `{dup}`"),
        );
    }

    for story in &project.stories {
        if story.role.trim().is_empty() {
            push(
                StructureCode::BadStory,
                None,
                None,
                format!("story `{}` has an empty role", story.id),
            );
        }
        if story.want.trim().is_empty() {
            push(
                StructureCode::BadStory,
                None,
                None,
                format!("story `{}` has an empty want", story.id),
            );
        }
        if story.priority < 1 {
            push(
                StructureCode::BadStory,
                None,
                None,
                format!("story `{}` has priority 0", story.id),
            );
        }
    }

    for screen in &project.screens {
        for dup in duplicates(screen.elements.iter().map(Element::id)) {
            push(
                StructureCode::Duplicate,
                None,
                None,
                format!("duplicate element id `{dup}` on screen `{}`", screen.id),
            );
        }
    }

    for feature in &project.features {
        let fid = Some(feature.id.as_str());
        if project.story(&feature.story).is_none() {
            push(
                StructureCode::DanglingReference,
                fid,
                None,
                format!("unknown story `{}`", feature.story),
            );
        }
        if feature.screens.is_empty() {
            push(StructureCode::EmptyFeature, fid, None, "feature uses no screens".into());
        }
        for dup in duplicates(feature.screens.iter().map(String::as_str)) {
            push(
                StructureCode::Duplicate,
                fid,
                None,
                format!("screen `{dup}` used twice"),
            );
        }
        let mut entries = 0;
        for sid in &feature.screens {
            match project.screen(sid) {
                None => push(
                    StructureCode::DanglingReference,
                    fid,
                    None,
                    format!("unknown screen `{sid}`"),
                ),
                Some(s) if s.has_tag(ScreenTag::Entry) => entries += 1,
                Some(_) => {}
            }
        }
        if entries > 1 {
            push(
                StructureCode::MultipleEntries,
                fid,
                None,
                format!("{entries} screens tagged entry"),
            );
        }
        for dup in duplicates(feature.connectors.iter().map(|c| c.id.as_str())) {
            push(StructureCode::Duplicate, fid, Some(dup), "duplicate connector".into());
        }

        let in_feature = |sid: &str| feature.screens.iter().any(|s| s == sid);
        for conn in &feature.connectors {
            let cid = Some(conn.id.as_str());
            match project.screen(&conn.source_screen) {
                None => push(
                    StructureCode::DanglingReference,
                    fid,
                    cid,
                    format!("unknown source screen `{}`", conn.source_screen),
                ),
                Some(screen) => {
                    if !in_feature(&screen.id) {
                        push(
                            StructureCode::DanglingReference,
                            fid,
                            cid,
                            format!("source screen `{}` is not used by the feature", screen.id),
                        );
                    }
                    match screen.element(&conn.source_element) {
                        None => push(
                            StructureCode::DanglingReference,
                            fid,
                            cid,
                            format!("unknown element `{}` on screen `{}`", conn.source_element, screen.id),
                        ),
                        Some(el) if !el.is_trigger() => push(
                            StructureCode::ConnectorSource,
                            fid,
                            cid,
                            format!(
                                "connector starts at {} element `{}`, not a trigger",
                                el.keyword(),
                                el.id()
                            ),
                        ),
                        Some(_) => {}
                    }
                }
            }
            if project.screen(&conn.target).is_none() {
                push(
                    StructureCode::DanglingReference,
                    fid,
                    cid,
                    format!("unknown target screen `{}`", conn.target),
                );
            } else if !in_feature(&conn.target) {
                push(
                    StructureCode::DanglingReference,
                    fid,
                    cid,
                    format!("target screen `{}` is not used by the feature", conn.target),
                );
            }
        }
    }

    errors.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    errors
}

fn duplicates<'a>(ids: impl Iterator<Item = &'a str>) -> Vec<&'a str> {
    let mut seen = HashSet::new();
    let mut reported = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            reported.insert(id);
        }
    }
    reported.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowEdge {
    pub source: String,
    pub trigger: String,
    pub target: String,
    pub kind: ConnectorKind,
}

/// Graph view of one feature: nodes in declaration order, one edge per
/// connector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<FlowEdge>,
    pub entry: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("E-NO-SCREENS: feature `{0}` has no screens")]
    NoScreens(String),
}

pub fn build_graph(feature: &Feature, project: &Project) -> Result<FlowGraph, GraphError> {
    let first = feature
        .screens
        .first()
        .ok_or_else(|| GraphError::NoScreens(feature.id.clone()))?;
    let entry = feature
        .screens
        .iter()
        .find(|sid| project.screen(sid).is_some_and(|s| s.has_tag(ScreenTag::Entry)))
        .unwrap_or(first);
    Ok(FlowGraph {
        nodes: feature.screens.clone(),
        edges: feature
            .connectors
            .iter()
            .map(|c| FlowEdge {
                source: c.source_screen.clone(),
                trigger: c.source_element.clone(),
                target: c.target.clone(),
                kind: c.kind,
            })
            .collect(),
        entry: entry.clone(),
    })
}

impl FlowGraph {
    pub fn contains(&self, screen: &str) -> bool {
        self.nodes.iter().any(|n| n == screen)
    }

    /// Outgoing edges of `screen` whose target is a node of this graph.
    pub fn outgoing<'a>(&'a self, screen: &'a str) -> impl Iterator<Item = &'a FlowEdge> + 'a {
        self.edges
            .iter()
            .filter(move |e| e.source == screen && self.contains(&e.target))
    }

    /// Adjacency over node indices, restricted to edges whose kind passes
    /// `keep`. Parallel edges collapse.
    pub fn adjacency(&self, keep: impl Fn(ConnectorKind) -> bool) -> Vec<Vec<usize>> {
        let index: HashMap<&str, usize> = self.nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in self.edges.iter().filter(|e| keep(e.kind)) {
            if let (Some(&s), Some(&t)) = (index.get(e.source.as_str()), index.get(e.target.as_str())) {
                if !adj[s].contains(&t) {
                    adj[s].push(t);
                }
            }
        }
        adj
    }

    pub fn index_of(&self, screen: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == screen)
    }
}

/// Orders stories by ascending priority; ties keep declaration order.
pub fn prioritize_stories(stories: &[UserStory]) -> Vec<UserStory> {
    let mut sorted = stories.to_vec();
    sorted.sort_by_key(|s| s.priority);
    sorted
}
