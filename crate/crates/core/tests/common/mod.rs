//! Seeded generators and reference implementations shared by the
//! integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use startflow::evalkit::{DefectForm, TamResponse, QUESTIONS};
use startflow::lint::{LintConfig, RuleId, Severity};
use startflow::model::{
    Connector, ConnectorKind, Element, Feature, FlowEdge, FlowGraph, Project, Required, Screen, ScreenTag, TaskPath,
    TaskStep, UserStory,
};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures().join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap()
}

const LABEL_WORDS: [&str; 10] = [
    "Continue",
    "Send request",
    "OK?",
    "button",
    "",
    " ",
    "x",
    "Voltar",
    "Save & exit",
    "Click here",
];
const LABEL_CHARS: [char; 16] = [
    'a', 'Z', '0', ' ', '"', '\\', '\n', '\t', 'é', '→', '#', '{', '}', ';', ':', '漢',
];

pub fn label(rng: &mut StdRng) -> String {
    if rng.gen_bool(0.6) {
        LABEL_WORDS.choose(rng).unwrap().to_string()
    } else {
        (0..rng.gen_range(0..8))
            .map(|_| *LABEL_CHARS.choose(rng).unwrap())
            .collect()
    }
}

fn ident(rng: &mut StdRng, prefix: &str) -> String {
    format!("{prefix}{}", rng.gen_range(0..4))
}

fn element(rng: &mut StdRng, id: String) -> Element {
    match rng.gen_range(0..4) {
        0 => Element::Layout {
            id,
            kind: ident(rng, "card"),
            label: rng.gen_bool(0.5).then(|| label(rng)),
        },
        1 => Element::InputField {
            id,
            label: label(rng),
            required: *[Required::Yes, Required::No, Required::Unspecified]
                .choose(rng)
                .unwrap(),
        },
        2 => Element::TriggerText {
            id,
            label: label(rng),
            submits: rng.gen_bool(0.4),
        },
        _ => Element::TriggerIcon {
            id,
            icon: ident(rng, "icon-"),
            alt: rng.gen_bool(0.6).then(|| label(rng)),
            submits: rng.gen_bool(0.3),
        },
    }
}

fn random_config(rng: &mut StdRng) -> LintConfig {
    let mut config = LintConfig::default();
    if rng.gen_bool(0.7) {
        return config;
    }
    for r in RuleId::ALL {
        if rng.gen_bool(0.2) {
            config.severity.insert(r, Severity::new(rng.gen_range(1..=4)).unwrap());
        }
        if rng.gen_bool(0.1) {
            config.disabled.insert(r);
        }
    }
    if rng.gen_bool(0.3) {
        config.min_label_len = rng.gen_range(0..5);
    }
    if rng.gen_bool(0.3) {
        config.blocklist = (0..rng.gen_range(0..3))
            .map(|_| label(rng).trim().to_lowercase())
            .collect();
    }
    config.strict_feedback = rng.gen_bool(0.3);
    config
}

/// Options for [`random_project`].
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_screens: usize,
    /// Allow connectors whose source is a layout or field.
    pub non_trigger_sources: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_screens: 6,
            non_trigger_sources: true,
        }
    }
}

/// A syntactically expressible project. Ids are unique and every
/// reference resolves; the only structural error it may carry is a
/// connector starting at a non-trigger (when `shape` allows it).
pub fn random_project(rng: &mut StdRng, shape: Shape) -> Project {
    let mut project = Project::new(label(rng));
    for i in 0..rng.gen_range(1..=3) {
        project.stories.push(UserStory {
            id: format!("US{}", i + 1),
            role: label(rng),
            want: label(rng),
            why: rng.gen_bool(0.5).then(|| label(rng)),
            priority: rng.gen_range(1..=5),
        });
    }
    let n = rng.gen_range(1..=shape.max_screens);
    let entry = rng.gen_bool(0.7).then(|| rng.gen_range(0..n));
    for s in 0..n {
        let id = format!("s{s}");
        let mut tags = BTreeSet::new();
        if entry == Some(s) {
            tags.insert(ScreenTag::Entry);
        }
        if rng.gen_bool(0.3) {
            tags.insert(ScreenTag::Feedback);
        }
        if rng.gen_bool(0.15) {
            tags.insert(ScreenTag::Error);
        }
        let elements = (0..rng.gen_range(0..5))
            .map(|e| element(rng, format!("e{e}")))
            .collect();
        project.screens.push(Screen {
            title: if rng.gen_bool(0.5) { id.clone() } else { label(rng) },
            id,
            elements,
            tags,
        });
    }
    for f in 0..rng.gen_range(1..=2) {
        let mut screens: Vec<String> = project.screens.iter().map(|s| s.id.clone()).collect();
        screens.shuffle(rng);
        screens.truncate(rng.gen_range(1..=n));
        let mut connectors: Vec<Connector> = Vec::new();
        for _ in 0..rng.gen_range(0..=2 * screens.len()) {
            let source = project.screen(screens.choose(rng).unwrap()).unwrap();
            let candidates: Vec<&Element> = source
                .elements
                .iter()
                .filter(|e| shape.non_trigger_sources || e.is_trigger())
                .collect();
            let Some(el) = candidates.choose(rng) else { continue };
            let kind = *[
                ConnectorKind::Normal,
                ConnectorKind::Normal,
                ConnectorKind::Error,
                ConnectorKind::Back,
            ]
            .choose(rng)
            .unwrap();
            let c = Connector::new(&source.id, el.id(), screens.choose(rng).unwrap(), kind);
            if connectors.iter().all(|x| x.id != c.id) {
                connectors.push(c);
            }
        }
        let mut feature = Feature {
            id: format!("f{f}"),
            story: project.stories.choose(rng).unwrap().id.clone(),
            screens,
            connectors,
            tasks: Vec::new(),
        };
        let flow = startflow::build_graph(&feature, &project).unwrap();
        for t in 0..rng.gen_range(0..3) {
            feature.tasks.push(random_walk(rng, &flow, format!("t{f}-{t}")));
        }
        project.features.push(feature);
    }
    project.config = random_config(rng);
    project
}

/// A task following real edges from the entry.
pub fn random_walk(rng: &mut StdRng, flow: &FlowGraph, name: String) -> TaskPath {
    let mut at = flow.entry.clone();
    let mut steps = Vec::new();
    for _ in 0..rng.gen_range(0..5) {
        let out: Vec<&FlowEdge> = flow.outgoing(&at).collect();
        let Some(edge) = out.choose(rng) else { break };
        steps.push(TaskStep {
            screen: at.clone(),
            trigger: edge.trigger.clone(),
        });
        at = edge.target.clone();
    }
    let end = (steps.is_empty() || rng.gen_bool(0.6)).then_some(at);
    TaskPath { name, steps, end }
}

/// Random multigraph over `n` screens with self loops allowed.
pub fn random_graph(rng: &mut StdRng, n: usize) -> FlowGraph {
    let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let density = rng.gen_range(0.0..0.6);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(density) {
                edges.push(FlowEdge {
                    source: nodes[a].clone(),
                    trigger: format!("t{}", edges.len()),
                    target: nodes[b].clone(),
                    kind: *[ConnectorKind::Normal, ConnectorKind::Error, ConnectorKind::Back]
                        .choose(rng)
                        .unwrap(),
                });
            }
        }
    }
    FlowGraph {
        entry: nodes[rng.gen_range(0..n)].clone(),
        nodes,
        edges,
    }
}

/// Graph over `n` nodes whose edge set is the bit mask over ordered
/// pairs; the entry is the first node.
pub fn graph_from_mask(n: usize, mask: u64, kinds: &[ConnectorKind]) -> FlowGraph {
    let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut edges = Vec::new();
    for bit in 0..n * n {
        if mask >> bit & 1 == 1 {
            edges.push(FlowEdge {
                source: nodes[bit / n].clone(),
                trigger: format!("t{bit}"),
                target: nodes[bit % n].clone(),
                kind: kinds[bit % kinds.len()],
            });
        }
    }
    FlowGraph {
        entry: nodes[0].clone(),
        nodes,
        edges,
    }
}

/// Fewest edges on any simple path from `from` to `to`, found by
/// enumerating every simple path.
pub fn brute_force_shortest(
    flow: &FlowGraph,
    from: &str,
    to: &str,
    keep: impl Fn(ConnectorKind) -> bool,
) -> Option<usize> {
    fn walk(
        flow: &FlowGraph,
        at: &str,
        to: &str,
        keep: &dyn Fn(ConnectorKind) -> bool,
        seen: &mut Vec<String>,
        best: &mut Option<usize>,
    ) {
        if at == to {
            let len = seen.len() - 1;
            *best = Some(best.map_or(len, |b| b.min(len)));
            return;
        }
        for e in flow.edges.iter().filter(|e| e.source == at && keep(e.kind)) {
            if seen.contains(&e.target) {
                continue;
            }
            seen.push(e.target.clone());
            walk(flow, &e.target, to, keep, seen, best);
            seen.pop();
        }
    }
    let mut best = None;
    walk(flow, from, to, &keep, &mut vec![from.to_string()], &mut best);
    best
}

pub fn random_forms(rng: &mut StdRng, groups: &[&str]) -> Vec<DefectForm> {
    let rows = rng.gen_range(0..60);
    let keys = rng.gen_range(1..20);
    (0..rows)
        .map(|i| DefectForm {
            evaluator: format!("ev{}", rng.gen_range(0..5)),
            group: groups.choose(rng).unwrap().to_string(),
            location: format!("screen-{}", rng.gen_range(0..6)),
            heuristic: format!("H{}", rng.gen_range(1..=10)),
            severity: rng.gen_range(1..=4),
            justification: format!("row {i}"),
            is_false_positive: rng.gen_bool(0.2),
            dedup_key: format!("k{}", rng.gen_range(0..keys)),
        })
        .collect()
}

pub fn random_tam(rng: &mut StdRng, group: &str, n: usize) -> Vec<TamResponse> {
    (0..n)
        .map(|i| {
            let mut answers = [0u8; QUESTIONS];
            for a in &mut answers {
                *a = rng.gen_range(1..=5);
            }
            TamResponse {
                respondent: format!("{group}-{i}"),
                group: group.to_string(),
                answers,
            }
        })
        .collect()
}

/// Text that looks roughly like a document: keywords, punctuation,
/// strings and arbitrary characters.
pub fn token_soup(rng: &mut StdRng) -> String {
    const PIECES: [&str; 34] = [
        "project",
        "story",
        "screen",
        "feature",
        "config",
        "use",
        "connect",
        "task",
        "layout",
        "field",
        "button",
        "icon",
        "entry",
        "feedback",
        "error",
        "back",
        "submits",
        "required",
        "as",
        "want",
        "prio",
        "{",
        "}",
        ".",
        "->",
        ":",
        ";",
        "\n",
        " ",
        "\"",
        "\"a\\q\"",
        "#",
        "99999999999999999999999",
        "\r\n",
    ];
    let mut s = if rng.gen_bool(0.5) {
        String::from("project \"p\"\n")
    } else {
        String::new()
    };
    for _ in 0..rng.gen_range(0..60) {
        match rng.gen_range(0..4) {
            0 => s.push(rng.gen::<char>()),
            1 => s.push_str(&format!("x{}", rng.gen_range(0..3))),
            _ => s.push_str(PIECES.choose(rng).unwrap()),
        }
        if rng.gen_bool(0.5) {
            s.push(' ');
        }
    }
    s
}

/// Arbitrary characters, any code point.
pub fn random_text(rng: &mut StdRng) -> String {
    (0..rng.gen_range(0..200)).map(|_| rng.gen::<char>()).collect()
}

/// `src` with a few random character deletions, insertions and swaps.
pub fn mutate(rng: &mut StdRng, src: &str) -> String {
    let mut chars: Vec<char> = src.chars().collect();
    for _ in 0..rng.gen_range(0..4) {
        if chars.is_empty() {
            break;
        }
        let i = rng.gen_range(0..chars.len());
        match rng.gen_range(0..3) {
            0 => {
                chars.remove(i);
            }
            1 => chars.insert(
                i,
                *['{', '}', '"', '\n', '.', '-', '>', '#', '\\', 'x', ' ']
                    .choose(rng)
                    .unwrap(),
            ),
            _ => {
                let j = rng.gen_range(0..chars.len());
                chars.swap(i, j);
            }
        }
    }
    chars.into_iter().collect()
}
