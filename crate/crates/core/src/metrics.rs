//! User-flow metrics: action counts of scripted tasks, fewest-click
//! paths and reachability from the entry screen.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::model::{build_graph, ConnectorKind, FlowGraph, Project, ScreenTag, TaskPath};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("E-BROKEN-PATH: task `{task}` step {step}: {reason}")]
    BrokenPath { task: String, step: usize, reason: String },
    #[error("E-UNKNOWN-SCREEN: `{0}` is not part of the flow")]
    UnknownScreen(String),
}

/// Which connector kinds count as navigable when searching for paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathOptions {
    pub include_error: bool,
    pub include_back: bool,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            include_error: true,
            include_back: true,
        }
    }
}

impl PathOptions {
    pub fn forward_only() -> Self {
        PathOptions {
            include_error: false,
            include_back: false,
        }
    }

    pub fn admits(self, kind: ConnectorKind) -> bool {
        match kind {
            ConnectorKind::Normal => true,
            ConnectorKind::Error => self.include_error,
            ConnectorKind::Back => self.include_back,
        }
    }
}

/// Number of trigger activations in `path`, after checking that it is a
/// real walk through `flow` starting at the entry screen.
pub fn action_count(path: &TaskPath, flow: &FlowGraph) -> Result<usize, MetricsError> {
    let broken = |step: usize, reason: String| MetricsError::BrokenPath {
        task: path.name.clone(),
        step,
        reason,
    };
    let start = path
        .steps
        .first()
        .map(|s| &s.screen)
        .or(path.end.as_ref())
        .ok_or_else(|| broken(0, "task has no steps".into()))?;
    if *start != flow.entry {
        return Err(broken(
            0,
            format!("starts at `{start}` instead of entry screen `{}`", flow.entry),
        ));
    }
    for (i, step) in path.steps.iter().enumerate() {
        let next = path
            .steps
            .get(i + 1)
            .map(|s| Some(&s.screen))
            .unwrap_or(path.end.as_ref());
        let matched = flow
            .edges
            .iter()
            .any(|e| e.source == step.screen && e.trigger == step.trigger && next.is_none_or(|n| *n == e.target));
        if !matched {
            let reason = match next {
                Some(n) => format!("no connector from `{}.{}` to `{n}`", step.screen, step.trigger),
                None => format!("no connector leaves `{}.{}`", step.screen, step.trigger),
            };
            return Err(broken(i + 1, reason));
        }
    }
    Ok(path.steps.len())
}

/// Fewest trigger activations needed to get from `from` to `to`, or
/// `None` when `to` cannot be reached.
pub fn shortest_actions(
    flow: &FlowGraph,
    from: &str,
    to: &str,
    options: PathOptions,
) -> Result<Option<usize>, MetricsError> {
    let src = flow
        .index_of(from)
        .ok_or_else(|| MetricsError::UnknownScreen(from.to_string()))?;
    let dst = flow
        .index_of(to)
        .ok_or_else(|| MetricsError::UnknownScreen(to.to_string()))?;
    let adj = flow.adjacency(|k| options.admits(k));
    Ok(bfs_distances(&adj, src)[dst])
}

fn bfs_distances(adj: &[Vec<usize>], src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(n) = queue.pop_front() {
        let d = dist[n].unwrap_or(0);
        for &m in &adj[n] {
            if dist[m].is_none() {
                dist[m] = Some(d + 1);
                queue.push_back(m);
            }
        }
    }
    dist
}

/// Screens of the flow that cannot be reached from its entry.
pub fn reachability(flow: &FlowGraph) -> BTreeSet<String> {
    let Some(entry) = flow.index_of(&flow.entry) else {
        return flow.nodes.iter().cloned().collect();
    };
    let dist = bfs_distances(&flow.adjacency(|_| true), entry);
    flow.nodes
        .iter()
        .zip(dist)
        .filter(|(_, d)| d.is_none())
        .map(|(n, _)| n.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureMetrics {
    pub feature: String,
    pub entry: String,
    pub screens: usize,
    pub connectors: usize,
    pub unreachable: BTreeSet<String>,
    /// Fewest actions from the entry to each feedback screen.
    pub to_feedback: BTreeMap<String, Option<usize>>,
    pub tasks: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsTable {
    pub features: Vec<FeatureMetrics>,
}

/// Computes per-feature metrics. Fails on the first broken task path.
pub fn project_metrics(project: &Project, options: PathOptions) -> Result<MetricsTable, MetricsError> {
    let mut features = Vec::new();
    for feature in &project.features {
        let Ok(flow) = build_graph(feature, project) else {
            continue;
        };
        let mut tasks = BTreeMap::new();
        for task in &feature.tasks {
            tasks.insert(task.name.clone(), action_count(task, &flow)?);
        }
        let mut to_feedback = BTreeMap::new();
        for sid in &flow.nodes {
            if project.screen(sid).is_some_and(|s| s.has_tag(ScreenTag::Feedback)) {
                to_feedback.insert(sid.clone(), shortest_actions(&flow, &flow.entry, sid, options)?);
            }
        }
        features.push(FeatureMetrics {
            feature: feature.id.clone(),
            entry: flow.entry.clone(),
            screens: flow.nodes.len(),
            connectors: flow.edges.len(),
            unreachable: reachability(&flow),
            to_feedback,
            tasks,
        });
    }
    Ok(MetricsTable { features })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FlowEdge, TaskStep};

    fn chain() -> FlowGraph {
        let edge = |s: &str, t: &str| FlowEdge {
            source: s.into(),
            trigger: "go".into(),
            target: t.into(),
            kind: ConnectorKind::Normal,
        };
        FlowGraph {
            nodes: vec!["A".into(), "B".into(), "C".into()],
            edges: vec![edge("A", "B"), edge("B", "C")],
            entry: "A".into(),
        }
    }

    fn step(s: &str) -> TaskStep {
        TaskStep {
            screen: s.into(),
            trigger: "go".into(),
        }
    }

    #[test]
    fn shortest_on_chain() {
        let g = chain();
        let opts = PathOptions::default();
        assert_eq!(shortest_actions(&g, "A", "C", opts), Ok(Some(2)));
        assert_eq!(shortest_actions(&g, "A", "A", opts), Ok(Some(0)));
        assert_eq!(shortest_actions(&g, "C", "A", opts), Ok(None));
        assert_eq!(
            shortest_actions(&g, "A", "Z", opts),
            Err(MetricsError::UnknownScreen("Z".into()))
        );
    }

    #[test]
    fn back_edges_can_be_excluded() {
        let mut g = chain();
        g.edges.push(FlowEdge {
            source: "C".into(),
            trigger: "back".into(),
            target: "A".into(),
            kind: ConnectorKind::Back,
        });
        assert_eq!(shortest_actions(&g, "C", "B", PathOptions::default()), Ok(Some(2)));
        assert_eq!(shortest_actions(&g, "C", "B", PathOptions::forward_only()), Ok(None));
    }

    #[test]
    fn reachability_cases() {
        let mut g = chain();
        assert!(reachability(&g).is_empty());
        g.nodes.push("X".into());
        assert_eq!(reachability(&g), BTreeSet::from(["X".to_string()]));
        let single = FlowGraph {
            nodes: vec!["S".into()],
            edges: vec![],
            entry: "S".into(),
        };
        assert!(reachability(&single).is_empty());
    }

    #[test]
    fn action_counts() {
        let g = chain();
        let path = |steps: Vec<TaskStep>, end: Option<&str>| TaskPath {
            name: "t".into(),
            steps,
            end: end.map(str::to_owned),
        };
        assert_eq!(action_count(&path(vec![], Some("A")), &g), Ok(0));
        assert_eq!(action_count(&path(vec![step("A"), step("B")], Some("C")), &g), Ok(2));
        assert_eq!(action_count(&path(vec![step("A"), step("B")], None), &g), Ok(2));
        assert!(matches!(
            action_count(&path(vec![step("A"), step("C")], None), &g),
            Err(MetricsError::BrokenPath { step: 1, .. })
        ));
        assert!(matches!(
            action_count(&path(vec![step("B")], None), &g),
            Err(MetricsError::BrokenPath { step: 0, .. })
        ));
        assert!(action_count(&path(vec![step("A")], Some("C")), &g).is_err());
    }
}
