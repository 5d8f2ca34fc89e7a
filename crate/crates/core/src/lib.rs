//! Wireflow modelling toolkit: a small description language for
//! feature-oriented screen flows, a heuristic linter over those flows,
//! flow metrics, Graphviz export, and aggregation of heuristic-evaluation
//! and TAM questionnaire data.

pub mod cli;
pub mod corpus;
pub mod decimal;
pub mod dsl;
pub mod evalkit;
pub mod lint;
pub mod metrics;
pub mod model;
pub mod render;

pub use dsl::{format, parse, ParseError, SourceSpan};
pub use lint::{lint_feature, lint_project, DefectReport, LintConfig, RuleId, Severity};
pub use model::{build_graph, prioritize_stories, validate_structure, FlowGraph, Project};
