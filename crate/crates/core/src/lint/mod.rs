//! Step-3 verification: the eight questioning points as rules over a
//! feature's flow graph.

mod config;
mod rules;

use std::collections::BTreeMap;
use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{ConfigError, LintConfig, Severity, DEFAULT_BLOCKLIST, DEFAULT_MIN_LABEL_LEN};
pub use rules::{Rule, RuleId, RULES};

use crate::decimal::Fixed2;
use crate::model::{build_graph, validate_structure, Feature, Project, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Location {
    pub feature: String,
    pub screen: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub element: Option<String>,
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.feature, self.screen)?;
        if let Some(el) = &self.element {
            write!(f, "/{el}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defect {
    pub rule: RuleId,
    pub heuristic: String,
    pub severity: Severity,
    pub location: Location,
    pub message: String,
}

/// Runs every enabled rule on one feature. Output is sorted by screen,
/// rule, then element.
pub fn lint_feature(feature: &Feature, project: &Project, config: &LintConfig) -> Vec<Defect> {
    let Ok(graph) = build_graph(feature, project) else {
        return Vec::new();
    };
    let cx = rules::FlowContext::new(project, feature, &graph, config);
    let mut defects: Vec<Defect> = RuleId::ALL
        .into_iter()
        .filter(|r| config.is_enabled(*r))
        .flat_map(|r| rules::check(r, &cx))
        .collect();
    defects.sort_by(|a, b| {
        (&a.location.screen, a.rule, &a.location.element, &a.message).cmp(&(
            &b.location.screen,
            b.rule,
            &b.location.element,
            &b.message,
        ))
    });
    defects
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub per_rule: BTreeMap<RuleId, usize>,
    pub per_heuristic: BTreeMap<String, usize>,
    pub per_screen: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_severity: Option<Fixed2>,
}

impl Summary {
    pub fn of(defects: &[Defect]) -> Self {
        let mut per_rule = BTreeMap::new();
        let mut per_heuristic = BTreeMap::new();
        let mut per_screen = BTreeMap::new();
        let mut severity_sum = 0u64;
        for d in defects {
            *per_rule.entry(d.rule).or_insert(0) += 1;
            *per_heuristic.entry(d.heuristic.clone()).or_insert(0) += 1;
            *per_screen.entry(d.location.screen.clone()).or_insert(0) += 1;
            severity_sum += u64::from(d.severity.get());
        }
        Summary {
            total: defects.len(),
            per_rule,
            per_heuristic,
            per_screen,
            mean_severity: (!defects.is_empty()).then(|| Fixed2::from_ratio(severity_sum, defects.len() as u64)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub structure: Vec<StructureError>,
    pub defects: Vec<Defect>,
    pub summary: Summary,
}

impl DefectReport {
    pub fn is_clean(&self) -> bool {
        self.structure.is_empty() && self.defects.is_empty()
    }

    pub fn max_severity(&self) -> Option<Severity> {
        self.defects.iter().map(|d| d.severity).max()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per finding, then a count line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.structure {
            writeln!(out, "error {e}").unwrap();
        }
        for d in &self.defects {
            writeln!(
                out,
                "{} {} [{}] {}: {}",
                d.severity.level().to_uppercase(),
                d.rule,
                d.heuristic,
                d.location,
                d.message
            )
            .unwrap();
        }
        let n = self.defects.len();
        write!(out, "{n} defect{}", if n == 1 { "" } else { "s" }).unwrap();
        if let Some(mean) = self.summary.mean_severity {
            write!(out, ", mean severity {mean}").unwrap();
        }
        if !self.structure.is_empty() {
            let k = self.structure.len();
            write!(out, ", {k} structural error{}", if k == 1 { "" } else { "s" }).unwrap();
        }
        out.push('\n');
        out
    }
}

pub fn lint_project(project: &Project, config: &LintConfig) -> DefectReport {
    lint_project_with(project, config, false)
}

/// As [`lint_project`], optionally linting features on the rayon pool.
/// Results are concatenated in feature declaration order either way.
pub fn lint_project_with(project: &Project, config: &LintConfig, parallel: bool) -> DefectReport {
    let structure = validate_structure(project);
    let per_feature: Vec<Vec<Defect>> = if parallel {
        project
            .features
            .par_iter()
            .map(|f| lint_feature(f, project, config))
            .collect()
    } else {
        project
            .features
            .iter()
            .map(|f| lint_feature(f, project, config))
            .collect()
    };
    let defects: Vec<Defect> = per_feature.into_iter().flatten().collect();
    DefectReport {
        structure,
        summary: Summary::of(&defects),
        defects,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn lint_src(src: &str) -> Vec<Defect> {
        let p = parse(src).unwrap();
        lint_project(&p, &p.config).defects
    }

    #[test]
    fn layout_only_screen_in_two_screen_flow() {
        let defects = lint_src(
            r#"project "p"
story US1 as "s" want "w" prio 1
screen a entry { button go "Continue" }
screen b feedback { layout msg card "Done" }
feature f for US1 { use a b; connect a.go -> b }
"#,
        );
        let r1: Vec<_> = defects.iter().filter(|d| d.rule == RuleId::R1).collect();
        assert_eq!(r1.len(), 1);
        assert_eq!(r1[0].location.screen, "b");
        assert!(defects.iter().all(|d| d.rule != RuleId::R2));
    }

    #[test]
    fn unspecified_field_names_element() {
        let defects = lint_src(
            r#"project "p"
story US1 as "s" want "w" prio 1
screen a entry feedback { field email "E-mail" required unspecified; button go "Continue" }
feature f for US1 { use a }
"#,
        );
        assert_eq!(defects.len(), 1);
        assert_eq!(defects[0].rule, RuleId::R5);
        assert_eq!(defects[0].location.element.as_deref(), Some("email"));
    }

    #[test]
    fn mean_severity_of_two_features() {
        let mut p = parse(
            r#"project "p"
story US1 as "s" want "w" prio 1
screen a entry feedback { button x "" }
screen b entry feedback { field q "Q"; button go "Continue" }
feature f1 for US1 { use a }
feature f2 for US1 { use b }
"#,
        )
        .unwrap();
        p.config.severity.insert(RuleId::R3, Severity::MAJOR);
        let report = lint_project(&p, &p.config);
        assert_eq!(report.defects.len(), 2);
        assert_eq!(report.summary.mean_severity.unwrap().to_string(), "2.50");
    }

    #[test]
    fn empty_project_has_no_mean() {
        let report = lint_project(&Project::new("e"), &LintConfig::default());
        assert!(report.is_clean());
        assert!(report.summary.mean_severity.is_none());
        assert!(!report.to_json().contains("mean_severity"));
        assert_eq!(report.to_text(), "0 defects\n");
    }

    #[test]
    fn r7_accepts_edge_to_earlier_screen_on_cycle() {
        // a -> b -> c -> a ; c returns to a (on its entry path), b has a back edge,
        // d only reachable from c and has no way back.
        let defects = lint_src(
            r#"project "p"
story US1 as "s" want "w" prio 1
screen a entry { button n "Next" }
screen b { button n "Next"; button r "Return" }
screen c feedback { button home "Home"; button more "More" }
screen d feedback { button stay "Stay" }
feature f for US1 {
  use a b c d
  connect a.n -> b; connect b.n -> c; connect b.r -> a back
  connect c.home -> a; connect c.more -> d; connect d.stay -> d
}
"#,
        );
        let r7: Vec<_> = defects
            .iter()
            .filter(|d| d.rule == RuleId::R7)
            .map(|d| d.location.screen.as_str())
            .collect();
        assert_eq!(r7, vec!["d"]);
    }

    #[test]
    fn r6_satisfied_by_error_screen_link() {
        let src = r#"project "p"
story US1 as "s" want "w" prio 1
screen form entry { field n "Name" required yes; button save "Save" submits }
screen oops error { button back "Back" }
screen done feedback { button home "Home" }
feature f for US1 {
  use form oops done
  connect form.save -> done
  connect done.home -> form back
  connect oops.back -> form back
}
"#;
        let defects = lint_src(src);
        assert_eq!(
            defects.iter().filter(|d| d.rule == RuleId::R6).count(),
            1,
            "{defects:#?}"
        );
        let fixed = src.replace(
            "connect form.save -> done",
            "connect form.save -> done\n  connect form.save -> oops error",
        );
        assert!(lint_src(&fixed).iter().all(|d| d.rule != RuleId::R6));
    }
}
