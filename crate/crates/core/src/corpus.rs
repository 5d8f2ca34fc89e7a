//! Golden-file regression harness over the bundled fixture tree.
//!
//! Layout under the root: `valid/` and `rules/` hold documents that must
//! parse, `invalid/` holds documents that must not, `eval/` holds the
//! evaluation datasets and `golden/` holds expected outputs mirroring the
//! source tree (`golden/valid/caa.fmt.sfw`, ...).

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use similar::TextDiff;

use crate::cli::parse_errors_text;
use crate::dsl::{format, parse};
use crate::evalkit::{read_defect_forms, read_tam_responses, summarize_defects, summarize_tam};
use crate::lint::lint_project;
use crate::metrics::{project_metrics, PathOptions};
use crate::render::to_dot;

pub const EVAL_GROUPS: [&str; 2] = ["control", "experimental"];

/// One expected output: where its golden lives and what the toolchain
/// produces now.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    /// Golden path relative to `golden/`.
    pub golden: PathBuf,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Match,
    Missing,
    /// Unified diff from golden to actual.
    Differs(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub golden: PathBuf,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CorpusReport {
    pub entries: Vec<Entry>,
    /// Documents outside `invalid/` that failed to parse, or inside it that parsed.
    pub misplaced: Vec<String>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.misplaced.is_empty() && self.entries.iter().all(|e| e.outcome == Outcome::Match)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.outcome != Outcome::Match)
    }
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let tag = match e.outcome {
                Outcome::Match => "ok",
                Outcome::Missing => "MISSING",
                Outcome::Differs(_) => "DIFF",
            };
            writeln!(f, "{tag:7} {}", e.golden.display())?;
        }
        for m in &self.misplaced {
            writeln!(f, "BAD     {m}")?;
        }
        for e in self.failures() {
            if let Outcome::Differs(diff) = &e.outcome {
                write!(f, "{diff}")?;
            }
        }
        Ok(())
    }
}

pub struct Corpus {
    root: PathBuf,
}

fn sorted_files(dir: &Path, ext: &str) -> io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    match fs::read_dir(dir) {
        Ok(entries) => {
            for entry in entries {
                let path = entry?.path();
                if path.extension().is_some_and(|e| e == ext) {
                    files.push(path);
                }
            }
        }
        Err(e) if e.kind() == io::ErrorKind::NotFound => {}
        Err(e) => return Err(e),
    }
    files.sort();
    Ok(files)
}

fn stem(path: &Path) -> String {
    path.file_stem().unwrap_or_default().to_string_lossy().into_owned()
}

impl Corpus {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Corpus { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Every `.sfw` document, paired with whether it is expected to parse.
    pub fn documents(&self) -> io::Result<Vec<(PathBuf, bool)>> {
        let mut docs = Vec::new();
        for (dir, valid) in [("valid", true), ("rules", true), ("invalid", false)] {
            docs.extend(
                sorted_files(&self.root.join(dir), "sfw")?
                    .into_iter()
                    .map(|p| (p, valid)),
            );
        }
        Ok(docs)
    }

    fn relative<'a>(&self, path: &'a Path) -> &'a Path {
        path.strip_prefix(&self.root).unwrap_or(path)
    }

    /// Outputs for one document. `Err` carries a misplacement message.
    fn document_artifacts(&self, path: &Path, should_parse: bool) -> Result<Vec<Artifact>, String> {
        let rel = self.relative(path);
        let dir = rel.parent().unwrap_or(Path::new(""));
        let name = stem(path);
        let golden = |suffix: &str| dir.join(format!("{name}.{suffix}"));
        let src = fs::read_to_string(path).map_err(|e| format!("{}: {e}", rel.display()))?;
        let project = match (parse(&src), should_parse) {
            (Ok(p), true) => p,
            (Err(errors), false) => {
                return Ok(vec![Artifact {
                    golden: golden("errors.txt"),
                    actual: parse_errors_text(rel, &errors),
                }]);
            }
            (Err(errors), true) => {
                return Err(format!(
                    "{} does not parse:\n{}",
                    rel.display(),
                    parse_errors_text(rel, &errors)
                ));
            }
            (Ok(_), false) => return Err(format!("{} parses but is filed as invalid", rel.display())),
        };
        let report = lint_project(&project, &project.config);
        let mut out = vec![Artifact {
            golden: golden("check.txt"),
            actual: report.to_text(),
        }];
        if dir == Path::new("valid") {
            out.push(Artifact {
                golden: golden("check.json"),
                actual: report.to_json(),
            });
            out.push(Artifact {
                golden: golden("fmt.sfw"),
                actual: format(&project),
            });
            if let Ok(doc) = to_dot(&project, None) {
                out.push(Artifact {
                    golden: golden("dot"),
                    actual: doc.text,
                });
            }
            if let Ok(table) = project_metrics(&project, PathOptions::default()) {
                let mut json = serde_json::to_string_pretty(&table).expect("metrics serialize");
                json.push('\n');
                out.push(Artifact {
                    golden: golden("metrics.json"),
                    actual: json,
                });
            }
        }
        Ok(out)
    }

    fn eval_artifacts(&self) -> Result<Vec<Artifact>, String> {
        let mut out = Vec::new();
        let dir = self.root.join("eval");
        let read = |name: &str| -> Result<Option<String>, String> {
            match fs::read_to_string(dir.join(name)) {
                Ok(s) => Ok(Some(s)),
                Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
                Err(e) => Err(format!("eval/{name}: {e}")),
            }
        };
        if let Some(text) = read("forms.csv")? {
            let forms = read_defect_forms(text.as_bytes()).map_err(|e| format!("eval/forms.csv: {e}"))?;
            for group in EVAL_GROUPS {
                let summary = summarize_defects(&forms, group).map_err(|e| format!("eval/forms.csv: {e}"))?;
                let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
                json.push('\n');
                out.push(Artifact {
                    golden: PathBuf::from(format!("eval/forms.{group}.json")),
                    actual: json,
                });
            }
        }
        if let Some(text) = read("tam.csv")? {
            let responses = read_tam_responses(text.as_bytes()).map_err(|e| format!("eval/tam.csv: {e}"))?;
            for group in EVAL_GROUPS {
                let summary = summarize_tam(&responses, group).map_err(|e| format!("eval/tam.csv: {e}"))?;
                out.push(Artifact {
                    golden: PathBuf::from(format!("eval/tam.{group}.json")),
                    actual: summary.to_json(),
                });
            }
        }
        Ok(out)
    }

    /// Regenerates every artifact. Documents are processed in parallel;
    /// the result order is fixed.
    pub fn artifacts(&self) -> io::Result<(Vec<Artifact>, Vec<String>)> {
        let docs = self.documents()?;
        let results: Vec<Result<Vec<Artifact>, String>> = docs
            .par_iter()
            .map(|(path, valid)| self.document_artifacts(path, *valid))
            .chain(rayon::iter::once(self.eval_artifacts()))
            .collect();
        let mut artifacts = Vec::new();
        let mut misplaced = Vec::new();
        for r in results {
            match r {
                Ok(a) => artifacts.extend(a),
                Err(m) => misplaced.push(m),
            }
        }
        Ok((artifacts, misplaced))
    }

    pub fn verify(&self) -> io::Result<CorpusReport> {
        let (artifacts, misplaced) = self.artifacts()?;
        let golden_root = self.root.join("golden");
        let entries = artifacts
            .into_par_iter()
            .map(|a| {
                let outcome = match fs::read_to_string(golden_root.join(&a.golden)) {
                    Ok(expected) if expected == a.actual => Outcome::Match,
                    Ok(expected) => {
                        let name = a.golden.display().to_string();
                        let diff = TextDiff::from_lines(&expected, &a.actual)
                            .unified_diff()
                            .header(&format!("golden/{name}"), &format!("actual/{name}"))
                            .to_string();
                        Outcome::Differs(diff)
                    }
                    Err(_) => Outcome::Missing,
                };
                Entry {
                    golden: a.golden,
                    outcome,
                }
            })
            .collect();
        Ok(CorpusReport { entries, misplaced })
    }

    /// Rewrites every golden from current output; returns how many changed.
    pub fn bless(&self) -> io::Result<usize> {
        let (artifacts, _) = self.artifacts()?;
        let golden_root = self.root.join("golden");
        let mut changed = 0;
        for a in artifacts {
            let path = golden_root.join(&a.golden);
            if fs::read_to_string(&path).ok().as_deref() == Some(a.actual.as_str()) {
                continue;
            }
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(&path, &a.actual)?;
            changed += 1;
        }
        Ok(changed)
    }
}

/// Verifies the corpus rooted at `root`.
pub fn verify_corpus(root: impl Into<PathBuf>) -> io::Result<CorpusReport> {
    Corpus::new(root).verify()
}
