//! Guided walk through the three method steps: order the features, build
//! each feature's wireflow, then answer the eight verification questions
//! per feature. A "no" in step 3 records a pending refinement; once every
//! question has been asked the session returns to step 2 for the affected
//! features and re-asks only the open questions, until none remain.
//!
//! The session is saved to a JSON sidecar after every answer, so an
//! interrupted run resumes where it stopped. Interactive and scripted
//! (`--answers`) modes share the same state machine.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use super::{load_project, CliError, CliResult, ExitStatus, Io};
use crate::lint::{lint_feature, RuleId};
use crate::metrics::{reachability, shortest_actions, PathOptions};
use crate::model::{build_graph, prioritize_stories, Feature, Project, ScreenTag};

pub const STEP1_QUESTIONS: [&str; 6] = [
    "Have we selected the features we want to create in the wireflow? Is there any other feature that could be used at this time?",
    "Of the selected features, which is the most important? And, the next one?",
    "In the first contact with the application, what tasks will the user be able to perform?",
    "For users who already have experience with the application, what tasks will they be able to perform?",
    "What market demand will the application meet? In what way?",
    "Are there competitors in the market? What tasks will be similar? What will be innovative about the application?",
];

pub const STEP2_QUESTIONS: [&str; 7] = [
    "How many screens does it take for the user to execute this feature from start to finish?",
    "What are the necessary elements on each screen for the user to perform this feature?",
    "Which other screen will the trigger on one screen take the user to?",
    "If the user enters information incorrectly, what will happen to the flow of feature in the application?",
    "If the user wants to return to a previous screen, is it possible?",
    "Are there ways for the user to perform this feature with fewer clicks?",
    "What will happen to the application flow when the user completes the feature?",
];

#[derive(Debug, Args)]
pub struct WizardArgs {
    pub path: PathBuf,
    /// Read answers from a file (one `yes`/`no [: note]` per line) instead of the terminal
    #[arg(long)]
    pub answers: Option<PathBuf>,
    /// Session file; defaults to `<path>.wizard.json`
    #[arg(long)]
    pub session: Option<PathBuf>,
    /// Discard any saved session and start from step 1
    #[arg(long)]
    pub restart: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    #[serde(rename = "1")]
    Features,
    #[serde(rename = "2")]
    Wireflows,
    #[serde(rename = "3")]
    Verify,
    Complete,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prompt {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub feature: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rule: Option<RuleId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    pub feature: String,
    pub rule: RuleId,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerRecord {
    pub step: Step,
    #[serde(flatten)]
    pub prompt: Prompt,
    pub yes: bool,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WizardSession {
    pub project: String,
    pub step: Step,
    /// Number of times step 3 has been entered.
    pub verify_passes: u32,
    pub queue: Vec<Prompt>,
    pub cursor: usize,
    pub pending: Vec<Refinement>,
    pub answers: Vec<AnswerRecord>,
}

impl WizardSession {
    pub fn new(project: impl Into<String>) -> Self {
        WizardSession {
            project: project.into(),
            step: Step::Features,
            verify_passes: 0,
            queue: vec![Prompt {
                feature: None,
                rule: None,
            }],
            cursor: 0,
            pending: Vec::new(),
            answers: Vec::new(),
        }
    }

    pub fn load(path: &Path) -> std::io::Result<Option<Self>> {
        match fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text)
                .map(Some)
                .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("session serializes");
        text.push('\n');
        fs::write(path, text)
    }

    pub fn current(&self) -> Option<&Prompt> {
        self.queue.get(self.cursor)
    }

    fn enter(&mut self, step: Step, project: &Project) {
        self.step = step;
        self.cursor = 0;
        self.queue = match step {
            Step::Features => vec![Prompt {
                feature: None,
                rule: None,
            }],
            Step::Wireflows if self.pending.is_empty() => ordered_features(project)
                .into_iter()
                .map(|f| Prompt {
                    feature: Some(f.id.clone()),
                    rule: None,
                })
                .collect(),
            Step::Wireflows => {
                let mut seen = Vec::new();
                for r in &self.pending {
                    if !seen.contains(&r.feature) {
                        seen.push(r.feature.clone());
                    }
                }
                seen.into_iter()
                    .map(|f| Prompt {
                        feature: Some(f),
                        rule: None,
                    })
                    .collect()
            }
            Step::Verify => {
                self.verify_passes += 1;
                if self.pending.is_empty() {
                    ordered_features(project)
                        .into_iter()
                        .flat_map(|f| {
                            RuleId::ALL
                                .into_iter()
                                .filter(|r| project.config.is_enabled(*r))
                                .map(|r| Prompt {
                                    feature: Some(f.id.clone()),
                                    rule: Some(r),
                                })
                        })
                        .collect()
                } else {
                    self.pending
                        .iter()
                        .map(|r| Prompt {
                            feature: Some(r.feature.clone()),
                            rule: Some(r.rule),
                        })
                        .collect()
                }
            }
            Step::Complete => Vec::new(),
        };
        self.advance_if_exhausted(project);
    }

    fn advance_if_exhausted(&mut self, project: &Project) {
        if self.cursor < self.queue.len() || self.step == Step::Complete {
            return;
        }
        match self.step {
            Step::Features => self.enter(Step::Wireflows, project),
            Step::Wireflows => self.enter(Step::Verify, project),
            Step::Verify if self.pending.is_empty() => self.enter(Step::Complete, project),
            Step::Verify => self.enter(Step::Wireflows, project),
            Step::Complete => {}
        }
    }

    /// Applies one answer to the current prompt. Returns `false` when the
    /// answer means the user has to go and edit the project first.
    pub fn answer(&mut self, yes: bool, note: &str, project: &Project) -> bool {
        let Some(prompt) = self.current().cloned() else {
            return false;
        };
        self.answers.push(AnswerRecord {
            step: self.step,
            prompt: prompt.clone(),
            yes,
            note: note.to_string(),
        });
        match self.step {
            Step::Features | Step::Wireflows if !yes => return false,
            Step::Verify => {
                let feature = prompt.feature.clone().unwrap_or_default();
                let rule = prompt.rule.expect("verification prompt names a rule");
                let existing = self.pending.iter().position(|r| r.feature == feature && r.rule == rule);
                match (yes, existing) {
                    (true, Some(i)) => {
                        self.pending.remove(i);
                    }
                    (false, Some(i)) => self.pending[i].note = note.to_string(),
                    (false, None) => self.pending.push(Refinement {
                        feature,
                        rule,
                        note: note.to_string(),
                    }),
                    (true, None) => {}
                }
            }
            _ => {}
        }
        self.cursor += 1;
        self.advance_if_exhausted(project);
        true
    }
}

fn ordered_features(project: &Project) -> Vec<&Feature> {
    let rank: BTreeMap<&str, usize> = prioritize_stories(&project.stories)
        .iter()
        .enumerate()
        .map(|(i, s)| {
            (
                project
                    .stories
                    .iter()
                    .find(|x| x.id == s.id)
                    .map(|x| x.id.as_str())
                    .unwrap_or(""),
                i,
            )
        })
        .collect();
    let mut features: Vec<&Feature> = project.features.iter().collect();
    features.sort_by_key(|f| rank.get(f.story.as_str()).copied().unwrap_or(usize::MAX));
    features
}

/// Where answers come from.
pub trait AnswerSource {
    /// Next raw answer line, or `None` when input is exhausted.
    fn next_line(&mut self) -> std::io::Result<Option<String>>;
    fn is_scripted(&self) -> bool;
}

pub struct ScriptedAnswers {
    lines: std::vec::IntoIter<String>,
}

impl ScriptedAnswers {
    pub fn from_text(text: &str) -> Self {
        let lines: Vec<String> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_owned)
            .collect();
        ScriptedAnswers {
            lines: lines.into_iter(),
        }
    }
}

impl AnswerSource for ScriptedAnswers {
    fn next_line(&mut self) -> std::io::Result<Option<String>> {
        Ok(self.lines.next())
    }

    fn is_scripted(&self) -> bool {
        true
    }
}

struct TerminalAnswers<'a, 'b> {
    stdin: &'a mut (dyn BufRead + 'b),
}

impl AnswerSource for TerminalAnswers<'_, '_> {
    fn next_line(&mut self) -> std::io::Result<Option<String>> {
        let mut line = String::new();
        if self.stdin.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        Ok(Some(line.trim().to_string()))
    }

    fn is_scripted(&self) -> bool {
        false
    }
}

/// Parses `yes`, `y`, `no` or `n`, optionally followed by `:` and a note.
pub fn parse_answer(line: &str) -> Option<(bool, String)> {
    let line = line.trim();
    let split = line.find(|c: char| c == ':' || c.is_whitespace()).unwrap_or(line.len());
    let (word, rest) = line.split_at(split);
    let yes = match word.to_ascii_lowercase().as_str() {
        "yes" | "y" => true,
        "no" | "n" => false,
        _ => return None,
    };
    let note = rest.trim_start().trim_start_matches(':').trim().to_string();
    Some((yes, note))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    /// The user answered "no" to a step 1 or step 2 confirmation.
    NeedsEditing,
    /// Answers ran out; the session is saved for later.
    Interrupted,
}

fn describe_step(out: &mut dyn Write, session: &WizardSession, project: &Project) -> std::io::Result<()> {
    let Some(prompt) = session.current() else {
        return Ok(());
    };
    match session.step {
        Step::Features => {
            writeln!(out, "== Step 1: understand and organize the features ==")?;
            for (i, s) in prioritize_stories(&project.stories).iter().enumerate() {
                write!(
                    out,
                    "  {}. {} (prio {}): As a {}, I want {}",
                    i + 1,
                    s.id,
                    s.priority,
                    s.role,
                    s.want
                )?;
                match &s.why {
                    Some(why) => writeln!(out, ", so that {why}.")?,
                    None => writeln!(out, ".")?,
                }
            }
            for q in STEP1_QUESTIONS {
                writeln!(out, "  - {q}")?;
            }
            write!(
                out,
                "[step 1] Are the features selected and ordered by priority? (yes/no) "
            )?;
        }
        Step::Wireflows => {
            let fid = prompt.feature.as_deref().unwrap_or("");
            writeln!(out, "== Step 2: build the wireflow for `{fid}` ==")?;
            if let Some(feature) = project.feature(fid) {
                feature_facts(out, feature, project)?;
            }
            let open: Vec<_> = session.pending.iter().filter(|r| r.feature == fid).collect();
            if open.is_empty() {
                for q in STEP2_QUESTIONS {
                    writeln!(out, "  - {q}")?;
                }
                write!(out, "[step 2 {fid}] Is the wireflow built? (yes/no) ")?;
            } else {
                for r in &open {
                    write!(out, "  refine {}: {}", r.rule, r.rule.rule().question)?;
                    if r.note.is_empty() {
                        writeln!(out)?;
                    } else {
                        writeln!(out, " ({})", r.note)?;
                    }
                }
                write!(out, "[step 2 {fid}] Have the refinements been applied? (yes/no) ")?;
            }
        }
        Step::Verify => {
            let fid = prompt.feature.as_deref().unwrap_or("");
            let rule = prompt.rule.expect("verification prompt names a rule");
            writeln!(
                out,
                "== Step 3: verify `{fid}`: {} ({}) ==",
                rule,
                rule.rule().heuristic
            )?;
            if let Some(feature) = project.feature(fid) {
                let findings: Vec<_> = lint_feature(feature, project, &project.config)
                    .into_iter()
                    .filter(|d| d.rule == rule)
                    .collect();
                if findings.is_empty() {
                    writeln!(out, "  linter: no findings")?;
                }
                for d in findings {
                    writeln!(out, "  linter: {}: {}", d.location, d.message)?;
                }
            }
            write!(out, "[step 3 {fid} {rule}] {} (yes/no) ", rule.rule().question)?;
        }
        Step::Complete => {}
    }
    Ok(())
}

fn feature_facts(out: &mut dyn Write, feature: &Feature, project: &Project) -> std::io::Result<()> {
    let Ok(flow) = build_graph(feature, project) else {
        return writeln!(out, "  (feature has no screens yet)");
    };
    writeln!(
        out,
        "  screens: {}, connectors: {}, entry: {}",
        flow.nodes.len(),
        flow.edges.len(),
        flow.entry
    )?;
    for sid in &flow.nodes {
        if project.screen(sid).is_some_and(|s| s.has_tag(ScreenTag::Feedback)) {
            match shortest_actions(&flow, &flow.entry, sid, PathOptions::default()) {
                Ok(Some(n)) => writeln!(out, "  fewest actions to `{sid}`: {n}")?,
                _ => writeln!(out, "  `{sid}` cannot be reached from the entry")?,
            }
        }
    }
    let unreachable = reachability(&flow);
    if !unreachable.is_empty() {
        let list: Vec<_> = unreachable.into_iter().collect();
        writeln!(out, "  unreachable: {}", list.join(", "))?;
    }
    Ok(())
}

/// Drives `session` until completion, a "no" in steps 1-2, or the end of
/// the answers. `persist` runs after every accepted answer.
pub fn drive(
    session: &mut WizardSession,
    project: &Project,
    answers: &mut dyn AnswerSource,
    out: &mut dyn Write,
    persist: &mut dyn FnMut(&WizardSession) -> std::io::Result<()>,
) -> Result<Outcome, CliError> {
    session.advance_if_exhausted(project);
    while session.step != Step::Complete {
        describe_step(out, session, project)?;
        let (yes, note) = loop {
            let Some(line) = answers.next_line()? else {
                writeln!(out)?;
                return Ok(Outcome::Interrupted);
            };
            if answers.is_scripted() {
                writeln!(out, "{line}")?;
            }
            match parse_answer(&line) {
                Some(a) => break a,
                None if answers.is_scripted() => {
                    return Err(CliError::Usage(format!("invalid answer `{line}`; expected yes or no")));
                }
                None => write!(out, "please answer yes or no: ")?,
            }
        };
        let proceed = session.answer(yes, &note, project);
        persist(session)?;
        if !proceed {
            return Ok(Outcome::NeedsEditing);
        }
    }
    Ok(Outcome::Complete)
}

pub fn session_path(project: &Path, explicit: Option<&Path>) -> PathBuf {
    explicit.map(Path::to_path_buf).unwrap_or_else(|| {
        let mut name = project.as_os_str().to_owned();
        name.push(".wizard.json");
        PathBuf::from(name)
    })
}

pub(crate) fn cmd_wizard(args: WizardArgs, io: &mut Io<'_>) -> CliResult {
    let mut scripted = match &args.answers {
        Some(path) => Some(ScriptedAnswers::from_text(&super::read_file(path)?)),
        None if !io.stdin_is_terminal => {
            return Err(CliError::Usage(
                "wizard needs an interactive terminal or --answers <file>".into(),
            ));
        }
        None => None,
    };
    let project = load_project(&args.path, io)?;
    let session_file = session_path(&args.path, args.session.as_deref());
    let mut session = if args.restart {
        None
    } else {
        WizardSession::load(&session_file).map_err(|source| CliError::Read {
            path: session_file.display().to_string(),
            source,
        })?
    }
    .unwrap_or_else(|| WizardSession::new(args.path.display().to_string()));
    if session.answers.is_empty() {
        writeln!(io.stdout, "starting session {}", session_file.display())?;
    } else {
        writeln!(
            io.stdout,
            "resuming session {} at step {}",
            session_file.display(),
            step_name(session.step)
        )?;
    }

    let mut persist = |s: &WizardSession| s.save(&session_file);
    let outcome = match scripted.as_mut() {
        Some(answers) => drive(&mut session, &project, answers, io.stdout, &mut persist)?,
        None => {
            let mut terminal = TerminalAnswers { stdin: io.stdin };
            drive(&mut session, &project, &mut terminal, io.stdout, &mut persist)?
        }
    };
    session.save(&session_file)?;
    match outcome {
        Outcome::Complete => writeln!(io.stdout, "all questioning points answered positively")?,
        Outcome::NeedsEditing => writeln!(
            io.stdout,
            "edit the project, then rerun to continue at step {}",
            step_name(session.step)
        )?,
        Outcome::Interrupted => writeln!(
            io.stdout,
            "session saved at step {} with {} pending refinement{}",
            step_name(session.step),
            session.pending.len(),
            if session.pending.len() == 1 { "" } else { "s" }
        )?,
    }
    Ok(ExitStatus::CLEAN)
}

fn step_name(step: Step) -> &'static str {
    match step {
        Step::Features => "1",
        Step::Wireflows => "2",
        Step::Verify => "3",
        Step::Complete => "complete",
    }
}
