use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rules::RuleId;

pub const DEFAULT_BLOCKLIST: [&str; 4] = ["click here", "button", "link", "ok?"];
pub const DEFAULT_MIN_LABEL_LEN: usize = 2;

/// Severity on the four-point defect scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Severity(u8);

impl Severity {
    pub const COSMETIC: Severity = Severity(1);
    pub const MINOR: Severity = Severity(2);
    pub const MAJOR: Severity = Severity(3);
    pub const CATASTROPHIC: Severity = Severity(4);

    pub fn new(value: u8) -> Option<Severity> {
        (1..=4).contains(&value).then_some(Severity(value))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn level(self) -> &'static str {
        match self.0 {
            1 => "cosmetic",
            2 => "minor",
            3 => "major",
            _ => "catastrophic",
        }
    }
}

impl TryFrom<u8> for Severity {
    type Error = String;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Severity::new(value).ok_or_else(|| format!("severity {value} outside 1..4"))
    }
}

impl From<Severity> for u8 {
    fn from(s: Severity) -> u8 {
        s.0
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Severity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let n: u8 = match s.to_ascii_lowercase().as_str() {
            "cosmetic" => 1,
            "minor" => 2,
            "major" => 3,
            "catastrophic" => 4,
            other => other.parse().map_err(|_| format!("invalid severity `{s}`"))?,
        };
        Severity::try_from(n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LintConfig {
    pub severity: BTreeMap<RuleId, Severity>,
    pub blocklist: BTreeSet<String>,
    pub min_label_len: usize,
    pub disabled: BTreeSet<RuleId>,
    /// Require every terminal screen, not just one, to give feedback.
    pub strict_feedback: bool,
}

impl Default for LintConfig {
    fn default() -> Self {
        LintConfig {
            severity: BTreeMap::new(),
            blocklist: DEFAULT_BLOCKLIST.iter().map(|s| s.to_string()).collect(),
            min_label_len: DEFAULT_MIN_LABEL_LEN,
            disabled: BTreeSet::new(),
            strict_feedback: false,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid config {path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

impl LintConfig {
    pub fn severity_of(&self, rule: RuleId) -> Severity {
        self.severity
            .get(&rule)
            .copied()
            .unwrap_or_else(|| rule.default_severity())
    }

    pub fn is_enabled(&self, rule: RuleId) -> bool {
        !self.disabled.contains(&rule)
    }

    pub fn is_blocked(&self, label: &str) -> bool {
        let normalized = label.trim().to_lowercase();
        self.blocklist.iter().any(|b| b.trim().to_lowercase() == normalized)
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text).map_err(|source| ConfigError::Json {
            path: path.display().to_string(),
            source,
        })
    }
}
