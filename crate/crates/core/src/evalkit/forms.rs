use std::collections::{BTreeMap, HashSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::decimal::Fixed2;

/// One row of an evaluator's defect form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectForm {
    pub evaluator: String,
    pub group: String,
    pub location: String,
    /// One or more heuristic names separated by `;`.
    pub heuristic: String,
    pub severity: u8,
    pub justification: String,
    pub is_false_positive: bool,
    pub dedup_key: String,
}

impl DefectForm {
    pub fn heuristics(&self) -> impl Iterator<Item = &str> {
        self.heuristic.split(';').map(str::trim).filter(|h| !h.is_empty())
    }
}

#[derive(Debug, Deserialize)]
struct RawForm {
    evaluator: String,
    group: String,
    location: String,
    heuristic: String,
    severity: String,
    justification: String,
    is_false_positive: String,
    dedup_key: String,
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "y" | "1" => Some(true),
        "false" | "no" | "n" | "0" | "" => Some(false),
        _ => None,
    }
}

/// Reads defect forms from CSV with a header row naming the
/// [`DefectForm`] fields. Row numbers in errors are 1-based data rows.
pub fn read_defect_forms<R: Read>(reader: R) -> Result<Vec<DefectForm>, EvalError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut forms = Vec::new();
    for (i, rec) in rdr.deserialize::<RawForm>().enumerate() {
        let row = i + 1;
        let raw = rec.map_err(|e| EvalError::BadRow {
            row,
            reason: e.to_string(),
        })?;
        let severity = raw
            .severity
            .parse::<u8>()
            .ok()
            .filter(|s| (1..=4).contains(s))
            .ok_or_else(|| EvalError::BadSeverity {
                row,
                value: raw.severity.clone(),
            })?;
        let is_false_positive = parse_bool(&raw.is_false_positive).ok_or_else(|| EvalError::BadRow {
            row,
            reason: format!("is_false_positive `{}` is not a boolean", raw.is_false_positive),
        })?;
        if raw.dedup_key.is_empty() {
            return Err(EvalError::BadRow {
                row,
                reason: "dedup_key is empty".into(),
            });
        }
        forms.push(DefectForm {
            evaluator: raw.evaluator,
            group: raw.group,
            location: raw.location,
            heuristic: raw.heuristic,
            severity,
            justification: raw.justification,
            is_false_positive,
            dedup_key: raw.dedup_key,
        });
    }
    Ok(forms)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvalSummary {
    pub group: String,
    pub total_discrepancies: usize,
    pub false_positives: usize,
    pub real_defects: usize,
    pub unique_defects: usize,
    pub duplicates: usize,
    pub per_heuristic: BTreeMap<String, usize>,
    pub per_location: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_severity: Option<Fixed2>,
}

/// Aggregates the rows belonging to `group`. A real defect is a duplicate
/// when an earlier real defect carries the same `dedup_key`.
pub fn summarize_defects(forms: &[DefectForm], group: &str) -> Result<EvalSummary, EvalError> {
    let rows: Vec<(usize, &DefectForm)> = forms
        .iter()
        .enumerate()
        .filter(|(_, f)| f.group.trim() == group.trim())
        .collect();
    if let Some((i, f)) = rows.iter().find(|(_, f)| !(1..=4).contains(&f.severity)) {
        return Err(EvalError::BadSeverity {
            row: i + 1,
            value: f.severity.to_string(),
        });
    }

    let mut seen = HashSet::new();
    let mut summary = EvalSummary {
        group: group.to_string(),
        total_discrepancies: rows.len(),
        false_positives: 0,
        real_defects: 0,
        unique_defects: 0,
        duplicates: 0,
        per_heuristic: BTreeMap::new(),
        per_location: BTreeMap::new(),
        mean_severity: None,
    };
    let mut severity_sum = 0u64;
    for (_, f) in rows {
        if f.is_false_positive {
            summary.false_positives += 1;
            continue;
        }
        summary.real_defects += 1;
        if seen.insert(f.dedup_key.as_str()) {
            summary.unique_defects += 1;
        } else {
            summary.duplicates += 1;
        }
        for h in f.heuristics() {
            *summary.per_heuristic.entry(h.to_string()).or_insert(0) += 1;
        }
        *summary.per_location.entry(f.location.clone()).or_insert(0) += 1;
        severity_sum += u64::from(f.severity);
    }
    if summary.real_defects > 0 {
        summary.mean_severity = Some(Fixed2::from_ratio(severity_sum, summary.real_defects as u64));
    }
    Ok(summary)
}
