use std::io::Read;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use super::EvalError;
use crate::decimal::Fixed2;

pub const QUESTIONS: usize = 11;

/// TAM constructs and the (1-based) questions that measure each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construct {
    PerceivedUsefulness,
    PerceivedEaseOfUse,
    PerceivedEnjoyment,
    BehavioralIntention,
}

impl Construct {
    pub const ALL: [Construct; 4] = [
        Construct::PerceivedUsefulness,
        Construct::PerceivedEaseOfUse,
        Construct::PerceivedEnjoyment,
        Construct::BehavioralIntention,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Construct::PerceivedUsefulness => "PU",
            Construct::PerceivedEaseOfUse => "PEOU",
            Construct::PerceivedEnjoyment => "PE",
            Construct::BehavioralIntention => "BI",
        }
    }

    pub fn questions(self) -> std::ops::RangeInclusive<usize> {
        match self {
            Construct::PerceivedUsefulness => 1..=3,
            Construct::PerceivedEaseOfUse => 4..=7,
            Construct::PerceivedEnjoyment => 8..=10,
            Construct::BehavioralIntention => 11..=11,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TamResponse {
    pub respondent: String,
    pub group: String,
    /// Likert answers for Q1..Q11, each 1..5.
    pub answers: [u8; QUESTIONS],
}

/// Reads responses from CSV with columns `respondent,group,Q1,...,Q11`
/// (any column order).
pub fn read_tam_responses<R: Read>(reader: R) -> Result<Vec<TamResponse>, EvalError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| EvalError::BadRow {
            row: 0,
            reason: e.to_string(),
        })?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| EvalError::BadRow {
                row: 0,
                reason: format!("missing column `{name}`"),
            })
    };
    let respondent_col = column("respondent")?;
    let group_col = column("group")?;
    let question_cols = (1..=QUESTIONS)
        .map(|q| column(&format!("Q{q}")))
        .collect::<Result<Vec<_>, _>>()?;

    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| EvalError::BadRow {
            row,
            reason: e.to_string(),
        })?;
        let field = |c: usize| rec.get(c).unwrap_or("");
        let mut answers = [0u8; QUESTIONS];
        for (q, &c) in question_cols.iter().enumerate() {
            let raw = field(c);
            answers[q] =
                raw.parse::<u8>()
                    .ok()
                    .filter(|a| (1..=5).contains(a))
                    .ok_or_else(|| EvalError::BadAnswer {
                        row,
                        question: q + 1,
                        value: raw.to_string(),
                    })?;
        }
        out.push(TamResponse {
            respondent: field(respondent_col).to_string(),
            group: field(group_col).to_string(),
            answers,
        });
    }
    Ok(out)
}

/// Per-question and per-construct means for one group. Raw sums are
/// kept so means stay exact; rounding happens only for display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TamSummary {
    pub group: String,
    pub respondents: usize,
    sums: [u64; QUESTIONS],
}

impl TamSummary {
    /// Mean answer to question `q` (1-based).
    pub fn question_mean(&self, q: usize) -> f64 {
        self.sums[q - 1] as f64 / self.respondents as f64
    }

    pub fn question_rounded(&self, q: usize) -> Fixed2 {
        Fixed2::from_ratio(self.sums[q - 1], self.respondents as u64)
    }

    /// Mean of the construct's question means.
    pub fn construct_mean(&self, c: Construct) -> f64 {
        let qs = c.questions();
        let k = qs.clone().count() as f64;
        qs.map(|q| self.question_mean(q)).sum::<f64>() / k
    }

    pub fn construct_rounded(&self, c: Construct) -> Fixed2 {
        let qs = c.questions();
        let k = qs.clone().count() as u64;
        let total: u64 = qs.map(|q| self.sums[q - 1]).sum();
        Fixed2::from_ratio(total, k * self.respondents as u64)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

struct Questions<'a>(&'a TamSummary);
struct Constructs<'a>(&'a TamSummary);

impl Serialize for Questions<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(QUESTIONS))?;
        for q in 1..=QUESTIONS {
            m.serialize_entry(&format!("Q{q}"), &self.0.question_rounded(q))?;
        }
        m.end()
    }
}

impl Serialize for Constructs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(Construct::ALL.len()))?;
        for c in Construct::ALL {
            m.serialize_entry(c.code(), &self.0.construct_rounded(c))?;
        }
        m.end()
    }
}

impl Serialize for TamSummary {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TamSummary", 4)?;
        st.serialize_field("group", &self.group)?;
        st.serialize_field("respondents", &self.respondents)?;
        st.serialize_field("questions", &Questions(self))?;
        st.serialize_field("constructs", &Constructs(self))?;
        st.end()
    }
}

pub fn summarize_tam(responses: &[TamResponse], group: &str) -> Result<TamSummary, EvalError> {
    let mut sums = [0u64; QUESTIONS];
    let mut respondents = 0;
    for r in responses.iter().filter(|r| r.group.trim() == group.trim()) {
        respondents += 1;
        for (q, &a) in r.answers.iter().enumerate() {
            if !(1..=5).contains(&a) {
                return Err(EvalError::BadAnswer {
                    row: respondents,
                    question: q + 1,
                    value: a.to_string(),
                });
            }
            sums[q] += u64::from(a);
        }
    }
    if respondents == 0 {
        return Err(EvalError::EmptyGroup(group.to_string()));
    }
    Ok(TamSummary {
        group: group.to_string(),
        respondents,
        sums,
    })
}
