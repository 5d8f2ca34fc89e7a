//! Heuristic-evaluation and TAM questionnaire aggregation.

mod forms;
mod tam;

pub use forms::{read_defect_forms, summarize_defects, DefectForm, EvalSummary};
pub use tam::{read_tam_responses, summarize_tam, Construct, TamResponse, TamSummary, QUESTIONS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("E-BAD-SEVERITY: row {row}: severity `{value}` outside 1..4")]
    BadSeverity { row: usize, value: String },
    #[error("E-BAD-ANSWER: row {row}: Q{question} answer `{value}` outside 1..5")]
    BadAnswer { row: usize, question: usize, value: String },
    #[error("E-BAD-ROW: row {row}: {reason}")]
    BadRow { row: usize, reason: String },
    #[error("E-EMPTY-GROUP: no responses for group `{0}`")]
    EmptyGroup(String),
}
