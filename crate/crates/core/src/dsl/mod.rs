//! The `.sfw` wireflow language.
//!
//! Line-oriented statements with brace blocks:
//!
//! ```text
//! project "CAA Monitor"
//! story US1 as "student" want "request CAA use" prio 1
//! screen home "Home" entry {
//!   button add "Add certificate"
//! }
//! feature add-cert for US1 {
//!   use home form
//!   connect home.add -> form
//!   task add-certificate : home.add -> form
//! }
//! ```
//!
//! Newlines and `;` both terminate statements; `#` starts a comment.

mod format;
mod lexer;
mod parser;

use std::fmt;

use serde::Serialize;

pub use format::format;
pub use parser::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        SourceSpan { line, column, length }
    }

    /// True when the span lies within `src`: on an existing line and
    /// covering at most that line's characters plus its line break. A
    /// zero-length span may sit just past the final character.
    pub fn is_within(&self, src: &str) -> bool {
        let lines: Vec<&str> = src.split('\n').collect();
        let Some(line) = lines.get(self.line.wrapping_sub(1)) else {
            return false;
        };
        let has_break = self.line < lines.len();
        let end = line.chars().count() + 1 + usize::from(has_break);
        self.line >= 1 && self.column >= 1 && self.column + self.length <= end
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub span: SourceSpan,
    pub code: &'static str,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(span: SourceSpan, code: &'static str, message: impl Into<String>) -> Self {
        ParseError {
            span,
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.span, self.code, self.message)
    }
}

impl std::error::Error for ParseError {}
