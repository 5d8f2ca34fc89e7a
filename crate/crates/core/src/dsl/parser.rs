use std::collections::BTreeSet;

use super::lexer::{tokenize, Token, TokenKind};
use super::{ParseError, SourceSpan};
use crate::lint::{RuleId, Severity};
use crate::model::{
    Connector, ConnectorKind, Element, Feature, Project, Required, Screen, ScreenTag, TaskPath, TaskStep, UserStory,
};

const TOP_LEVEL: [&str; 5] = ["project", "config", "story", "screen", "feature"];

/// Parses a `.sfw` document. Errors are collected across the whole
/// document; the parser resynchronises at statement boundaries.
pub fn parse(src: &str) -> Result<Project, Vec<ParseError>> {
    let (tokens, mut errors) = tokenize(src);
    let mut parser = Parser {
        tokens,
        pos: 0,
        errors: Vec::new(),
        project: Project::new(""),
        header: None,
    };
    parser.document();
    errors.append(&mut parser.errors);
    if parser.header.is_none() && errors.is_empty() {
        errors.push(ParseError::new(
            SourceSpan::new(1, 1, 0),
            "E-HEADER",
            "missing `project \"<name>\"` header",
        ));
    }
    if errors.is_empty() {
        Ok(parser.project)
    } else {
        errors.sort_by_key(|e| e.span);
        Err(errors)
    }
}

type PResult<T> = Result<T, ParseError>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    errors: Vec<ParseError>,
    project: Project,
    header: Option<SourceSpan>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_kind(&self) -> &TokenKind {
        &self.peek().kind
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        tok
    }

    fn at_line_start(&self) -> bool {
        self.pos == 0 || self.tokens[self.pos - 1].kind == TokenKind::Newline
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let tok = self.peek();
        ParseError::new(
            tok.span,
            "E-SYNTAX",
            format!("expected {expected}, found {}", tok.kind.describe()),
        )
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek_kind(), TokenKind::Ident(s) if s == word)
    }

    fn eat_keyword(&mut self, word: &str) -> bool {
        if self.is_keyword(word) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<()> {
        if self.eat_keyword(word) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{word}`")))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek_kind().clone() {
            TokenKind::Ident(s) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn string(&mut self, what: &str) -> PResult<String> {
        match self.peek_kind().clone() {
            TokenKind::Str(s) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn opt_string(&mut self) -> Option<String> {
        match self.peek_kind().clone() {
            TokenKind::Str(s) => {
                self.advance();
                Some(s)
            }
            _ => None,
        }
    }

    fn int(&mut self, what: &str) -> PResult<(u64, SourceSpan)> {
        match *self.peek_kind() {
            TokenKind::Int(n) => {
                let span = self.advance().span;
                Ok((n, span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<SourceSpan> {
        if *self.peek_kind() == kind {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&kind.describe()))
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        match self.peek_kind() {
            TokenKind::Newline | TokenKind::Semi => {
                self.advance();
                Ok(())
            }
            TokenKind::Eof | TokenKind::RBrace => Ok(()),
            _ => Err(self.unexpected("end of statement")),
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek_kind(), TokenKind::Newline | TokenKind::Semi) {
            self.advance();
        }
    }

    /// Skips the rest of a top-level statement, including any block it
    /// opened.
    fn recover_top_level(&mut self) {
        if self.at_line_start() && matches!(self.peek_kind(), TokenKind::Ident(w) if TOP_LEVEL.contains(&w.as_str())) {
            return;
        }
        let mut depth = 0usize;
        loop {
            match self.peek_kind() {
                TokenKind::Eof => return,
                TokenKind::LBrace => depth += 1,
                TokenKind::RBrace => depth = depth.saturating_sub(1),
                TokenKind::Newline if depth == 0 => {
                    self.advance();
                    return;
                }
                TokenKind::Ident(w) if depth > 0 && self.at_line_start() && TOP_LEVEL.contains(&w.as_str()) => {
                    return;
                }
                _ => {}
            }
            self.advance();
        }
    }

    /// Skips to the end of the current line inside a block, stopping
    /// before a closing brace.
    fn recover_in_block(&mut self) {
        loop {
            match self.peek_kind() {
                TokenKind::Eof | TokenKind::RBrace => return,
                TokenKind::Newline | TokenKind::Semi => {
                    self.advance();
                    return;
                }
                _ => {
                    self.advance();
                }
            }
        }
    }

    fn document(&mut self) {
        loop {
            self.skip_separators();
            if *self.peek_kind() == TokenKind::Eof {
                return;
            }
            if let Err(e) = self.top_level() {
                self.errors.push(e);
                self.recover_top_level();
            }
        }
    }

    fn top_level(&mut self) -> PResult<()> {
        let start = self.peek().span;
        let word = match self.peek_kind() {
            TokenKind::Ident(w) if TOP_LEVEL.contains(&w.as_str()) => w.clone(),
            _ => return Err(self.unexpected("`project`, `config`, `story`, `screen` or `feature`")),
        };
        if word != "project" && self.header.is_none() {
            self.header = Some(start);
            self.errors.push(ParseError::new(
                start,
                "E-HEADER",
                "document must start with `project \"<name>\"`",
            ));
        }
        self.advance();
        match word.as_str() {
            "project" => {
                if self.header.is_some() {
                    return Err(ParseError::new(start, "E-HEADER", "duplicate `project` header"));
                }
                self.header = Some(start);
                self.project.name = self.string("project name string")?;
                self.end_of_statement()
            }
            "config" => self.config_block(),
            "story" => {
                let story = self.story()?;
                self.project.stories.push(story);
                self.end_of_statement()
            }
            "screen" => {
                let screen = self.screen()?;
                self.project.screens.push(screen);
                Ok(())
            }
            _ => {
                let feature = self.feature()?;
                self.project.features.push(feature);
                Ok(())
            }
        }
    }

    fn story(&mut self) -> PResult<UserStory> {
        let id = self.ident("story id")?;
        self.keyword("as")?;
        let role = self.string("role string")?;
        self.keyword("want")?;
        let want = self.string("goal string")?;
        let why = if self.eat_keyword("why") {
            Some(self.string("benefit string")?)
        } else {
            None
        };
        self.keyword("prio")?;
        let (prio, span) = self.int("priority")?;
        let priority = u32::try_from(prio)
            .ok()
            .filter(|&p| p >= 1)
            .ok_or_else(|| ParseError::new(span, "E-INT", "priority must be between 1 and 4294967295"))?;
        Ok(UserStory {
            id,
            role,
            want,
            why,
            priority,
        })
    }

    /// Runs `item` for each statement in a `{ ... }` block. Item errors
    /// are recorded and the block continues with the next line.
    fn block(&mut self, mut item: impl FnMut(&mut Self) -> PResult<()>) -> PResult<()> {
        let open = self.expect(TokenKind::LBrace)?;
        loop {
            self.skip_separators();
            match self.peek_kind() {
                TokenKind::RBrace => {
                    self.advance();
                    return self.end_of_statement();
                }
                TokenKind::Eof => {
                    return Err(ParseError::new(open, "E-SYNTAX", "unclosed `{`"));
                }
                TokenKind::Ident(w) if self.at_line_start() && TOP_LEVEL.contains(&w.as_str()) => {
                    return Err(ParseError::new(open, "E-SYNTAX", "unclosed `{`"));
                }
                _ => {}
            }
            if let Err(e) = item(self).and_then(|()| self.end_of_statement()) {
                self.errors.push(e);
                self.recover_in_block();
            }
        }
    }

    fn screen(&mut self) -> PResult<Screen> {
        let id = self.ident("screen id")?;
        let title = self.opt_string().unwrap_or_else(|| id.clone());
        let mut tags = BTreeSet::new();
        loop {
            let tag = match self.peek_kind() {
                TokenKind::Ident(w) if w == "entry" => ScreenTag::Entry,
                TokenKind::Ident(w) if w == "feedback" => ScreenTag::Feedback,
                TokenKind::Ident(w) if w == "error" => ScreenTag::Error,
                TokenKind::LBrace => break,
                _ => return Err(self.unexpected("screen tag or `{`")),
            };
            self.advance();
            tags.insert(tag);
        }
        let mut elements = Vec::new();
        self.block(|p| {
            elements.push(p.element()?);
            Ok(())
        })?;
        Ok(Screen {
            id,
            title,
            elements,
            tags,
        })
    }

    fn element(&mut self) -> PResult<Element> {
        let word = self.ident("`layout`, `field`, `button` or `icon`")?;
        match word.as_str() {
            "layout" => {
                let id = self.ident("element id")?;
                let kind = self.ident("layout kind")?;
                let label = self.opt_string();
                Ok(Element::Layout { id, kind, label })
            }
            "field" => {
                let id = self.ident("element id")?;
                let label = self.string("field label string")?;
                let required = if self.eat_keyword("required") {
                    match self.ident("`yes`, `no` or `unspecified`")?.as_str() {
                        "yes" => Required::Yes,
                        "no" => Required::No,
                        "unspecified" => Required::Unspecified,
                        _ => {
                            let span = self.tokens[self.pos - 1].span;
                            return Err(ParseError::new(
                                span,
                                "E-SYNTAX",
                                "expected `yes`, `no` or `unspecified`",
                            ));
                        }
                    }
                } else {
                    Required::Unspecified
                };
                Ok(Element::InputField { id, label, required })
            }
            "button" => {
                let id = self.ident("element id")?;
                let label = self.string("button label string")?;
                let submits = self.eat_keyword("submits");
                Ok(Element::TriggerText { id, label, submits })
            }
            "icon" => {
                let id = self.ident("element id")?;
                let icon = self.ident("icon name")?;
                let alt = if self.eat_keyword("alt") {
                    Some(self.string("alt text string")?)
                } else {
                    None
                };
                let submits = self.eat_keyword("submits");
                Ok(Element::TriggerIcon { id, icon, alt, submits })
            }
            _ => {
                let span = self.tokens[self.pos - 1].span;
                Err(ParseError::new(
                    span,
                    "E-SYNTAX",
                    format!("unknown element kind `{word}`"),
                ))
            }
        }
    }

    fn feature(&mut self) -> PResult<Feature> {
        let id = self.ident("feature id")?;
        self.keyword("for")?;
        let story = self.ident("story id")?;
        let mut feature = Feature {
            id,
            story,
            screens: Vec::new(),
            connectors: Vec::new(),
            tasks: Vec::new(),
        };
        self.block(|p| p.feature_item(&mut feature))?;
        Ok(feature)
    }

    fn feature_item(&mut self, feature: &mut Feature) -> PResult<()> {
        let word = self.ident("`use`, `connect` or `task`")?;
        match word.as_str() {
            "use" => {
                feature.screens.push(self.ident("screen id")?);
                while let TokenKind::Ident(s) = self.peek_kind().clone() {
                    self.advance();
                    feature.screens.push(s);
                }
                Ok(())
            }
            "connect" => {
                let screen = self.ident("source screen id")?;
                self.expect(TokenKind::Dot)?;
                let trigger = self.ident("trigger id")?;
                self.expect(TokenKind::Arrow)?;
                let target = self.ident("target screen id")?;
                let kind = if self.eat_keyword("error") {
                    ConnectorKind::Error
                } else if self.eat_keyword("back") {
                    ConnectorKind::Back
                } else {
                    ConnectorKind::Normal
                };
                feature.connectors.push(Connector::new(screen, trigger, target, kind));
                Ok(())
            }
            "task" => {
                let name = self.ident("task name")?;
                self.expect(TokenKind::Colon)?;
                let mut steps = Vec::new();
                let end = loop {
                    let screen = self.ident("screen id")?;
                    if *self.peek_kind() != TokenKind::Dot {
                        break Some(screen);
                    }
                    self.advance();
                    let trigger = self.ident("trigger id")?;
                    steps.push(TaskStep { screen, trigger });
                    if *self.peek_kind() != TokenKind::Arrow {
                        break None;
                    }
                    self.advance();
                };
                feature.tasks.push(TaskPath { name, steps, end });
                Ok(())
            }
            _ => {
                let span = self.tokens[self.pos - 1].span;
                Err(ParseError::new(
                    span,
                    "E-SYNTAX",
                    format!("unknown feature statement `{word}`"),
                ))
            }
        }
    }

    fn rule_id(&mut self) -> PResult<RuleId> {
        let span = self.peek().span;
        let word = self.ident("rule id")?;
        word.parse()
            .map_err(|_| ParseError::new(span, "E-CONFIG", format!("unknown rule `{word}`")))
    }

    fn config_block(&mut self) -> PResult<()> {
        let mut config = self.project.config.clone();
        let mut blocklist: Option<BTreeSet<String>> = None;
        self.block(|p| {
            let word = p.ident("config setting")?;
            match word.as_str() {
                "severity" => {
                    let rule = p.rule_id()?;
                    let (n, span) = p.int("severity 1..4")?;
                    let sev = u8::try_from(n)
                        .ok()
                        .and_then(Severity::new)
                        .ok_or_else(|| ParseError::new(span, "E-CONFIG", "severity must be 1..4"))?;
                    config.severity.insert(rule, sev);
                }
                "disable" => {
                    let rule = p.rule_id()?;
                    config.disabled.insert(rule);
                }
                "min-label" => {
                    let (n, span) = p.int("minimum label length")?;
                    config.min_label_len =
                        usize::try_from(n).map_err(|_| ParseError::new(span, "E-INT", "length out of range"))?;
                }
                "strict-feedback" => config.strict_feedback = true,
                "blocklist" => {
                    let list = blocklist.get_or_insert_with(BTreeSet::new);
                    while let Some(s) = p.opt_string() {
                        list.insert(s.trim().to_lowercase());
                    }
                }
                _ => {
                    let span = p.tokens[p.pos - 1].span;
                    return Err(ParseError::new(
                        span,
                        "E-CONFIG",
                        format!("unknown config setting `{word}`"),
                    ));
                }
            }
            Ok(())
        })?;
        if let Some(list) = blocklist {
            config.blocklist = list;
        }
        self.project.config = config;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"project "demo"
story US1 as "student" want "request CAA use" prio 1
screen home entry {
  button go "Go"
}
feature f for US1 {
  use home
}
"#;

    #[test]
    fn smallest_document() {
        let p = parse(SMALL).unwrap();
        assert_eq!(p.name, "demo");
        assert_eq!(p.stories.len(), 1);
        assert_eq!(p.screens.len(), 1);
        assert_eq!(p.screens[0].title, "home");
        assert_eq!(p.features[0].screens, vec!["home"]);
    }

    #[test]
    fn layout_source_parses_then_fails_validation() {
        let src = r#"project "p"
story US1 as "s" want "w" prio 1
screen home { layout card1 card }
screen detail { button b "Back" }
feature f for US1 {
  use home detail
  connect home.card1 -> detail
}
"#;
        let p = parse(src).unwrap();
        let errs = crate::model::validate_structure(&p);
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].code, crate::model::StructureCode::ConnectorSource);
    }

    #[test]
    fn unterminated_string_reported_at_quote() {
        let errs = parse("project \"p\nstory x").unwrap_err();
        assert_eq!(errs[0].code, "E-STRING");
        assert_eq!(errs[0].span, SourceSpan::new(1, 9, 1));
    }

    #[test]
    fn recovery_reports_multiple_errors() {
        let src = r#"project "p"
story US1 as student want "x" prio 1
screen a {
  button ok
  wiggle x
  button fine "Fine"
}
story US2 as "s" want "w" prio zero
"#;
        let errs = parse(src).unwrap_err();
        let lines: Vec<_> = errs.iter().map(|e| e.span.line).collect();
        assert_eq!(lines, vec![2, 4, 5, 8]);
    }

    #[test]
    fn unclosed_block_does_not_swallow_next_statement() {
        let src = "project \"p\"\nscreen a {\n  button b \"B\"\nscreen c {\n}\n";
        let errs = parse(src).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].span, SourceSpan::new(2, 10, 1));
    }

    #[test]
    fn tasks_and_connector_kinds() {
        let src = r#"project "p"
feature f for US1 {
  use a b; connect a.x -> b error; connect b.y -> a back
  task t : a.x -> b.y -> a
  task idle : a
}
"#;
        let p = parse(src).unwrap();
        let f = &p.features[0];
        assert_eq!(f.connectors[0].kind, ConnectorKind::Error);
        assert_eq!(f.connectors[1].kind, ConnectorKind::Back);
        assert_eq!(f.tasks[0].steps.len(), 2);
        assert_eq!(f.tasks[0].end.as_deref(), Some("a"));
        assert!(f.tasks[1].steps.is_empty());
    }

    #[test]
    fn config_block() {
        let src = "project \"p\"\nconfig {\n severity R3 4\n disable R7\n min-label 3\n blocklist \"Go\"\n strict-feedback\n}\n";
        let p = parse(src).unwrap();
        assert_eq!(p.config.severity_of(RuleId::R3), Severity::CATASTROPHIC);
        assert!(p.config.disabled.contains(&RuleId::R7));
        assert_eq!(p.config.min_label_len, 3);
        assert!(p.config.blocklist.contains("go") && p.config.blocklist.len() == 1);
        assert!(p.config.strict_feedback);

        let errs = parse("project \"p\"\nconfig { severity R9 2 }\n").unwrap_err();
        assert_eq!(errs[0].code, "E-CONFIG");
    }

    #[test]
    fn missing_header() {
        let errs = parse("").unwrap_err();
        assert_eq!(errs[0].code, "E-HEADER");
        let errs = parse("story a as \"r\" want \"w\" prio 1\n").unwrap_err();
        assert_eq!(errs[0].code, "E-HEADER");
    }
}
