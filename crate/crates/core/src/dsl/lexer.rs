use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Ident(String),
    Int(u64),
    Str(String),
    LBrace,
    RBrace,
    Dot,
    Arrow,
    Colon,
    Semi,
    Newline,
    Eof,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Int(n) => format!("integer {n}"),
            TokenKind::Str(_) => "string".into(),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::Dot => "`.`".into(),
            TokenKind::Arrow => "`->`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Semi => "`;`".into(),
            TokenKind::Newline => "end of line".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn second(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }
}

/// Splits source text into tokens. Lexical problems are collected and
/// the offending characters skipped, so the parser always sees a
/// complete token stream ending in `Eof`.
pub(crate) fn tokenize(src: &str) -> (Vec<Token>, Vec<ParseError>) {
    let mut cur = Cursor {
        chars: src.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let mut errors = Vec::new();

    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        let span = |len: usize| SourceSpan::new(line, column, len);
        match c {
            '\n' => {
                cur.bump();
                tokens.push(Token {
                    kind: TokenKind::Newline,
                    span: span(1),
                });
            }
            ' ' | '\t' | '\r' | '\u{feff}' => {
                cur.bump();
            }
            '#' => {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            }
            '{' | '}' | '.' | ':' | ';' => {
                cur.bump();
                let kind = match c {
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    '.' => TokenKind::Dot,
                    ':' => TokenKind::Colon,
                    _ => TokenKind::Semi,
                };
                tokens.push(Token { kind, span: span(1) });
            }
            '-' if cur.second() == Some('>') => {
                cur.bump();
                cur.bump();
                tokens.push(Token {
                    kind: TokenKind::Arrow,
                    span: span(2),
                });
            }
            '"' => {
                cur.bump();
                let mut text = String::new();
                let mut len = 1;
                let mut closed = false;
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    let (el, ec) = (cur.line, cur.column);
                    cur.bump();
                    len += 1;
                    match c {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => match cur.peek() {
                            Some(e @ ('"' | '\\' | 'n' | 't')) => {
                                cur.bump();
                                len += 1;
                                text.push(match e {
                                    'n' => '\n',
                                    't' => '\t',
                                    other => other,
                                });
                            }
                            Some('\n') | None => {}
                            Some(other) => {
                                cur.bump();
                                len += 1;
                                errors.push(ParseError::new(
                                    SourceSpan::new(el, ec, 2),
                                    "E-ESCAPE",
                                    format!("unknown escape `\\{other}`"),
                                ));
                            }
                        },
                        c => text.push(c),
                    }
                }
                if closed {
                    tokens.push(Token {
                        kind: TokenKind::Str(text),
                        span: span(len),
                    });
                } else {
                    errors.push(ParseError::new(span(1), "E-STRING", "unterminated string literal"));
                }
            }
            c if c.is_ascii_digit() => {
                let mut text = String::new();
                while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                    text.push(d);
                    cur.bump();
                }
                let len = text.len();
                match text.parse::<u64>() {
                    Ok(n) => tokens.push(Token {
                        kind: TokenKind::Int(n),
                        span: span(len),
                    }),
                    Err(_) => errors.push(ParseError::new(span(len), "E-INT", "integer literal out of range")),
                }
            }
            c if is_ident_start(c) => {
                let mut text = String::new();
                while let Some(d) = cur.peek().filter(|&d| is_ident_continue(d)) {
                    if d == '-' && cur.second() == Some('>') {
                        break;
                    }
                    text.push(d);
                    cur.bump();
                }
                let len = text.chars().count();
                tokens.push(Token {
                    kind: TokenKind::Ident(text),
                    span: span(len),
                });
            }
            other => {
                cur.bump();
                errors.push(ParseError::new(
                    span(1),
                    "E-LEX",
                    format!("unexpected character {other:?}"),
                ));
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: SourceSpan::new(cur.line, cur.column, 0),
    });
    (tokens, errors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).0.into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn arrow_splits_identifier() {
        assert_eq!(
            kinds("a-b->c"),
            vec![
                TokenKind::Ident("a-b".into()),
                TokenKind::Arrow,
                TokenKind::Ident("c".into()),
                TokenKind::Eof
            ]
        );
    }

    #[test]
    fn crlf_is_one_newline() {
        assert_eq!(
            kinds("x\r\ny"),
            vec![
                TokenKind::Ident("x".into()),
                TokenKind::Newline,
                TokenKind::Ident("y".into()),
                TokenKind::Eof
            ]
        );
    }

    #[test]
    fn escapes_and_comments() {
        assert_eq!(
            kinds(r#""a\"b\\c" # trailing"#),
            vec![TokenKind::Str("a\"b\\c".into()), TokenKind::Eof]
        );
    }

    #[test]
    fn unterminated_string_points_at_quote() {
        let (_, errs) = tokenize("story x as \"oops\nnext");
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].code, "E-STRING");
        assert_eq!(errs[0].span, SourceSpan::new(1, 12, 1));
    }

    #[test]
    fn columns_count_characters() {
        let (toks, errs) = tokenize("\"é\" @");
        assert_eq!(toks[0].span, SourceSpan::new(1, 1, 3));
        assert_eq!(errs[0].span, SourceSpan::new(1, 5, 1));
    }
}
