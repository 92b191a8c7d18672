use crate::diagnostic::{Code, Diagnostic, SourceSpan};

use super::Keyword;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident(String),
    Str(String),
    Equals,
    Arrow,
    LBracket,
    RBracket,
    Comma,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

impl Token {
    /// Bare-word text of keywords and identifiers.
    pub fn word(&self) -> Option<&str> {
        match &self.kind {
            TokenKind::Keyword(k) => Some(k.as_str()),
            TokenKind::Ident(s) => Some(s),
            _ => None,
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')
}

/// Splits `.stpa` source into tokens. `#` starts a comment that runs to the
/// end of the line; strings never span lines.
pub fn tokenize(source: &str, file: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();

    for (line_idx, raw_line) in source.split('\n').enumerate() {
        let line_no = line_idx as u32 + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let chars: Vec<char> = line.chars().collect();
        let span = |col: usize, len: usize| SourceSpan::new(file, line_no, col as u32 + 1, len as u32);
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '=' => {
                    tokens.push(Token { kind: TokenKind::Equals, span: span(i, 1) });
                    i += 1;
                }
                '[' => {
                    tokens.push(Token { kind: TokenKind::LBracket, span: span(i, 1) });
                    i += 1;
                }
                ']' => {
                    tokens.push(Token { kind: TokenKind::RBracket, span: span(i, 1) });
                    i += 1;
                }
                ',' => {
                    tokens.push(Token { kind: TokenKind::Comma, span: span(i, 1) });
                    i += 1;
                }
                '-' if chars.get(i + 1) == Some(&'>') => {
                    tokens.push(Token { kind: TokenKind::Arrow, span: span(i, 2) });
                    i += 2;
                }
                '"' => {
                    let start = i;
                    let mut text = String::new();
                    let mut closed = false;
                    i += 1;
                    while i < chars.len() {
                        match chars[i] {
                            '"' => {
                                closed = true;
                                i += 1;
                                break;
                            }
                            '\\' if i + 1 < chars.len() => {
                                match chars[i + 1] {
                                    '"' => text.push('"'),
                                    '\\' => text.push('\\'),
                                    'n' => text.push('\n'),
                                    other => {
                                        text.push('\\');
                                        text.push(other);
                                    }
                                }
                                i += 2;
                            }
                            other => {
                                text.push(other);
                                i += 1;
                            }
                        }
                    }
                    if closed {
                        tokens.push(Token { kind: TokenKind::Str(text), span: span(start, i - start) });
                    } else {
                        diags.push(
                            Diagnostic::new(Code::E100, "unterminated string").at(Some(&span(start, chars.len() - start))),
                        );
                    }
                }
                c if is_ident_start(c) => {
                    let start = i;
                    while i < chars.len() && is_ident_char(chars[i]) {
                        if chars[i] == '-' && chars.get(i + 1) == Some(&'>') {
                            break;
                        }
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    let kind = match Keyword::from_word(&word) {
                        Some(k) => TokenKind::Keyword(k),
                        None => TokenKind::Ident(word),
                    };
                    tokens.push(Token { kind, span: span(start, i - start) });
                }
                other => {
                    diags.push(
                        Diagnostic::new(Code::E101, format!("illegal character {other:?}")).at(Some(&span(i, 1))),
                    );
                    i += 1;
                }
            }
        }
    }
    (tokens, diags)
}
