use std::collections::{BTreeMap, BTreeSet};

use crate::diagnostic::{Code, Diagnostic, SourceSpan};

use super::lexer::{tokenize, Token, TokenKind};
use super::{Attribute, Declaration, Keyword, Value};

/// Parses a `.stpa` source into declarations in source order.
///
/// Each declaration is one line. A line with any lexical or syntactic error
/// yields exactly one diagnostic and no declaration; parsing always resumes
/// on the next line.
pub fn parse(source: &str, file: &str) -> (Vec<Declaration>, Vec<Diagnostic>) {
    let (tokens, lex_diags) = tokenize(source, file);
    let bad_lines: BTreeSet<u32> = lex_diags
        .iter()
        .filter_map(|d| d.location.as_ref().map(|l| l.line))
        .collect();

    // Keep only the first lexical diagnostic of each line.
    let mut diags: Vec<Diagnostic> = Vec::new();
    let mut seen = BTreeSet::new();
    for d in lex_diags {
        let line = d.location.as_ref().map(|l| l.line).unwrap_or(0);
        if seen.insert(line) {
            diags.push(d);
        }
    }

    let mut decls = Vec::new();
    let mut parse_diags = Vec::new();
    let mut start = 0;
    while start < tokens.len() {
        let line = tokens[start].span.line;
        let mut end = start;
        while end < tokens.len() && tokens[end].span.line == line {
            end += 1;
        }
        if !bad_lines.contains(&line) {
            match LineParser::new(&tokens[start..end]).declaration() {
                Ok(decl) => decls.push(decl),
                Err(d) => parse_diags.push(d),
            }
        }
        start = end;
    }

    diags.extend(parse_diags);
    diags.sort_by_key(|d| d.location.as_ref().map(|l| (l.line, l.column)));
    (decls, diags)
}

struct LineParser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

type ParseResult<T> = Result<T, Diagnostic>;

fn error(code: Code, message: impl Into<String>, span: &SourceSpan) -> Diagnostic {
    Diagnostic::new(code, message).at(Some(span))
}

fn describe(token: &Token) -> String {
    match &token.kind {
        TokenKind::Keyword(k) => format!("keyword `{}`", k.as_str()),
        TokenKind::Ident(s) => format!("`{s}`"),
        TokenKind::Str(_) => "string".to_owned(),
        TokenKind::Equals => "`=`".to_owned(),
        TokenKind::Arrow => "`->`".to_owned(),
        TokenKind::LBracket => "`[`".to_owned(),
        TokenKind::RBracket => "`]`".to_owned(),
        TokenKind::Comma => "`,`".to_owned(),
    }
}

impl<'a> LineParser<'a> {
    fn new(tokens: &'a [Token]) -> Self {
        Self { tokens, pos: 0 }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn end_span(&self) -> SourceSpan {
        let last = self.tokens.last().expect("a line has at least one token");
        let mut span = last.span.clone();
        span.column += span.length;
        span.length = 0;
        span
    }

    fn expect_word(&mut self, what: &str) -> ParseResult<(&'a str, &'a SourceSpan)> {
        match self.next() {
            Some(t) => match t.word() {
                Some(w) => Ok((w, &t.span)),
                None => Err(error(Code::E113, format!("expected {what}, found {}", describe(t)), &t.span)),
            },
            None => Err(error(Code::E113, format!("expected {what}"), &self.end_span())),
        }
    }

    fn declaration(&mut self) -> ParseResult<Declaration> {
        let head = self.next().expect("non-empty line");
        let keyword = match &head.kind {
            TokenKind::Keyword(k) => *k,
            TokenKind::Ident(w) => {
                return Err(error(Code::E110, format!("unknown keyword `{w}`"), &head.span));
            }
            _ => {
                return Err(error(
                    Code::E113,
                    format!("expected a declaration keyword, found {}", describe(head)),
                    &head.span,
                ));
            }
        };
        let (id, id_span) = self.expect_word("an identifier")?;
        let mut decl = Declaration {
            keyword,
            id: id.to_owned(),
            id_span: id_span.clone(),
            attributes: BTreeMap::new(),
            span: head.span.clone(),
        };
        if keyword == Keyword::Link {
            self.link_tail(&mut decl)?;
        } else {
            self.attributes(&mut decl)?;
        }
        if let Some(missing) = keyword.required().iter().find(|k| !decl.attributes.contains_key(**k)) {
            return Err(error(
                Code::E111,
                format!("`{}` declaration {} is missing required attribute `{missing}`", keyword.as_str(), decl.id),
                &decl.id_span,
            ));
        }
        Ok(decl)
    }

    fn link_tail(&mut self, decl: &mut Declaration) -> ParseResult<()> {
        match self.next() {
            Some(Token { kind: TokenKind::Arrow, .. }) => {}
            Some(t) => return Err(error(Code::E113, format!("expected `->`, found {}", describe(t)), &t.span)),
            None => return Err(error(Code::E113, "expected `->`", &self.end_span())),
        }
        let (scenario, scenario_span) = self.expect_word("a scenario identifier")?;
        let (via, via_span) = self.expect_word("`via`")?;
        if via != "via" {
            return Err(error(Code::E113, format!("expected `via`, found `{via}`"), via_span));
        }
        let (fi, fi_span) = self.expect_word("an insufficiency identifier")?;
        if let Some(t) = self.peek() {
            return Err(error(Code::E113, format!("unexpected {} after link", describe(t)), &t.span));
        }
        decl.attributes.insert("scenario".into(), Attribute::word(scenario, scenario_span));
        decl.attributes.insert("insufficiency".into(), Attribute::word(fi, fi_span));
        Ok(())
    }

    fn attributes(&mut self, decl: &mut Declaration) -> ParseResult<()> {
        while let Some(t) = self.next() {
            // A bare trailing string is shorthand for `text "..."`.
            let (key, key_span) = match &t.kind {
                TokenKind::Str(s) => {
                    self.insert(decl, "text", &t.span, Attribute { value: Value::Str(s.clone()), span: t.span.clone(), items: Vec::new() })?;
                    continue;
                }
                _ => match t.word() {
                    Some(w) => (w, &t.span),
                    None => {
                        return Err(error(Code::E113, format!("expected an attribute, found {}", describe(t)), &t.span));
                    }
                },
            };
            if key == "text" {
                match self.next() {
                    Some(Token { kind: TokenKind::Str(s), span }) => {
                        self.insert(decl, "text", key_span, Attribute { value: Value::Str(s.clone()), span: span.clone(), items: Vec::new() })?;
                    }
                    Some(other) => {
                        return Err(error(Code::E113, format!("expected a string after `text`, found {}", describe(other)), &other.span));
                    }
                    None => return Err(error(Code::E113, "expected a string after `text`", &self.end_span())),
                }
                continue;
            }
            match self.next() {
                Some(Token { kind: TokenKind::Equals, .. }) => {}
                Some(other) => {
                    return Err(error(Code::E113, format!("expected `=` after `{key}`, found {}", describe(other)), &other.span));
                }
                None => return Err(error(Code::E113, format!("expected `=` after `{key}`"), &self.end_span())),
            }
            let attr = self.value()?;
            self.insert(decl, key, key_span, attr)?;
        }
        Ok(())
    }

    fn insert(&self, decl: &mut Declaration, key: &str, key_span: &SourceSpan, attr: Attribute) -> ParseResult<()> {
        if !decl.keyword.allows(key) {
            return Err(error(
                Code::E114,
                format!("unknown attribute `{key}` for `{}`", decl.keyword.as_str()),
                key_span,
            ));
        }
        if decl.attributes.insert(key.to_owned(), attr).is_some() {
            return Err(error(Code::E114, format!("attribute `{key}` given twice"), key_span));
        }
        Ok(())
    }

    fn value(&mut self) -> ParseResult<Attribute> {
        let t = match self.next() {
            Some(t) => t,
            None => return Err(error(Code::E113, "expected a value", &self.end_span())),
        };
        match &t.kind {
            TokenKind::Str(s) => Ok(Attribute { value: Value::Str(s.clone()), span: t.span.clone(), items: Vec::new() }),
            TokenKind::LBracket => self.list(t),
            _ => match t.word() {
                Some(w) => Ok(Attribute::word(w, &t.span)),
                None => Err(error(Code::E113, format!("expected a value, found {}", describe(t)), &t.span)),
            },
        }
    }

    fn list(&mut self, open: &Token) -> ParseResult<Attribute> {
        let mut items = Vec::new();
        let mut spans = Vec::new();
        let mut expect_item = true;
        loop {
            let t = match self.next() {
                Some(t) => t,
                None => return Err(error(Code::E112, "unclosed reference list", &open.span)),
            };
            match (&t.kind, expect_item) {
                (TokenKind::RBracket, _) if items.is_empty() || !expect_item => break,
                (TokenKind::Comma, false) => expect_item = true,
                (_, true) if t.word().is_some() => {
                    items.push(t.word().expect("checked").to_owned());
                    spans.push(t.span.clone());
                    expect_item = false;
                }
                _ => {
                    return Err(error(Code::E112, format!("malformed reference list at {}", describe(t)), &t.span));
                }
            }
        }
        let mut span = open.span.clone();
        let last = &self.tokens[self.pos - 1].span;
        span.length = last.column + last.length - span.column;
        Ok(Attribute { value: Value::List(items), span, items: spans })
    }
}
