//! The `.stpa` authoring language.
//!
//! One declaration per line:
//!
//! ```text
//! # comment
//! loss L-1 text "Verlust von Menschenleben oder Verletzung von Menschen"
//! hazard H-1 losses=[L-1] text "..."
//! action CA-2 from=C-2 to=C-6 text "Steuerbefehle"
//! uca UCA-1 action=CA-2 guide=not_provided behavior=HB-1 status=retained text "..."
//! link TC-1 -> LS-5 via FI-1
//! ```
//!
//! Attributes are `key=value`, where a value is a bare word, a quoted string
//! or a reference list `[ID, ID]`. Free text is the trailing `text "..."`
//! attribute (a bare trailing string is accepted as shorthand).

mod canonical;
mod lexer;
mod parser;

use std::collections::BTreeMap;

pub use crate::diagnostic::SourceSpan;
pub use canonical::{factor_line, scenario_line, uca_line, write_model};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

use crate::model::EntityKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Loss,
    Hazard,
    Behavior,
    Controller,
    Human,
    Sensor,
    Actuator,
    Process,
    Action,
    Feedback,
    Uca,
    Factor,
    Context,
    Scenario,
    Trigger,
    Insufficiency,
    Link,
}

impl Keyword {
    pub const ALL: [Keyword; 17] = [
        Keyword::Loss,
        Keyword::Hazard,
        Keyword::Behavior,
        Keyword::Controller,
        Keyword::Human,
        Keyword::Sensor,
        Keyword::Actuator,
        Keyword::Process,
        Keyword::Action,
        Keyword::Feedback,
        Keyword::Uca,
        Keyword::Factor,
        Keyword::Context,
        Keyword::Scenario,
        Keyword::Trigger,
        Keyword::Insufficiency,
        Keyword::Link,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Loss => "loss",
            Keyword::Hazard => "hazard",
            Keyword::Behavior => "behavior",
            Keyword::Controller => "controller",
            Keyword::Human => "human",
            Keyword::Sensor => "sensor",
            Keyword::Actuator => "actuator",
            Keyword::Process => "process",
            Keyword::Action => "action",
            Keyword::Feedback => "feedback",
            Keyword::Uca => "uca",
            Keyword::Factor => "factor",
            Keyword::Context => "context",
            Keyword::Scenario => "scenario",
            Keyword::Trigger => "trigger",
            Keyword::Insufficiency => "insufficiency",
            Keyword::Link => "link",
        }
    }

    pub fn from_word(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == word)
    }

    /// Kind of the entity this keyword declares. A link declares a relation,
    /// keyed by its trigger.
    pub fn entity_kind(self) -> EntityKind {
        match self {
            Keyword::Loss => EntityKind::Loss,
            Keyword::Hazard => EntityKind::Hazard,
            Keyword::Behavior => EntityKind::Behavior,
            Keyword::Controller | Keyword::Human | Keyword::Sensor | Keyword::Actuator | Keyword::Process => {
                EntityKind::Component
            }
            Keyword::Action => EntityKind::Action,
            Keyword::Feedback => EntityKind::Feedback,
            Keyword::Uca => EntityKind::Uca,
            Keyword::Factor => EntityKind::Factor,
            Keyword::Context => EntityKind::Context,
            Keyword::Scenario => EntityKind::Scenario,
            Keyword::Trigger | Keyword::Link => EntityKind::Trigger,
            Keyword::Insufficiency => EntityKind::Insufficiency,
        }
    }

    pub fn required(self) -> &'static [&'static str] {
        match self {
            Keyword::Loss | Keyword::Hazard | Keyword::Behavior | Keyword::Trigger => &["text"],
            Keyword::Controller | Keyword::Human | Keyword::Sensor | Keyword::Actuator | Keyword::Process => &["text"],
            Keyword::Action | Keyword::Feedback => &["from", "to", "text"],
            Keyword::Uca => &["action", "guide", "behavior"],
            Keyword::Factor => &["label", "category", "loci", "relevance"],
            Keyword::Context => &["behaviors", "text"],
            Keyword::Scenario => &["uca", "factor", "locus"],
            Keyword::Insufficiency => &["locus", "text"],
            Keyword::Link => &["scenario", "insufficiency"],
        }
    }

    fn optional(self) -> &'static [&'static str] {
        match self {
            Keyword::Hazard => &["losses"],
            Keyword::Behavior => &["hazards"],
            Keyword::Process => &["environment"],
            Keyword::Action => &["behaviors"],
            Keyword::Feedback => &["kind"],
            Keyword::Uca => &["status", "reason", "text"],
            Keyword::Factor => &["text"],
            Keyword::Scenario => &["context", "relevance", "text"],
            _ => &[],
        }
    }

    pub fn allows(self, key: &str) -> bool {
        self.required().contains(&key) || self.optional().contains(&key)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Word(String),
    Str(String),
    List(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub value: Value,
    pub span: SourceSpan,
    /// Spans of list elements, parallel to `Value::List`.
    pub items: Vec<SourceSpan>,
}

impl Attribute {
    pub fn word(word: &str, span: &SourceSpan) -> Self {
        Self {
            value: Value::Word(word.to_owned()),
            span: span.clone(),
            items: Vec::new(),
        }
    }
}

/// One parsed line of a `.stpa` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Declaration {
    pub keyword: Keyword,
    pub id: String,
    pub id_span: SourceSpan,
    pub attributes: BTreeMap<String, Attribute>,
    /// Span of the leading keyword.
    pub span: SourceSpan,
}

impl Declaration {
    pub fn word(&self, key: &str) -> Option<&str> {
        match &self.attributes.get(key)?.value {
            Value::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match &self.attributes.get(key)?.value {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn list(&self, key: &str) -> Option<&[String]> {
        match &self.attributes.get(key)?.value {
            Value::List(items) => Some(items),
            _ => None,
        }
    }

    /// Layout-independent view used to compare declaration streams.
    pub fn shape(&self) -> (Keyword, String, BTreeMap<String, Value>) {
        (
            self.keyword,
            self.id.clone(),
            self.attributes.iter().map(|(k, a)| (k.clone(), a.value.clone())).collect(),
        )
    }
}

/// Parses several files and concatenates their declarations in order.
pub fn parse_files<'a>(
    sources: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> (Vec<Declaration>, Vec<crate::diagnostic::Diagnostic>) {
    let mut decls = Vec::new();
    let mut diags = Vec::new();
    for (file, text) in sources {
        let (d, g) = parse(text, file);
        decls.extend(d);
        diags.extend(g);
    }
    (decls, diags)
}
