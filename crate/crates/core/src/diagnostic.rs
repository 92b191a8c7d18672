//! Source-located diagnostics shared by the parser, the model assembler and
//! the generators, plus their two text renderings.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Position of a lexeme in a `.stpa` file. Lines and columns are 1-based;
/// columns count Unicode scalar values, not bytes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

impl SourceSpan {
    pub fn new(file: impl Into<String>, line: u32, column: u32, length: u32) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        Self {
            file: file.into(),
            line,
            column,
            length,
        }
    }

    /// True if the 1-based `(line, column)` falls inside this span. A
    /// zero-length span contains only its own start position.
    pub fn contains(&self, line: u32, column: u32) -> bool {
        line == self.line && column >= self.column && column < self.column + self.length.max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Stable diagnostic codes. The numeric families are: `E0xx` model
/// integrity, `W1xx` mapping and orphan checks, `E1xx` lexing and parsing,
/// `W2xx` generation, `W3xx` trigger linkage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    /// Duplicate id.
    E001,
    /// Dangling reference.
    E002,
    /// Cardinality violation.
    E003,
    /// Wrong component kind at a link endpoint.
    E004,
    /// Invalid attribute value.
    E005,
    /// Scenario context does not apply to the UCA's hazardous behavior.
    E006,
    /// Excluded UCA without an exclusion reason.
    E007,
    /// Hazard mapped to no loss.
    W101,
    /// Hazardous behavior mapped to no hazard.
    W102,
    /// Hazard without any hazardous behavior.
    W103,
    /// Retained UCA without any loss scenario.
    W104,
    /// Triggering condition without any link.
    W105,
    /// Unterminated string.
    E100,
    /// Illegal character.
    E101,
    /// Unknown keyword.
    E110,
    /// Missing required attribute.
    E111,
    /// Malformed reference list.
    E112,
    /// Malformed declaration.
    E113,
    /// Unknown or repeated attribute.
    E114,
    /// UCA whose control loop matches no causal factor.
    W201,
    /// Trigger linked to a functional-safety scenario.
    W301,
    /// Duplicate trigger link.
    W302,
}

impl Code {
    pub fn severity(self) -> Severity {
        match self {
            Code::W101
            | Code::W102
            | Code::W103
            | Code::W104
            | Code::W105
            | Code::W201
            | Code::W301
            | Code::W302 => Severity::Warning,
            _ => Severity::Error,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Code::E001 => "E001",
            Code::E002 => "E002",
            Code::E003 => "E003",
            Code::E004 => "E004",
            Code::E005 => "E005",
            Code::E006 => "E006",
            Code::E007 => "E007",
            Code::W101 => "W101",
            Code::W102 => "W102",
            Code::W103 => "W103",
            Code::W104 => "W104",
            Code::W105 => "W105",
            Code::E100 => "E100",
            Code::E101 => "E101",
            Code::E110 => "E110",
            Code::E111 => "E111",
            Code::E112 => "E112",
            Code::E113 => "E113",
            Code::E114 => "E114",
            Code::W201 => "W201",
            Code::W301 => "W301",
            Code::W302 => "W302",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub location: Option<SourceSpan>,
}

impl Diagnostic {
    /// Severity is derived from the code.
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Self {
            severity: code.severity(),
            code,
            message: message.into(),
            location: None,
        }
    }

    pub fn at(mut self, span: Option<&SourceSpan>) -> Self {
        self.location = span.cloned();
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(loc) = &self.location {
            write!(f, "{}:{}:{}: ", loc.file, loc.line, loc.column)?;
        }
        write!(f, "{}[{}]: {}", self.severity, self.code, self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticStyle {
    /// `file:line:col: severity[code]: message`
    Human,
    /// One JSON object per line.
    Machine,
}

#[derive(Serialize)]
struct MachineLine<'a> {
    file: Option<&'a str>,
    line: Option<u32>,
    column: Option<u32>,
    severity: Severity,
    code: &'static str,
    message: &'a str,
}

/// Renders diagnostics one per line, in input order.
pub fn emit_diagnostics(diags: &[Diagnostic], style: DiagnosticStyle) -> String {
    let mut out = String::new();
    for d in diags {
        match style {
            DiagnosticStyle::Human => out.push_str(&d.to_string()),
            DiagnosticStyle::Machine => {
                let line = MachineLine {
                    file: d.location.as_ref().map(|l| l.file.as_str()),
                    line: d.location.as_ref().map(|l| l.line),
                    column: d.location.as_ref().map(|l| l.column),
                    severity: d.severity,
                    code: d.code.as_str(),
                    message: &d.message,
                };
                out.push_str(&serde_json::to_string(&line).expect("diagnostic serializes"));
            }
        }
        out.push('\n');
    }
    out
}
