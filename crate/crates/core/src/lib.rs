//! STPA-based identification of SOTIF triggering conditions.
//!
//! The pipeline follows the five analysis steps: losses and hazards, the
//! control structure, unsafe control actions enumerated with guide words,
//! loss scenarios expanded from a causal-factor taxonomy, and triggering
//! conditions linked to scenarios through functional insufficiencies.
//!
//! ```
//! use stpa_sotif::{dsl, model};
//!
//! let src = "loss L-1 text \"Verlust von Menschenleben oder Verletzung von Menschen\"\n";
//! let (decls, parse_diags) = dsl::parse(src, "model.stpa");
//! let (m, diags) = model::assemble_model(&decls);
//! assert!(parse_diags.is_empty() && diags.is_empty());
//! assert_eq!(m.losses.len(), 1);
//! ```

pub mod classify;
pub mod cli;
pub mod diagnostic;
pub mod dsl;
pub mod generate;
pub mod model;
pub mod trace;

pub use diagnostic::{emit_diagnostics, has_errors, Code, Diagnostic, DiagnosticStyle, Severity};
pub use model::{AnalysisModel, EntityId, EntityKind};
