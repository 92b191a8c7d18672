//! Parse and validate a small model with a dangling reference, then the
//! corpus.
//!
//! ```bash
//! cargo run --example check_model
//! ```

mod support;

use stpa_sotif::dsl::parse;
use stpa_sotif::model::assemble_model;
use stpa_sotif::{emit_diagnostics, has_errors, DiagnosticStyle};

const BROKEN: &str = r#"loss L-1 text "Verlust von Menschenleben oder Verletzung von Menschen"
hazard H-1 losses=[L-1] text "Unterschreitung eines angemessenen Mindestabstandes zu Fußgänger*innen"
hazard H-2 losses=[L-2] text "Kollision mit einem Fahrzeug"
"#;

fn main() {
    let (decls, mut diags) = parse(BROKEN, "broken.stpa");
    let (_, more) = assemble_model(&decls);
    diags.extend(more);
    print!("{}", emit_diagnostics(&diags, DiagnosticStyle::Human));
    println!("broken.stpa has errors: {}", has_errors(&diags));

    // same diagnostics, one JSON object per line
    print!("{}", emit_diagnostics(&diags, DiagnosticStyle::Machine));

    let (model, diags) = support::load_corpus();
    println!("corpus: {} entities, {} diagnostics", model.ids().len(), diags.len());
}
