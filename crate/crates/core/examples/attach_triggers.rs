//! Link a triggering condition to a loss scenario and look at the warnings
//! for repeated and functional-safety links.
//!
//! ```bash
//! cargo run --example attach_triggers
//! ```

mod support;

use stpa_sotif::classify::{attach_trigger, filter_sotif};
use stpa_sotif::generate::Taxonomy;
use stpa_sotif::{emit_diagnostics, DiagnosticStyle, EntityId};

fn id(s: &str) -> EntityId {
    s.parse().unwrap()
}

fn main() {
    let mut model = support::corpus();
    let (tc, ls, fi) = (id("TC-5"), id("LS-7"), id("FI-1"));
    model.links.retain(|l| !(l.trigger == tc && l.scenario == ls));
    println!("links before: {}", model.links.len());

    let (model, diags) = attach_trigger(&model, tc, ls, fi);
    println!("links after: {} ({} diagnostics)", model.links.len(), diags.len());

    // the same triple again is reported, not stored twice
    let (model, diags) = attach_trigger(&model, tc, ls, fi);
    print!("{}", emit_diagnostics(&diags, DiagnosticStyle::Human));

    // a functional-safety scenario is linked, with a warning
    let (_, excluded) = filter_sotif(&model, &Taxonomy::from_model(&model, false));
    let (_, diags) = attach_trigger(&model, tc, excluded[0].id, fi);
    print!("{}", emit_diagnostics(&diags, DiagnosticStyle::Human));

    let (_, diags) = attach_trigger(&model, id("TC-99"), ls, fi);
    print!("{}", emit_diagnostics(&diags, DiagnosticStyle::Human));
}
