//! Expand loss scenarios from the corpus taxonomy, with and without the
//! merged controller-flaw factor.
//!
//! ```bash
//! cargo run --example expand_scenarios
//! ```

mod support;

use stpa_sotif::generate::{control_loop, expand_loss_scenarios, Taxonomy};
use stpa_sotif::model::FactorCategory;
use stpa_sotif::EntityId;

fn main() {
    let model = support::corpus();

    let action: EntityId = "CA-2".parse().unwrap();
    let lp = control_loop(&model, action);
    println!("control loop of {action}:");
    for category in FactorCategory::ALL {
        let names: Vec<&str> = lp.loci(*category).into_iter().map(|c| model.component_name(c)).collect();
        println!("  {category}: {}", names.join(", "));
    }

    for merge in [false, true] {
        let taxonomy = Taxonomy::from_model(&model, merge);
        let expansion = expand_loss_scenarios(&model, &taxonomy).unwrap();
        let fresh = expansion.scenarios.iter().filter(|s| !model.scenarios.contains_key(&s.id)).count();
        println!(
            "merge={merge}: {} factors, {} scenarios ({fresh} not authored)",
            taxonomy.len(),
            expansion.scenarios.len()
        );
    }

    let taxonomy = Taxonomy::from_model(&model, false);
    let first = &expand_loss_scenarios(&model, &taxonomy).unwrap().scenarios[0];
    println!("\n{} {} at {}:", first.id, taxonomy.get(first.factor).unwrap().label, model.component_name(first.locus));
    println!("{}", first.narrative.as_deref().unwrap_or("-"));
}
