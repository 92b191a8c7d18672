//! Split the corpus scenarios into SOTIF-relevant and functional-safety
//! causes.
//!
//! ```bash
//! cargo run --example classify_sotif
//! ```

mod support;

use std::collections::BTreeMap;

use stpa_sotif::classify::{classify_relevance, filter_sotif};
use stpa_sotif::generate::Taxonomy;

fn main() {
    let model = support::corpus();
    let taxonomy = Taxonomy::from_model(&model, false);

    let (retained, excluded) = filter_sotif(&model, &taxonomy);
    println!("retained {} / excluded {}", retained.len(), excluded.len());

    let mut by_factor: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for s in model.scenarios.values() {
        let label = taxonomy.get(s.factor).map_or("?", |f| f.label.as_str());
        let entry = by_factor.entry(label).or_default();
        match classify_relevance(s, &taxonomy) {
            Ok(stpa_sotif::model::Relevance::FunctionalSafety) => entry.1 += 1,
            _ => entry.0 += 1,
        }
    }
    for (label, (kept, dropped)) in by_factor {
        println!("{label:32} {kept:3} {dropped:3}");
    }
}
