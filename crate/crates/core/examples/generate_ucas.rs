//! Enumerate UCA candidates for every control action, guide word and
//! hazardous behavior.
//!
//! ```bash
//! cargo run --example generate_ucas
//! ```

mod support;

use stpa_sotif::dsl::uca_line;
use stpa_sotif::generate::{enumerate_uca_candidates, render_uca_text};
use stpa_sotif::model::UcaStatus;

fn main() {
    let model = support::corpus();
    let candidates = enumerate_uca_candidates(&model).expect("corpus is valid");

    for uca in &candidates {
        let text = render_uca_text(uca, &model).unwrap();
        println!("{} [{}] {}", uca.id, uca.guide_word.label(), text);
    }

    let fresh: Vec<_> = candidates.iter().filter(|u| u.status == UcaStatus::Candidate).collect();
    println!("\n{} candidates, {} not yet judged:", candidates.len(), fresh.len());
    for uca in fresh {
        println!("{}", uca_line(uca));
    }
}
