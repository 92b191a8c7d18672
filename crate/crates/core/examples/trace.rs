//! Trace the corpus forward from the loss and backward from the low-sun
//! triggering condition.
//!
//! ```bash
//! cargo run --example trace
//! ```

mod support;

use stpa_sotif::trace::{trace_from_loss, trace_from_trigger};

fn main() {
    let model = support::corpus();

    let tree = trace_from_trigger(&model, "TC-5".parse().unwrap()).unwrap();
    print!("{}", tree.render(&model));

    let tree = trace_from_loss(&model, "L-1".parse().unwrap()).unwrap();
    println!(
        "\nL-1: {} nodes, {} edges, {} leaves",
        tree.node_count(),
        tree.edge_count(),
        tree.leaves().len()
    );
}
