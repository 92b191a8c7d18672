//! Print the corpus statistics report.
//!
//! ```bash
//! cargo run --example stats
//! ```

mod support;

use stpa_sotif::trace::stats;

fn main() {
    let report = stats(&support::corpus());
    print!("{}", report.render());
}
