//! Write the corpus in every export format to a directory (default
//! `target/stpa-export`).
//!
//! ```bash
//! cargo run --example export -- /tmp/out
//! ```

mod support;

use std::path::PathBuf;

use stpa_sotif::trace::{export, import_json, ExportFormat};

fn main() {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("target/stpa-export"));
    std::fs::create_dir_all(&dir).unwrap();
    let model = support::corpus();

    for (format, file) in [
        (ExportFormat::Json, "model.json"),
        (ExportFormat::CsvMatrix, "matrix.csv"),
        (ExportFormat::Dot, "control_structure.dot"),
        (ExportFormat::Markdown, "report.md"),
    ] {
        let bytes = export(&model, format);
        std::fs::write(dir.join(file), &bytes).unwrap();
        println!("{:>8} bytes  {}", bytes.len(), dir.join(file).display());
    }

    let json = std::fs::read(dir.join("model.json")).unwrap();
    let back = import_json(&json).unwrap();
    assert_eq!(export(&back, ExportFormat::Json), json);
    println!("json round trip ok");
}
