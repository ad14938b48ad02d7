//! Loads a Turtle file and checks it against the axioms.
//!
//!     cargo run --example validate [-- <graph.ttl>]

use simulation_kg::serialize::import_turtle;
use simulation_kg::validate::{check_axioms, render_text};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/missing_source.ttl").into()
    });
    let imported = import_turtle(&std::fs::read_to_string(&path)?)?;
    for w in &imported.warnings {
        println!("warning: {w}");
    }
    print!("{}", render_text(&check_axioms(&imported.graph)));
    Ok(())
}
