//! Converts the bundled dictionary corpus and prints the conversion log
//! and corpus counts.
//!
//!     cargo run --example ingest_dictionary [-- <file.dict>]

use simulation_kg::graph::Graph;
use simulation_kg::ingest::dictionary::{convert_dictionary, parse_dictionary, PhraseTable};
use simulation_kg::model::Entity;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/sample.dict").into());
    let parsed = parse_dictionary(&std::fs::read_to_string(&path)?);
    println!(
        "{} entries, {} parse errors",
        parsed.entries.len(),
        parsed.errors.len()
    );

    let conversion =
        convert_dictionary(&parsed, &Entity::source("Olderr")?, &PhraseTable::default());
    for line in &conversion.log {
        println!("{}", line.with_file(&path));
    }
    let mut g = Graph::new();
    conversion.insert_into(&mut g);

    for sim in g.simulations_of(&simulation_kg::model::Iri::kb("hook")?) {
        println!("{:<40} {}", sim.id().local_name(), sim.kind());
    }
    println!("\n{}", g.stats());
    Ok(())
}
