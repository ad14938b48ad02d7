//! Exports a converted graph, reads it back and compares.

use simulation_kg::graph::Graph;
use simulation_kg::ingest::dictionary::{convert_dictionary, parse_dictionary, PhraseTable};
use simulation_kg::model::Entity;
use simulation_kg::serialize::{export_turtle, import_turtle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dict = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/hook.dict"))?;
    let mut g = Graph::new();
    convert_dictionary(
        &parse_dictionary(&dict),
        &Entity::source("Olderr")?,
        &PhraseTable::default(),
    )
    .insert_into(&mut g);

    let ttl = export_turtle(&g);
    print!("{}", ttl.lines().take(24).collect::<Vec<_>>().join("\n"));
    println!("\n...");

    let back = import_turtle(&ttl)?;
    println!(
        "{} bytes, {} warnings, equal after round trip: {}",
        ttl.len(),
        back.warnings.len(),
        back.graph == g
    );
    println!(
        "stable across exports: {}",
        export_turtle(&back.graph) == ttl
    );
    Ok(())
}
