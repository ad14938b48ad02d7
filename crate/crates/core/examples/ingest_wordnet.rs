//! Extracts simulations from synset glosses.

use simulation_kg::ingest::wordnet::{convert_synsets, meaning_terms};
use simulation_kg::model::Entity;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:?}",
        meaning_terms(
            "(Greek mythology) the wife of Odysseus and a symbol of devotion and fidelity"
        )
    );

    let tsv =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/synsets.tsv"))?;
    let conversion = convert_synsets(&tsv, &Entity::source("WordNet")?);
    for c in &conversion.simulations {
        let s = &c.simulation;
        let contexts: Vec<_> = s.contexts().iter().map(|e| e.label()).collect();
        println!(
            "line {}: {} in {:?}",
            c.line.unwrap_or(0),
            s.id().local_name(),
            contexts
        );
    }
    for line in &conversion.log {
        println!("{line}");
    }
    Ok(())
}
