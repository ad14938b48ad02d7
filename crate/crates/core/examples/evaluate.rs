//! Scores a conversion against hand annotations.

use simulation_kg::analysis::{eval_conversion, parse_gold};
use simulation_kg::graph::Graph;
use simulation_kg::ingest::dictionary::{convert_dictionary, parse_dictionary, PhraseTable};
use simulation_kg::model::Entity;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = env!("CARGO_MANIFEST_DIR");
    let gold = parse_gold(&std::fs::read_to_string(format!(
        "{dir}/fixtures/eval_gold.tsv"
    ))?)?;
    let dict = std::fs::read_to_string(format!("{dir}/fixtures/eval_predicted.dict"))?;
    let mut g = Graph::new();
    convert_dictionary(
        &parse_dictionary(&dict),
        &Entity::source("Olderr")?,
        &PhraseTable::default(),
    )
    .insert_into(&mut g);
    print!("{}", eval_conversion(&gold, &g).to_text());
    Ok(())
}
