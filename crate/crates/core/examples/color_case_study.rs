//! Which colours appear among simulacra that share the meanings of a white
//! rose, as a table and an SVG chart.
//!
//!     cargo run --example color_case_study [-- <out.svg>]

use simulation_kg::analysis::{color_distribution, ColorLexicon};
use simulation_kg::graph::Graph;
use simulation_kg::ingest::dictionary::{convert_dictionary, parse_dictionary, PhraseTable};
use simulation_kg::model::{Entity, Iri};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dict =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/sample.dict"))?;
    let mut g = Graph::new();
    convert_dictionary(
        &parse_dictionary(&dict),
        &Entity::source("Olderr")?,
        &PhraseTable::default(),
    )
    .insert_into(&mut g);

    let lexicon: ColorLexicon = "white,red,gold/golden,blue".parse()?;
    let dist = color_distribution(&g, &Iri::kb("whiteRose")?, &lexicon)?;
    print!("{}", dist.to_text());
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, dist.to_svg())?;
        println!("wrote {path}");
    }
    Ok(())
}
