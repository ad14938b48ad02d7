//! Runs every competency question against the toy graph.

use simulation_kg::model::Iri;
use simulation_kg::query::{
    render_text, run_cq, symbolic_meanings, Bindings, CqId, MeaningOptions,
};
use simulation_kg::serialize::import_turtle;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ttl = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/toy.ttl"))?;
    let g = import_turtle(&ttl)?.graph;

    for cq in CqId::ALL {
        let mut b = Bindings::new();
        if let Some(p) = cq.parameter() {
            let value = match p {
                "simulacrum" => "olive",
                "context" => "egyptian",
                "entity" => "bird",
                "rc" => "evilEye",
                _ => "olive-fertility",
            };
            b.insert(p.into(), Iri::kb(value)?);
        }
        println!("{cq} {}", cq.question());
        println!("{}", render_text(cq, &run_cq(&g, cq, &b)?));
    }

    let with_variants = MeaningOptions {
        include_variants: true,
        ..Default::default()
    };
    let meanings = symbolic_meanings(&g, &Iri::kb("bird")?, with_variants)?;
    println!(
        "bird and its variants mean {:?}",
        meanings.iter().map(Iri::local_name).collect::<Vec<_>>()
    );
    Ok(())
}
