//! Times each stage on a synthetic dictionary of 50,000 meanings.
//!
//!     cargo run --release --example scale [-- <simulations>]

use std::fmt::Write as _;
use std::time::Instant;

use simulation_kg::graph::Graph;
use simulation_kg::ingest::dictionary::{convert_dictionary, parse_dictionary, PhraseTable};
use simulation_kg::model::{Entity, Iri};
use simulation_kg::query::{run_cq, Bindings, CqId};
use simulation_kg::serialize::export_turtle;
use simulation_kg::validate::check_axioms;

fn synthetic(simulations: usize) -> String {
    let contexts = [
        "Greek",
        "Roman",
        "Christian",
        "Egyptian",
        "Hindu",
        "Japanese",
        "Mayan",
        "Celtic",
    ];
    let mut text = String::new();
    for i in 0..simulations / 10 {
        let ctx = |k: usize| contexts[(i + k * 3) % contexts.len()];
        let group = format!(
            "[{}, {}, {}, {}, {}]",
            ctx(0),
            ctx(1),
            ctx(2),
            ctx(3),
            ctx(4)
        );
        let m = |k: usize| format!("meaning {}", (i * 7 + k * 131) % 4000);
        writeln!(text, "glyph {i}").unwrap();
        writeln!(text, "  {group} {}; {}; {}; {}", m(0), m(1), m(2), m(3)).unwrap();
        writeln!(text, "  {group} {}; {}", m(4), m(5)).unwrap();
        writeln!(text, "  {group} related to: {}; {}", m(6), m(7)).unwrap();
        writeln!(text, "  ~ glyph {i} variant:").unwrap();
        writeln!(text, "    {group} {}; {}", m(8), m(9)).unwrap();
    }
    text
}

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(50_000);
    let text = synthetic(n);
    let mut t = Instant::now();
    let mut lap = |what: &str| {
        println!("{what:<10} {:>8.2?}", t.elapsed());
        t = Instant::now();
    };
    let parsed = parse_dictionary(&text);
    lap("parse");
    let conversion = convert_dictionary(
        &parsed,
        &Entity::source("Olderr").unwrap(),
        &PhraseTable::default(),
    );
    lap("convert");
    let mut g = Graph::new();
    conversion.insert_into(&mut g);
    lap("insert");
    let violations = check_axioms(&g).len();
    lap("validate");
    let kb = |s: &str| Iri::kb(s).unwrap();
    let sim = g.simulations().next().unwrap().id().clone();
    for cq in CqId::ALL {
        let mut b = Bindings::new();
        if let Some(p) = cq.parameter() {
            let v = match p {
                "rc" => kb("meaning0"),
                "context" => kb("greek"),
                "simulation" => sim.clone(),
                _ => kb("glyph0"),
            };
            b.insert(p.to_string(), v);
        }
        let rows = run_cq(&g, cq, &b).unwrap().len();
        lap(&format!("{cq} ({rows})"));
    }
    let ttl = export_turtle(&g);
    lap("export");
    println!(
        "{} simulations, {violations} violations, {} triples, {} bytes of Turtle",
        g.simulation_count(),
        g.stats().total.n_triples,
        ttl.len()
    );
    lap("stats");
}
