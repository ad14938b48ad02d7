//! Converts DBpedia symbol statements from a file, or pages through a live
//! endpoint when one is given.
//!
//!     cargo run --example ingest_dbpedia
//!     cargo run --example ingest_dbpedia -- https://dbpedia.org/sparql

use std::time::Duration;

use simulation_kg::ingest::dbpedia::{
    convert_dbpedia, fetch_symbol_data, parse_symbol_file, DbpediaConfig, FetchOptions,
    HttpTransport,
};
use simulation_kg::model::Entity;

const OFFLINE: &str = "\
dbr:Eagle dct:subject dbc:National_symbols_of_Liechtenstein .
dbr:Zeus dbp:symbol dbr:Thunderbolt .
dbr:Zeus a dbo:Deity .
dbr:Atocha_railway_station dbp:symbol \"metro\"@en .
dbr:Atocha_railway_station a dbo:RailwayStation .
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = match std::env::args().nth(1) {
        Some(endpoint) => {
            let opts = FetchOptions {
                page_size: 1000,
                ..FetchOptions::default()
            };
            fetch_symbol_data(
                &HttpTransport::new(Duration::from_secs(60)),
                &endpoint,
                &opts,
            )?
        }
        None => {
            let (rows, errors) = parse_symbol_file(OFFLINE);
            assert!(errors.is_empty());
            rows
        }
    };
    let conversion = convert_dbpedia(
        &rows,
        &Entity::source("DBpedia")?,
        &DbpediaConfig::default(),
    );
    for s in conversion.simulations().take(20) {
        println!("{} ({})", s.id().local_name(), s.contexts()[0].label());
    }
    println!("{} simulations", conversion.simulations.len());
    for line in &conversion.log {
        println!("{line}");
    }
    Ok(())
}
