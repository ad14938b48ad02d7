mod common;

use std::cell::RefCell;
use std::collections::BTreeSet;

use common::{kb, read_fixture};
use simulation_kg::graph::Graph;
use simulation_kg::ingest::dbpedia::{
    fetch_symbol_data, FetchOptions, SparqlTransport, TransportError,
};
use simulation_kg::ingest::dictionary::{convert_dictionary, parse_dictionary, PhraseTable};
use simulation_kg::ingest::wordnet::{convert_synsets, parse_synsets, select_synsets};
use simulation_kg::model::{camel_case, Entity};
use simulation_kg::serialize::triples;
use simulation_kg::vocab::Term;

fn olderr() -> Entity {
    Entity::source("Olderr").unwrap()
}

/// Counts meanings by splitting indented lines on ';' after stripping any
/// bracketed prefix and relation phrase.
fn recount_dictionary(text: &str) -> usize {
    text.lines()
        .filter(|l| {
            l.starts_with(' ')
                && !l.trim_start().starts_with('~')
                && !l.trim_start().starts_with('#')
        })
        .map(|l| {
            let body = l.trim();
            let body = match body.strip_prefix('[') {
                Some(rest) => &rest[rest.find(']').unwrap() + 1..],
                None => body,
            };
            let body = body.rsplit_once(':').map_or(body, |(_, m)| m);
            body.split(';').filter(|m| !m.trim().is_empty()).count()
        })
        .sum()
}

#[test]
fn sample_dictionary_counts() {
    let text = read_fixture("sample.dict");
    let parsed = parse_dictionary(&text);
    assert!(parsed.errors.is_empty());
    let c = convert_dictionary(&parsed, &olderr(), &PhraseTable::default());
    assert_eq!(c.simulations.len(), recount_dictionary(&text));
    let lemmas = text
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with([' ', '#']))
        .count();
    let variant_lines = text
        .lines()
        .filter(|l| l.trim_start().starts_with('~'))
        .count();
    assert_eq!(c.variants.len(), variant_lines);

    let mut g = Graph::new();
    assert!(c.insert_into(&mut g).is_empty());
    let stats = g.stats();
    assert_eq!(stats.total.n_simulacra, lemmas + variant_lines);
    assert_eq!(stats.total.n_simulations, c.simulations.len());
    assert_eq!(stats.total.n_triples, triples(&g).len());
}

/// Stats golden values recounted from raw triples: distinct objects per
/// predicate, and simulation subjects.
#[test]
fn stats_golden_matches_triple_recount() {
    let imported =
        simulation_kg::serialize::import_turtle(&read_fixture("golden/sample.ttl")).unwrap();
    let all = triples(&imported.graph);
    let objects = |pred: &str| -> BTreeSet<String> {
        all.iter()
            .filter(|t| t.predicate.as_str().ends_with(pred))
            .map(|t| t.object.to_string())
            .collect()
    };
    let sims: BTreeSet<_> = all
        .iter()
        .filter(|t| t.predicate.as_str().ends_with("hasSimulacrum"))
        .map(|t| t.subject.clone())
        .collect();
    let rcs: BTreeSet<String> = all
        .iter()
        .filter(|t| {
            t.predicate.as_str().ends_with("RealityCounterpart")
                && t.predicate.as_str().contains("/ontology/")
        })
        .map(|t| t.object.to_string())
        .collect();
    let want = format!(
        "source,simulacra,reality_counterparts,contexts,simulations,triples\nOlderr,{s},{r},{c},{n},{t}\nTotal,{s},{r},{c},{n},{t}\n",
        s = objects("hasSimulacrum").len(),
        r = rcs.len(),
        c = objects("hasContext").len(),
        n = sims.len(),
        t = all.len()
    );
    assert_eq!(read_fixture("golden/sample_stats.csv"), want);
}

#[test]
fn shared_simulacrum_counted_once_in_totals() {
    let dict = "olive\n  peace\n  fertility\n";
    let mut g = Graph::new();
    convert_dictionary(&parse_dictionary(dict), &olderr(), &PhraseTable::default())
        .insert_into(&mut g);
    convert_dictionary(
        &parse_dictionary("olive\n  wisdom\n"),
        &Entity::source("Cirlot").unwrap(),
        &PhraseTable::default(),
    )
    .insert_into(&mut g);
    let stats = g.stats();
    assert_eq!(stats.rows.len(), 2);
    assert_eq!(stats.total.n_simulations, 3);
    assert_eq!(stats.total.n_simulacra, 1);
    assert_eq!(stats.rows.iter().map(|r| r.n_simulacra).sum::<usize>(), 2);
}

/// Meaning terms recounted by scanning the text after each trigger phrase.
fn recount_gloss(gloss: &str) -> usize {
    let lower = gloss.to_lowercase();
    let mut n = 0;
    for trigger in ["symbol of ", "emblem of ", "symbolizes "] {
        if let Some(at) = lower.find(trigger) {
            let tail = &lower[at + trigger.len()..];
            let end = tail.find([';', '.', '(']).unwrap_or(tail.len());
            n += tail[..end]
                .split([',', ' '])
                .filter(|w| !w.is_empty())
                .collect::<Vec<_>>()
                .join(" ")
                .split(" and ")
                .flat_map(|p| p.split(" or "))
                .filter(|p| !p.trim().is_empty())
                .count();
        }
    }
    n
}

#[test]
fn synset_counts_match_recount() {
    let tsv = read_fixture("synsets.tsv");
    let (records, errors) = parse_synsets(&tsv);
    assert!(errors.is_empty());
    let selected = select_synsets(&records);
    let want: usize = selected.iter().map(|r| recount_gloss(&r.gloss)).sum();
    let c = convert_synsets(&tsv, &Entity::source("WordNet").unwrap());
    assert_eq!(c.simulations.len(), want);
    let ids: BTreeSet<_> = c
        .simulations()
        .map(|s| s.id().local_name().to_string())
        .collect();
    assert!(ids.contains("fasces-authority"));
    assert!(!ids.iter().any(|i| i.starts_with("teapot")));
    assert_eq!(c.log.len(), 1, "{:?}", c.log);
    assert!(c.log[0].message.contains("albatross"));
}

struct Recorded {
    body: String,
    calls: RefCell<Vec<String>>,
}

impl SparqlTransport for Recorded {
    fn select(&self, _endpoint: &str, query: &str) -> Result<String, TransportError> {
        self.calls.borrow_mut().push(query.to_string());
        let empty = r#"{"head":{"vars":[]},"results":{"bindings":[]}}"#;
        let first_symbol_page = query.contains("dbp:symbol") && query.contains("OFFSET 0");
        Ok(if first_symbol_page {
            self.body.clone()
        } else {
            empty.to_string()
        })
    }
}

#[test]
fn recorded_sparql_response() {
    let t = Recorded {
        body: read_fixture("dbpedia_response.json"),
        calls: RefCell::new(Vec::new()),
    };
    let rows =
        fetch_symbol_data(&t, "http://example.org/sparql", &FetchOptions::default()).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(
        rows.iter()
            .filter(|r| matches!(r.object, Term::Literal { .. }))
            .count(),
        1
    );
    let zeus = rows
        .iter()
        .find(|r| r.subject.as_str().ends_with("/Zeus"))
        .unwrap();
    assert_eq!(zeus.subject_types.len(), 1);
    let calls = t.calls.borrow();
    assert!(calls.iter().all(|q| q.contains("ORDER BY")));
}

#[test]
fn camel_case_of_fixture_labels() {
    assert_eq!(
        camel_case("Christ's power to draw souls"),
        "christsPowerToDrawSouls"
    );
    assert_eq!(kb(&camel_case("night bird")), kb("nightBird"));
}
