#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simulation_kg::graph::Graph;
use simulation_kg::model::{Entity, Iri, RcRelation, Simulation, SimulationKind};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn kb(local: &str) -> Iri {
    Iri::kb(local).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const WORDS: [&str; 24] = [
    "olive",
    "peace",
    "owl",
    "death",
    "bee",
    "resurrection",
    "white rose",
    "purity",
    "red rose",
    "love",
    "golden hair",
    "blue candle",
    "faith",
    "white dove",
    "black cat",
    "luck",
    "dragon",
    "power",
    "green man",
    "rebirth",
    "hook",
    "fate",
    "purple robe",
    "royalty",
];
const CONTEXTS: [&str; 6] = [
    "General or Unknown",
    "Christian",
    "Egyptian",
    "Hindu",
    "Japanese",
    "Mayan",
];
const SOURCES: [&str; 3] = ["Olderr", "WordNet", "DBpedia"];

/// A constructor-built graph plus the simulations that made it in, in
/// insertion order.
pub struct RandomGraph {
    pub graph: Graph,
    pub inserted: Vec<Simulation>,
}

fn entity(rng: &mut ChaCha8Rng, pool: &[&str]) -> Entity {
    Entity::simulacrum(pool.choose(rng).unwrap()).unwrap()
}

pub fn random_simulation(rng: &mut ChaCha8Rng) -> Simulation {
    let kind = *SimulationKind::ALL.choose(rng).unwrap();
    let simulacrum = entity(rng, &WORDS);
    let n_rc = rng.random_range(1..=3);
    let mut rcs = Vec::new();
    let forced = match kind {
        SimulationKind::Healing => Some(RcRelation::Healed),
        SimulationKind::Protection => Some(RcRelation::Prevented),
        _ => None,
    };
    for i in 0..n_rc {
        let rel = match (forced, i) {
            (Some(r), 0) => r,
            (Some(r), _) => {
                let free: Vec<_> = RcRelation::ALL.into_iter().filter(|x| *x != r).collect();
                *free.choose(rng).unwrap()
            }
            (None, _) => *RcRelation::ALL.choose(rng).unwrap(),
        };
        let mut rc = Entity::reality_counterpart(WORDS.choose(rng).unwrap()).unwrap();
        while rc.id() == simulacrum.id()
            || rcs
                .iter()
                .any(|(_, e): &(RcRelation, Entity)| e.id() == rc.id())
        {
            rc = Entity::reality_counterpart(WORDS.choose(rng).unwrap()).unwrap();
        }
        rcs.push((rel, rc));
    }
    let contexts = (0..rng.random_range(1..=2))
        .map(|_| Entity::context(CONTEXTS.choose(rng).unwrap()).unwrap())
        .collect();
    let sources = (0..rng.random_range(1..=2))
        .map(|_| Entity::source(SOURCES.choose(rng).unwrap()).unwrap())
        .collect();
    Simulation::build(kind, simulacrum, rcs, contexts, sources).unwrap()
}

pub fn random_graph(rng: &mut ChaCha8Rng, max_sims: usize) -> RandomGraph {
    let mut graph = Graph::new();
    let mut inserted = Vec::new();
    let n = rng.random_range(0..=max_sims);
    for _ in 0..n {
        let sim = random_simulation(rng);
        if graph.insert_simulation(sim.clone()).is_ok() {
            inserted.push(sim);
        }
    }
    for _ in 0..rng.random_range(0..=n / 4) {
        let base = entity(rng, &WORDS);
        let variant = entity(rng, &WORDS);
        let _ = graph.add_variant(base, variant);
    }
    RandomGraph { graph, inserted }
}

/// (simulacrum, rc) pairs recomputed from the raw simulations.
pub fn brute_meanings(sims: &[Simulation]) -> BTreeSet<(Iri, Iri)> {
    let mut out = BTreeSet::new();
    for s in sims {
        for (_, rc) in s.reality_counterparts() {
            out.insert((s.simulacrum().id().clone(), rc.id().clone()));
        }
    }
    out
}

/// Counts colour words in simulacrum labels by plain substring search over
/// space-padded lowercase labels.
pub fn brute_colors(
    sims: &[Simulation],
    target: &Iri,
    colors: &[(&str, &[&str])],
) -> BTreeMap<Iri, BTreeMap<String, usize>> {
    let meanings = brute_meanings(sims);
    let of = |s: &Iri| -> BTreeSet<Iri> {
        meanings
            .iter()
            .filter(|(a, _)| a == s)
            .map(|(_, m)| m.clone())
            .collect()
    };
    let mut labels: BTreeMap<Iri, String> = BTreeMap::new();
    for s in sims {
        let e = s.simulacrum();
        labels
            .entry(e.id().clone())
            .and_modify(|l| {
                if e.label() < l.as_str() {
                    *l = e.label().to_string()
                }
            })
            .or_insert_with(|| e.label().to_string());
    }
    let mut out = BTreeMap::new();
    for m in of(target) {
        let mut row: BTreeMap<String, usize> =
            colors.iter().map(|(c, _)| (c.to_string(), 0)).collect();
        for (s, label) in &labels {
            if s == target || !of(s).contains(&m) {
                continue;
            }
            let padded = format!(" {} ", label.to_lowercase());
            for (name, words) in colors {
                if words.iter().any(|w| padded.contains(&format!(" {w} "))) {
                    *row.get_mut(*name).unwrap() += 1;
                }
            }
        }
        out.insert(m, row);
    }
    out
}
