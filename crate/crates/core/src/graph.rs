//! Indexed in-memory store of entities, simulations and variant links.
//!
//! The `symbolicMeaning` property chain (simulacrum -> simulation -> reality
//! counterpart, under sub-property closure) is materialized eagerly on every
//! insert.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::model::{Entity, Iri, RcRelation, Simulation, SimulationKind, VariantLink};
use crate::serialize;
use crate::vocab::Triple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error(
        "simulation {id:?} already exists as {existing}, refusing to merge a {incoming} simulation"
    )]
    KindConflict {
        id: Iri,
        existing: SimulationKind,
        incoming: SimulationKind,
    },
    #[error("simulation {id:?} links {rc:?} as {existing}, refusing to merge it as {incoming}")]
    RelationConflict {
        id: Iri,
        rc: Iri,
        existing: RcRelation,
        incoming: RcRelation,
    },
    #[error("variant link {base:?} -> {variant:?} would close a cycle")]
    CycleError { base: Iri, variant: Iri },
    #[error("unknown entity {0:?}")]
    UnknownEntity(Iri),
}

/// A simulation as stored in the graph: participants by IRI.
///
/// Records built from [`Simulation`] values always satisfy the axioms;
/// records read from a serialized document may not, which is what the
/// validator reports on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationRecord {
    id: Iri,
    kind: SimulationKind,
    simulacra: BTreeSet<Iri>,
    reality_counterparts: Vec<(RcRelation, Iri)>,
    contexts: BTreeSet<Iri>,
    sources: BTreeSet<Iri>,
}

impl SimulationRecord {
    pub(crate) fn new(
        id: Iri,
        kind: SimulationKind,
        simulacra: BTreeSet<Iri>,
        reality_counterparts: Vec<(RcRelation, Iri)>,
        contexts: BTreeSet<Iri>,
        sources: BTreeSet<Iri>,
    ) -> Self {
        SimulationRecord {
            id,
            kind,
            simulacra,
            reality_counterparts,
            contexts,
            sources,
        }
    }

    fn from_simulation(sim: &Simulation) -> Self {
        SimulationRecord {
            id: sim.id().clone(),
            kind: sim.kind(),
            simulacra: BTreeSet::from([sim.simulacrum().id().clone()]),
            reality_counterparts: sim
                .reality_counterparts()
                .iter()
                .map(|(rel, e)| (*rel, e.id().clone()))
                .collect(),
            contexts: sim.contexts().iter().map(|e| e.id().clone()).collect(),
            sources: sim.sources().iter().map(|e| e.id().clone()).collect(),
        }
    }

    pub fn id(&self) -> &Iri {
        &self.id
    }

    pub fn kind(&self) -> SimulationKind {
        self.kind
    }

    /// The simulacrum, when there is exactly one.
    pub fn simulacrum(&self) -> Option<&Iri> {
        match self.simulacra.len() {
            1 => self.simulacra.first(),
            _ => None,
        }
    }

    pub fn simulacra(&self) -> &BTreeSet<Iri> {
        &self.simulacra
    }

    /// Reality counterparts in id order.
    pub fn reality_counterparts(&self) -> &[(RcRelation, Iri)] {
        &self.reality_counterparts
    }

    /// Reality-counterpart IRIs, every relation counting as `Has`.
    pub fn rc_iris(&self) -> impl Iterator<Item = &Iri> {
        self.reality_counterparts.iter().map(|(_, rc)| rc)
    }

    pub fn contexts(&self) -> &BTreeSet<Iri> {
        &self.contexts
    }

    pub fn sources(&self) -> &BTreeSet<Iri> {
        &self.sources
    }

    pub fn count_relation(&self, rel: RcRelation) -> usize {
        self.reality_counterparts
            .iter()
            .filter(|(r, _)| *r == rel)
            .count()
    }

    /// Every IRI the record points at.
    pub fn referenced(&self) -> impl Iterator<Item = &Iri> {
        self.simulacra
            .iter()
            .chain(self.rc_iris())
            .chain(&self.contexts)
            .chain(&self.sources)
    }
}

type Index = BTreeMap<Iri, BTreeSet<Iri>>;

fn index_add(index: &mut Index, key: &Iri, value: &Iri) {
    index.entry(key.clone()).or_default().insert(value.clone());
}

/// The knowledge graph.
///
/// Mutation needs `&mut Graph`; every query takes `&Graph`, so a shared
/// reference can be read from many threads at once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    entities: BTreeMap<Iri, Entity>,
    simulations: BTreeMap<Iri, SimulationRecord>,
    variants: BTreeSet<VariantLink>,
    derived_meanings: BTreeSet<(Iri, Iri)>,
    kind_conflicts: BTreeMap<Iri, BTreeSet<SimulationKind>>,
    extras: BTreeSet<Triple>,

    by_simulacrum: Index,
    meanings: Index,
    by_rc: Index,
    by_context: Index,
    by_source: Index,
    variant_out: Index,
    variant_in: Index,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty() && self.simulations.is_empty() && self.extras.is_empty()
    }

    /// Adds `sim`, or merges it into an existing simulation with the same id
    /// and kind (contexts and sources are unioned). Participants are upserted
    /// by IRI.
    pub fn insert_simulation(&mut self, sim: Simulation) -> Result<(), GraphError> {
        let incoming = SimulationRecord::from_simulation(&sim);
        if let Some(existing) = self.simulations.get(sim.id()) {
            if existing.kind != incoming.kind {
                return Err(GraphError::KindConflict {
                    id: sim.id().clone(),
                    existing: existing.kind,
                    incoming: incoming.kind,
                });
            }
            for (rel, rc) in &incoming.reality_counterparts {
                if let Some((old, _)) = existing
                    .reality_counterparts
                    .iter()
                    .find(|(r, iri)| iri == rc && r != rel)
                {
                    return Err(GraphError::RelationConflict {
                        id: sim.id().clone(),
                        rc: rc.clone(),
                        existing: *old,
                        incoming: *rel,
                    });
                }
            }
        }
        for entity in sim.participants() {
            self.upsert_entity(entity.clone());
        }
        self.put_record(incoming);
        Ok(())
    }

    /// Inserts or unions a record without axiom checks, keeping every index
    /// and the derived meanings in step.
    pub(crate) fn put_record(&mut self, record: SimulationRecord) {
        let id = record.id.clone();
        for s in &record.simulacra {
            index_add(&mut self.by_simulacrum, s, &id);
            for rc in record.rc_iris() {
                self.derive(s, rc);
            }
        }
        for rc in record.rc_iris() {
            index_add(&mut self.by_rc, rc, &id);
        }
        for c in &record.contexts {
            index_add(&mut self.by_context, c, &id);
        }
        for src in &record.sources {
            index_add(&mut self.by_source, src, &id);
        }
        match self.simulations.get_mut(&id) {
            Some(existing) => {
                // re-derive for simulacra the existing record already had
                for s in &existing.simulacra {
                    for rc in record.rc_iris() {
                        self.derived_meanings.insert((s.clone(), rc.clone()));
                        index_add(&mut self.meanings, s, rc);
                    }
                }
                for s in &record.simulacra {
                    for rc in existing.rc_iris() {
                        self.derived_meanings.insert((s.clone(), rc.clone()));
                        index_add(&mut self.meanings, s, rc);
                    }
                }
                existing.simulacra.extend(record.simulacra);
                for pair in record.reality_counterparts {
                    if !existing.reality_counterparts.contains(&pair) {
                        existing.reality_counterparts.push(pair);
                    }
                }
                existing.contexts.extend(record.contexts);
                existing.sources.extend(record.sources);
            }
            None => {
                self.simulations.insert(id, record);
            }
        }
    }

    fn derive(&mut self, simulacrum: &Iri, rc: &Iri) {
        self.derived_meanings
            .insert((simulacrum.clone(), rc.clone()));
        index_add(&mut self.meanings, simulacrum, rc);
    }

    pub(crate) fn upsert_entity(&mut self, entity: Entity) {
        match self.entities.get_mut(entity.id()) {
            Some(existing) => existing.absorb(&entity),
            None => {
                self.entities.insert(entity.id().clone(), entity);
            }
        }
    }

    /// Records `base hasVariant variant`, refusing links that close a cycle.
    pub fn add_variant(&mut self, base: Entity, variant: Entity) -> Result<(), GraphError> {
        let cycle = || GraphError::CycleError {
            base: base.id().clone(),
            variant: variant.id().clone(),
        };
        if base.id() == variant.id() || self.reaches(variant.id(), base.id()) {
            return Err(cycle());
        }
        let link = VariantLink {
            base: base.id().clone(),
            variant: variant.id().clone(),
        };
        self.upsert_entity(base);
        self.upsert_entity(variant);
        self.put_variant(link);
        Ok(())
    }

    pub(crate) fn put_variant(&mut self, link: VariantLink) {
        index_add(&mut self.variant_out, &link.base, &link.variant);
        index_add(&mut self.variant_in, &link.variant, &link.base);
        self.variants.insert(link);
    }

    fn reaches(&self, from: &Iri, to: &Iri) -> bool {
        self.walk_variants(from).contains(to)
    }

    fn walk_variants(&self, start: &Iri) -> BTreeSet<Iri> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            for next in self.variant_out.get(node).into_iter().flatten() {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        seen
    }

    /// Transitive variants of `iri`, excluding `iri` itself.
    pub fn variant_closure(&self, iri: &Iri) -> Result<BTreeSet<Iri>, GraphError> {
        if !self.entities.contains_key(iri) {
            return Err(GraphError::UnknownEntity(iri.clone()));
        }
        let mut closure = self.walk_variants(iri);
        closure.remove(iri);
        Ok(closure)
    }

    pub(crate) fn record_kind_conflict(&mut self, id: Iri, kinds: BTreeSet<SimulationKind>) {
        self.kind_conflicts.insert(id, kinds);
    }

    pub(crate) fn put_extra(&mut self, triple: Triple) {
        self.extras.insert(triple);
    }

    pub fn entity(&self, iri: &Iri) -> Option<&Entity> {
        self.entities.get(iri)
    }

    pub fn contains_entity(&self, iri: &Iri) -> bool {
        self.entities.contains_key(iri)
    }

    pub fn entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values()
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn simulation(&self, iri: &Iri) -> Option<&SimulationRecord> {
        self.simulations.get(iri)
    }

    pub fn simulations(&self) -> impl Iterator<Item = &SimulationRecord> {
        self.simulations.values()
    }

    pub fn simulation_count(&self) -> usize {
        self.simulations.len()
    }

    pub fn variants(&self) -> &BTreeSet<VariantLink> {
        &self.variants
    }

    /// Materialized `symbolicMeaning` pairs `(simulacrum, reality counterpart)`.
    pub fn derived_meanings(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.derived_meanings
    }

    /// Reality counterparts reachable from `simulacrum` in one chain step.
    pub fn meanings_of(&self, simulacrum: &Iri) -> impl Iterator<Item = &Iri> {
        self.meanings.get(simulacrum).into_iter().flatten()
    }

    /// Simulations whose simulacrum is `iri`.
    pub fn simulations_of(&self, iri: &Iri) -> impl Iterator<Item = &SimulationRecord> {
        self.lookup(&self.by_simulacrum, iri)
    }

    pub fn simulations_with_rc(&self, iri: &Iri) -> impl Iterator<Item = &SimulationRecord> {
        self.lookup(&self.by_rc, iri)
    }

    pub fn simulations_in_context(&self, iri: &Iri) -> impl Iterator<Item = &SimulationRecord> {
        self.lookup(&self.by_context, iri)
    }

    pub fn simulations_from_source(&self, iri: &Iri) -> impl Iterator<Item = &SimulationRecord> {
        self.lookup(&self.by_source, iri)
    }

    fn lookup<'a>(
        &'a self,
        index: &'a Index,
        key: &Iri,
    ) -> impl Iterator<Item = &'a SimulationRecord> {
        index
            .get(key)
            .into_iter()
            .flatten()
            .filter_map(|id| self.simulations.get(id))
    }

    /// Direct variants of `iri`.
    pub fn variants_of(&self, iri: &Iri) -> impl Iterator<Item = &Iri> {
        self.variant_out.get(iri).into_iter().flatten()
    }

    /// Whether `iri` is the base or the variant of some link.
    pub fn in_variant_link(&self, iri: &Iri) -> bool {
        self.variant_out.contains_key(iri) || self.variant_in.contains_key(iri)
    }

    pub fn kind_conflicts(&self) -> &BTreeMap<Iri, BTreeSet<SimulationKind>> {
        &self.kind_conflicts
    }

    /// Statements kept verbatim from an imported document.
    pub fn extras(&self) -> &BTreeSet<Triple> {
        &self.extras
    }

    /// Source entities, in IRI order.
    pub fn sources(&self) -> impl Iterator<Item = &Entity> {
        self.by_source
            .keys()
            .filter_map(|iri| self.entities.get(iri))
    }

    /// The simulations derived from `source`, their participants, variant
    /// links touching any of those participants, and preserved statements
    /// about any of the above.
    pub fn source_subgraph(&self, source: &Iri) -> Graph {
        let mut sub = Graph::new();
        for record in self.simulations_from_source(source) {
            for iri in record.referenced() {
                if let Some(e) = self.entities.get(iri) {
                    sub.upsert_entity(e.clone());
                }
            }
            sub.put_record(record.clone());
            if let Some(kinds) = self.kind_conflicts.get(&record.id) {
                sub.record_kind_conflict(record.id.clone(), kinds.clone());
            }
        }
        for link in &self.variants {
            if sub.contains_entity(&link.base) || sub.contains_entity(&link.variant) {
                for iri in [&link.base, &link.variant] {
                    if let Some(e) = self.entities.get(iri) {
                        sub.upsert_entity(e.clone());
                    }
                }
                sub.put_variant(link.clone());
            }
        }
        for t in &self.extras {
            if sub.contains_entity(&t.subject) || sub.simulations.contains_key(&t.subject) {
                sub.put_extra(t.clone());
            }
        }
        sub
    }

    /// Per-source corpus statistics with a deduplicated totals row.
    pub fn stats(&self) -> CorpusStats {
        let rows = self
            .sources()
            .map(|src| {
                let sub = self.source_subgraph(src.id());
                let mut row = StatsRow::count(&sub);
                row.source = src.label().to_string();
                row
            })
            .collect();
        let mut total = StatsRow::count(self);
        total.source = "Total".to_string();
        CorpusStats { rows, total }
    }
}

/// One row of [`CorpusStats`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StatsRow {
    pub source: String,
    pub n_simulacra: usize,
    pub n_rcs: usize,
    pub n_contexts: usize,
    pub n_simulations: usize,
    pub n_triples: usize,
}

impl StatsRow {
    fn count(g: &Graph) -> StatsRow {
        let mut simulacra = BTreeSet::new();
        let mut rcs = BTreeSet::new();
        let mut contexts = BTreeSet::new();
        for rec in g.simulations() {
            simulacra.extend(rec.simulacra.iter());
            rcs.extend(rec.rc_iris());
            contexts.extend(rec.contexts.iter());
        }
        StatsRow {
            source: String::new(),
            n_simulacra: simulacra.len(),
            n_rcs: rcs.len(),
            n_contexts: contexts.len(),
            n_simulations: g.simulation_count(),
            n_triples: serialize::triples(g).len(),
        }
    }
}

/// Corpus size per source plus a totals row in which elements shared by
/// several sources are counted once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub rows: Vec<StatsRow>,
    pub total: StatsRow,
}

impl CorpusStats {
    pub const HEADER: [&'static str; 6] = [
        "source",
        "simulacra",
        "reality_counterparts",
        "contexts",
        "simulations",
        "triples",
    ];

    pub fn to_csv(&self) -> String {
        let mut out = Self::HEADER.join(",");
        out.push('\n');
        for row in self.rows.iter().chain([&self.total]) {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                csv_field(&row.source),
                row.n_simulacra,
                row.n_rcs,
                row.n_contexts,
                row.n_simulations,
                row.n_triples
            ));
        }
        out
    }
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<[String; 6]> = self
            .rows
            .iter()
            .chain([&self.total])
            .map(|r| {
                [
                    r.source.clone(),
                    r.n_simulacra.to_string(),
                    r.n_rcs.to_string(),
                    r.n_contexts.to_string(),
                    r.n_simulations.to_string(),
                    r.n_triples.to_string(),
                ]
            })
            .collect();
        let header = Self::HEADER.map(String::from);
        f.write_str(&crate::render::aligned(&header, &rows))
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
