//! Closed-world axiom checks.
//!
//! Existential restrictions are read as constraints: a simulation without a
//! source is a violation, not an unnamed source waiting to be inferred.
//! Specialized reality-counterpart relations count towards
//! `hasRealityCounterpart`.

use std::collections::BTreeSet;
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;

use crate::graph::{csv_field, Graph};
use crate::model::{Iri, RcRelation, Role, SimulationKind};
use crate::vocab::display_iri;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    MissingContext,
    MissingRealityCounterpart,
    SimulacrumCardinality,
    MissingSource,
    HealingCardinality,
    ProtectionCardinality,
    DanglingEntity,
    VariantCycle,
    KindConflict,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::MissingContext => "MissingContext",
            Axiom::MissingRealityCounterpart => "MissingRealityCounterpart",
            Axiom::SimulacrumCardinality => "SimulacrumCardinality",
            Axiom::MissingSource => "MissingSource",
            Axiom::HealingCardinality => "HealingCardinality",
            Axiom::ProtectionCardinality => "ProtectionCardinality",
            Axiom::DanglingEntity => "DanglingEntity",
            Axiom::VariantCycle => "VariantCycle",
            Axiom::KindConflict => "KindConflict",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub subject: Iri,
    pub axiom: Axiom,
    pub detail: String,
}

impl Violation {
    fn new(axiom: Axiom, subject: &Iri, detail: impl Into<String>) -> Self {
        Violation {
            subject: subject.clone(),
            axiom,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}: {}",
            display_iri(self.subject.as_str()),
            self.axiom,
            self.detail
        )
    }
}

/// Every violation in `g`, ordered by subject IRI and then axiom.
pub fn check_axioms(g: &Graph) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut participating: BTreeSet<&Iri> = BTreeSet::new();

    for rec in g.simulations() {
        let id = rec.id();
        if rec.contexts().is_empty() {
            out.push(Violation::new(
                Axiom::MissingContext,
                id,
                "hasContext some Context: no context",
            ));
        }
        if rec.reality_counterparts().is_empty() {
            out.push(Violation::new(
                Axiom::MissingRealityCounterpart,
                id,
                "hasRealityCounterpart some RealityCounterpart: no reality counterpart",
            ));
        }
        if rec.simulacra().len() != 1 {
            out.push(Violation::new(
                Axiom::SimulacrumCardinality,
                id,
                format!(
                    "hasSimulacrum exactly 1 Simulacrum: found {}",
                    rec.simulacra().len()
                ),
            ));
        }
        if rec.sources().is_empty() {
            out.push(Violation::new(
                Axiom::MissingSource,
                id,
                "wasDerivedFrom some Source: no source",
            ));
        }
        let healed = rec.count_relation(RcRelation::Healed);
        if rec.kind() == SimulationKind::Healing && healed != 1 {
            out.push(Violation::new(
                Axiom::HealingCardinality,
                id,
                format!("healedRealityCounterpart exactly 1: found {healed}"),
            ));
        }
        let prevented = rec.count_relation(RcRelation::Prevented);
        if rec.kind() == SimulationKind::Protection && prevented != 1 {
            out.push(Violation::new(
                Axiom::ProtectionCardinality,
                id,
                format!("preventedRealityCounterpart exactly 1: found {prevented}"),
            ));
        }
        for iri in rec.referenced() {
            participating.insert(iri);
            if !g.contains_entity(iri) {
                out.push(Violation::new(
                    Axiom::DanglingEntity,
                    id,
                    format!("reference to unknown entity {}", display_iri(iri.as_str())),
                ));
            }
        }
    }

    for link in g.variants() {
        for iri in [&link.base, &link.variant] {
            if !g.contains_entity(iri) {
                out.push(Violation::new(
                    Axiom::DanglingEntity,
                    iri,
                    "variant link to unknown entity",
                ));
            }
        }
    }

    for e in g.entities() {
        let linked = e.has_role(Role::Simulacrum) || e.has_role(Role::RealityCounterpart);
        if linked && !participating.contains(e.id()) && !g.in_variant_link(e.id()) {
            out.push(Violation::new(
                Axiom::DanglingEntity,
                e.id(),
                "simulacrum or reality counterpart not linked to any simulation or variant",
            ));
        }
    }

    out.extend(variant_cycles(g));

    for (id, kinds) in g.kind_conflicts() {
        let names: Vec<_> = kinds.iter().map(|k| k.name()).collect();
        out.push(Violation::new(
            Axiom::KindConflict,
            id,
            format!("typed as {}", names.join(", ")),
        ));
    }

    out.sort();
    out.dedup();
    out
}

fn variant_cycles(g: &Graph) -> Vec<Violation> {
    let mut dg: DiGraphMap<&str, ()> = DiGraphMap::new();
    for link in g.variants() {
        dg.add_edge(link.base.as_str(), link.variant.as_str(), ());
    }
    let mut out = Vec::new();
    for component in tarjan_scc(&dg) {
        let cyclic =
            component.len() > 1 || component.first().is_some_and(|n| dg.contains_edge(n, n));
        if cyclic {
            let mut members: Vec<&str> = component.clone();
            members.sort_unstable();
            let subject = Iri::new(members[0]).expect("graph IRIs are valid");
            let shown: Vec<String> = members.iter().map(|m| display_iri(m)).collect();
            out.push(Violation::new(
                Axiom::VariantCycle,
                &subject,
                format!("hasVariant cycle through {}", shown.join(", ")),
            ));
        }
    }
    out
}

/// One violation per line, followed by a count line.
pub fn render_text(violations: &[Violation]) -> String {
    let mut out = String::new();
    for v in violations {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out.push_str(&format!("{} violations\n", violations.len()));
    out
}

/// `axiom,subject,detail` records with a header line.
pub fn render_csv(violations: &[Violation]) -> String {
    let mut out = String::from("axiom,subject,detail\n");
    for v in violations {
        out.push_str(&format!(
            "{},{},{}\n",
            v.axiom,
            csv_field(v.subject.as_str()),
            csv_field(&v.detail)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimulationRecord;
    use crate::model::{build_simulation, Entity, VariantLink};

    fn kb(local: &str) -> Iri {
        Iri::kb(local).unwrap()
    }

    #[test]
    fn constructor_built_graph_is_clean() {
        let mut g = Graph::new();
        g.insert_simulation(
            build_simulation(
                SimulationKind::Protection,
                Entity::simulacrum("agate").unwrap(),
                vec![
                    (
                        RcRelation::Prevented,
                        Entity::reality_counterpart("evil spirits").unwrap(),
                    ),
                    (
                        RcRelation::Has,
                        Entity::reality_counterpart("charm").unwrap(),
                    ),
                ],
                vec![Entity::context("Arabian").unwrap()],
                vec![Entity::source("Olderr").unwrap()],
            )
            .unwrap(),
        )
        .unwrap();
        g.add_variant(
            Entity::simulacrum("agate").unwrap(),
            Entity::simulacrum("black agate").unwrap(),
        )
        .unwrap();
        assert_eq!(check_axioms(&g), vec![]);
        assert_eq!(render_text(&[]), "0 violations\n");
    }

    #[test]
    fn raw_records_are_checked() {
        let mut g = Graph::new();
        let rc = Entity::reality_counterpart("a").unwrap();
        g.upsert_entity(rc.clone());
        g.upsert_entity(Entity::simulacrum("x").unwrap());
        g.upsert_entity(Entity::simulacrum("y").unwrap());
        g.put_record(SimulationRecord::new(
            kb("x-a"),
            SimulationKind::Protection,
            [kb("x"), kb("y")].into(),
            vec![
                (RcRelation::Prevented, kb("a")),
                (RcRelation::Prevented, kb("b")),
            ],
            BTreeSet::new(),
            BTreeSet::new(),
        ));
        g.put_variant(VariantLink {
            base: kb("x"),
            variant: kb("y"),
        });
        g.put_variant(VariantLink {
            base: kb("y"),
            variant: kb("x"),
        });
        g.upsert_entity(Entity::simulacrum("lonely").unwrap());
        g.record_kind_conflict(
            kb("x-a"),
            [SimulationKind::Generic, SimulationKind::Protection].into(),
        );

        let axioms: Vec<_> = check_axioms(&g)
            .iter()
            .map(|v| (v.subject.clone(), v.axiom))
            .collect();
        assert_eq!(
            axioms,
            vec![
                (kb("lonely"), Axiom::DanglingEntity),
                (kb("x"), Axiom::VariantCycle),
                (kb("x-a"), Axiom::MissingContext),
                (kb("x-a"), Axiom::SimulacrumCardinality),
                (kb("x-a"), Axiom::MissingSource),
                (kb("x-a"), Axiom::ProtectionCardinality),
                (kb("x-a"), Axiom::DanglingEntity),
                (kb("x-a"), Axiom::KindConflict),
            ]
        );
        let csv = render_csv(&check_axioms(&g));
        assert!(csv.starts_with("axiom,subject,detail\n"));
        assert_eq!(csv.lines().count(), 9);
    }

    #[test]
    fn validation_is_read_only() {
        let mut g = Graph::new();
        g.upsert_entity(Entity::simulacrum("lonely").unwrap());
        let before = g.clone();
        let _ = check_axioms(&g);
        assert_eq!(g, before);
    }
}
