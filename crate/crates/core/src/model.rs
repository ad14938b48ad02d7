//! Domain types of the simulation pattern.
//!
//! A [`Simulation`] is the n-ary relation node binding exactly one simulacrum
//! to one or more reality counterparts, valid in one or more contexts and
//! derived from one or more sources. [`Simulation::build`] is the only way to
//! obtain one, so every value in circulation satisfies the cardinality axioms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::vocab::{KB, SIM};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("label is empty after normalization")]
    EmptyLabel,
    #[error("invalid IRI {0:?}: {1}")]
    InvalidIri(String, &'static str),
    #[error("unknown simulation kind {0:?}")]
    UnknownKind(String),
    #[error("unknown reality-counterpart relation {0:?}")]
    UnknownRelation(String),
}

/// Violated cardinality axiom reported by [`Simulation::build`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CardinalityError {
    #[error(
        "axiom `hasRealityCounterpart some RealityCounterpart` violated: no reality counterpart"
    )]
    MissingRealityCounterpart,
    #[error("axiom `hasContext some Context` violated: no context")]
    MissingContext,
    #[error("axiom `wasDerivedFrom some Source` violated: no source")]
    MissingSource,
    #[error("axiom `healedRealityCounterpart exactly 1` violated: found {found}")]
    HealingCardinality { found: usize },
    #[error("axiom `preventedRealityCounterpart exactly 1` violated: found {found}")]
    ProtectionCardinality { found: usize },
}

/// An absolute IRI. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(Arc<str>);

/// Which of the two project namespaces an IRI lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Namespace {
    Data,
    Schema,
    External,
}

impl Iri {
    pub fn new(value: impl AsRef<str>) -> Result<Iri, ModelError> {
        let value = value.as_ref();
        if value.is_empty() {
            return Err(ModelError::InvalidIri(value.into(), "empty"));
        }
        if value
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || "<>\"{}|^`\\".contains(c))
        {
            return Err(ModelError::InvalidIri(value.into(), "forbidden character"));
        }
        match value.split_once(':') {
            Some((scheme, _))
                if !scheme.is_empty()
                    && scheme.starts_with(|c: char| c.is_ascii_alphabetic())
                    && scheme
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c)) => {}
            _ => return Err(ModelError::InvalidIri(value.into(), "not absolute")),
        }
        Ok(Iri(value.into()))
    }

    /// `kb:<local>`. The local name must already be a valid IRI fragment.
    pub fn kb(local: &str) -> Result<Iri, ModelError> {
        Iri::new(format!("{KB}{local}"))
    }

    pub fn sim(local: &str) -> Iri {
        Iri::new(format!("{SIM}{local}")).expect("schema names are valid")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn namespace(&self) -> Namespace {
        if self.0.starts_with(KB) {
            Namespace::Data
        } else if self.0.starts_with(SIM) {
            Namespace::Schema
        } else {
            Namespace::External
        }
    }

    /// Part after the `kb:`/`sim:` namespace, or after the last `/`, `#` or `:`
    /// for external IRIs.
    pub fn local_name(&self) -> &str {
        if let Some(local) = self.0.strip_prefix(KB).or_else(|| self.0.strip_prefix(SIM)) {
            return local;
        }
        match self.0.rfind(['/', '#', ':']) {
            Some(i) => &self.0[i + 1..],
            None => &self.0,
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '\u{02BC}')
}

/// camelCase local name for a label. Apostrophes are dropped inside a word
/// ("Christ's" -> "christs"); every other non-alphanumeric character
/// separates words.
pub fn camel_case(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    let words = label
        .split(|c: char| !(c.is_alphanumeric() || is_apostrophe(c)))
        .map(|w| {
            w.chars()
                .filter(|c| c.is_alphanumeric())
                .collect::<String>()
        })
        .filter(|w| !w.is_empty());
    for (i, word) in words.enumerate() {
        if i == 0 {
            out.extend(word.chars().flat_map(char::to_lowercase));
        } else {
            let mut chars = word.chars();
            if let Some(first) = chars.next() {
                out.extend(first.to_uppercase());
                out.push_str(chars.as_str());
            }
        }
    }
    // case mapping can emit combining marks (e.g. for 'İ')
    out.retain(char::is_alphanumeric);
    out
}

/// Mints the IRI for a human-readable label inside `namespace`.
pub fn mint_iri(label: &str, namespace: &str) -> Result<Iri, ModelError> {
    let local = camel_case(label);
    if local.is_empty() {
        return Err(ModelError::EmptyLabel);
    }
    Iri::new(format!("{namespace}{local}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Simulacrum,
    RealityCounterpart,
    Context,
    Source,
}

impl Role {
    pub const ALL: [Role; 4] = [
        Role::Simulacrum,
        Role::RealityCounterpart,
        Role::Context,
        Role::Source,
    ];

    fn class_name(self) -> &'static str {
        match self {
            Role::Simulacrum => "Simulacrum",
            Role::RealityCounterpart => "RealityCounterpart",
            Role::Context => "Context",
            Role::Source => "Source",
        }
    }

    pub fn class_iri(self) -> Iri {
        Iri::sim(self.class_name())
    }

    pub fn from_class_iri(iri: &Iri) -> Option<Role> {
        let local = iri.as_str().strip_prefix(SIM)?;
        Role::ALL.into_iter().find(|r| r.class_name() == local)
    }
}

/// A node of the graph: simulacrum, reality counterpart, context or source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    id: Iri,
    label: String,
    roles: BTreeSet<Role>,
    external_links: BTreeSet<Iri>,
}

impl Entity {
    /// Entity whose `kb:` IRI is minted from `label`.
    pub fn new(label: &str, role: Role) -> Result<Entity, ModelError> {
        let label = label.trim();
        let id = mint_iri(label, KB)?;
        Ok(Entity {
            id,
            label: label.to_string(),
            roles: BTreeSet::from([role]),
            external_links: BTreeSet::new(),
        })
    }

    pub fn simulacrum(label: &str) -> Result<Entity, ModelError> {
        Entity::new(label, Role::Simulacrum)
    }

    pub fn reality_counterpart(label: &str) -> Result<Entity, ModelError> {
        Entity::new(label, Role::RealityCounterpart)
    }

    pub fn context(label: &str) -> Result<Entity, ModelError> {
        Entity::new(label, Role::Context)
    }

    pub fn source(label: &str) -> Result<Entity, ModelError> {
        Entity::new(label, Role::Source)
    }

    /// The `generalOrUnknown` context used whenever a source states none.
    pub fn general_context() -> Entity {
        Entity::context("General or Unknown").expect("constant label")
    }

    /// Reassembles an entity read back from a serialized graph, where the IRI
    /// is given rather than minted.
    pub(crate) fn from_parts(
        id: Iri,
        label: String,
        roles: BTreeSet<Role>,
        external_links: BTreeSet<Iri>,
    ) -> Entity {
        debug_assert!(!roles.is_empty());
        Entity {
            id,
            label,
            roles,
            external_links,
        }
    }

    pub fn with_role(mut self, role: Role) -> Entity {
        self.roles.insert(role);
        self
    }

    /// Adds an `owl:sameAs` target.
    pub fn with_link(mut self, target: Iri) -> Entity {
        self.external_links.insert(target);
        self
    }

    pub fn id(&self) -> &Iri {
        &self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn roles(&self) -> &BTreeSet<Role> {
        &self.roles
    }

    pub fn has_role(&self, role: Role) -> bool {
        self.roles.contains(&role)
    }

    pub fn external_links(&self) -> &BTreeSet<Iri> {
        &self.external_links
    }

    /// Folds `other` (same IRI) into `self`: roles and links are unioned and
    /// the lexicographically smallest label wins, which keeps the merge
    /// independent of insertion order.
    pub(crate) fn absorb(&mut self, other: &Entity) {
        debug_assert_eq!(self.id, other.id);
        if other.label < self.label {
            self.label.clone_from(&other.label);
        }
        self.roles.extend(other.roles.iter().copied());
        self.external_links
            .extend(other.external_links.iter().cloned());
    }
}

/// Specialized simulation categories. `Generic` is the plain `sim:Simulation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimulationKind {
    Generic,
    Association,
    Correspondence,
    Manifestation,
    Relatedness,
    Attribute,
    Allusion,
    Protection,
    Emblematic,
    Healing,
}

impl SimulationKind {
    pub const ALL: [SimulationKind; 10] = [
        SimulationKind::Generic,
        SimulationKind::Association,
        SimulationKind::Correspondence,
        SimulationKind::Manifestation,
        SimulationKind::Relatedness,
        SimulationKind::Attribute,
        SimulationKind::Allusion,
        SimulationKind::Protection,
        SimulationKind::Emblematic,
        SimulationKind::Healing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SimulationKind::Generic => "Generic",
            SimulationKind::Association => "Association",
            SimulationKind::Correspondence => "Correspondence",
            SimulationKind::Manifestation => "Manifestation",
            SimulationKind::Relatedness => "Relatedness",
            SimulationKind::Attribute => "Attribute",
            SimulationKind::Allusion => "Allusion",
            SimulationKind::Protection => "Protection",
            SimulationKind::Emblematic => "Emblematic",
            SimulationKind::Healing => "Healing",
        }
    }

    pub fn class_iri(self) -> Iri {
        match self {
            SimulationKind::Generic => Iri::sim("Simulation"),
            kind => Iri::sim(&format!("{}Simulation", kind.name())),
        }
    }

    pub fn from_class_iri(iri: &Iri) -> Option<SimulationKind> {
        let local = iri.as_str().strip_prefix(SIM)?;
        match local.strip_suffix("Simulation")? {
            "" => Some(SimulationKind::Generic),
            name => SimulationKind::ALL
                .into_iter()
                .find(|k| *k != SimulationKind::Generic && k.name() == name),
        }
    }
}

impl fmt::Display for SimulationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SimulationKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = s.strip_suffix("Simulation").unwrap_or(s);
        if s.is_empty() {
            return Ok(SimulationKind::Generic);
        }
        SimulationKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ModelError::UnknownKind(s.to_string()))
    }
}

/// How a reality counterpart is tied to its simulation. Every value other
/// than `Has` is a sub-relation of `Has`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RcRelation {
    Has,
    Prevented,
    Healed,
    Restored,
    Eased,
    Elicited,
}

impl RcRelation {
    pub const ALL: [RcRelation; 6] = [
        RcRelation::Has,
        RcRelation::Prevented,
        RcRelation::Healed,
        RcRelation::Restored,
        RcRelation::Eased,
        RcRelation::Elicited,
    ];

    pub fn property_name(self) -> &'static str {
        match self {
            RcRelation::Has => "hasRealityCounterpart",
            RcRelation::Prevented => "preventedRealityCounterpart",
            RcRelation::Healed => "healedRealityCounterpart",
            RcRelation::Restored => "restoredRealityCounterpart",
            RcRelation::Eased => "easedRealityCounterpart",
            RcRelation::Elicited => "elicitedRealityCounterpart",
        }
    }

    pub fn property_iri(self) -> Iri {
        Iri::sim(self.property_name())
    }

    pub fn from_property_iri(iri: &Iri) -> Option<RcRelation> {
        let local = iri.as_str().strip_prefix(SIM)?;
        RcRelation::ALL
            .into_iter()
            .find(|r| r.property_name() == local)
    }
}

impl fmt::Display for RcRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.property_name())
    }
}

impl FromStr for RcRelation {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        RcRelation::ALL
            .into_iter()
            .find(|r| {
                let name = r.property_name();
                name.eq_ignore_ascii_case(s)
                    || name
                        .strip_suffix("RealityCounterpart")
                        .is_some_and(|short| short.eq_ignore_ascii_case(s))
            })
            .ok_or_else(|| ModelError::UnknownRelation(s.to_string()))
    }
}

/// `hasVariant` edge between two entities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VariantLink {
    pub base: Iri,
    pub variant: Iri,
}

/// A well-formed simulation together with its participant entities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    id: Iri,
    kind: SimulationKind,
    simulacrum: Entity,
    reality_counterparts: Vec<(RcRelation, Entity)>,
    contexts: Vec<Entity>,
    sources: Vec<Entity>,
}

impl Simulation {
    /// Checks the cardinality axioms and assembles the simulation.
    ///
    /// Reality counterparts keep their given order (it determines the id);
    /// repeated IRIs in any list are dropped after the first occurrence.
    pub fn build(
        kind: SimulationKind,
        simulacrum: Entity,
        reality_counterparts: Vec<(RcRelation, Entity)>,
        contexts: Vec<Entity>,
        sources: Vec<Entity>,
    ) -> Result<Simulation, CardinalityError> {
        let mut seen = BTreeSet::new();
        let reality_counterparts: Vec<_> = reality_counterparts
            .into_iter()
            .filter(|(_, e)| seen.insert(e.id.clone()))
            .map(|(rel, e)| (rel, e.with_role(Role::RealityCounterpart)))
            .collect();
        let contexts = dedup_sorted(contexts, Role::Context);
        let sources = dedup_sorted(sources, Role::Source);

        if reality_counterparts.is_empty() {
            return Err(CardinalityError::MissingRealityCounterpart);
        }
        if contexts.is_empty() {
            return Err(CardinalityError::MissingContext);
        }
        if sources.is_empty() {
            return Err(CardinalityError::MissingSource);
        }
        let count = |rel| {
            reality_counterparts
                .iter()
                .filter(|(r, _)| *r == rel)
                .count()
        };
        match kind {
            SimulationKind::Healing if count(RcRelation::Healed) != 1 => {
                return Err(CardinalityError::HealingCardinality {
                    found: count(RcRelation::Healed),
                })
            }
            SimulationKind::Protection if count(RcRelation::Prevented) != 1 => {
                return Err(CardinalityError::ProtectionCardinality {
                    found: count(RcRelation::Prevented),
                })
            }
            _ => {}
        }

        let simulacrum = simulacrum.with_role(Role::Simulacrum);
        let id = simulation_iri(
            &simulacrum.id,
            reality_counterparts.iter().map(|(_, e)| &e.id),
        );
        Ok(Simulation {
            id,
            kind,
            simulacrum,
            reality_counterparts,
            contexts,
            sources,
        })
    }

    pub fn id(&self) -> &Iri {
        &self.id
    }

    pub fn kind(&self) -> SimulationKind {
        self.kind
    }

    pub fn simulacrum(&self) -> &Entity {
        &self.simulacrum
    }

    pub fn reality_counterparts(&self) -> &[(RcRelation, Entity)] {
        &self.reality_counterparts
    }

    pub fn contexts(&self) -> &[Entity] {
        &self.contexts
    }

    pub fn sources(&self) -> &[Entity] {
        &self.sources
    }

    /// Every participant, simulacrum first.
    pub fn participants(&self) -> impl Iterator<Item = &Entity> {
        std::iter::once(&self.simulacrum)
            .chain(self.reality_counterparts.iter().map(|(_, e)| e))
            .chain(&self.contexts)
            .chain(&self.sources)
    }
}

/// Shorthand for [`Simulation::build`].
pub fn build_simulation(
    kind: SimulationKind,
    simulacrum: Entity,
    reality_counterparts: Vec<(RcRelation, Entity)>,
    contexts: Vec<Entity>,
    sources: Vec<Entity>,
) -> Result<Simulation, CardinalityError> {
    Simulation::build(kind, simulacrum, reality_counterparts, contexts, sources)
}

fn dedup_sorted(entities: Vec<Entity>, role: Role) -> Vec<Entity> {
    let mut seen = BTreeSet::new();
    let mut out: Vec<Entity> = entities
        .into_iter()
        .filter(|e| seen.insert(e.id.clone()))
        .map(|e| e.with_role(role))
        .collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

/// `kb:<simulacrum>-<rc1>-<rc2>...` built from the participants' local names.
pub fn simulation_iri<'a>(simulacrum: &Iri, rcs: impl IntoIterator<Item = &'a Iri>) -> Iri {
    let mut local = simulacrum.local_name().to_string();
    for rc in rcs {
        local.push('-');
        local.push_str(rc.local_name());
    }
    Iri::kb(&local).expect("local names of minted IRIs are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kb(local: &str) -> Iri {
        Iri::kb(local).unwrap()
    }

    #[test]
    fn mint_examples() {
        assert_eq!(mint_iri("white rose", KB).unwrap(), kb("whiteRose"));
        assert_eq!(
            mint_iri("Greek mythology", KB).unwrap(),
            kb("greekMythology")
        );
        assert_eq!(mint_iri("   ", KB), Err(ModelError::EmptyLabel));
        assert_eq!(mint_iri("...", KB), Err(ModelError::EmptyLabel));
        assert_eq!(
            mint_iri("bloodstone placed in a glass of water during a drought", KB).unwrap(),
            kb("bloodstonePlacedInAGlassOfWaterDuringADrought")
        );
        assert_eq!(
            mint_iri("Christ's power to draw souls", KB).unwrap(),
            kb("christsPowerToDrawSouls")
        );
        assert_eq!(
            mint_iri("black-and-white", KB).unwrap(),
            kb("blackAndWhite")
        );
        assert_eq!(mint_iri("DBpedia", KB).unwrap(), kb("dbpedia"));
    }

    #[test]
    fn iri_validation() {
        assert!(Iri::new("").is_err());
        assert!(Iri::new("no scheme").is_err());
        assert!(Iri::new("relative/path").is_err());
        assert!(Iri::new("http://x.org/a b").is_err());
        assert!(Iri::new("http://x.org/<a>").is_err());
        assert_eq!(kb("x").namespace(), Namespace::Data);
        assert_eq!(Iri::sim("Simulation").namespace(), Namespace::Schema);
        let ext = Iri::new("http://dbpedia.org/resource/Category:Symbols_of_Rome").unwrap();
        assert_eq!(ext.namespace(), Namespace::External);
        assert_eq!(ext.local_name(), "Symbols_of_Rome");
    }

    #[test]
    fn schema_iris_are_distinct() {
        let kinds: BTreeSet<_> = SimulationKind::ALL.iter().map(|k| k.class_iri()).collect();
        assert_eq!(kinds.len(), 10);
        assert!(kinds.contains(&Iri::sim("Simulation")));
        assert!(kinds.contains(&Iri::sim("EmblematicSimulation")));
        let rels: BTreeSet<_> = RcRelation::ALL.iter().map(|r| r.property_iri()).collect();
        assert_eq!(rels.len(), 6);
        for r in RcRelation::ALL {
            assert_eq!(RcRelation::from_property_iri(&r.property_iri()), Some(r));
            assert_eq!(r.property_name().parse::<RcRelation>().unwrap(), r);
        }
        assert_eq!(
            "Protection".parse::<SimulationKind>().unwrap(),
            SimulationKind::Protection
        );
        assert_eq!("healed".parse::<RcRelation>().unwrap(), RcRelation::Healed);
    }

    fn e(label: &str) -> Entity {
        Entity::new(label, Role::RealityCounterpart).unwrap()
    }

    #[test]
    fn bee_resurrection() {
        let s = Simulation::build(
            SimulationKind::Generic,
            Entity::simulacrum("bee").unwrap(),
            vec![(RcRelation::Has, e("resurrection"))],
            vec![Entity::context("Egyptian").unwrap()],
            vec![Entity::source("Olderr").unwrap()],
        )
        .unwrap();
        assert_eq!(s.id(), &kb("bee-resurrection"));
        assert!(s.simulacrum().has_role(Role::Simulacrum));
    }

    #[test]
    fn agate_charm_healthy_blood() {
        let s = build_simulation(
            SimulationKind::Generic,
            Entity::simulacrum("agate").unwrap(),
            vec![
                (RcRelation::Has, e("charm")),
                (RcRelation::Elicited, e("healthy blood")),
            ],
            vec![Entity::context("Arabian").unwrap()],
            vec![Entity::source("Olderr").unwrap()],
        )
        .unwrap();
        assert_eq!(s.id(), &kb("agate-charm-healthyBlood"));
    }

    #[test]
    fn cardinality_errors() {
        let ctx = || vec![Entity::context("c").unwrap()];
        let src = || vec![Entity::source("s").unwrap()];
        let x = || Entity::simulacrum("x").unwrap();
        let err = build_simulation(
            SimulationKind::Healing,
            x(),
            vec![(RcRelation::Healed, e("a")), (RcRelation::Healed, e("b"))],
            ctx(),
            src(),
        )
        .unwrap_err();
        assert_eq!(err, CardinalityError::HealingCardinality { found: 2 });
        assert!(err
            .to_string()
            .contains("healedRealityCounterpart exactly 1"));

        let err = build_simulation(
            SimulationKind::Protection,
            x(),
            vec![(RcRelation::Has, e("a"))],
            ctx(),
            src(),
        )
        .unwrap_err();
        assert_eq!(err, CardinalityError::ProtectionCardinality { found: 0 });
        assert_eq!(
            build_simulation(SimulationKind::Generic, x(), vec![], ctx(), src()).unwrap_err(),
            CardinalityError::MissingRealityCounterpart
        );
        assert_eq!(
            build_simulation(
                SimulationKind::Generic,
                x(),
                vec![(RcRelation::Has, e("a"))],
                vec![],
                src()
            )
            .unwrap_err(),
            CardinalityError::MissingContext
        );
        let err = build_simulation(
            SimulationKind::Generic,
            x(),
            vec![(RcRelation::Has, e("a"))],
            ctx(),
            vec![],
        )
        .unwrap_err();
        assert!(err.to_string().contains("wasDerivedFrom some Source"));
    }

    #[test]
    fn duplicates_are_dropped() {
        let s = build_simulation(
            SimulationKind::Generic,
            Entity::simulacrum("owl").unwrap(),
            vec![
                (RcRelation::Has, e("death")),
                (RcRelation::Elicited, e("Death")),
            ],
            vec![
                Entity::context("Hindu").unwrap(),
                Entity::context("hindu").unwrap(),
            ],
            vec![Entity::source("s").unwrap(), Entity::source("s").unwrap()],
        )
        .unwrap();
        assert_eq!(s.id(), &kb("owl-death"));
        assert_eq!(s.reality_counterparts().len(), 1);
        assert_eq!(s.reality_counterparts()[0].0, RcRelation::Has);
        assert_eq!(s.contexts().len(), 1);
        assert_eq!(s.sources().len(), 1);
    }

    proptest! {
        #[test]
        fn minting_is_deterministic_and_clean(label in "\\PC{0,40}") {
            match mint_iri(&label, KB) {
                Ok(iri) => {
                    prop_assert_eq!(&iri, &mint_iri(&label, KB).unwrap());
                    let local = iri.local_name();
                    prop_assert!(local.chars().all(char::is_alphanumeric));
                    prop_assert!(!local.is_empty());
                }
                Err(err) => {
                    prop_assert_eq!(err, ModelError::EmptyLabel);
                    prop_assert!(!label.chars().any(char::is_alphanumeric));
                }
            }
        }

        #[test]
        fn minting_ignores_separator_choice(words in proptest::collection::vec("[a-z]{1,8}", 1..5)) {
            let spaced = words.join(" ");
            let dashed = words.join("-");
            let messy = format!("  {}  ", words.join(" / "));
            prop_assert_eq!(mint_iri(&spaced, KB).unwrap(), mint_iri(&dashed, KB).unwrap());
            prop_assert_eq!(mint_iri(&spaced, KB).unwrap(), mint_iri(&messy, KB).unwrap());
        }
    }
}
