//! Competency questions as typed queries, plus the symbolic-meaning path
//! query.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{csv_field, Graph, SimulationRecord};
use crate::model::{Iri, RcRelation, SimulationKind};
use crate::vocab::display_iri;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("{cq} needs a binding for `{parameter}`")]
    MissingBinding { cq: CqId, parameter: &'static str },
    #[error("unknown entity {}", display_iri(.0.as_str()))]
    UnknownEntity(Iri),
    #[error("unknown competency question {0:?}")]
    UnknownCq(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CqId {
    Q1_1,
    Q1_2,
    Q1_3,
    Q1_4,
    Q1_5,
    Q2_1,
    Q2_2,
    Q2_3,
    Q2_4,
    Q3_1,
    Q3_2,
    Q3_3,
    Q3_4,
    Q3_5,
}

impl CqId {
    pub const ALL: [CqId; 14] = [
        CqId::Q1_1,
        CqId::Q1_2,
        CqId::Q1_3,
        CqId::Q1_4,
        CqId::Q1_5,
        CqId::Q2_1,
        CqId::Q2_2,
        CqId::Q2_3,
        CqId::Q2_4,
        CqId::Q3_1,
        CqId::Q3_2,
        CqId::Q3_3,
        CqId::Q3_4,
        CqId::Q3_5,
    ];

    /// The single parameter this question is asked about, if any.
    pub fn parameter(self) -> Option<&'static str> {
        match self {
            CqId::Q1_1 | CqId::Q2_1 | CqId::Q3_2 => Some("simulacrum"),
            CqId::Q1_2 => Some("context"),
            CqId::Q1_3 | CqId::Q3_1 => Some("entity"),
            CqId::Q1_4 | CqId::Q3_4 => Some("rc"),
            CqId::Q2_3 => Some("simulation"),
            CqId::Q1_5 | CqId::Q2_2 | CqId::Q2_4 | CqId::Q3_3 | CqId::Q3_5 => None,
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            CqId::Q1_1 | CqId::Q3_2 => &["rc"],
            CqId::Q1_2 | CqId::Q1_3 | CqId::Q1_5 | CqId::Q2_4 => &["simulation"],
            CqId::Q1_4 => &["simulacrum", "context"],
            CqId::Q2_1 | CqId::Q2_2 => &["simulation", "rc", "source"],
            CqId::Q2_3 => &["source"],
            CqId::Q3_1 => &["variant"],
            CqId::Q3_3 => &["simulation", "simulacrum", "prevented"],
            CqId::Q3_4 => &["simulation", "rc", "relation"],
            CqId::Q3_5 => &["simulation", "simulacrum", "context", "healed"],
        }
    }

    pub fn question(self) -> &'static str {
        match self {
            CqId::Q1_1 => "What are the reality counterparts of the simulations that have a specific simulacrum?",
            CqId::Q1_2 => "What are the simulations that exist within a certain context?",
            CqId::Q1_3 => "What are the simulations in which a certain element participates as either the simulacrum or the reality counterpart?",
            CqId::Q1_4 => "What are the simulacra that share the same reality counterpart, and in which contexts?",
            CqId::Q1_5 => "Are there simulations that have multiple simulacra?",
            CqId::Q2_1 => "What are the simulations and reality counterparts of a given simulacrum that appear in different sources?",
            CqId::Q2_2 => "What are the simulations, reality counterparts and sources that share a simulacrum but differ in source?",
            CqId::Q2_3 => "What are the sources of a specific simulation?",
            CqId::Q2_4 => "Are there simulations that do not have a source?",
            CqId::Q3_1 => "What are the variants of a certain element?",
            CqId::Q3_2 => "What are the reality counterparts of the simulations with a specific simulacrum or its variants?",
            CqId::Q3_3 => "Which simulations see their simulacrum as protection against a reality counterpart?",
            CqId::Q3_4 => "Which simulations have a specific reality counterpart plus others, and through which relations?",
            CqId::Q3_5 => "Which simulations see their simulacrum as a cure for a reality counterpart, and in which contexts?",
        }
    }
}

impl fmt::Display for CqId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = format!("{self:?}");
        f.write_str(&name.replace('_', "."))
    }
}

impl FromStr for CqId {
    type Err = QueryError;

    /// Accepts `Q2.2`, `Q2_2`, `q2.2` and `2.2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().trim_start_matches(['Q', 'q']).replace('_', ".");
        CqId::ALL
            .into_iter()
            .find(|cq| cq.to_string()[1..] == norm)
            .ok_or_else(|| QueryError::UnknownCq(s.to_string()))
    }
}

/// A result value: a node, or a plain name such as a relation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Iri(Iri),
    Label(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Iri(iri) => f.write_str(&display_iri(iri.as_str())),
            Cell::Label(s) => f.write_str(s),
        }
    }
}

impl From<&Iri> for Cell {
    fn from(iri: &Iri) -> Self {
        Cell::Iri(iri.clone())
    }
}

/// Variable bindings in column order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ResultRow {
    pub bindings: Vec<(&'static str, Cell)>,
}

impl ResultRow {
    fn new(columns: &'static [&'static str], cells: Vec<Cell>) -> Self {
        debug_assert_eq!(columns.len(), cells.len());
        ResultRow {
            bindings: columns.iter().copied().zip(cells).collect(),
        }
    }

    pub fn get(&self, var: &str) -> Option<&Cell> {
        self.bindings
            .iter()
            .find(|(v, _)| *v == var)
            .map(|(_, c)| c)
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.bindings.iter().map(|(_, c)| c)
    }
}

pub type Bindings = BTreeMap<String, Iri>;

/// Answers `cq` over `g`. Rows are distinct and sorted column by column.
pub fn run_cq(g: &Graph, cq: CqId, bindings: &Bindings) -> Result<Vec<ResultRow>, QueryError> {
    let param = match cq.parameter() {
        Some(name) => {
            let iri = bindings.get(name).ok_or(QueryError::MissingBinding {
                cq,
                parameter: name,
            })?;
            let known = if name == "simulation" {
                g.simulation(iri).is_some()
            } else {
                g.contains_entity(iri)
            };
            if !known {
                return Err(QueryError::UnknownEntity(iri.clone()));
            }
            Some(iri)
        }
        None => None,
    };
    let p = || param.expect("parameter checked above");

    let mut rows: BTreeSet<Vec<Cell>> = BTreeSet::new();
    match cq {
        CqId::Q1_1 => {
            for rc in g.meanings_of(p()) {
                rows.insert(vec![rc.into()]);
            }
        }
        CqId::Q1_2 => {
            for rec in g.simulations_in_context(p()) {
                rows.insert(vec![rec.id().into()]);
            }
        }
        CqId::Q1_3 => {
            for rec in g.simulations_of(p()).chain(g.simulations_with_rc(p())) {
                rows.insert(vec![rec.id().into()]);
            }
        }
        CqId::Q1_4 => {
            for rec in g.simulations_with_rc(p()) {
                for sc in rec.simulacra() {
                    for ctx in rec.contexts() {
                        rows.insert(vec![sc.into(), ctx.into()]);
                    }
                }
            }
        }
        CqId::Q1_5 => {
            for rec in g.simulations().filter(|r| r.simulacra().len() > 1) {
                rows.insert(vec![rec.id().into()]);
            }
        }
        CqId::Q2_1 => cross_source(g, Some(p()), &mut rows),
        CqId::Q2_2 => cross_source(g, None, &mut rows),
        CqId::Q2_3 => {
            if let Some(rec) = g.simulation(p()) {
                for src in rec.sources() {
                    rows.insert(vec![src.into()]);
                }
            }
        }
        CqId::Q2_4 => {
            for rec in g.simulations().filter(|r| r.sources().is_empty()) {
                rows.insert(vec![rec.id().into()]);
            }
        }
        CqId::Q3_1 => {
            for v in g
                .variant_closure(p())
                .map_err(|_| QueryError::UnknownEntity(p().clone()))?
            {
                rows.insert(vec![Cell::Iri(v)]);
            }
        }
        CqId::Q3_2 => {
            let meanings = symbolic_meanings(
                g,
                p(),
                MeaningOptions {
                    include_variants: true,
                    repeat: false,
                },
            )?;
            for rc in meanings {
                rows.insert(vec![Cell::Iri(rc)]);
            }
        }
        CqId::Q3_3 => {
            for rec in g
                .simulations()
                .filter(|r| r.kind() == SimulationKind::Protection)
            {
                for sc in rec.simulacra() {
                    for rc in related(rec, RcRelation::Prevented) {
                        rows.insert(vec![rec.id().into(), sc.into(), rc.into()]);
                    }
                }
            }
        }
        CqId::Q3_4 => {
            for rec in g.simulations_with_rc(p()) {
                let distinct: BTreeSet<&Iri> = rec.rc_iris().collect();
                if distinct.len() < 2 {
                    continue;
                }
                for (rel, rc) in rec.reality_counterparts() {
                    rows.insert(vec![
                        rec.id().into(),
                        rc.into(),
                        Cell::Label(rel.property_name().to_string()),
                    ]);
                }
            }
        }
        CqId::Q3_5 => {
            for rec in g
                .simulations()
                .filter(|r| r.kind() == SimulationKind::Healing)
            {
                for sc in rec.simulacra() {
                    for ctx in rec.contexts() {
                        for rc in related(rec, RcRelation::Healed) {
                            rows.insert(vec![rec.id().into(), sc.into(), ctx.into(), rc.into()]);
                        }
                    }
                }
            }
        }
    }
    Ok(rows
        .into_iter()
        .map(|cells| ResultRow::new(cq.columns(), cells))
        .collect())
}

fn related(rec: &SimulationRecord, rel: RcRelation) -> impl Iterator<Item = &Iri> {
    rec.reality_counterparts()
        .iter()
        .filter(move |(r, _)| *r == rel)
        .map(|(_, rc)| rc)
}

/// Simulations of every simulacrum that has two distinct simulations with
/// distinct sources, with each of their reality counterparts and sources.
fn cross_source(g: &Graph, only: Option<&Iri>, rows: &mut BTreeSet<Vec<Cell>>) {
    let mut by_simulacrum: BTreeMap<&Iri, Vec<&SimulationRecord>> = BTreeMap::new();
    for rec in g.simulations() {
        for sc in rec.simulacra() {
            if only.is_none_or(|o| o == sc) {
                by_simulacrum.entry(sc).or_default().push(rec);
            }
        }
    }
    for recs in by_simulacrum.values() {
        let qualifies = recs.iter().enumerate().any(|(i, a)| {
            recs[i + 1..].iter().any(|b| {
                a.sources()
                    .iter()
                    .any(|sa| b.sources().iter().any(|sb| sa != sb))
            })
        });
        if !qualifies {
            continue;
        }
        for rec in recs {
            for rc in rec.rc_iris() {
                for src in rec.sources() {
                    rows.insert(vec![rec.id().into(), rc.into(), src.into()]);
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MeaningOptions {
    /// Also follow the meanings of the entity's transitive variants.
    pub include_variants: bool,
    /// Keep following meanings that are themselves simulacra.
    pub repeat: bool,
}

/// Reality counterparts reachable from `entity` through `symbolicMeaning`.
pub fn symbolic_meanings(
    g: &Graph,
    entity: &Iri,
    opts: MeaningOptions,
) -> Result<BTreeSet<Iri>, QueryError> {
    if !g.contains_entity(entity) {
        return Err(QueryError::UnknownEntity(entity.clone()));
    }
    let mut starts = vec![entity.clone()];
    if opts.include_variants {
        starts.extend(g.variant_closure(entity).expect("entity checked"));
    }
    let mut out = BTreeSet::new();
    let mut queue: VecDeque<Iri> = starts.into();
    while let Some(node) = queue.pop_front() {
        for rc in g.meanings_of(&node) {
            if out.insert(rc.clone()) && opts.repeat {
                queue.push_back(rc.clone());
            }
        }
    }
    Ok(out)
}

/// Aligned columns with a header line.
pub fn render_text(cq: CqId, rows: &[ResultRow]) -> String {
    let header: Vec<String> = cq.columns().iter().map(|c| c.to_string()).collect();
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.cells().map(Cell::to_string).collect())
        .collect();
    crate::render::aligned(&header, &body)
}

/// Comma-separated rows with full IRIs.
pub fn render_csv(cq: CqId, rows: &[ResultRow]) -> String {
    let mut out = cq.columns().join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row
            .cells()
            .map(|c| match c {
                Cell::Iri(iri) => csv_field(iri.as_str()),
                Cell::Label(s) => csv_field(s),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_simulation, Entity};

    fn kb(local: &str) -> Iri {
        Iri::kb(local).unwrap()
    }

    fn add(
        g: &mut Graph,
        kind: SimulationKind,
        sc: &str,
        rcs: &[(RcRelation, &str)],
        ctx: &[&str],
        src: &[&str],
    ) {
        let sim = build_simulation(
            kind,
            Entity::simulacrum(sc).unwrap(),
            rcs.iter()
                .map(|(r, l)| (*r, Entity::reality_counterpart(l).unwrap()))
                .collect(),
            ctx.iter().map(|c| Entity::context(c).unwrap()).collect(),
            src.iter().map(|s| Entity::source(s).unwrap()).collect(),
        )
        .unwrap();
        g.insert_simulation(sim).unwrap();
    }

    fn bind(name: &str, local: &str) -> Bindings {
        [(name.to_string(), kb(local))].into()
    }

    fn iris(rows: &[ResultRow]) -> Vec<String> {
        rows.iter()
            .map(|r| {
                r.cells()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect()
    }

    #[test]
    fn cq_ids_parse() {
        assert_eq!("Q2.2".parse::<CqId>().unwrap(), CqId::Q2_2);
        assert_eq!("Q3_5".parse::<CqId>().unwrap(), CqId::Q3_5);
        assert_eq!("1.4".parse::<CqId>().unwrap(), CqId::Q1_4);
        assert!("Q4.1".parse::<CqId>().is_err());
        assert_eq!(CqId::Q1_1.to_string(), "Q1.1");
    }

    #[test]
    fn variants_extend_q3_2() {
        let mut g = Graph::new();
        add(
            &mut g,
            SimulationKind::Generic,
            "bird",
            &[(RcRelation::Has, "soul")],
            &["Egyptian"],
            &["Olderr"],
        );
        add(
            &mut g,
            SimulationKind::Generic,
            "night bird",
            &[(RcRelation::Has, "death")],
            &["Celtic"],
            &["Olderr"],
        );
        g.add_variant(
            Entity::simulacrum("bird").unwrap(),
            Entity::simulacrum("night bird").unwrap(),
        )
        .unwrap();
        let q11 = run_cq(&g, CqId::Q1_1, &bind("simulacrum", "bird")).unwrap();
        let q32 = run_cq(&g, CqId::Q3_2, &bind("simulacrum", "bird")).unwrap();
        assert_eq!(iris(&q11), ["kb:soul"]);
        assert_eq!(iris(&q32), ["kb:death", "kb:soul"]);
        assert_eq!(
            iris(&run_cq(&g, CqId::Q3_1, &bind("entity", "bird")).unwrap()),
            ["kb:nightBird"]
        );
    }

    #[test]
    fn repeat_flag() {
        let mut g = Graph::new();
        add(
            &mut g,
            SimulationKind::Generic,
            "a",
            &[(RcRelation::Has, "b")],
            &["x"],
            &["s"],
        );
        add(
            &mut g,
            SimulationKind::Generic,
            "b",
            &[(RcRelation::Has, "c")],
            &["x"],
            &["s"],
        );
        let off = symbolic_meanings(&g, &kb("a"), MeaningOptions::default()).unwrap();
        let on = symbolic_meanings(
            &g,
            &kb("a"),
            MeaningOptions {
                repeat: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(off, [kb("b")].into());
        assert_eq!(on, [kb("b"), kb("c")].into());
        assert_eq!(
            symbolic_meanings(&g, &kb("s"), MeaningOptions::default()).unwrap(),
            BTreeSet::new()
        );
        assert!(symbolic_meanings(&g, &kb("zzz"), MeaningOptions::default()).is_err());
    }

    #[test]
    fn specialized_questions() {
        let mut g = Graph::new();
        add(
            &mut g,
            SimulationKind::Protection,
            "agate",
            &[
                (RcRelation::Prevented, "evil spirits"),
                (RcRelation::Has, "charm"),
            ],
            &["Arabian"],
            &["Olderr"],
        );
        add(
            &mut g,
            SimulationKind::Healing,
            "amber",
            &[(RcRelation::Healed, "fever")],
            &["Roman"],
            &["Olderr"],
        );
        assert_eq!(
            iris(&run_cq(&g, CqId::Q3_3, &Bindings::new()).unwrap()),
            ["kb:agate-evilSpirits-charm kb:agate kb:evilSpirits"]
        );
        assert_eq!(
            iris(&run_cq(&g, CqId::Q3_4, &bind("rc", "charm")).unwrap()),
            [
                "kb:agate-evilSpirits-charm kb:charm hasRealityCounterpart",
                "kb:agate-evilSpirits-charm kb:evilSpirits preventedRealityCounterpart"
            ]
        );
        assert_eq!(
            iris(&run_cq(&g, CqId::Q3_5, &Bindings::new()).unwrap()),
            ["kb:amber-fever kb:amber kb:roman kb:fever"]
        );
        assert!(run_cq(&g, CqId::Q3_4, &bind("rc", "fever"))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn binding_errors() {
        let g = Graph::new();
        assert!(matches!(
            run_cq(&g, CqId::Q1_1, &Bindings::new()),
            Err(QueryError::MissingBinding {
                parameter: "simulacrum",
                ..
            })
        ));
        assert!(matches!(
            run_cq(&g, CqId::Q1_1, &bind("simulacrum", "x")),
            Err(QueryError::UnknownEntity(_))
        ));
        assert!(run_cq(&g, CqId::Q1_5, &Bindings::new()).unwrap().is_empty());
    }

    #[test]
    fn rendering() {
        let mut g = Graph::new();
        add(
            &mut g,
            SimulationKind::Generic,
            "olive",
            &[(RcRelation::Has, "peace")],
            &["Greek"],
            &["s1"],
        );
        let rows = run_cq(&g, CqId::Q1_4, &bind("rc", "peace")).unwrap();
        assert_eq!(
            render_text(CqId::Q1_4, &rows),
            "simulacrum  context\nkb:olive    kb:greek\n"
        );
        assert_eq!(
            render_csv(CqId::Q1_4, &rows),
            "simulacrum,context\nhttps://w3id.org/simulation/data/olive,https://w3id.org/simulation/data/greek\n"
        );
    }
}
