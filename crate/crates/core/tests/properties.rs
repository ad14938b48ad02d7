mod common;

use proptest::prelude::*;
use simulation_kg::analysis::EvalRow;
use simulation_kg::graph::Graph;
use simulation_kg::ingest::dictionary::parse_dictionary;
use simulation_kg::model::{camel_case, Entity, RcRelation, Simulation, SimulationKind};
use simulation_kg::serialize::{export_turtle, import_turtle, parse_triples};
use simulation_kg::validate::{check_axioms, Axiom};

proptest! {
    #[test]
    fn camel_case_is_stable(label in "[A-Za-z' ]{1,30}") {
        let once = camel_case(&label);
        prop_assert!(!once.contains([' ', '\'']));
        let spaced = label.replace(' ', "  ");
        prop_assert_eq!(camel_case(&spaced), once.clone());
        prop_assert_eq!(camel_case(&once.to_lowercase()), once.to_lowercase());
    }

    #[test]
    fn labels_survive_turtle(label in "[a-z][a-zA-Z0-9 \"\\\\\t\n'éü]{0,20}") {
        prop_assume!(camel_case(&label).chars().next().is_some_and(|c| c.is_ascii_alphabetic()));
        let Ok(s) = Entity::simulacrum(&label) else { return Ok(()) };
        let sim = Simulation::build(
            SimulationKind::Generic,
            s,
            vec![(RcRelation::Has, Entity::reality_counterpart("peace").unwrap())],
            vec![Entity::general_context()],
            vec![Entity::source("Olderr").unwrap()],
        ).unwrap();
        let mut g = Graph::new();
        g.insert_simulation(sim).unwrap();
        let back = import_turtle(&export_turtle(&g)).unwrap();
        prop_assert_eq!(back.graph, g);
    }

    #[test]
    fn dictionary_parser_never_panics(text in "[a-z\\[\\];:~# \n]{0,200}") {
        let parsed = parse_dictionary(&text);
        for e in &parsed.errors {
            prop_assert!(e.line >= 1 && e.line <= text.lines().count().max(1));
        }
    }

    #[test]
    fn turtle_parser_never_panics(text in "[a-z:<>@ .;,\"\n_]{0,120}") {
        let _ = parse_triples(&text);
    }

    #[test]
    fn eval_formulas(tp in 0usize..50, fp in 0usize..50, fn_ in 0usize..50) {
        let r = EvalRow::from_counts(tp, fp, fn_);
        if tp + fp > 0 {
            prop_assert_eq!(r.precision, tp as f64 / (tp + fp) as f64);
        }
        if tp + fn_ > 0 {
            prop_assert_eq!(r.recall, tp as f64 / (tp + fn_) as f64);
        }
        prop_assert!((0.0..=1.0).contains(&r.f1));
    }

    #[test]
    fn variant_links_stay_acyclic(links in prop::collection::vec((0usize..8, 0usize..8), 0..30)) {
        let names = ["a", "b", "c", "d", "e", "f", "g", "h"];
        let mut g = Graph::new();
        for (x, y) in links {
            let _ = g.add_variant(
                Entity::simulacrum(names[x]).unwrap(),
                Entity::simulacrum(names[y]).unwrap(),
            );
        }
        prop_assert!(check_axioms(&g).iter().all(|v| v.axiom != Axiom::VariantCycle));
    }

    #[test]
    fn simulation_id_follows_participants(seed in any::<u64>()) {
        let sim = common::random_simulation(&mut common::rng(seed));
        let mut expected = sim.simulacrum().id().local_name().to_string();
        for (_, rc) in sim.reality_counterparts() {
            expected.push('-');
            expected.push_str(rc.id().local_name());
        }
        prop_assert_eq!(sim.id().local_name(), expected.as_str());
    }
}
