//! Builds a few simulations by hand and reads back derived meanings and
//! variants.

use simulation_kg::graph::Graph;
use simulation_kg::model::{Entity, Iri, RcRelation, Simulation, SimulationKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let olderr = Entity::source("Olderr")?;
    let mut g = Graph::new();

    let bee = Simulation::build(
        SimulationKind::Generic,
        Entity::simulacrum("bee")?,
        vec![(
            RcRelation::Has,
            Entity::reality_counterpart("resurrection")?,
        )],
        vec![Entity::context("Egyptian")?],
        vec![olderr.clone()],
    )?;
    println!("built {}", bee.id());
    g.insert_simulation(bee)?;

    let agate = Simulation::build(
        SimulationKind::Protection,
        Entity::simulacrum("agate")?,
        vec![
            (
                RcRelation::Prevented,
                Entity::reality_counterpart("evil eye")?,
            ),
            (RcRelation::Has, Entity::reality_counterpart("longevity")?),
        ],
        vec![Entity::context("Arabian")?],
        vec![olderr.clone()],
    )?;
    g.insert_simulation(agate)?;

    g.add_variant(Entity::simulacrum("bee")?, Entity::simulacrum("queen bee")?)?;
    // a link back would close a cycle
    let back = g.add_variant(Entity::simulacrum("queen bee")?, Entity::simulacrum("bee")?);
    println!("queen bee -> bee: {}", back.unwrap_err());

    for (simulacrum, meaning) in g.derived_meanings() {
        println!(
            "{} symbolicMeaning {}",
            simulacrum.local_name(),
            meaning.local_name()
        );
    }
    let bee = Iri::kb("bee")?;
    println!(
        "variants of bee: {:?}",
        g.variant_closure(&bee)?
            .iter()
            .map(Iri::local_name)
            .collect::<Vec<_>>()
    );
    println!("{}", g.stats());
    Ok(())
}
